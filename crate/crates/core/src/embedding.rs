//! Coset diagrams and their canonical 2-cell embeddings.
//!
//! The diagram of an action (x, y) has the points as vertices, an undirected
//! x-edge for every 2-cycle of x and a directed y-edge u -> u^y around every
//! nontrivial cycle of y. The rotation at a vertex is the cyclic order
//! (incoming y-edge, x-edge end, outgoing y-edge); tracing faces of that
//! rotation system yields exactly one face per nontrivial y-cycle (boundary
//! the cycle's edges) and one face per orbit of xy. Genus then comes out of
//! the Euler characteristic.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::perm::{Perm, PermError, PointSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error("x must square to the identity, got order {0}")]
    XOrder(u64),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DiagramError {
    #[error("diagram is disconnected ({components} components); classification refused")]
    Disconnected { components: usize },
    #[error("diagram is not a januarial: {xy_faces} xy-faces")]
    NotJanuarial { xy_faces: usize },
    #[error("x-edge/y-face difference is odd: E = {x_edges}, V = {y_faces}")]
    OddDifference { x_edges: usize, y_faces: usize },
}

/// A pair of permutations with certified orders: x squares to the identity
/// (degenerate identity x is allowed for toy diagrams), y has exact order k
/// and xy exact order l.
#[derive(Debug, Clone)]
pub struct TriangleAction {
    x: Perm,
    y: Perm,
    k: u64,
    l: u64,
}

impl TriangleAction {
    pub fn new(x: Perm, y: Perm) -> Result<TriangleAction, ActionError> {
        let xy = x.compose(&y)?;
        let x_order = x.order();
        if x_order > 2 {
            return Err(ActionError::XOrder(x_order));
        }
        Ok(TriangleAction {
            k: y.order(),
            l: xy.order(),
            x,
            y,
        })
    }

    pub fn x(&self) -> &Perm {
        &self.x
    }

    pub fn y(&self) -> &Perm {
        &self.y
    }

    pub fn xy(&self) -> Perm {
        self.x.compose(&self.y).expect("same domain")
    }

    /// Exact order of y.
    pub fn k(&self) -> u64 {
        self.k
    }

    /// Exact order of xy.
    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn domain(&self) -> &Arc<PointSet> {
        self.x.domain()
    }

    pub fn degree(&self) -> usize {
        self.domain().len()
    }

    /// Number of fixed points of x.
    pub fn eta_x(&self) -> usize {
        self.x.fixed_points().len()
    }

    /// Number of fixed points of y.
    pub fn eta_y(&self) -> usize {
        self.y.fixed_points().len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeKind {
    X,
    Y,
}

/// One edge of the diagram. X-edges are undirected but stored with the
/// lesser-labeled endpoint as tail; y-edges run tail -> head along y.
#[derive(Debug, Clone, Copy)]
pub struct Edge {
    pub kind: EdgeKind,
    pub tail: u32,
    pub head: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FaceKind {
    /// Boundary is a nontrivial y-cycle; the index points into the full
    /// orbit list of y.
    Y { cycle: usize },
    /// Boundary alternates x-edges and y-edges along an orbit of xy; the
    /// index points into the orbit list of xy. Darts are empty exactly for
    /// a point fixed by both x and y.
    Xy { orbit: usize },
}

#[derive(Debug, Clone)]
pub struct Face {
    pub kind: FaceKind,
    /// Directed edge-sides in boundary order: dart `2e` runs tail -> head of
    /// edge `e`, dart `2e + 1` the reverse.
    pub darts: Vec<u32>,
}

/// The embedded coset diagram of a [`TriangleAction`].
#[derive(Debug, Clone)]
pub struct EmbeddedDiagram {
    domain: Arc<PointSet>,
    edges: Vec<Edge>,
    x_edge_count: usize,
    y_cycle_count: usize,
    /// Darts leaving each vertex in cyclic rotation order.
    rotations: Vec<Vec<u32>>,
    faces: Vec<Face>,
    xy_orbits: Vec<Vec<u32>>,
    y_orbits: Vec<Vec<u32>>,
    component_genera: Vec<u32>,
}

impl EmbeddedDiagram {
    pub fn domain(&self) -> &Arc<PointSet> {
        &self.domain
    }

    pub fn vertex_count(&self) -> usize {
        self.domain.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Number of x-edges; none of them are loops.
    pub fn x_edge_count(&self) -> usize {
        self.x_edge_count
    }

    /// Number of y-cycles counted with fixed points, the V of the
    /// twice-genus count.
    pub fn y_face_count_with_fixed(&self) -> usize {
        self.y_cycle_count
    }

    /// Darts leaving vertex `v` in cyclic order (incoming y-edge side,
    /// x-edge end, outgoing y-edge).
    pub fn rotation(&self, v: u32) -> &[u32] {
        &self.rotations[v as usize]
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn xy_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces
            .iter()
            .filter(|f| matches!(f.kind, FaceKind::Xy { .. }))
    }

    /// Orbits of xy as vertex indices, in canonical order.
    pub fn xy_orbits(&self) -> &[Vec<u32>] {
        &self.xy_orbits
    }

    /// All orbits of y (fixed points included), in canonical order.
    pub fn y_orbits(&self) -> &[Vec<u32>] {
        &self.y_orbits
    }

    pub fn is_connected(&self) -> bool {
        self.component_genera.len() == 1
    }

    pub fn component_count(&self) -> usize {
        self.component_genera.len()
    }

    pub fn component_genera(&self) -> &[u32] {
        &self.component_genera
    }

    /// Euler genus of a connected diagram.
    pub fn genus(&self) -> Result<u32, DiagramError> {
        if !self.is_connected() {
            return Err(DiagramError::Disconnected {
                components: self.component_genera.len(),
            });
        }
        Ok(self.component_genera[0])
    }

    pub fn edge_tail(&self, dart: u32) -> u32 {
        let e = &self.edges[(dart >> 1) as usize];
        if dart & 1 == 0 {
            e.tail
        } else {
            e.head
        }
    }

    pub fn edge_head(&self, dart: u32) -> u32 {
        self.edge_tail(dart ^ 1)
    }
}

/// Builds the diagram and its canonical embedding. Disconnected actions are
/// accepted here (genus is recorded per component); classification rejects
/// them later.
pub fn build_diagram(action: &TriangleAction) -> EmbeddedDiagram {
    let domain = Arc::clone(action.domain());
    let n = domain.len();
    let y_orbits = action.y().orbit_indices();
    let xy_orbits = action.xy().orbit_indices();

    let mut edges: Vec<Edge> = Vec::new();
    let mut x_dart: Vec<Option<u32>> = vec![None; n];
    for cycle in action.x().cycles() {
        debug_assert_eq!(cycle.len(), 2, "x is an involution");
        let a = domain.index_of(cycle[0]).expect("own domain");
        let b = domain.index_of(cycle[1]).expect("own domain");
        let eid = edges.len() as u32;
        edges.push(Edge {
            kind: EdgeKind::X,
            tail: a,
            head: b,
        });
        x_dart[a as usize] = Some(2 * eid);
        x_dart[b as usize] = Some(2 * eid + 1);
    }
    let x_edge_count = edges.len();

    let mut yout_dart: Vec<Option<u32>> = vec![None; n];
    let mut yin_rev_dart: Vec<Option<u32>> = vec![None; n];
    for orbit in &y_orbits {
        if orbit.len() < 2 {
            continue;
        }
        for (pos, &u) in orbit.iter().enumerate() {
            let v = orbit[(pos + 1) % orbit.len()];
            let eid = edges.len() as u32;
            edges.push(Edge {
                kind: EdgeKind::Y,
                tail: u,
                head: v,
            });
            yout_dart[u as usize] = Some(2 * eid);
            yin_rev_dart[v as usize] = Some(2 * eid + 1);
        }
    }

    // rotation (incoming y, x-end, outgoing y) at every vertex
    let dart_count = 2 * edges.len();
    let mut sigma: Vec<u32> = (0..dart_count as u32).collect();
    let mut rotations: Vec<Vec<u32>> = Vec::with_capacity(n);
    for v in 0..n {
        let rot: Vec<u32> = [yin_rev_dart[v], x_dart[v], yout_dart[v]]
            .into_iter()
            .flatten()
            .collect();
        for (i, &d) in rot.iter().enumerate() {
            sigma[d as usize] = rot[(i + 1) % rot.len()];
        }
        rotations.push(rot);
    }

    // face permutation: follow the reversed dart's successor in the rotation
    let next_dart = |d: u32| sigma[(d ^ 1) as usize];

    let mut y_cycle_of = vec![usize::MAX; n];
    for (ci, orbit) in y_orbits.iter().enumerate() {
        for &v in orbit {
            y_cycle_of[v as usize] = ci;
        }
    }
    let mut xy_orbit_of = vec![usize::MAX; n];
    for (oi, orbit) in xy_orbits.iter().enumerate() {
        for &v in orbit {
            xy_orbit_of[v as usize] = oi;
        }
    }

    let mut faces: Vec<Face> = Vec::new();
    let mut face_seen = vec![false; dart_count];
    for start in 0..dart_count as u32 {
        if face_seen[start as usize] {
            continue;
        }
        let mut darts = Vec::new();
        let mut d = start;
        loop {
            face_seen[d as usize] = true;
            darts.push(d);
            d = next_dart(d);
            if d == start {
                break;
            }
        }
        let all_reverse_y = darts.iter().all(|&d| {
            d & 1 == 1 && edges[(d >> 1) as usize].kind == EdgeKind::Y
        });
        let kind = if all_reverse_y {
            FaceKind::Y {
                cycle: y_cycle_of[edges[(darts[0] >> 1) as usize].head as usize],
            }
        } else {
            // tails of x-darts lie in the xy-orbit; fall back to the first
            // tail when the face has no x-step at all
            let anchor = darts
                .iter()
                .find(|&&d| edges[(d >> 1) as usize].kind == EdgeKind::X)
                .map(|&d| tail_of(&edges, d))
                .unwrap_or_else(|| tail_of(&edges, darts[0]));
            FaceKind::Xy {
                orbit: xy_orbit_of[anchor as usize],
            }
        };
        faces.push(Face { kind, darts });
    }

    // points fixed by both x and y carry no dart: degenerate xy-face
    for (oi, orbit) in xy_orbits.iter().enumerate() {
        if orbit.len() == 1 {
            let v = orbit[0] as usize;
            if x_dart[v].is_none() && yout_dart[v].is_none() {
                faces.push(Face {
                    kind: FaceKind::Xy { orbit: oi },
                    darts: Vec::new(),
                });
            }
        }
    }

    // connected components and per-component Euler genus
    let mut uf = UnionFind::new(n);
    for e in &edges {
        uf.union(e.tail as usize, e.head as usize);
    }
    let mut component_of = vec![0u32; n];
    let mut roots: Vec<usize> = Vec::new();
    for v in 0..n {
        let r = uf.find(v);
        let ci = match roots.iter().position(|&x| x == r) {
            Some(i) => i,
            None => {
                roots.push(r);
                roots.len() - 1
            }
        };
        component_of[v] = ci as u32;
    }
    let comp_count = roots.len();
    let mut v_in = vec![0i64; comp_count];
    let mut e_in = vec![0i64; comp_count];
    let mut f_in = vec![0i64; comp_count];
    for v in 0..n {
        v_in[component_of[v] as usize] += 1;
    }
    for e in &edges {
        e_in[component_of[e.tail as usize] as usize] += 1;
    }
    for face in &faces {
        let v = match face.darts.first() {
            Some(&d) => tail_of(&edges, d),
            None => match face.kind {
                FaceKind::Xy { orbit } => xy_orbits[orbit][0],
                FaceKind::Y { .. } => unreachable!("y-faces have darts"),
            },
        };
        f_in[component_of[v as usize] as usize] += 1;
    }
    let component_genera = (0..comp_count)
        .map(|c| {
            let chi = v_in[c] - e_in[c] + f_in[c];
            debug_assert!(chi <= 2 && (2 - chi) % 2 == 0, "bad Euler characteristic");
            ((2 - chi) / 2) as u32
        })
        .collect();

    EmbeddedDiagram {
        domain,
        edges,
        x_edge_count,
        y_cycle_count: y_orbits.len(),
        rotations,
        faces,
        xy_orbits,
        y_orbits,
        component_genera,
    }
}

fn tail_of(edges: &[Edge], dart: u32) -> u32 {
    let e = &edges[(dart >> 1) as usize];
    if dart & 1 == 0 {
        e.tail
    } else {
        e.head
    }
}

/// Twice the genus of a januarial is the number of non-loop x-edges minus
/// the number of y-faces counted with fixed points.
pub fn lemma1_genus(diagram: &EmbeddedDiagram) -> Result<u32, DiagramError> {
    if !diagram.is_connected() {
        return Err(DiagramError::Disconnected {
            components: diagram.component_count(),
        });
    }
    let xy_faces = diagram.xy_faces().count();
    if xy_faces != 2 {
        return Err(DiagramError::NotJanuarial { xy_faces });
    }
    let e = diagram.x_edge_count();
    let v = diagram.y_face_count_with_fixed();
    if e < v || (e - v) % 2 != 0 {
        return Err(DiagramError::OddDifference {
            x_edges: e,
            y_faces: v,
        });
    }
    Ok(((e - v) / 2) as u32)
}

/// Result of the two-orbit test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JanuarialCheck {
    pub is_januarial: bool,
    pub xy_orbit_sizes: Vec<usize>,
}

impl fmt::Display for JanuarialCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} (orbit sizes {:?})",
            if self.is_januarial {
                "januarial"
            } else {
                "not a januarial"
            },
            self.xy_orbit_sizes
        )
    }
}

/// An action is a januarial when xy has exactly two orbits, each covering
/// half the points.
pub fn check_januarial(action: &TriangleAction) -> JanuarialCheck {
    let sizes: Vec<usize> = action.xy().orbit_indices().iter().map(Vec::len).collect();
    let n = action.degree();
    let is_januarial = sizes.len() == 2 && sizes.iter().all(|&s| 2 * s == n);
    JanuarialCheck {
        is_januarial,
        xy_orbit_sizes: sizes,
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] != v {
            self.parent[v] = self.parent[self.parent[v]];
            v = self.parent[v];
        }
        v
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}
