//! Companion diagrams, the common graph and genus classification.
//!
//! Collapsing every y-face of a januarial to a point gives the companion
//! diagram: one vertex per y-cycle (fixed points included), one edge per
//! x-edge, and the rotation at a collapsed vertex inherited from the cycle
//! order. The two xy-faces become discs whose boundaries are closed edge
//! walks; the common graph is the set of edges traversed once by each disc
//! (plus shared vertices). Circuits of the right-most rule partition the
//! common graph and count the disc neighbourhood boundary components, which
//! pins down the disc genera and the type of the januarial.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::embedding::{
    build_diagram, check_januarial, lemma1_genus, DiagramError, EdgeKind, EmbeddedDiagram,
    FaceKind, TriangleAction,
};
use crate::perm::PointSet;

#[derive(Debug, Error)]
pub enum TopologyError {
    #[error(transparent)]
    Diagram(#[from] DiagramError),
    #[error("not a januarial: xy-orbit sizes {sizes:?}")]
    NotJanuarial { sizes: Vec<usize> },
    #[error("circuit tracing failed at edge {edge}: {reason}")]
    CircuitTrace { edge: u32, reason: String },
    #[error("disc {disc} genus is not a non-negative integer: E={e}, V={v}, h={h}")]
    BadDiscGenus { disc: usize, e: usize, v: usize, h: usize },
    #[error("identity check `{name}` failed\n{dump}")]
    IdentityViolation { name: &'static str, dump: String },
    #[error("conservation check needs a single (p, k) group")]
    MixedGroup,
}

/// One collapsed edge; side 0 sits at the x-edge tail, side 1 at its head.
#[derive(Debug, Clone, Copy)]
pub struct CompEdge {
    pub vertex: [u32; 2],
    pub at_point: [u32; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EndRef {
    pub edge: u32,
    pub side: u8,
}

/// One step of a disc boundary: the edge is traversed leaving `from_side`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Traversal {
    pub edge: u32,
    pub from_side: u8,
}

/// The collapsed diagram with its two disc boundaries.
#[derive(Debug, Clone)]
pub struct CompanionComplex {
    domain: Arc<PointSet>,
    /// y-cycles (fixed points included) in canonical order.
    pub vertex_cycles: Vec<Vec<u32>>,
    pub edges: Vec<CompEdge>,
    /// Incident edge-ends at each collapsed vertex, in cycle order.
    pub rotations: Vec<Vec<EndRef>>,
    /// Boundary walks of the two discs; disc 0 owns the xy-orbit with the
    /// least label.
    pub disc_bounds: [Vec<Traversal>; 2],
}

impl CompanionComplex {
    pub fn vertex_count(&self) -> usize {
        self.vertex_cycles.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn domain(&self) -> &Arc<PointSet> {
        &self.domain
    }

    /// Distinct vertices visited by a disc boundary.
    pub fn disc_vertices(&self, disc: usize) -> BTreeSet<u32> {
        self.disc_bounds[disc]
            .iter()
            .flat_map(|t| self.edges[t.edge as usize].vertex)
            .collect()
    }

    /// Distinct edges traversed by a disc boundary.
    pub fn disc_edges(&self, disc: usize) -> BTreeSet<u32> {
        self.disc_bounds[disc].iter().map(|t| t.edge).collect()
    }
}

/// Collapses the y-faces of a two-face diagram.
pub fn companion(diagram: &EmbeddedDiagram) -> Result<CompanionComplex, TopologyError> {
    let orbit_sizes: Vec<usize> = diagram.xy_orbits().iter().map(Vec::len).collect();
    let n = diagram.vertex_count();
    if orbit_sizes.len() != 2 || orbit_sizes.iter().any(|&s| 2 * s != n) {
        return Err(TopologyError::NotJanuarial { sizes: orbit_sizes });
    }

    let vertex_cycles: Vec<Vec<u32>> = diagram.y_orbits().to_vec();
    let mut cycle_of = vec![u32::MAX; n];
    for (ci, cycle) in vertex_cycles.iter().enumerate() {
        for &v in cycle {
            cycle_of[v as usize] = ci as u32;
        }
    }

    let mut edges = Vec::with_capacity(diagram.x_edge_count());
    let mut end_at_point: Vec<Option<EndRef>> = vec![None; n];
    for (eid, e) in diagram.edges()[..diagram.x_edge_count()].iter().enumerate() {
        debug_assert_eq!(e.kind, EdgeKind::X);
        edges.push(CompEdge {
            vertex: [cycle_of[e.tail as usize], cycle_of[e.head as usize]],
            at_point: [e.tail, e.head],
        });
        end_at_point[e.tail as usize] = Some(EndRef {
            edge: eid as u32,
            side: 0,
        });
        end_at_point[e.head as usize] = Some(EndRef {
            edge: eid as u32,
            side: 1,
        });
    }

    let rotations = vertex_cycles
        .iter()
        .map(|cycle| {
            cycle
                .iter()
                .filter_map(|&v| end_at_point[v as usize])
                .collect()
        })
        .collect();

    // disc boundaries: x-steps of each xy-face, in boundary order
    let mut disc_bounds: [Vec<Traversal>; 2] = [Vec::new(), Vec::new()];
    for face in diagram.xy_faces() {
        let FaceKind::Xy { orbit } = face.kind else {
            unreachable!()
        };
        let walk = &mut disc_bounds[orbit];
        for &d in &face.darts {
            if diagram.edges()[(d >> 1) as usize].kind == EdgeKind::X {
                walk.push(Traversal {
                    edge: d >> 1,
                    from_side: (d & 1) as u8,
                });
            }
        }
    }
    Ok(CompanionComplex {
        domain: Arc::clone(diagram.domain()),
        vertex_cycles,
        edges,
        rotations,
        disc_bounds,
    })
}

/// The intersection of the two collapsed discs.
#[derive(Debug, Clone)]
pub struct CommonGraph {
    /// Edges traversed exactly once by each disc, sorted.
    pub edges: Vec<u32>,
    /// Endpoints of common edges plus vertices visited by both discs.
    pub vertices: Vec<u32>,
    /// Shared vertices that carry no common edge.
    pub isolated_vertices: Vec<u32>,
    /// Edge-end count per companion vertex, indexed like the companion.
    pub valency: Vec<usize>,
    pub alpha: i64,
}

impl CommonGraph {
    pub fn v(&self) -> usize {
        self.vertices.len()
    }

    pub fn e(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty() && self.vertices.is_empty()
    }
}

pub fn common_graph(c: &CompanionComplex) -> CommonGraph {
    let mut count = vec![[0usize; 2]; c.edge_count()];
    for disc in 0..2 {
        for t in &c.disc_bounds[disc] {
            count[t.edge as usize][disc] += 1;
        }
    }
    debug_assert!(
        count.iter().all(|c| c[0] + c[1] == 2),
        "each companion edge is traversed exactly twice"
    );
    let edges: Vec<u32> = (0..c.edge_count() as u32)
        .filter(|&e| count[e as usize] == [1, 1])
        .collect();

    let mut vertices: BTreeSet<u32> = edges
        .iter()
        .flat_map(|&e| c.edges[e as usize].vertex)
        .collect();
    let shared: BTreeSet<u32> = c
        .disc_vertices(0)
        .intersection(&c.disc_vertices(1))
        .copied()
        .collect();
    let isolated_vertices: Vec<u32> = shared.difference(&vertices).copied().collect();
    vertices.extend(shared);

    let mut valency = vec![0usize; c.vertex_count()];
    for &e in &edges {
        for side in 0..2 {
            valency[c.edges[e as usize].vertex[side] as usize] += 1;
        }
    }

    let vertices: Vec<u32> = vertices.into_iter().collect();
    let alpha = vertices.len() as i64 - edges.len() as i64;
    CommonGraph {
        edges,
        vertices,
        isolated_vertices,
        valency,
        alpha,
    }
}

/// The two circuit partitions of the common graph. `p1` follows the
/// directions of disc 0 and has `h2` circuits; `p2` follows disc 1 and has
/// `h1` circuits.
#[derive(Debug, Clone)]
pub struct CircuitPartition {
    pub p1: Vec<Vec<u32>>,
    pub p2: Vec<Vec<u32>>,
    pub h1: usize,
    pub h2: usize,
}

pub fn circuit_partition(
    c: &CompanionComplex,
    common: &CommonGraph,
) -> Result<CircuitPartition, TopologyError> {
    let p1 = trace_circuits(c, common, 0)?;
    let p2 = trace_circuits(c, common, 1)?;
    Ok(CircuitPartition {
        h1: p2.len(),
        h2: p1.len(),
        p1,
        p2,
    })
}

/// Follows common-graph edges in the directions one disc traverses them,
/// turning onto the next common edge-end in rotation order at every vertex,
/// until each path closes. The closing step and the direction of every
/// chosen edge are forced; any mismatch is a construction bug.
fn trace_circuits(
    c: &CompanionComplex,
    common: &CommonGraph,
    disc: usize,
) -> Result<Vec<Vec<u32>>, TopologyError> {
    let in_common: BTreeSet<u32> = common.edges.iter().copied().collect();
    let mut from_side = vec![u8::MAX; c.edge_count()];
    for t in &c.disc_bounds[disc] {
        if in_common.contains(&t.edge) {
            from_side[t.edge as usize] = t.from_side;
        }
    }

    let mut covered = vec![false; c.edge_count()];
    let mut circuits = Vec::new();
    for &start_edge in &common.edges {
        if covered[start_edge as usize] {
            continue;
        }
        let start = Traversal {
            edge: start_edge,
            from_side: from_side[start_edge as usize],
        };
        let mut circuit = Vec::new();
        let mut cur = start;
        loop {
            if covered[cur.edge as usize] {
                return Err(TopologyError::CircuitTrace {
                    edge: cur.edge,
                    reason: "edge reached twice within one partition".into(),
                });
            }
            covered[cur.edge as usize] = true;
            circuit.push(cur.edge);

            let arrive_side = cur.from_side ^ 1;
            let vertex = c.edges[cur.edge as usize].vertex[arrive_side as usize];
            let rot = &c.rotations[vertex as usize];
            let here = EndRef {
                edge: cur.edge,
                side: arrive_side,
            };
            let pos = rot
                .iter()
                .position(|&r| r == here)
                .expect("arrival end is incident to its vertex");
            let next = (1..=rot.len())
                .map(|step| rot[(pos + step) % rot.len()])
                .find(|r| in_common.contains(&r.edge) && *r != here);
            let Some(next) = next else {
                return Err(TopologyError::CircuitTrace {
                    edge: cur.edge,
                    reason: "no outgoing common edge at vertex".into(),
                });
            };
            if next.side != from_side[next.edge as usize] {
                return Err(TopologyError::CircuitTrace {
                    edge: next.edge,
                    reason: "right-most edge leaves against the disc direction".into(),
                });
            }
            cur = Traversal {
                edge: next.edge,
                from_side: next.side,
            };
            if cur == start {
                break;
            }
        }
        circuits.push(circuit);
    }
    Ok(circuits)
}

/// Disc genus data: 2 - 2 g_i = V_i - E_i + h_i + 1 over the subgraph a disc
/// boundary visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DiscGenera {
    pub g1: u32,
    pub g2: u32,
    pub v1: usize,
    pub e1: usize,
    pub v2: usize,
    pub e2: usize,
}

pub fn disc_genera(
    c: &CompanionComplex,
    partition: &CircuitPartition,
) -> Result<DiscGenera, TopologyError> {
    let g = |disc: usize, h: usize| -> Result<(u32, usize, usize), TopologyError> {
        let v = c.disc_vertices(disc).len();
        let e = c.disc_edges(disc).len();
        let numer = e as i64 - v as i64 - h as i64 + 1;
        if numer < 0 || numer % 2 != 0 {
            return Err(TopologyError::BadDiscGenus { disc, e, v, h });
        }
        Ok(((numer / 2) as u32, v, e))
    };
    let (g1, v1, e1) = g(0, partition.h1)?;
    let (g2, v2, e2) = g(1, partition.h2)?;
    Ok(DiscGenera {
        g1,
        g2,
        v1,
        e1,
        v2,
        e2,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum JanuarialType {
    Simple,
    General,
}

/// `h` for simple type, `[h1, h2]` for general type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HField {
    Simple(u64),
    General([u64; 2]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Checks {
    pub lemma1: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lemma2: Option<bool>,
    pub lemma4: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prop6: Option<bool>,
    pub prop8: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thm9: Option<bool>,
}

impl Checks {
    pub fn all_pass(&self) -> bool {
        self.lemma1
            && self.lemma2.unwrap_or(true)
            && self.lemma4
            && self.prop6.unwrap_or(true)
            && self.prop8
            && self.thm9.unwrap_or(true)
    }
}

/// The full classification record of one januarial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JanuarialReport {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    pub k: u64,
    pub l: u64,
    #[serde(rename = "type")]
    pub jtype: JanuarialType,
    pub h: HField,
    pub g1: u32,
    pub g2: u32,
    pub alpha: i64,
    pub genus: u32,
    pub eta_x: usize,
    pub eta_y: usize,
    pub checks: Checks,
    #[serde(skip)]
    pub v1: usize,
    #[serde(skip)]
    pub e1: usize,
    #[serde(skip)]
    pub v2: usize,
    #[serde(skip)]
    pub e2: usize,
}

impl JanuarialReport {
    pub fn h1(&self) -> u64 {
        match self.h {
            HField::Simple(h) => h,
            HField::General([h1, _]) => h1,
        }
    }

    pub fn h2(&self) -> u64 {
        match self.h {
            HField::Simple(h) => h,
            HField::General([_, h2]) => h2,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Runs every genus identity on the assembled data and assembles the report.
/// Any failed identity is a hard error carrying a diagnostic dump.
pub fn classify(
    action: &TriangleAction,
    diagram: &EmbeddedDiagram,
    common: &CommonGraph,
    partition: &CircuitPartition,
    genera: &DiscGenera,
    p: Option<u32>,
) -> Result<JanuarialReport, TopologyError> {
    let genus = diagram.genus()?;
    let simple = !common.vertices.is_empty()
        && common.isolated_vertices.is_empty()
        && common
            .vertices
            .iter()
            .all(|&v| common.valency[v as usize] == 2);

    let (jtype, h) = if simple {
        (
            JanuarialType::Simple,
            HField::Simple(partition.h1 as u64),
        )
    } else {
        (
            JanuarialType::General,
            HField::General([partition.h1 as u64, partition.h2 as u64]),
        )
    };

    let lemma1_ok = lemma1_genus(diagram).map(|g| g == genus).unwrap_or(false);
    let l4 = partition.h1 as i64 + partition.h2 as i64 + common.alpha;
    let lemma4_ok =
        l4 % 2 == 0 && genus as i64 == genera.g1 as i64 + genera.g2 as i64 + l4 / 2 - 1;
    let lemma2_ok = simple.then(|| {
        partition.h1 == partition.h2
            && genus as i64 == genera.g1 as i64 + genera.g2 as i64 + partition.h1 as i64 - 1
    });
    let prop8_ok = common
        .vertices
        .iter()
        .all(|&v| common.valency[v as usize] % 2 == 0);
    let thm9_ok = (action.k() == 3).then_some(simple);

    let checks = Checks {
        lemma1: lemma1_ok,
        lemma2: lemma2_ok,
        lemma4: lemma4_ok,
        prop6: None,
        prop8: prop8_ok,
        thm9: thm9_ok,
    };
    let report = JanuarialReport {
        p,
        k: action.k(),
        l: action.l(),
        jtype,
        h,
        g1: genera.g1,
        g2: genera.g2,
        alpha: common.alpha,
        genus,
        eta_x: action.eta_x(),
        eta_y: action.eta_y(),
        checks,
        v1: genera.v1,
        e1: genera.e1,
        v2: genera.v2,
        e2: genera.e2,
    };
    if !checks.all_pass() {
        let name = if !lemma1_ok {
            "lemma1"
        } else if !lemma4_ok {
            "lemma4"
        } else if lemma2_ok == Some(false) {
            "lemma2"
        } else if !prop8_ok {
            "prop8"
        } else {
            "thm9"
        };
        return Err(TopologyError::IdentityViolation {
            name,
            dump: format!(
                "x = {}\ny = {}\nreport = {report:?}\ncommon = {common:?}\npartition = {partition:?}",
                action.x(),
                action.y()
            ),
        });
    }
    Ok(report)
}

/// Everything the pipeline computes for one action.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub diagram: EmbeddedDiagram,
    pub companion: CompanionComplex,
    pub common: CommonGraph,
    pub partition: CircuitPartition,
    pub report: JanuarialReport,
}

/// Full pipeline: embed, collapse, partition, classify. Rejects
/// disconnected diagrams and non-januarials.
pub fn analyze_action(
    action: &TriangleAction,
    p: Option<u32>,
) -> Result<Analysis, TopologyError> {
    let diagram = build_diagram(action);
    diagram.genus()?;
    let check = check_januarial(action);
    if !check.is_januarial {
        return Err(TopologyError::NotJanuarial {
            sizes: check.xy_orbit_sizes,
        });
    }
    let companion = companion(&diagram)?;
    let common = common_graph(&companion);
    let partition = circuit_partition(&companion, &common)?;
    let genera = disc_genera(&companion, &partition)?;
    let report = classify(action, &diagram, &common, &partition, &genera, p)?;
    Ok(Analysis {
        diagram,
        companion,
        common,
        partition,
        report,
    })
}

/// The genus of Hecke-constructed januarials as an exact rational:
/// -(p+1-eta_y)/2k + (p+1-2 eta_y - eta_x)/4.
pub fn hecke_genus_formula(p: u32, k: u64, eta_x: usize, eta_y: usize) -> Ratio<i64> {
    let p1 = p as i64 + 1;
    let ex = eta_x as i64;
    let ey = eta_y as i64;
    -Ratio::new(p1 - ey, 2 * k as i64) + Ratio::new(p1 - 2 * ey - ex, 4)
}

/// Checks g1 + g2 + h = g_pk + 1 (simple) and
/// g1 + g2 + (h1 + h2 + alpha)/2 = g_pk + 1 (general) across reports from a
/// single (p, k) construction, with g_pk their shared genus.
pub fn conservation_check(reports: &[JanuarialReport]) -> Result<bool, TopologyError> {
    let Some(first) = reports.first() else {
        return Ok(true);
    };
    if reports
        .iter()
        .any(|r| r.p.is_none() || r.p != first.p || r.k != first.k)
    {
        return Err(TopologyError::MixedGroup);
    }
    let g_pk = first.genus as i64;
    Ok(reports.iter().all(|r| {
        if r.genus as i64 != g_pk {
            return false;
        }
        let lhs = match r.h {
            HField::Simple(h) => r.g1 as i64 + r.g2 as i64 + h as i64,
            HField::General([h1, h2]) => {
                let s = h1 as i64 + h2 as i64 + r.alpha;
                if s % 2 != 0 {
                    return false;
                }
                r.g1 as i64 + r.g2 as i64 + s / 2
            }
        };
        lhs == g_pk + 1
    }))
}
