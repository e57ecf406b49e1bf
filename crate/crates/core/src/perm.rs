//! Exact permutations of finite labeled point sets.
//!
//! Labels are non-negative integers or the symbol `inf`; permutations are
//! stored as total bijections over a shared [`PointSet`] and displayed in
//! canonical cycle form (each cycle starts at its least label, cycles sorted
//! by least label, `inf` sorting last).

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// A point label: an integer or the point at infinity.
///
/// The derived order puts integers first (by value) and `Inf` last, which is
/// exactly the order used by canonical cycle forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Int(u32),
    Inf,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Int(n) => write!(f, "{n}"),
            Label::Inf => write!(f, "inf"),
        }
    }
}

impl Label {
    fn parse(s: &str) -> Result<Label, PermError> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("inf") || t == "∞" {
            return Ok(Label::Inf);
        }
        t.parse::<u32>()
            .map(Label::Int)
            .map_err(|_| PermError::Parse(format!("bad label `{t}`")))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("point set must be nonempty")]
    EmptyDomain,
    #[error("duplicate label {0}")]
    DuplicateLabel(Label),
    #[error("label {0} is not in the domain")]
    UnknownLabel(Label),
    #[error("permutations have different domains")]
    DomainMismatch,
    #[error("cycle parse error: {0}")]
    Parse(String),
    #[error("mapping is not a bijection")]
    NotBijective,
}

/// An ordered finite set of distinct labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    labels: Vec<Label>,
    index: HashMap<Label, u32>,
}

impl PointSet {
    pub fn new(labels: Vec<Label>) -> Result<PointSet, PermError> {
        if labels.is_empty() {
            return Err(PermError::EmptyDomain);
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, &l) in labels.iter().enumerate() {
            if index.insert(l, i as u32).is_some() {
                return Err(PermError::DuplicateLabel(l));
            }
        }
        Ok(PointSet { labels, index })
    }

    /// The labels `start..start + n` in order.
    pub fn integers(start: u32, n: u32) -> PointSet {
        PointSet::new((start..start + n).map(Label::Int).collect())
            .expect("integer ranges are distinct and nonempty")
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn label(&self, i: u32) -> Label {
        self.labels[i as usize]
    }

    pub fn index_of(&self, l: Label) -> Option<u32> {
        self.index.get(&l).copied()
    }

    pub fn contains(&self, l: Label) -> bool {
        self.index.contains_key(&l)
    }
}

/// A bijection of a [`PointSet`].
#[derive(Debug, Clone)]
pub struct Perm {
    domain: Arc<PointSet>,
    // images[i] is the index of the image of the i-th label
    images: Vec<u32>,
}

impl PartialEq for Perm {
    fn eq(&self, other: &Self) -> bool {
        self.same_domain(other) && self.images == other.images
    }
}

impl Eq for Perm {}

impl Perm {
    pub fn identity(domain: Arc<PointSet>) -> Perm {
        let images = (0..domain.len() as u32).collect();
        Perm { domain, images }
    }

    /// Builds a permutation from index images. The vector must be a
    /// permutation of `0..domain.len()`.
    pub fn from_images(domain: Arc<PointSet>, images: Vec<u32>) -> Result<Perm, PermError> {
        if images.len() != domain.len() {
            return Err(PermError::NotBijective);
        }
        let mut seen = vec![false; images.len()];
        for &im in &images {
            let Some(slot) = seen.get_mut(im as usize) else {
                return Err(PermError::NotBijective);
            };
            if *slot {
                return Err(PermError::NotBijective);
            }
            *slot = true;
        }
        Ok(Perm { domain, images })
    }

    /// Builds a permutation from disjoint cycles; labels not listed are fixed.
    pub fn from_cycles(domain: Arc<PointSet>, cycles: &[Vec<Label>]) -> Result<Perm, PermError> {
        let mut images: Vec<u32> = (0..domain.len() as u32).collect();
        let mut seen = vec![false; domain.len()];
        for cycle in cycles {
            for (pos, &l) in cycle.iter().enumerate() {
                let i = domain.index_of(l).ok_or(PermError::UnknownLabel(l))?;
                if seen[i as usize] {
                    return Err(PermError::DuplicateLabel(l));
                }
                seen[i as usize] = true;
                let next = cycle[(pos + 1) % cycle.len()];
                let j = domain.index_of(next).ok_or(PermError::UnknownLabel(next))?;
                images[i as usize] = j;
            }
        }
        Perm::from_images(domain, images)
    }

    /// Parses cycle notation like `(0,7)(1,5)(12,inf)`. Whitespace is
    /// ignored; an empty string denotes the identity.
    pub fn parse(domain: Arc<PointSet>, text: &str) -> Result<Perm, PermError> {
        let cycles = parse_cycles(text)?;
        Perm::from_cycles(domain, &cycles)
    }

    pub fn domain(&self) -> &Arc<PointSet> {
        &self.domain
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    fn same_domain(&self, other: &Perm) -> bool {
        Arc::ptr_eq(&self.domain, &other.domain) || self.domain == other.domain
    }

    pub fn apply_idx(&self, i: u32) -> u32 {
        self.images[i as usize]
    }

    pub fn apply(&self, l: Label) -> Option<Label> {
        let i = self.domain.index_of(l)?;
        Some(self.domain.label(self.images[i as usize]))
    }

    /// `compose(p, q)` applies `p` first: `z -> q(p(z))`.
    pub fn compose(&self, q: &Perm) -> Result<Perm, PermError> {
        if !self.same_domain(q) {
            return Err(PermError::DomainMismatch);
        }
        let images = self
            .images
            .iter()
            .map(|&im| q.images[im as usize])
            .collect();
        Ok(Perm {
            domain: Arc::clone(&self.domain),
            images,
        })
    }

    pub fn inverse(&self) -> Perm {
        let mut images = vec![0u32; self.images.len()];
        for (i, &im) in self.images.iter().enumerate() {
            images[im as usize] = i as u32;
        }
        Perm {
            domain: Arc::clone(&self.domain),
            images,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &im)| i as u32 == im)
    }

    /// Least `m >= 1` with `p^m = 1`; the lcm of the cycle lengths.
    pub fn order(&self) -> u64 {
        let mut ord: u64 = 1;
        for orbit in self.orbit_indices() {
            ord = lcm(ord, orbit.len() as u64);
        }
        ord
    }

    /// All orbits, singletons included, in canonical form.
    pub fn orbits(&self) -> Vec<Vec<Label>> {
        self.orbit_indices()
            .into_iter()
            .map(|orbit| orbit.into_iter().map(|i| self.domain.label(i)).collect())
            .collect()
    }

    /// Nontrivial cycles only, in canonical form. Round-trips with
    /// [`Perm::from_cycles`].
    pub fn cycles(&self) -> Vec<Vec<Label>> {
        self.orbits().into_iter().filter(|c| c.len() > 1).collect()
    }

    pub fn fixed_points(&self) -> Vec<Label> {
        let mut out: Vec<Label> = self
            .images
            .iter()
            .enumerate()
            .filter(|&(i, &im)| i as u32 == im)
            .map(|(i, _)| self.domain.label(i as u32))
            .collect();
        out.sort();
        out
    }

    /// Orbits as index lists: each orbit starts at its least label and orbits
    /// are sorted by least label.
    pub fn orbit_indices(&self) -> Vec<Vec<u32>> {
        let n = self.images.len();
        // indices sorted by label, so least-label starts come out naturally
        let mut by_label: Vec<u32> = (0..n as u32).collect();
        by_label.sort_by_key(|&i| self.domain.label(i));
        let mut seen = vec![false; n];
        let mut orbits = Vec::new();
        for &start in &by_label {
            if seen[start as usize] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut cur = start;
            loop {
                seen[cur as usize] = true;
                orbit.push(cur);
                cur = self.images[cur as usize];
                if cur == start {
                    break;
                }
            }
            orbits.push(orbit);
        }
        orbits
    }

    pub fn pow(&self, mut e: u64) -> Perm {
        let mut acc = Perm::identity(Arc::clone(&self.domain));
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base).expect("same domain");
            }
            base = base.compose(&base).expect("same domain");
            e >>= 1;
        }
        acc
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cycles = self.cycles();
        if cycles.is_empty() {
            return write!(f, "()");
        }
        for cycle in cycles {
            write!(f, "(")?;
            for (i, l) in cycle.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{l}")?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// Parses `(a,b,c)(d,e)...` into label lists without resolving a domain.
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<Label>>, PermError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut cycles = Vec::new();
    let mut rest = compact.as_str();
    while !rest.is_empty() {
        let Some(inner) = rest.strip_prefix('(') else {
            return Err(PermError::Parse(format!(
                "expected `(` at `{}`",
                truncate(rest)
            )));
        };
        let Some(close) = inner.find(')') else {
            return Err(PermError::Parse("unclosed cycle".into()));
        };
        let body = &inner[..close];
        if !body.is_empty() {
            let cycle = body
                .split(',')
                .map(Label::parse)
                .collect::<Result<Vec<_>, _>>()?;
            cycles.push(cycle);
        }
        rest = &inner[close + 1..];
    }
    Ok(cycles)
}

/// The sorted union of all labels mentioned in a cycle list.
pub fn labels_in_cycles(cycles: &[Vec<Label>]) -> Vec<Label> {
    let mut all: Vec<Label> = cycles.iter().flatten().copied().collect();
    all.sort();
    all.dedup();
    all
}

fn truncate(s: &str) -> &str {
    &s[..s.len().min(16)]
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dom(n: u32) -> Arc<PointSet> {
        Arc::new(PointSet::integers(1, n))
    }

    /// The 18-point domain {0..16, inf} and the reference pair of
    /// permutations for the Delta(2,8,9) action on PL(F_17).
    pub(crate) fn reference_action() -> (Arc<PointSet>, Perm, Perm) {
        let mut labels: Vec<Label> = (0..17).map(Label::Int).collect();
        labels.push(Label::Inf);
        let d = Arc::new(PointSet::new(labels).unwrap());
        let x = Perm::parse(
            Arc::clone(&d),
            "(0,7)(1,5)(2,6)(3,11)(4,13)(8,14)(10,16)(12,inf)",
        )
        .unwrap();
        let y = Perm::parse(
            Arc::clone(&d),
            "(0,9,14,16,1,6,15,inf)(2,13,8,12,11,4,3,7)",
        )
        .unwrap();
        (d, x, y)
    }

    #[test]
    fn parse_and_display_round_trip() {
        let (_, x, _) = reference_action();
        assert_eq!(
            x.to_string(),
            "(0,7)(1,5)(2,6)(3,11)(4,13)(8,14)(10,16)(12,inf)"
        );
        // singleton cycles in the input are accepted and dropped on display
        let d = dom(4);
        let p = Perm::parse(Arc::clone(&d), "( 1 , 2 ) (3)").unwrap();
        assert_eq!(p.to_string(), "(1,2)");
    }

    #[test]
    fn empty_cycles_give_identity() {
        let d = dom(4);
        let p = Perm::parse(Arc::clone(&d), "").unwrap();
        assert!(p.is_identity());
        assert_eq!(p.to_string(), "()");
        assert_eq!(p.order(), 1);
        assert_eq!(p.orbits().len(), 4);
        assert_eq!(p.fixed_points().len(), 4);
    }

    #[test]
    fn from_cycles_rejects_bad_input() {
        let d = dom(4);
        let dup = Perm::parse(Arc::clone(&d), "(1,2)(2,3)");
        assert_eq!(dup.unwrap_err(), PermError::DuplicateLabel(Label::Int(2)));
        let out = Perm::parse(Arc::clone(&d), "(1,9)");
        assert_eq!(out.unwrap_err(), PermError::UnknownLabel(Label::Int(9)));
        assert!(matches!(
            Perm::parse(d, "(1,2").unwrap_err(),
            PermError::Parse(_)
        ));
    }

    #[test]
    fn compose_is_right_action() {
        // z -> q(p(z)): the xy permutation of the reference action,
        // recomputed pointwise as an oracle.
        let (d, x, y) = reference_action();
        let xy = x.compose(&y).unwrap();
        for i in 0..d.len() as u32 {
            assert_eq!(xy.apply_idx(i), y.apply_idx(x.apply_idx(i)));
        }
        assert_eq!(
            xy.to_string(),
            "(0,2,15,inf,11,7,9,14,12)(1,5,6,13,3,4,8,16,10)"
        );
    }

    #[test]
    fn compose_inverse_is_identity() {
        let (_, x, y) = reference_action();
        let p = x.compose(&y).unwrap();
        assert!(p.compose(&p.inverse()).unwrap().is_identity());
        assert!(p.inverse().compose(&p).unwrap().is_identity());
        assert_eq!(Perm::identity(Arc::clone(p.domain())).compose(&p).unwrap(), p);
    }

    #[test]
    fn compose_rejects_domain_mismatch() {
        let p = Perm::identity(dom(3));
        let q = Perm::identity(dom(4));
        assert_eq!(p.compose(&q).unwrap_err(), PermError::DomainMismatch);
    }

    #[test]
    fn orbits_of_reference_y() {
        let (_, x, y) = reference_action();
        let orbits = y.orbits();
        let sizes: Vec<usize> = orbits.iter().map(|o| o.len()).collect();
        assert_eq!(sizes, vec![8, 8, 1, 1]);
        assert_eq!(orbits[2], vec![Label::Int(5)]);
        assert_eq!(orbits[3], vec![Label::Int(10)]);
        let xy = x.compose(&y).unwrap();
        let xy_sizes: Vec<usize> = xy.orbits().iter().map(|o| o.len()).collect();
        assert_eq!(xy_sizes, vec![9, 9]);
    }

    #[test]
    fn orders_of_reference_action() {
        let (_, x, y) = reference_action();
        assert_eq!(x.order(), 2);
        assert_eq!(y.order(), 8);
        assert_eq!(x.compose(&y).unwrap().order(), 9);
    }

    #[test]
    fn fixed_points_of_reference_action() {
        let (_, x, y) = reference_action();
        assert_eq!(x.fixed_points(), vec![Label::Int(9), Label::Int(15)]);
        assert_eq!(y.fixed_points(), vec![Label::Int(5), Label::Int(10)]);
    }

    #[test]
    fn even_family_y_at_k4() {
        let d = dom(8);
        let y = Perm::parse(Arc::clone(&d), "(1,2,3,4)(5,6,7,8)").unwrap();
        assert_eq!(y.order(), 4);
        assert_eq!(y.cycles().len(), 2);
    }

    #[test]
    fn power_matches_repeated_composition() {
        let (_, x, y) = reference_action();
        let p = x.compose(&y).unwrap();
        let mut acc = Perm::identity(Arc::clone(p.domain()));
        for e in 0..12u64 {
            assert_eq!(p.pow(e), acc);
            acc = acc.compose(&p).unwrap();
        }
        assert!(p.pow(p.order()).is_identity());
    }
}
