//! Cross-module invariants: permutation laws, the matrix/permutation order
//! agreement, the oracle identity for primitive roots, face-tracing
//! combinatorics and the partition properties of the common graph.

use std::collections::BTreeSet;
use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use januarial::embedding::{build_diagram, check_januarial, EdgeKind, FaceKind, TriangleAction};
use januarial::gf::{is_prime, Fp, PLPoint};
use januarial::hecke::{build_action, primitive_roots, solve_params, theta_oracle};
use januarial::mobius::MobiusMap;
use januarial::perm::{Label, Perm, PointSet};
use januarial::topology::analyze_action;

fn random_perm(rng: &mut ChaCha8Rng, domain: &Arc<PointSet>) -> Perm {
    let mut images: Vec<u32> = (0..domain.len() as u32).collect();
    images.shuffle(rng);
    Perm::from_images(Arc::clone(domain), images).unwrap()
}

fn random_involution(rng: &mut ChaCha8Rng, domain: &Arc<PointSet>) -> Perm {
    let n = domain.len();
    let mut points: Vec<u32> = (0..n as u32).collect();
    points.shuffle(rng);
    let t = rng.gen_range(1..=n / 2);
    let mut images: Vec<u32> = (0..n as u32).collect();
    for i in 0..t {
        images[points[2 * i] as usize] = points[2 * i + 1];
        images[points[2 * i + 1] as usize] = points[2 * i];
    }
    Perm::from_images(Arc::clone(domain), images).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn compose_is_associative(seed in any::<u64>(), n in 3u32..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Arc::new(PointSet::integers(0, n));
        let p = random_perm(&mut rng, &domain);
        let q = random_perm(&mut rng, &domain);
        let r = random_perm(&mut rng, &domain);
        let left = p.compose(&q).unwrap().compose(&r).unwrap();
        let right = p.compose(&q.compose(&r).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn inverse_cancels(seed in any::<u64>(), n in 2u32..20) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Arc::new(PointSet::integers(0, n));
        let p = random_perm(&mut rng, &domain);
        prop_assert!(p.compose(&p.inverse()).unwrap().is_identity());
        prop_assert!(p.inverse().compose(&p).unwrap().is_identity());
    }

    #[test]
    fn orbits_partition_domain(seed in any::<u64>(), n in 1u32..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Arc::new(PointSet::integers(0, n));
        let p = random_perm(&mut rng, &domain);
        let orbits = p.orbits();
        let mut all: Vec<Label> = orbits.iter().flatten().copied().collect();
        all.sort();
        let mut expected: Vec<Label> = domain.labels().to_vec();
        expected.sort();
        prop_assert_eq!(all.len(), domain.len()); // pairwise disjoint
        prop_assert_eq!(all, expected);           // union is the domain
    }

    #[test]
    fn order_is_minimal(seed in any::<u64>(), n in 2u32..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Arc::new(PointSet::integers(0, n));
        let p = random_perm(&mut rng, &domain);
        let order = p.order();
        prop_assert!(p.pow(order).is_identity());
        let mut acc = p.clone();
        for _ in 1..order {
            prop_assert!(!acc.is_identity());
            acc = acc.compose(&p).unwrap();
        }
    }

    #[test]
    fn cycle_form_round_trips(seed in any::<u64>(), n in 2u32..24) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Arc::new(PointSet::integers(0, n));
        let p = random_perm(&mut rng, &domain);
        let back = Perm::from_cycles(Arc::clone(&domain), &p.cycles()).unwrap();
        prop_assert_eq!(&back, &p);
        let reparsed = Perm::parse(Arc::clone(&domain), &p.to_string()).unwrap();
        prop_assert_eq!(&reparsed, &p);
    }

    #[test]
    fn mobius_to_perm_is_right_action_homomorphism(
        seed in any::<u64>(),
        p_idx in 0usize..5,
    ) {
        let p = [5u32, 7, 11, 13, 17][p_idx];
        let fp = Fp::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let random_map = |rng: &mut ChaCha8Rng| loop {
            let entries = [0; 4].map(|_| rng.gen_range(0..p) as i64);
            if let Ok(m) = MobiusMap::new(fp, entries) {
                return m;
            }
        };
        let m1 = random_map(&mut rng);
        let m2 = random_map(&mut rng);
        let lhs = m1.mul(&m2).to_perm();
        let rhs = m1.to_perm().compose(&m2.to_perm()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn matrix_order_matches_permutation_order(
        seed in any::<u64>(),
        p_idx in 0usize..6,
    ) {
        let p = [5u32, 7, 11, 23, 31, 47][p_idx];
        let fp = Fp::new(p).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = loop {
            let entries = [0; 4].map(|_| rng.gen_range(0..p) as i64);
            if let Ok(m) = MobiusMap::new(fp, entries) {
                break m;
            }
        };
        prop_assert_eq!(m.pgl_order(), m.to_perm().order());
    }

    #[test]
    fn mobius_apply_is_a_bijection(seed in any::<u64>()) {
        let fp = Fp::new(13).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = loop {
            let entries = [0; 4].map(|_| rng.gen_range(0..13) as i64);
            if let Ok(m) = MobiusMap::new(fp, entries) {
                break m;
            }
        };
        let domain = fp.projective_domain();
        let images: BTreeSet<Label> = domain
            .labels()
            .iter()
            .map(|&l| m.apply(PLPoint::from_label(fp, l)).label())
            .collect();
        prop_assert_eq!(images.len(), 14);
    }

    #[test]
    fn face_tracing_is_a_perfect_matching_of_edge_sides(
        seed in any::<u64>(),
        n in 2u32..14,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Arc::new(PointSet::integers(0, 3 * n));
        let x = random_involution(&mut rng, &domain);
        let y = random_perm(&mut rng, &domain);
        let action = TriangleAction::new(x, y).unwrap();
        let diagram = build_diagram(&action);

        let mut used = vec![0u8; 2 * diagram.edge_count()];
        for face in diagram.faces() {
            for &d in &face.darts {
                used[d as usize] += 1;
            }
        }
        prop_assert!(used.iter().all(|&u| u == 1));

        // traced y-faces are exactly the nontrivial y-cycles
        let y_faces = diagram
            .faces()
            .iter()
            .filter(|f| matches!(f.kind, FaceKind::Y { .. }))
            .count();
        let nontrivial = diagram.y_orbits().iter().filter(|o| o.len() > 1).count();
        prop_assert_eq!(y_faces, nontrivial);

        // one xy-face per orbit of xy
        prop_assert_eq!(diagram.xy_faces().count(), diagram.xy_orbits().len());

        // every y-face boundary is its cycle, traversed edge by edge
        for face in diagram.faces() {
            if let FaceKind::Y { cycle } = face.kind {
                prop_assert_eq!(face.darts.len(), diagram.y_orbits()[cycle].len());
                for &d in &face.darts {
                    prop_assert_eq!(diagram.edges()[(d >> 1) as usize].kind, EdgeKind::Y);
                }
            }
        }
    }

    #[test]
    fn genus_is_invariant_under_relabeling(seed in any::<u64>(), n in 2u32..12) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let domain = Arc::new(PointSet::integers(0, 3 * n));
        let x = random_involution(&mut rng, &domain);
        let y = random_perm(&mut rng, &domain);
        let sigma = random_perm(&mut rng, &domain);
        let conj = |p: &Perm| {
            sigma
                .inverse()
                .compose(p)
                .unwrap()
                .compose(&sigma)
                .unwrap()
        };
        let action = TriangleAction::new(x.clone(), y.clone()).unwrap();
        let relabeled = TriangleAction::new(conj(&x), conj(&y)).unwrap();
        let mut g1 = build_diagram(&action).component_genera().to_vec();
        let mut g2 = build_diagram(&relabeled).component_genera().to_vec();
        g1.sort_unstable();
        g2.sort_unstable();
        prop_assert_eq!(g1, g2);
    }
}

/// primitive_roots(l, p) agrees with the brute force over PGL(2,p) for every
/// divisor l >= 2 of p + 1, for all odd primes p <= 50.
#[test]
fn primitive_roots_match_oracle_up_to_50() {
    for p in (3..=50u32).filter(|&p| is_prime(p as u64)) {
        let mut oracle_by_order = std::collections::BTreeMap::new();
        for l in 2..=(p as u64 + 1) {
            if (p as u64 + 1) % l == 0 {
                oracle_by_order.insert(l, theta_oracle(p, l).unwrap());
            }
        }
        for (l, oracle) in oracle_by_order {
            let roots = primitive_roots(l, p).unwrap();
            assert_eq!(roots, oracle, "p = {p}, l = {l}");
        }
    }
}

/// Solved actions certify their orders and, for l >= 3, are always
/// januarials: an order-l element with l | p+1 and l >= 3 acts fixed-point
/// freely, so its (p+1)/l = 2 cycles have equal size.
#[test]
fn hecke_actions_certify_and_split_into_two_orbits() {
    for (p, k) in [(5u32, 3u64), (13, 7), (17, 8), (11, 3)] {
        let l = (p as u64 + 1) / 2;
        for theta in primitive_roots(l, p).unwrap() {
            let sols = match solve_params(p, k, theta, Some(6)) {
                Ok(s) => s,
                Err(_) => continue,
            };
            for sol in sols {
                let action = build_action(&sol).unwrap();
                assert_eq!(action.x().order(), 2);
                assert_eq!(action.y().order(), k);
                assert_eq!(action.xy().order(), l);
                let check = check_januarial(&action);
                assert!(check.is_januarial, "p={p} k={k} theta={theta}");
                assert_eq!(check.xy_orbit_sizes, vec![l as usize, l as usize]);
            }
        }
    }
}

/// Every even-family member up to k = 40 is a simple (1, 0, 0) januarial of
/// genus 0, with the two-x-edge, two-y-face count behind the edge-count
/// genus identity.
#[test]
fn even_family_sweep_is_planar_simple() {
    use januarial::families::even_family;
    use januarial::lemma1_genus;
    use januarial::topology::{HField, JanuarialType};
    for k in (4..=40u64).step_by(2) {
        let action = even_family(k).unwrap();
        let diagram = build_diagram(&action);
        assert_eq!(diagram.x_edge_count(), 2, "k = {k}");
        assert_eq!(diagram.y_face_count_with_fixed(), 2, "k = {k}");
        assert_eq!(lemma1_genus(&diagram).unwrap(), 0, "k = {k}");
        assert_eq!(diagram.genus().unwrap(), 0, "k = {k}");
        let report = analyze_action(&action, None).unwrap().report;
        assert_eq!(report.jtype, JanuarialType::Simple, "k = {k}");
        assert_eq!(report.h, HField::Simple(1), "k = {k}");
        assert_eq!((report.g1, report.g2), (0, 0), "k = {k}");
    }
}

/// Every shipped odd-family witness passes the full identity suite with
/// h = 1 and xy of exact order 2k.
#[test]
fn odd_family_sweep_passes_identity_suite() {
    use januarial::families::odd_family;
    use januarial::topology::{HField, JanuarialType};
    for k in (3..=15u64).step_by(2) {
        let action = odd_family(k).unwrap();
        assert_eq!(action.degree(), (4 * k) as usize, "k = {k}");
        assert_eq!(action.xy().order(), 2 * k, "k = {k}");
        let report = analyze_action(&action, None).unwrap().report;
        assert_eq!(report.jtype, JanuarialType::Simple, "k = {k}");
        assert_eq!(report.h, HField::Simple(1), "k = {k}");
        assert!(report.checks.all_pass(), "k = {k}");
    }
}

/// Circuit partitions are edge-disjoint covers of the common graph and
/// their cardinalities cross over to the h counts.
#[test]
fn circuit_partitions_cover_the_common_graph() {
    let mut checked = 0;
    for (p, k) in [(5u32, 3u64), (7, 4), (13, 3), (17, 8), (19, 5)] {
        let l = (p as u64 + 1) / 2;
        for theta in primitive_roots(l, p).unwrap() {
            let sols = match solve_params(p, k, theta, Some(4)) {
                Ok(s) => s,
                Err(_) => continue,
            };
            for sol in sols {
                let action = build_action(&sol).unwrap();
                let analysis = match analyze_action(&action, Some(p)) {
                    Ok(a) => a,
                    Err(_) => continue,
                };
                let common_edges: BTreeSet<u32> =
                    analysis.common.edges.iter().copied().collect();
                for partition in [&analysis.partition.p1, &analysis.partition.p2] {
                    let mut covered = BTreeSet::new();
                    for circuit in partition {
                        for &e in circuit {
                            assert!(covered.insert(e), "edge {e} in two circuits");
                        }
                    }
                    assert_eq!(covered, common_edges);
                }
                assert_eq!(analysis.partition.h2, analysis.partition.p1.len());
                assert_eq!(analysis.partition.h1, analysis.partition.p2.len());
                // every common-graph vertex has even valency
                for &v in &analysis.common.vertices {
                    assert_eq!(analysis.common.valency[v as usize] % 2, 0);
                }
                checked += 1;
            }
        }
    }
    assert!(checked > 20, "only {checked} januarials exercised");
}
