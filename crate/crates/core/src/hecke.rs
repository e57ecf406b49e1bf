//! Construction of generator pairs (X, Y) for actions of the Hecke group
//! Delta(2,k,inf) on PL(F_p) whose coset diagrams have exactly two xy-faces.
//!
//! With l = (p+1)/2, a parameter tuple (a,b,c,d,e,f) mod p defines
//!
//! ```text
//! X = [[a, cd], [c, -a]]        Y = [[e, fd], [f, b-e]]
//! ```
//!
//! subject to nabla = -(a^2 + d c^2) != 0, r = a(2e-b) + 2dcf,
//! 1 + d f^2 + e^2 - e b = 0 and theta * nabla = r^2, where theta is a
//! primitive root of f_l mod p. The last constraint says exactly that
//! theta(XY) = theta, so XY has order l; the third forces det Y = 1 and
//! trace Y = b, so Y has order exactly k precisely when b^2 is a primitive
//! root of f_k.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::embedding::{ActionError, TriangleAction};
use crate::gf::{inv_mod, mul_mod, sub_mod, Fp};
use crate::mobius::{pgl_order_raw, MobiusMap};
use crate::par::{map_range, Parallelism};
use crate::poly::{f_coeffs_mod, roots_of_mod_coeffs, PolyError};

#[derive(Debug, Error)]
pub enum HeckeError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("no primitive roots of f_{l} mod {p}")]
    NoPrimitiveRoots { p: u32, l: u64 },
    #[error("theta = {theta} is not a primitive root of f_{l} mod {p}")]
    ThetaNotPrimitive { p: u32, l: u64, theta: u32 },
    #[error("no parameter solutions for p={p}, k={k}, theta={theta}")]
    NoSolutions { p: u32, k: u64, theta: u32 },
    #[error("constructed action failed certification: {0}")]
    Certification(#[from] ActionError),
    #[error("constructed action has wrong orders: expected (2,{k},{l}), got (2,{got_k},{got_l})")]
    OrderMismatch { k: u64, l: u64, got_k: u64, got_l: u64 },
    #[error("oracle modulus {0} above the supported brute-force range")]
    OracleRange(u32),
}

/// A solved parameter tuple together with its derived invariants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeckeParams {
    pub p: u32,
    pub k: u64,
    pub l: u64,
    pub theta: u32,
    pub a: u32,
    pub b: u32,
    pub c: u32,
    pub d: u32,
    pub e: u32,
    pub f: u32,
    pub nabla: u32,
    pub r: u32,
}

impl HeckeParams {
    pub fn x_map(&self) -> MobiusMap {
        let fp = Fp::new(self.p).expect("certified at solve time");
        let cd = mul_mod(self.c, self.d, self.p);
        MobiusMap::new(fp, [self.a as i64, cd as i64, self.c as i64, -(self.a as i64)])
            .expect("nabla != 0 makes X nonsingular")
    }

    pub fn y_map(&self) -> MobiusMap {
        let fp = Fp::new(self.p).expect("certified at solve time");
        let fd = mul_mod(self.f, self.d, self.p);
        let be = sub_mod(self.b, self.e, self.p);
        MobiusMap::new(fp, [self.e as i64, fd as i64, self.f as i64, be as i64])
            .expect("det Y = 1")
    }
}

/// Roots of f_l mod p that are not roots of f_d for any proper divisor
/// d >= 2 of l. Returned sorted.
pub fn primitive_roots(l: u64, p: u32) -> Result<BTreeSet<u32>, HeckeError> {
    let fp_check = Fp::new(p).map_err(|_| HeckeError::NotOddPrime(p as u64))?;
    let _ = fp_check;
    let mut roots: BTreeSet<u32> = roots_of_mod_coeffs(&f_coeffs_mod(l, p)?, p)
        .into_iter()
        .collect();
    for d in crate::mobius::divisors(l) {
        if d >= 2 && d < l {
            for r in roots_of_mod_coeffs(&f_coeffs_mod(d, p)?, p) {
                roots.remove(&r);
            }
        }
    }
    Ok(roots)
}

/// Brute force over all of PGL(2,p): the set of theta = trace^2/det values
/// attained by elements of order exactly l. Independent validation oracle
/// for [`primitive_roots`].
pub fn theta_oracle(p: u32, l: u64) -> Result<BTreeSet<u32>, HeckeError> {
    theta_oracle_with(p, l, Parallelism::Auto)
}

pub fn theta_oracle_with(p: u32, l: u64, par: Parallelism) -> Result<BTreeSet<u32>, HeckeError> {
    Fp::new(p).map_err(|_| HeckeError::NotOddPrime(p as u64))?;
    if p > 200 {
        return Err(HeckeError::OracleRange(p));
    }
    // canonical representatives: first nonzero entry is 1
    let per_b = map_range(par, p as usize, |b| {
        let mut thetas = BTreeSet::new();
        let b = b as u32;
        for c in 0..p {
            for d in 0..p {
                scan_rep([1, b, c, d], p, l, &mut thetas);
                if b == 1 {
                    scan_rep([0, 1, c, d], p, l, &mut thetas);
                }
            }
        }
        thetas
    });
    let mut out = BTreeSet::new();
    for set in per_b {
        out.extend(set);
    }
    Ok(out)
}

fn scan_rep(m: [u32; 4], p: u32, l: u64, thetas: &mut BTreeSet<u32>) {
    let det = sub_mod(mul_mod(m[0], m[3], p), mul_mod(m[1], m[2], p), p);
    if det == 0 {
        return;
    }
    if pgl_order_raw(m, p) == l {
        let tr = (m[0] + m[3]) % p;
        let theta = mul_mod(mul_mod(tr, tr, p), inv_mod(det, p), p);
        thetas.insert(theta);
    }
}

/// All parameter tuples for (p, k, theta), in lexicographic (b,a,c,d,e,f)
/// order, up to `cap` of them. `theta` must be a primitive root of f_l for
/// l = (p+1)/2.
pub fn solve_params(
    p: u32,
    k: u64,
    theta: u32,
    cap: Option<usize>,
) -> Result<Vec<HeckeParams>, HeckeError> {
    solve_params_with(p, k, theta, cap, Parallelism::Auto)
}

pub fn solve_params_with(
    p: u32,
    k: u64,
    theta: u32,
    cap: Option<usize>,
    par: Parallelism,
) -> Result<Vec<HeckeParams>, HeckeError> {
    Fp::new(p).map_err(|_| HeckeError::NotOddPrime(p as u64))?;
    let l = (p as u64 + 1) / 2;
    if !primitive_roots(l, p)?.contains(&theta) {
        return Err(HeckeError::ThetaNotPrimitive { p, l, theta });
    }
    let k_thetas = primitive_roots(k, p)?;

    // b is the trace of Y and b^2 its theta invariant, so admissible b are
    // the square roots of the primitive roots of f_k
    let mut b_values: Vec<u32> = (0..p)
        .filter(|&b| k_thetas.contains(&mul_mod(b, b, p)))
        .collect();
    b_values.sort_unstable();

    let sqrts = sqrt_table(p);
    let mut out: Vec<HeckeParams> = Vec::new();
    for &b in &b_values {
        let mut level: Vec<HeckeParams> = map_range(par, p as usize, |e| {
            solve_for_b_e(p, k, l, theta, b, e as u32, &sqrts)
        })
        .into_iter()
        .flatten()
        .collect();
        level.sort_unstable_by_key(|s| (s.a, s.c, s.d, s.e, s.f));
        out.extend(level);
        if cap.is_some_and(|cap| out.len() >= cap) {
            break;
        }
    }
    if let Some(cap) = cap {
        out.truncate(cap);
    }
    if out.is_empty() {
        return Err(HeckeError::NoSolutions { p, k, theta });
    }
    Ok(out)
}

/// Solutions for fixed (b, e): d is pinned by 1 + d f^2 + e^2 - e b = 0 when
/// f != 0, and ranges freely when f = 0 and e^2 - e b + 1 = 0. For each
/// (d, f, c) the remaining constraint theta*nabla = r^2 is a quadratic in a.
fn solve_for_b_e(
    p: u32,
    k: u64,
    l: u64,
    theta: u32,
    b: u32,
    e: u32,
    sqrts: &[Vec<u32>],
) -> Vec<HeckeParams> {
    let pe = p as u64;
    let mut found = Vec::new();
    // e^2 - e b + 1 mod p
    let resid = ((e as u64 * e as u64 + 1) % pe + pe - (e as u64 * b as u64) % pe) % pe;
    for f in 0..p {
        let d_choices: Box<dyn Iterator<Item = u32>> = if f == 0 {
            if resid == 0 {
                Box::new(0..p)
            } else {
                Box::new(std::iter::empty())
            }
        } else {
            // d = (e b - e^2 - 1) / f^2
            let num = sub_mod(0, resid as u32, p);
            let f2 = mul_mod(f, f, p);
            Box::new(std::iter::once(mul_mod(num, inv_mod(f2, p), p)))
        };
        for d in d_choices {
            // Y scalar would mean order 1, not k
            if f == 0 && (2 * e as u64) % pe == b as u64 {
                continue;
            }
            let u = sub_mod(((2 * e as u64) % pe) as u32, b, p);
            let w = mul_mod(2 % p, mul_mod(d, f, p), p);
            // theta * -(a^2 + d c^2) = (a u + w c)^2, quadratic in a:
            // (u^2 + theta) a^2 + (2 u w c) a + (w^2 + theta d) c^2 = 0
            let qa = (mul_mod(u, u, p) as u64 + theta as u64) % pe;
            let qb_base = mul_mod(2 % p, mul_mod(u, w, p), p);
            let qc_base = (mul_mod(w, w, p) as u64 + mul_mod(theta, d, p) as u64) % pe;
            for c in 0..p {
                let qb = mul_mod(qb_base, c, p);
                let qc = mul_mod(qc_base as u32, mul_mod(c, c, p), p);
                match quad_roots(qa as u32, qb, qc, p, sqrts) {
                    QuadSolution::Roots(roots) => {
                        for a in roots {
                            if let Some(sol) = validate(p, k, l, theta, a, b, c, d, e, f) {
                                found.push(sol);
                            }
                        }
                    }
                    QuadSolution::All => {
                        for a in 0..p {
                            if let Some(sol) = validate(p, k, l, theta, a, b, c, d, e, f) {
                                found.push(sol);
                            }
                        }
                    }
                }
            }
        }
    }
    found
}

enum QuadSolution {
    Roots(Vec<u32>),
    All,
}

fn quad_roots(qa: u32, qb: u32, qc: u32, p: u32, sqrts: &[Vec<u32>]) -> QuadSolution {
    if qa != 0 {
        // disc = qb^2 - 4 qa qc
        let disc = sub_mod(
            mul_mod(qb, qb, p),
            mul_mod(4 % p, mul_mod(qa, qc, p), p),
            p,
        );
        let denom_inv = inv_mod(mul_mod(2 % p, qa, p), p);
        let roots = sqrts[disc as usize]
            .iter()
            .map(|&s| mul_mod(sub_mod(s, qb, p), denom_inv, p))
            .collect();
        QuadSolution::Roots(roots)
    } else if qb != 0 {
        QuadSolution::Roots(vec![mul_mod(sub_mod(0, qc, p), inv_mod(qb, p), p)])
    } else if qc != 0 {
        QuadSolution::Roots(Vec::new())
    } else {
        QuadSolution::All
    }
}

/// Re-checks every constraint from scratch; the enumeration above only
/// produces candidates.
#[allow(clippy::too_many_arguments)]
fn validate(
    p: u32,
    k: u64,
    l: u64,
    theta: u32,
    a: u32,
    b: u32,
    c: u32,
    d: u32,
    e: u32,
    f: u32,
) -> Option<HeckeParams> {
    let pe = p as u64;
    let nabla = sub_mod(
        0,
        ((a as u64 * a as u64 + d as u64 * mul_mod(c, c, p) as u64) % pe) as u32,
        p,
    );
    if nabla == 0 {
        return None;
    }
    let two_e_minus_b = sub_mod(((2 * e as u64) % pe) as u32, b, p);
    let r = ((a as u64 * two_e_minus_b as u64
        + 2 * mul_mod(d, mul_mod(c, f, p), p) as u64)
        % pe) as u32;
    // 1 + d f^2 + e^2 - e b = 0
    let third = ((1 + d as u64 * mul_mod(f, f, p) as u64 + e as u64 * e as u64) % pe + pe
        - (e as u64 * b as u64) % pe)
        % pe;
    if third != 0 {
        return None;
    }
    if mul_mod(theta, nabla, p) != mul_mod(r, r, p) {
        return None;
    }
    // Y must be nonscalar
    if f == 0 && (2 * e as u64) % pe == b as u64 {
        return None;
    }
    Some(HeckeParams {
        p,
        k,
        l,
        theta,
        a,
        b,
        c,
        d,
        e,
        f,
        nabla,
        r,
    })
}

fn sqrt_table(p: u32) -> Vec<Vec<u32>> {
    let mut table = vec![Vec::new(); p as usize];
    for r in 0..p {
        table[mul_mod(r, r, p) as usize].push(r);
    }
    table
}

/// Builds the permutation action of a solved tuple and certifies the orders:
/// x has order exactly 2, y exactly k and xy exactly l.
pub fn build_action(params: &HeckeParams) -> Result<TriangleAction, HeckeError> {
    let x = params.x_map();
    let y = params.y_map();
    let action = TriangleAction::new(x.to_perm(), y.to_perm())?;
    if action.x().order() != 2 || action.k() != params.k || action.l() != params.l {
        return Err(HeckeError::OrderMismatch {
            k: params.k,
            l: params.l,
            got_k: action.k(),
            got_l: action.l(),
        });
    }
    debug_assert_eq!(x.mul(&y).theta().value(), params.theta);
    Ok(action)
}
