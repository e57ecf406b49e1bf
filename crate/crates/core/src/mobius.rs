//! Möbius transformations of PL(F_p) as 2x2 matrices up to scalars.

use std::fmt;

use crate::gf::{inv_mod, mul_mod, sub_mod, FieldElem, FieldError, Fp, PLPoint};
use crate::perm::Perm;

/// An invertible 2x2 matrix over F_p acting on the projective line; equality
/// is projective (matrices identified up to nonzero scalar multiples).
#[derive(Debug, Clone, Copy)]
pub struct MobiusMap {
    fp: Fp,
    // row-major [m11, m12, m21, m22]
    m: [u32; 4],
}

impl MobiusMap {
    pub fn new(fp: Fp, entries: [i64; 4]) -> Result<MobiusMap, FieldError> {
        let m = entries.map(|v| fp.elem(v).value());
        let map = MobiusMap { fp, m };
        if map.det().is_zero() {
            return Err(FieldError::Singular(fp.modulus()));
        }
        Ok(map)
    }

    pub fn identity(fp: Fp) -> MobiusMap {
        MobiusMap { fp, m: [1, 0, 0, 1] }
    }

    pub fn fp(&self) -> Fp {
        self.fp
    }

    pub fn entries(&self) -> [u32; 4] {
        self.m
    }

    pub fn det(&self) -> FieldElem {
        let p = self.fp.modulus();
        let [a, b, c, d] = self.m;
        self.fp.elem(sub_mod(mul_mod(a, d, p), mul_mod(b, c, p), p) as i64)
    }

    pub fn trace(&self) -> FieldElem {
        self.fp.elem(self.m[0] as i64 + self.m[3] as i64)
    }

    /// Flow composition: `a.mul(b)` applies `a` first, then `b`, matching
    /// [`Perm::compose`]. As matrices this is the product b * a.
    pub fn mul(&self, other: &MobiusMap) -> MobiusMap {
        assert_eq!(self.fp, other.fp, "mixed moduli");
        MobiusMap {
            fp: self.fp,
            m: mat_mul(other.m, self.m, self.fp.modulus()),
        }
    }

    pub fn is_scalar(&self) -> bool {
        is_scalar(self.m)
    }

    /// Projective equality: equal up to a nonzero scalar.
    pub fn projectively_equal(&self, other: &MobiusMap) -> bool {
        if self.fp != other.fp {
            return false;
        }
        let p = self.fp.modulus();
        // cross-ratios of all entry pairs must vanish
        for i in 0..4 {
            for j in (i + 1)..4 {
                let lhs = mul_mod(self.m[i], other.m[j], p);
                let rhs = mul_mod(self.m[j], other.m[i], p);
                if lhs != rhs {
                    return false;
                }
            }
        }
        true
    }

    /// The projective action z -> (m11 z + m12) / (m21 z + m22), total on
    /// PL(F_p): the pole maps to infinity and infinity maps to m11/m21.
    pub fn apply(&self, z: PLPoint) -> PLPoint {
        let p = self.fp.modulus();
        let [a, b, c, d] = self.m;
        match z {
            PLPoint::Infinity => {
                if c == 0 {
                    PLPoint::Infinity
                } else {
                    PLPoint::Finite(self.fp.elem(mul_mod(a, inv_mod(c, p), p) as i64))
                }
            }
            PLPoint::Finite(v) => {
                let z = v.value();
                let den = add_prod(c, z, d, p);
                if den == 0 {
                    PLPoint::Infinity
                } else {
                    let num = add_prod(a, z, b, p);
                    PLPoint::Finite(self.fp.elem(mul_mod(num, inv_mod(den, p), p) as i64))
                }
            }
        }
    }

    /// The permutation of PL(F_p) induced by this map. This is a right-action
    /// homomorphism: `to_perm(m1 * m2) = compose(to_perm(m1), to_perm(m2))`.
    pub fn to_perm(&self) -> Perm {
        let domain = self.fp.projective_domain();
        let n = domain.len() as u32;
        let images = (0..n)
            .map(|i| {
                let z = PLPoint::from_label(self.fp, domain.label(i));
                domain
                    .index_of(self.apply(z).label())
                    .expect("image stays in PL(F_p)")
            })
            .collect();
        Perm::from_images(domain, images).expect("Moebius maps are bijections")
    }

    pub fn pow(&self, e: u64) -> MobiusMap {
        MobiusMap {
            fp: self.fp,
            m: mat_pow(self.m, e, self.fp.modulus()),
        }
    }

    /// Order in PGL(2,p): the least m >= 1 with the m-th power scalar, found
    /// by fast exponentiation over the divisors of p-1, p and p+1. This path
    /// is independent of permutation cycle structure.
    pub fn pgl_order(&self) -> u64 {
        pgl_order_raw(self.m, self.fp.modulus())
    }

    /// The projective invariant trace^2 / det, unchanged under rescaling.
    pub fn theta(&self) -> FieldElem {
        let tr = self.trace();
        tr.mul(tr).mul(self.det().inv().expect("nonsingular"))
    }
}

impl fmt::Display for MobiusMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a},{b}],[{c},{d}]] mod {}", self.fp.modulus())
    }
}

fn add_prod(a: u32, z: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * z as u64 + b as u64) % p as u64) as u32
}

pub(crate) fn mat_mul(x: [u32; 4], y: [u32; 4], p: u32) -> [u32; 4] {
    let m = |a: u32, b: u32| a as u64 * b as u64;
    [
        ((m(x[0], y[0]) + m(x[1], y[2])) % p as u64) as u32,
        ((m(x[0], y[1]) + m(x[1], y[3])) % p as u64) as u32,
        ((m(x[2], y[0]) + m(x[3], y[2])) % p as u64) as u32,
        ((m(x[2], y[1]) + m(x[3], y[3])) % p as u64) as u32,
    ]
}

pub(crate) fn mat_pow(mut x: [u32; 4], mut e: u64, p: u32) -> [u32; 4] {
    let mut acc = [1 % p, 0, 0, 1 % p];
    while e > 0 {
        if e & 1 == 1 {
            acc = mat_mul(acc, x, p);
        }
        x = mat_mul(x, x, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn is_scalar(m: [u32; 4]) -> bool {
    m[1] == 0 && m[2] == 0 && m[0] == m[3]
}

pub(crate) fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Exact PGL(2,p) order of a nonsingular matrix. Every element order divides
/// p-1, p or p+1; the first bound whose power is scalar pins the order to
/// its least divisor d with a scalar d-th power.
pub(crate) fn pgl_order_raw(m: [u32; 4], p: u32) -> u64 {
    if is_scalar(m) {
        return 1;
    }
    for n in [p as u64 - 1, p as u64, p as u64 + 1] {
        if !is_scalar(mat_pow(m, n, p)) {
            continue;
        }
        for d in divisors(n) {
            if is_scalar(mat_pow(m, d, p)) {
                return d;
            }
        }
    }
    unreachable!("every PGL(2,p) element order divides p-1, p or p+1")
}
