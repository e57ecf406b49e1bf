//! Arithmetic in the prime field F_p and the projective line PL(F_p).

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::perm::{Label, PointSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("division by zero mod {0}")]
    ZeroInverse(u32),
    #[error("singular matrix mod {0}")]
    Singular(u32),
}

/// Trial-division primality test; moduli here are desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An odd prime modulus, certified at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Result<Fp, FieldError> {
        if p > 2 && is_prime(p as u64) {
            Ok(Fp { p })
        } else {
            Err(FieldError::NotOddPrime(p as u64))
        }
    }

    pub fn modulus(&self) -> u32 {
        self.p
    }

    pub fn elem(&self, v: i64) -> FieldElem {
        let p = self.p as i64;
        FieldElem {
            value: (v.rem_euclid(p)) as u32,
            modulus: self.p,
        }
    }

    /// The point set {0, .., p-1, inf} in order.
    pub fn projective_domain(&self) -> Arc<PointSet> {
        let mut labels: Vec<Label> = (0..self.p).map(Label::Int).collect();
        labels.push(Label::Inf);
        Arc::new(PointSet::new(labels).expect("distinct labels"))
    }
}

/// A residue in [0, p) for an odd prime p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElem {
    value: u32,
    modulus: u32,
}

impl FieldElem {
    pub fn value(&self) -> u32 {
        self.value
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn check(self, other: FieldElem) {
        assert_eq!(
            self.modulus, other.modulus,
            "mixed moduli {} and {}",
            self.modulus, other.modulus
        );
    }

    pub fn add(self, other: FieldElem) -> FieldElem {
        self.check(other);
        FieldElem {
            value: add_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn sub(self, other: FieldElem) -> FieldElem {
        self.check(other);
        FieldElem {
            value: sub_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn mul(self, other: FieldElem) -> FieldElem {
        self.check(other);
        FieldElem {
            value: mul_mod(self.value, other.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn neg(self) -> FieldElem {
        FieldElem {
            value: sub_mod(0, self.value, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn pow(self, e: u64) -> FieldElem {
        FieldElem {
            value: pow_mod(self.value, e, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(self) -> Result<FieldElem, FieldError> {
        if self.value == 0 {
            return Err(FieldError::ZeroInverse(self.modulus));
        }
        Ok(self.pow(self.modulus as u64 - 2))
    }

    /// All square roots of `self`: two, one (for 0) or none.
    pub fn sqrt_list(self) -> Vec<FieldElem> {
        let mut out = Vec::new();
        for r in 0..self.modulus {
            if mul_mod(r, r, self.modulus) == self.value {
                out.push(FieldElem {
                    value: r,
                    modulus: self.modulus,
                });
            }
        }
        out
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

pub(crate) fn add_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + b as u64) % p as u64) as u32
}

pub(crate) fn sub_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 + p as u64 - b as u64 % p as u64) % p as u64) as u32
}

pub(crate) fn mul_mod(a: u32, b: u32, p: u32) -> u32 {
    ((a as u64 * b as u64) % p as u64) as u32
}

pub(crate) fn pow_mod(mut a: u32, mut e: u64, p: u32) -> u32 {
    let mut acc = 1u32 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(a % p != 0);
    pow_mod(a, p as u64 - 2, p)
}

/// A point of the projective line PL(F_p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PLPoint {
    Finite(FieldElem),
    Infinity,
}

impl PLPoint {
    pub fn label(&self) -> Label {
        match self {
            PLPoint::Finite(v) => Label::Int(v.value()),
            PLPoint::Infinity => Label::Inf,
        }
    }

    pub fn from_label(fp: Fp, l: Label) -> PLPoint {
        match l {
            Label::Int(v) => PLPoint::Finite(fp.elem(v as i64)),
            Label::Inf => PLPoint::Infinity,
        }
    }
}

impl fmt::Display for PLPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PLPoint::Finite(v) => write!(f, "{v}"),
            PLPoint::Infinity => write!(f, "inf"),
        }
    }
}
