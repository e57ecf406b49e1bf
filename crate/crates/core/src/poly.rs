//! The trace-parameter polynomials f_l.
//!
//! An element of PGL(2,p) with eigenvalue ratio a primitive l-th root of
//! unity has theta = trace^2/det equal to a root of f_l. The coefficient of
//! the j-th term (leading first) is (-1)^j C(l-1-j, j), with consecutive
//! descending exponents; the degree is (l-1)/2 for odd l and l/2 - 1 for
//! even l. The degenerate l = 2 case is the convention f_2 = theta, since
//! order-2 elements are exactly the trace-zero ones.

use thiserror::Error;

use crate::gf::{mul_mod, sub_mod};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("f_l requires l >= 2, got {0}")]
    TooSmall(u64),
    #[error("binomial coefficients of f_{0} overflow exact storage")]
    Overflow(u64),
}

/// f_l with exact integer coefficients, leading coefficient first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracPoly {
    l: u64,
    coeffs: Vec<i128>,
}

impl FracPoly {
    pub fn l(&self) -> u64 {
        self.l
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[i128] {
        &self.coeffs
    }

    pub fn eval_mod(&self, theta: u32, p: u32) -> u32 {
        let mut acc = 0u32;
        for &c in &self.coeffs {
            let c = (c.rem_euclid(p as i128)) as u32;
            acc = (acc as u64 * theta as u64 % p as u64) as u32;
            acc = ((acc as u64 + c as u64) % p as u64) as u32;
        }
        acc
    }

    /// All roots in F_p, by exhaustive evaluation.
    pub fn roots_mod(&self, p: u32) -> Vec<u32> {
        let coeffs = self.coeffs_mod(p);
        roots_of_mod_coeffs(&coeffs, p)
    }

    pub fn coeffs_mod(&self, p: u32) -> Vec<u32> {
        self.coeffs
            .iter()
            .map(|&c| (c.rem_euclid(p as i128)) as u32)
            .collect()
    }
}

pub fn degree_of(l: u64) -> usize {
    if l % 2 == 1 {
        ((l - 1) / 2) as usize
    } else {
        (l / 2 - 1) as usize
    }
}

/// Builds f_l exactly. Fails below l = 2 or when the binomials exceed i128.
pub fn f_poly(l: u64) -> Result<FracPoly, PolyError> {
    if l < 2 {
        return Err(PolyError::TooSmall(l));
    }
    if l == 2 {
        return Ok(FracPoly {
            l,
            coeffs: vec![1, 0],
        });
    }
    let deg = degree_of(l);
    let mut coeffs = Vec::with_capacity(deg + 1);
    for j in 0..=deg as u64 {
        let b = binom_i128(l - 1 - j, j).ok_or(PolyError::Overflow(l))?;
        let signed = if j % 2 == 0 { b } else { -b };
        coeffs.push(signed);
    }
    Ok(FracPoly { l, coeffs })
}

/// Coefficients of f_l reduced mod p, computed with modular binomials so
/// that no exact-integer overflow bound applies. Agrees with
/// [`f_poly`]`(...).coeffs_mod(p)` wherever both are defined.
pub fn f_coeffs_mod(l: u64, p: u32) -> Result<Vec<u32>, PolyError> {
    if l < 2 {
        return Err(PolyError::TooSmall(l));
    }
    if l == 2 {
        return Ok(vec![1 % p, 0]);
    }
    let deg = degree_of(l) as u64;
    let binom = BinomMod::new(p);
    let mut coeffs = Vec::with_capacity(deg as usize + 1);
    for j in 0..=deg {
        let b = binom.binom(l - 1 - j, j);
        coeffs.push(if j % 2 == 0 { b } else { sub_mod(0, b, p) });
    }
    Ok(coeffs)
}

pub fn roots_of_mod_coeffs(coeffs: &[u32], p: u32) -> Vec<u32> {
    let mut roots = Vec::new();
    for theta in 0..p {
        let mut acc = 0u64;
        for &c in coeffs {
            acc = (acc * theta as u64 + c as u64) % p as u64;
        }
        if acc == 0 {
            roots.push(theta);
        }
    }
    roots
}

fn binom_i128(n: u64, k: u64) -> Option<i128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: i128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as i128)?;
        acc /= (i + 1) as i128; // exact: product of j consecutive integers
    }
    Some(acc)
}

/// Binomial coefficients mod p via Lucas' theorem with a factorial table.
pub(crate) struct BinomMod {
    p: u32,
    fact: Vec<u32>,
    inv_fact: Vec<u32>,
}

impl BinomMod {
    pub(crate) fn new(p: u32) -> BinomMod {
        let mut fact = vec![1u32; p as usize];
        for i in 1..p as usize {
            fact[i] = mul_mod(fact[i - 1], i as u32, p);
        }
        let mut inv_fact = vec![1u32; p as usize];
        inv_fact[p as usize - 1] = crate::gf::inv_mod(fact[p as usize - 1], p);
        for i in (1..p as usize).rev() {
            inv_fact[i - 1] = mul_mod(inv_fact[i], i as u32, p);
        }
        BinomMod { p, fact, inv_fact }
    }

    fn small(&self, n: u32, k: u32) -> u32 {
        if k > n {
            return 0;
        }
        mul_mod(
            self.fact[n as usize],
            mul_mod(self.inv_fact[k as usize], self.inv_fact[(n - k) as usize], self.p),
            self.p,
        )
    }

    pub(crate) fn binom(&self, mut n: u64, mut k: u64) -> u32 {
        let p = self.p as u64;
        let mut acc = 1u32;
        while n > 0 || k > 0 {
            acc = mul_mod(acc, self.small((n % p) as u32, (k % p) as u32), self.p);
            n /= p;
            k /= p;
        }
        acc
    }
}
