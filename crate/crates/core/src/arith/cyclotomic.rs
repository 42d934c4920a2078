use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::factor::factorize;
use super::poly::IntPolynomial;
use super::{mobius_from, prime_power};
use crate::error::{Error, Result};

fn cache() -> &'static RwLock<HashMap<u64, Arc<IntPolynomial>>> {
    static CACHE: OnceLock<RwLock<HashMap<u64, Arc<IntPolynomial>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// The n-th cyclotomic polynomial, via the Möbius product of `x^d - 1`.
pub fn cyclotomic_poly(n: u64) -> Result<Arc<IntPolynomial>> {
    if n == 0 {
        return Err(Error::domain("cyclotomic index must be positive"));
    }
    if let Some(p) = cache().read().unwrap().get(&n) {
        return Ok(Arc::clone(p));
    }
    let f = factorize(n)?;
    let mut num = IntPolynomial::one();
    let mut den = Vec::new();
    for d in f.divisors() {
        let mu = mobius_from(&factorize((n as u128 / d) as u64)?);
        match mu {
            1 => num.mul_x_pow_minus_one(d as usize),
            -1 => den.push(d as usize),
            _ => {}
        }
    }
    for d in den {
        num = num
            .div_x_pow_minus_one(d)
            .expect("Möbius quotient is exact");
    }
    let phi = Arc::new(num);
    cache().write().unwrap().insert(n, Arc::clone(&phi));
    Ok(phi)
}

/// `b^{phi(n)} * Phi_n(a/b)`.
pub fn homogeneous_cyclotomic(n: u64, a: &BigInt, b: &BigInt) -> Result<BigInt> {
    Ok(cyclotomic_poly(n)?.eval_homogeneous(a, b))
}

/// Whether the ideals `(Phi_m)` and `(Phi_n)` of `Z[x]` are comaximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Comaximality {
    Comaximal,
    /// Both polynomials meet modulo this prime.
    Intersecting { prime: u128 },
}

/// The prime `p` with `m/n = p^{±k}`, or comaximal otherwise.
pub fn cyclotomic_comaximal(m: u64, n: u64) -> Result<Comaximality> {
    if m == 0 || n == 0 {
        return Err(Error::domain("cyclotomic indices must be positive"));
    }
    if m == n {
        return Err(Error::domain("indices must differ"));
    }
    let (lo, hi) = (m.min(n), m.max(n));
    if hi % lo != 0 {
        return Ok(Comaximality::Comaximal);
    }
    Ok(match prime_power((hi / lo) as u128) {
        Some((p, _)) => Comaximality::Intersecting { prime: p },
        None => Comaximality::Comaximal,
    })
}

fn to_rational(p: &IntPolynomial) -> Vec<BigRational> {
    p.coeffs().iter().map(|c| BigRational::from_integer(c.clone())).collect()
}

fn trim(v: &mut Vec<BigRational>) {
    while v.last().is_some_and(Zero::is_zero) {
        v.pop();
    }
}

fn rem(f: &[BigRational], g: &[BigRational]) -> Vec<BigRational> {
    let mut r = f.to_vec();
    let dg = g.len() - 1;
    let lg = &g[dg];
    while r.len() > dg {
        let c = r.last().unwrap() / lg;
        let shift = r.len() - 1 - dg;
        for (j, gc) in g.iter().enumerate() {
            r[shift + j] -= &c * gc;
        }
        r.pop();
        trim(&mut r);
    }
    trim(&mut r);
    r
}

/// Resultant of two integer polynomials, by the Euclidean algorithm over Q.
pub fn resultant(f: &IntPolynomial, g: &IntPolynomial) -> BigInt {
    if f.is_zero() || g.is_zero() {
        return BigInt::zero();
    }
    let mut a = to_rational(f);
    let mut b = to_rational(g);
    let mut acc = BigRational::one();
    loop {
        let da = a.len() - 1;
        let db = b.len() - 1;
        if db == 0 {
            acc *= num_traits::pow(b[0].clone(), da);
            break;
        }
        if da < db {
            if da * db % 2 == 1 {
                acc = -acc;
            }
            std::mem::swap(&mut a, &mut b);
            continue;
        }
        let r = rem(&a, &b);
        if r.is_empty() {
            return BigInt::zero();
        }
        let dr = r.len() - 1;
        // Res(a, b) = (-1)^{da*db} lc(b)^{da - dr} Res(b, r)
        if da * db % 2 == 1 {
            acc = -acc;
        }
        acc *= num_traits::pow(b[db].clone(), da - dr);
        a = b;
        b = r;
    }
    assert!(acc.is_integer(), "resultant of integer polynomials is an integer");
    acc.to_integer()
}
