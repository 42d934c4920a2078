//! Truncated elements of the Habiro ring, the cyclotomic completion of
//! `Z[x]`, written in the basis of q-factorials `[n!]_x`.

mod cyclo;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

pub use cyclo::CyclotomicNumber;

use crate::arith::IntPolynomial;
use crate::error::{Error, Result};
use crate::habiro::RootOfUnity;

/// `[n!]_x = (x^n - 1)(x^{n-1} - 1)...(x - 1)`, with `[0!]_x = 1`.
pub fn q_factorial(n: usize) -> IntPolynomial {
    let mut p = IntPolynomial::one();
    for k in 1..=n {
        p.mul_x_pow_minus_one(k);
    }
    p
}

fn triangular(n: usize) -> usize {
    n * (n + 1) / 2
}

/// `sum_{n < N} a_n(x) [n!]_x` with `deg a_n <= n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HabiroElement {
    coeffs: Vec<IntPolynomial>,
}

impl HabiroElement {
    /// Checks the degree bound `deg a_n <= n`.
    pub fn new(coeffs: Vec<IntPolynomial>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::domain("level must be at least 1"));
        }
        for (n, a) in coeffs.iter().enumerate() {
            if a.degree().is_some_and(|d| d > n) {
                return Err(Error::domain(format!("deg a_{n} exceeds {n}")));
            }
        }
        Ok(HabiroElement { coeffs })
    }

    pub fn zero(level: usize) -> Self {
        HabiroElement {
            coeffs: vec![IntPolynomial::zero(); level.max(1)],
        }
    }

    /// Truncation level `N`.
    pub fn level(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[IntPolynomial] {
        &self.coeffs
    }

    /// The polynomial `sum a_n(x) [n!]_x`.
    pub fn expand(&self) -> IntPolynomial {
        let mut acc = IntPolynomial::zero();
        let mut fact = IntPolynomial::one();
        for (n, a) in self.coeffs.iter().enumerate() {
            if n > 0 {
                fact.mul_x_pow_minus_one(n);
            }
            if !a.is_zero() {
                acc = &acc + &(a * &fact);
            }
        }
        acc
    }

    /// Keep only the first `level` coefficients, or pad with zeros.
    pub fn truncate(&self, level: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(level.max(1), IntPolynomial::zero());
        HabiroElement { coeffs }
    }
}

/// Write `f` in the basis `x^j [n!]_x` with `0 <= j <= n < N`. The basis
/// element of index `(n, j)` has degree `n(n+1)/2 + j`, so the solve is a
/// single sweep from the top degree down.
pub fn to_factorial_basis(f: &IntPolynomial, level: usize) -> Result<HabiroElement> {
    if level == 0 {
        return Err(Error::domain("level must be at least 1"));
    }
    if f.degree().is_some_and(|d| d >= triangular(level)) {
        return Err(Error::Size(format!(
            "degree {} needs level above {level}",
            f.degree().unwrap()
        )));
    }
    let facts: Vec<IntPolynomial> = (0..level).map(q_factorial).collect();
    let mut coeffs: Vec<Vec<BigInt>> = (0..level).map(|n| vec![BigInt::zero(); n + 1]).collect();
    let mut rest = f.clone();
    while let Some(d) = rest.degree() {
        let mut n = 0;
        while triangular(n + 1) <= d {
            n += 1;
        }
        let j = d - triangular(n);
        let c = rest.coeff(d);
        rest = &rest - &(&IntPolynomial::monomial(c.clone(), j) * &facts[n]);
        coeffs[n][j] += c;
    }
    Ok(HabiroElement {
        coeffs: coeffs.into_iter().map(IntPolynomial::new).collect(),
    })
}

/// `sum_n (-1)^n [n!]_x`, truncated at level `N`.
pub fn kontsevich_element(level: usize) -> Result<HabiroElement> {
    if level == 0 {
        return Err(Error::domain("level must be at least 1"));
    }
    HabiroElement::new(
        (0..level)
            .map(|n| IntPolynomial::from_i64(&[if n % 2 == 0 { 1 } else { -1 }]))
            .collect(),
    )
}

/// Substitute `x = ζ_M^g` into a polynomial.
fn at_root(p: &IntPolynomial, z: &RootOfUnity) -> CyclotomicNumber {
    let m = z.order();
    let g = z.numerator() as usize;
    let mut coeffs = vec![BigInt::zero(); m as usize];
    for (k, c) in p.coeffs().iter().enumerate() {
        coeffs[(k * g) % m as usize] += c;
    }
    CyclotomicNumber::from_poly(m, IntPolynomial::new(coeffs)).expect("order >= 1")
}

/// Exact value at a root of unity of order `M`. Terms with `n >= M` vanish
/// because `[n!]_z` contains the factor `z^M - 1`.
pub fn evaluate_at_root(e: &HabiroElement, z: &RootOfUnity) -> CyclotomicNumber {
    let m = z.order();
    let mut acc = CyclotomicNumber::zero(m);
    let mut fact = CyclotomicNumber::one(m);
    let upto = e.level().min(m as usize);
    let zeta = at_root(&IntPolynomial::x(), z);
    let mut zeta_n = CyclotomicNumber::one(m);
    for n in 0..upto {
        if n > 0 {
            zeta_n = &zeta_n * &zeta;
            fact = &fact * &(&zeta_n - &CyclotomicNumber::one(m));
        }
        let a = &e.coeffs[n];
        if !a.is_zero() {
            acc = &acc + &(&at_root(a, z) * &fact);
        }
    }
    acc
}

/// `[n!]_z` evaluated exactly.
pub fn q_factorial_at(n: usize, z: &RootOfUnity) -> CyclotomicNumber {
    at_root(&q_factorial(n), z)
}

/// Partial sum of `-1/2 sum_{n>=1} n χ(n) x^{(n^2-1)/24}` with χ the
/// quadratic character of conductor 12.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZagierSum {
    pub re: f64,
    pub im: f64,
    /// Largest `n` included.
    pub last_n: u64,
    /// Bound on the omitted tail from a geometric majorant.
    pub tail_bound: f64,
}

impl ZagierSum {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

fn chi12(n: u64) -> i64 {
    match n % 12 {
        1 | 11 => 1,
        5 | 7 => -1,
        _ => 0,
    }
}

/// `None` for `terms` stops adaptively once the next nonzero term drops
/// below `1e-16` times the running scale; `Some(k)` sums `n = 1..=k`.
pub fn zagier_rhs(x: Complex64, terms: Option<u64>) -> Result<ZagierSum> {
    let r = x.norm();
    if r.is_nan() || r >= 1.0 {
        return Err(Error::domain("need |x| < 1"));
    }
    let arg = x.arg();
    zagier_sum(r, |k| Complex64::from_polar(1.0, arg * k as f64), terms)
}

/// The same series at `x = r ζ`, with the phase `ζ^k` reduced exactly
/// modulo the order of `ζ`.
pub fn zagier_rhs_radial(r: f64, z: &RootOfUnity, terms: Option<u64>) -> Result<ZagierSum> {
    if !(0.0..1.0).contains(&r) {
        return Err(Error::domain("need 0 <= r < 1"));
    }
    let h = z.order();
    let g = z.numerator();
    zagier_sum(
        r,
        |k| {
            let e = ((k % h as u128) * g as u128 % h as u128) as f64;
            Complex64::from_polar(1.0, std::f64::consts::TAU * e / h as f64)
        },
        terms,
    )
}

fn zagier_sum(r: f64, phase: impl Fn(u128) -> Complex64, terms: Option<u64>) -> Result<ZagierSum> {
    const ADAPTIVE_CAP: u64 = 10_000_000;
    let limit = terms.unwrap_or(ADAPTIVE_CAP);
    let ln_r = r.ln();
    let magnitude = |n: u64| -> f64 {
        let e = (n as u128 * n as u128 - 1) / 24;
        if e == 0 {
            n as f64
        } else if r == 0.0 {
            0.0
        } else {
            n as f64 * (e as f64 * ln_r).exp()
        }
    };
    let mut sum = Complex64::new(0.0, 0.0);
    let mut scale: f64 = 0.0;
    let mut last_n = 0;
    let mut prev_mag = f64::NAN;
    let mut n = 1u64;
    let mut ratio = f64::INFINITY;
    loop {
        if n > limit {
            break;
        }
        let c = chi12(n);
        if c != 0 {
            let mag = magnitude(n);
            if terms.is_none() && last_n > 0 && mag < 1e-16 * scale.max(sum.norm()) {
                ratio = mag / prev_mag;
                break;
            }
            let e = (n as u128 * n as u128 - 1) / 24;
            sum += phase(e) * (c as f64 * mag);
            scale = scale.max(mag);
            if last_n > 0 {
                ratio = mag / prev_mag;
            }
            prev_mag = mag;
            last_n = n;
        }
        n += 1;
    }
    if terms.is_none() && n > limit {
        return Err(Error::Budget(format!("series did not settle within {ADAPTIVE_CAP} terms")));
    }
    // Beyond the peak successive ratios only shrink, so the tail is dominated
    // by a geometric series started at the first omitted term.
    let mut next = last_n + 1;
    while chi12(next) == 0 {
        next += 1;
    }
    let first_omitted = magnitude(next);
    let tail_bound = if ratio < 1.0 && first_omitted <= prev_mag {
        0.5 * first_omitted / (1.0 - ratio.min(first_omitted / prev_mag))
    } else {
        f64::INFINITY
    };
    let value = sum * -0.5;
    Ok(ZagierSum {
        re: value.re,
        im: value.im,
        last_n,
        tail_bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn root(s: &str) -> RootOfUnity {
        s.parse().unwrap()
    }

    #[test]
    fn q_factorials() {
        assert_eq!(q_factorial(0), IntPolynomial::one());
        assert_eq!(q_factorial(1), IntPolynomial::from_i64(&[-1, 1]));
        assert_eq!(q_factorial(2), IntPolynomial::from_i64(&[1, -1, -1, 1]));
        assert_eq!(q_factorial(5).degree(), Some(15));
    }

    #[test]
    fn basis_examples() {
        let e = to_factorial_basis(&IntPolynomial::one(), 3).unwrap();
        assert_eq!(e.coeffs()[0], IntPolynomial::one());
        assert!(e.coeffs()[1..].iter().all(IntPolynomial::is_zero));

        let e = to_factorial_basis(&IntPolynomial::x(), 3).unwrap();
        assert_eq!(e.coeffs()[0], IntPolynomial::one());
        assert_eq!(e.coeffs()[1], IntPolynomial::one());

        let x3 = IntPolynomial::monomial(BigInt::from(1), 3);
        let e = to_factorial_basis(&x3, 3).unwrap();
        assert_eq!(e.coeffs()[0], IntPolynomial::one());
        assert_eq!(e.coeffs()[1], IntPolynomial::from_i64(&[2, 1]));
        assert_eq!(e.coeffs()[2], IntPolynomial::one());
        assert_eq!(e.expand(), x3);

        assert!(matches!(to_factorial_basis(&x3, 2), Err(Error::Size(_))));
    }

    #[test]
    fn kontsevich_values() {
        for level in 1..6 {
            let k = kontsevich_element(level).unwrap();
            assert_eq!(evaluate_at_root(&k, &root("0/1")).as_integer(), Some(BigInt::from(1)));
            if level >= 2 {
                assert_eq!(evaluate_at_root(&k, &root("1/2")).as_integer(), Some(BigInt::from(3)));
            }
        }
        let zero = HabiroElement::zero(4);
        assert!(evaluate_at_root(&zero, &root("1/3")).is_zero());
    }

    #[test]
    fn radial_approach() {
        for (z, lhs) in [("0/1", 1.0), ("1/2", 3.0)] {
            let z = root(z);
            let mut prev = f64::INFINITY;
            for r in [0.9, 0.99, 0.999, 0.9999] {
                let s = zagier_rhs_radial(r, &z, None).unwrap();
                let err = (s.value() - Complex64::new(lhs, 0.0)).norm();
                assert!(err < prev);
                prev = err;
            }
        }
    }

    #[test]
    fn zagier_basics() {
        let s = zagier_rhs(Complex64::new(0.0, 0.0), None).unwrap();
        assert_eq!(s.value(), Complex64::new(-0.5, 0.0));
        let a = zagier_rhs(Complex64::new(0.5, 0.0), Some(100)).unwrap();
        let b = zagier_rhs(Complex64::new(0.5, 0.0), Some(200)).unwrap();
        assert!((a.value() - b.value()).norm() < 1e-30);
        assert!(zagier_rhs(Complex64::new(1.0, 0.0), None).is_err());
    }
}
