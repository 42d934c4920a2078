use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{cyclotomic_poly, lcm_u128, IntPolynomial};
use crate::error::{Error, Result};

/// An element of `Z[ζ_N]`, stored as a polynomial in `ζ_N` of degree below
/// `phi(N)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CyclotomicNumber {
    conductor: u64,
    poly: IntPolynomial,
}

impl CyclotomicNumber {
    /// Reduce an arbitrary polynomial in `ζ_N`.
    pub fn from_poly(conductor: u64, poly: IntPolynomial) -> Result<Self> {
        if conductor == 0 {
            return Err(Error::domain("conductor must be positive"));
        }
        let phi = cyclotomic_poly(conductor)?;
        // Fold exponents modulo N first: cheap, and keeps the division short.
        let folded = fold_exponents(&poly, conductor as usize);
        Ok(CyclotomicNumber {
            conductor,
            poly: folded.rem_monic(&phi),
        })
    }

    pub fn integer(conductor: u64, c: impl Into<BigInt>) -> Self {
        CyclotomicNumber::from_poly(conductor, IntPolynomial::constant(c.into()))
            .expect("positive conductor")
    }

    pub fn zero(conductor: u64) -> Self {
        CyclotomicNumber::integer(conductor, 0)
    }

    pub fn one(conductor: u64) -> Self {
        CyclotomicNumber::integer(conductor, 1)
    }

    /// `ζ_N^k`.
    pub fn zeta_pow(conductor: u64, k: i64) -> Self {
        let e = k.rem_euclid(conductor as i64) as usize;
        CyclotomicNumber::from_poly(conductor, IntPolynomial::monomial(BigInt::from(1), e))
            .expect("positive conductor")
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Coordinates in the basis `1, ζ, ..., ζ^{phi(N)-1}`.
    pub fn poly(&self) -> &IntPolynomial {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    /// The value as an integer, if it is one.
    pub fn as_integer(&self) -> Option<BigInt> {
        match self.poly.degree() {
            None => Some(BigInt::zero()),
            Some(0) => Some(self.poly.coeff(0)),
            _ => None,
        }
    }

    /// Re-express in `Z[ζ_M]` for a multiple `M` of the conductor.
    pub fn lift(&self, m: u64) -> Result<Self> {
        if !m.is_multiple_of(self.conductor) {
            return Err(Error::Mismatch(format!(
                "conductor {} does not divide {m}",
                self.conductor
            )));
        }
        let step = (m / self.conductor) as usize;
        CyclotomicNumber::from_poly(m, self.poly.compose_x_pow(step))
    }

    fn common(&self, other: &Self) -> (Self, Self) {
        if self.conductor == other.conductor {
            return (self.clone(), other.clone());
        }
        let m = lcm_u128(self.conductor as u128, other.conductor as u128) as u64;
        (self.lift(m).unwrap(), other.lift(m).unwrap())
    }

    /// Complex conjugation `ζ -> ζ^{-1}`.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        let mut coeffs = vec![BigInt::zero(); n.max(1)];
        for (i, c) in self.poly.coeffs().iter().enumerate() {
            coeffs[(n - i % n) % n] += c;
        }
        CyclotomicNumber::from_poly(self.conductor, IntPolynomial::new(coeffs)).unwrap()
    }

    /// The Galois automorphism `ζ -> ζ^k`.
    pub fn galois(&self, k: u64) -> Self {
        let n = self.conductor as usize;
        let k = (k % self.conductor) as usize;
        let mut coeffs = vec![BigInt::zero(); n.max(1)];
        for (i, c) in self.poly.coeffs().iter().enumerate() {
            coeffs[(i * k) % n] += c;
        }
        CyclotomicNumber::from_poly(self.conductor, IntPolynomial::new(coeffs)).unwrap()
    }

    /// Exact division by an integer; `None` if some coordinate is not divisible.
    pub fn div_exact(&self, d: &BigInt) -> Option<Self> {
        let mut out = Vec::with_capacity(self.poly.coeffs().len());
        for c in self.poly.coeffs() {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            out.push(q);
        }
        Some(CyclotomicNumber {
            conductor: self.conductor,
            poly: IntPolynomial::new(out),
        })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CyclotomicNumber {
            conductor: self.conductor,
            poly: self.poly.scale(c),
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.poly
            .coeffs()
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let angle = std::f64::consts::TAU * k as f64 / n;
                Complex64::from_polar(1.0, angle) * c.to_f64().unwrap_or(f64::NAN)
            })
            .sum()
    }
}

fn fold_exponents(p: &IntPolynomial, n: usize) -> IntPolynomial {
    if p.coeffs().len() <= n {
        return p.clone();
    }
    let mut coeffs = vec![BigInt::zero(); n];
    for (i, c) in p.coeffs().iter().enumerate() {
        coeffs[i % n] += c;
    }
    IntPolynomial::new(coeffs)
}

impl Add for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn add(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(rhs);
        CyclotomicNumber {
            conductor: a.conductor,
            poly: &a.poly + &b.poly,
        }
    }
}

impl Sub for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn sub(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(rhs);
        CyclotomicNumber {
            conductor: a.conductor,
            poly: &a.poly - &b.poly,
        }
    }
}

impl Neg for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn neg(self) -> CyclotomicNumber {
        CyclotomicNumber {
            conductor: self.conductor,
            poly: -&self.poly,
        }
    }
}

impl Mul for &CyclotomicNumber {
    type Output = CyclotomicNumber;
    fn mul(self, rhs: &CyclotomicNumber) -> CyclotomicNumber {
        let (a, b) = self.common(rhs);
        CyclotomicNumber::from_poly(a.conductor, &a.poly * &b.poly).unwrap()
    }
}

impl fmt::Display for CyclotomicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_integer() {
            return write!(f, "{c}");
        }
        let s = self.poly.to_string().replace('x', &format!("z{}", self.conductor));
        write!(f, "{s}")
    }
}
