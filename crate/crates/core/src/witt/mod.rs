//! Truncated big Witt vectors `w(A) = 1 + tA[[t]]`.
//!
//! Addition is the product of power series, multiplication is determined by
//! `1/(1-at) ⊗ 1/(1-bt) = 1/(1-abt)`. Over torsion-free rings everything
//! goes through the ghost components; over `F_p` products use the universal
//! multiplication polynomials from [`universal`].

pub mod burnside;
pub mod universal;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{inv_mod, is_prime};
use crate::error::{Error, Result};

/// Coefficient ring of a Witt vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Ring {
    Z,
    Q,
    Fp(u64),
}

impl Ring {
    pub fn fp(p: u64) -> Result<Self> {
        if is_prime(p as u128) {
            Ok(Ring::Fp(p))
        } else {
            Err(Error::domain(format!("{p} is not prime")))
        }
    }

    /// Bring a rational into the ring, failing when it does not belong.
    pub fn element(&self, x: &BigRational) -> Result<BigRational> {
        match *self {
            Ring::Q => Ok(x.clone()),
            Ring::Z => {
                if x.is_integer() {
                    Ok(x.clone())
                } else {
                    Err(Error::domain(format!("{x} is not an integer")))
                }
            }
            Ring::Fp(p) => {
                let pb = BigInt::from(p);
                let num = x.numer().mod_floor(&pb);
                let den = x.denom().mod_floor(&pb);
                let den = den.to_u64().unwrap();
                let inv = inv_mod(den as u128, p as u128)
                    .ok_or_else(|| Error::domain(format!("{x} has denominator divisible by {p}")))?;
                let v = (num * BigInt::from(inv)).mod_floor(&pb);
                Ok(BigRational::from_integer(v))
            }
        }
    }

    fn reduce(&self, x: BigRational) -> BigRational {
        match self {
            Ring::Fp(_) => self.element(&x).expect("integral values reduce"),
            _ => x,
        }
    }

    fn is_torsion_free(&self) -> bool {
        !matches!(self, Ring::Fp(_))
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Z => write!(f, "Z"),
            Ring::Q => write!(f, "Q"),
            Ring::Fp(p) => write!(f, "F_{p}"),
        }
    }
}

impl FromStr for Ring {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "Z" => Ok(Ring::Z),
            "Q" => Ok(Ring::Q),
            _ => {
                let p = s
                    .strip_prefix("F_")
                    .or_else(|| s.strip_prefix('F'))
                    .and_then(|p| p.parse().ok())
                    .ok_or_else(|| Error::Parse(format!("unknown ring {s:?}")))?;
                Ring::fp(p)
            }
        }
    }
}

impl Serialize for Ring {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ring {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_str::deserialize(d)
    }
}

/// `1 + a_1 t + ... + a_N t^N` in `w_N(R)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "WittRepr", into = "WittRepr")]
pub struct WittVector {
    ring: Ring,
    coeffs: Vec<BigRational>,
}

#[derive(Serialize, Deserialize)]
struct WittRepr {
    ring: Ring,
    #[serde(rename = "N")]
    n: usize,
    #[serde(with = "crate::serde_str::vec")]
    coeffs: Vec<BigRational>,
}

impl TryFrom<WittRepr> for WittVector {
    type Error = Error;
    fn try_from(r: WittRepr) -> Result<Self> {
        if r.coeffs.len() != r.n {
            return Err(Error::Parse(format!(
                "N = {} but {} coefficients given",
                r.n,
                r.coeffs.len()
            )));
        }
        WittVector::new(r.ring, r.coeffs)
    }
}

impl From<WittVector> for WittRepr {
    fn from(w: WittVector) -> Self {
        WittRepr {
            ring: w.ring,
            n: w.coeffs.len(),
            coeffs: w.coeffs,
        }
    }
}

fn rat(x: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(x.into())
}

/// Truncated product of two series with implicit constant term 1.
fn series_mul(a: &[BigRational], b: &[BigRational], n: usize) -> Vec<BigRational> {
    let get = |v: &[BigRational], i: usize| -> Option<BigRational> {
        if i == 0 {
            Some(BigRational::one())
        } else {
            v.get(i - 1).cloned()
        }
    };
    (1..=n)
        .map(|k| {
            let mut acc = BigRational::zero();
            for i in 0..=k {
                if let (Some(x), Some(y)) = (get(a, i), get(b, k - i)) {
                    if !x.is_zero() && !y.is_zero() {
                        acc += x * y;
                    }
                }
            }
            acc
        })
        .collect()
}

impl WittVector {
    pub fn new(ring: Ring, coeffs: Vec<BigRational>) -> Result<Self> {
        let coeffs = coeffs
            .iter()
            .map(|c| ring.element(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(WittVector { ring, coeffs })
    }

    pub fn from_i64(ring: Ring, coeffs: &[i64]) -> Result<Self> {
        WittVector::new(ring, coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// The additive identity, the constant series 1.
    pub fn zero(ring: Ring, n: usize) -> Self {
        WittVector {
            ring,
            coeffs: vec![BigRational::zero(); n],
        }
    }

    /// The multiplicative identity `1/(1-t)`.
    pub fn one(ring: Ring, n: usize) -> Self {
        teichmuller(ring, &BigRational::one(), n).expect("1 lies in every ring")
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Precision `N`.
    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// `a_1, ..., a_N`.
    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn check_compatible(&self, other: &WittVector) -> Result<()> {
        if self.ring != other.ring {
            return Err(Error::Mismatch(format!("rings {} and {}", self.ring, other.ring)));
        }
        if self.precision() != other.precision() {
            return Err(Error::Mismatch(format!(
                "precisions {} and {}",
                self.precision(),
                other.precision()
            )));
        }
        Ok(())
    }

    fn reduced(ring: Ring, coeffs: Vec<BigRational>) -> WittVector {
        WittVector {
            ring,
            coeffs: coeffs.into_iter().map(|c| ring.reduce(c)).collect(),
        }
    }

    /// Projection `w_N -> w_M` for `M <= N`.
    pub fn truncate(&self, m: usize) -> Result<WittVector> {
        if m > self.precision() {
            return Err(Error::Precision(format!(
                "cannot raise precision from {} to {m}",
                self.precision()
            )));
        }
        Ok(WittVector {
            ring: self.ring,
            coeffs: self.coeffs[..m].to_vec(),
        })
    }

    /// Integer representatives of the coefficients (for `Z` and `F_p`).
    fn integer_coeffs(&self) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.to_integer()).collect()
    }

    fn lift_to_z(&self) -> WittVector {
        WittVector {
            ring: Ring::Z,
            coeffs: self.coeffs.clone(),
        }
    }

    fn reduce_into(&self, ring: Ring) -> WittVector {
        WittVector::reduced(ring, self.coeffs.clone())
    }
}

impl fmt::Display for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        write!(f, "w_{}({})[{}]", self.precision(), self.ring, parts.join(", "))
    }
}

/// `u ⊕ v`, the truncated product of series.
pub fn witt_add(u: &WittVector, v: &WittVector) -> Result<WittVector> {
    u.check_compatible(v)?;
    let n = u.precision();
    Ok(WittVector::reduced(u.ring, series_mul(&u.coeffs, &v.coeffs, n)))
}

/// `⊖u`, the series inverse.
pub fn witt_neg(u: &WittVector) -> WittVector {
    let n = u.precision();
    let mut inv: Vec<BigRational> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = u.coeffs[k - 1].clone();
        for i in 1..k {
            acc += &u.coeffs[i - 1] * &inv[k - i - 1];
        }
        inv.push(u.ring.reduce(-acc));
    }
    WittVector {
        ring: u.ring,
        coeffs: inv,
    }
}

pub fn witt_sub(u: &WittVector, v: &WittVector) -> Result<WittVector> {
    witt_add(u, &witt_neg(v))
}

/// `1/(1 - at)`.
pub fn teichmuller(ring: Ring, a: &BigRational, n: usize) -> Result<WittVector> {
    let a = ring.element(a)?;
    let mut coeffs = Vec::with_capacity(n);
    let mut x = BigRational::one();
    for _ in 0..n {
        x = ring.reduce(&x * &a);
        coeffs.push(x.clone());
    }
    Ok(WittVector { ring, coeffs })
}

/// Ghost components `γ_1, ..., γ_N` of `t u'/u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GhostVector {
    pub ring: Ring,
    #[serde(with = "crate::serde_str::vec")]
    pub comps: Vec<BigRational>,
}

impl GhostVector {
    pub fn new(ring: Ring, comps: Vec<BigRational>) -> Result<Self> {
        let comps = comps
            .iter()
            .map(|c| ring.element(c))
            .collect::<Result<Vec<_>>>()?;
        Ok(GhostVector { ring, comps })
    }
}

/// `γ_n = n a_n - sum_{k<n} γ_k a_{n-k}`, valid over any ring.
pub fn ghost(u: &WittVector) -> GhostVector {
    let n = u.precision();
    let mut g: Vec<BigRational> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = &u.coeffs[k - 1] * rat(k as u64);
        for i in 1..k {
            acc -= &g[i - 1] * &u.coeffs[k - i - 1];
        }
        g.push(u.ring.reduce(acc));
    }
    GhostVector {
        ring: u.ring,
        comps: g,
    }
}

/// Solve `ghost(u) = g`: `a_n = (sum_{k=1}^n γ_k a_{n-k}) / n`.
///
/// Over `Z` the result must be integral; the first failing index is
/// reported. Not available over `F_p`.
pub fn ghost_inverse(g: &GhostVector) -> Result<WittVector> {
    if !g.ring.is_torsion_free() {
        return Err(Error::domain("ghost inversion is undefined over F_p"));
    }
    let n = g.comps.len();
    let mut a: Vec<BigRational> = Vec::with_capacity(n);
    for k in 1..=n {
        let mut acc = g.comps[k - 1].clone();
        for i in 1..k {
            acc += &g.comps[i - 1] * &a[k - i - 1];
        }
        let v = acc / rat(k as u64);
        if g.ring == Ring::Z && !v.is_integer() {
            return Err(Error::Integrality {
                index: k,
                detail: format!("a_{k} = {v}"),
            });
        }
        a.push(v);
    }
    Ok(WittVector { ring: g.ring, coeffs: a })
}

fn ghost_map2(
    u: &WittVector,
    v: &WittVector,
    f: impl Fn(&BigRational, &BigRational) -> BigRational,
) -> Result<WittVector> {
    let gu = ghost(u);
    let gv = ghost(v);
    let comps = gu.comps.iter().zip(&gv.comps).map(|(x, y)| f(x, y)).collect();
    ghost_inverse(&GhostVector { ring: u.ring, comps })
}

/// `u ⊗ v`. Ghost route over `Z`/`Q`, universal polynomials over `F_p`.
pub fn witt_mul(u: &WittVector, v: &WittVector) -> Result<WittVector> {
    u.check_compatible(v)?;
    match u.ring {
        Ring::Fp(p) => {
            let c = universal::multiply_mod_p(&u.integer_coeffs(), &v.integer_coeffs(), p)?;
            Ok(WittVector {
                ring: u.ring,
                coeffs: c.into_iter().map(rat).collect(),
            })
        }
        _ => ghost_map2(u, v, |x, y| x * y),
    }
}

/// `u^{⊗k}` by repeated squaring; `k = 0` gives the unit.
pub fn witt_pow(u: &WittVector, mut k: u64) -> Result<WittVector> {
    let mut acc = WittVector::one(u.ring, u.precision());
    let mut base = u.clone();
    while k > 0 {
        if k & 1 == 1 {
            acc = witt_mul(&acc, &base)?;
        }
        k >>= 1;
        if k > 0 {
            base = witt_mul(&base, &base)?;
        }
    }
    Ok(acc)
}

/// Frobenius `Ψ^n`, characterised by `ghost(Ψ^n u)_m = ghost(u)_{nm}`.
/// The output has precision `floor(N / n)`.
pub fn frobenius(n: usize, u: &WittVector) -> Result<WittVector> {
    if n == 0 {
        return Err(Error::domain("Frobenius index must be positive"));
    }
    if let Ring::Fp(_) = u.ring {
        return Ok(frobenius(n, &u.lift_to_z())?.reduce_into(u.ring));
    }
    let g = ghost(u);
    let m = u.precision() / n;
    let comps = (1..=m).map(|k| g.comps[n * k - 1].clone()).collect();
    ghost_inverse(&GhostVector { ring: u.ring, comps })
}

/// `Ψ^n` followed by a check that the requested output precision is available.
pub fn frobenius_to(n: usize, u: &WittVector, out_precision: usize) -> Result<WittVector> {
    if n.checked_mul(out_precision).is_none_or(|need| need > u.precision()) {
        return Err(Error::Precision(format!(
            "Ψ^{n} to precision {out_precision} needs input precision {}",
            n.saturating_mul(out_precision)
        )));
    }
    frobenius(n, u)?.truncate(out_precision)
}

/// Verschiebung `V_n(u)(t) = u(t^n)`, truncated to the same precision.
pub fn verschiebung(n: usize, u: &WittVector) -> Result<WittVector> {
    if n == 0 {
        return Err(Error::domain("Verschiebung index must be positive"));
    }
    let len = u.precision();
    let mut coeffs = vec![BigRational::zero(); len];
    for (i, c) in u.coeffs.iter().enumerate() {
        let k = (i + 1) * n;
        if k > len {
            break;
        }
        coeffs[k - 1] = c.clone();
    }
    Ok(WittVector { ring: u.ring, coeffs })
}

/// `[n] u = u ⊕ ... ⊕ u = u(t)^n`; negative `n` uses `⊖u`.
pub fn add_multiple(n: i64, u: &WittVector) -> WittVector {
    let base = if n < 0 { witt_neg(u) } else { u.clone() };
    let mut acc = WittVector::zero(u.ring, u.precision());
    let mut sq = base;
    let mut k = n.unsigned_abs();
    while k > 0 {
        if k & 1 == 1 {
            acc = witt_add(&acc, &sq).expect("same shape");
        }
        k >>= 1;
        if k > 0 {
            sq = witt_add(&sq, &sq).expect("same shape");
        }
    }
    acc
}

/// Adams operations `Ψ^1(a), ..., Ψ^N(a)` supplied by the caller.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdamsSequence {
    pub ring: Ring,
    #[serde(with = "crate::serde_str::vec")]
    pub values: Vec<BigRational>,
}

impl AdamsSequence {
    /// The trivial λ-structure: `Ψ^n(a) = a` for every `n`.
    pub fn trivial(ring: Ring, a: BigRational, n: usize) -> Self {
        AdamsSequence {
            ring,
            values: vec![a; n],
        }
    }

    /// The toric structure `Ψ^n(x) = x^n`, evaluated at `x = c`.
    pub fn toric(ring: Ring, c: BigRational, n: usize) -> Self {
        let mut values = Vec::with_capacity(n);
        let mut x = BigRational::one();
        for _ in 0..n {
            x *= &c;
            values.push(x.clone());
        }
        AdamsSequence { ring, values }
    }
}

/// `σ_t(a) = exp(sum_n Ψ^n(a) t^n / n)`. Its ghost vector is the Adams
/// sequence itself, so this is a ghost inversion; over `Z` integrality of
/// every coefficient is asserted.
pub fn sigma_t(a: &AdamsSequence) -> Result<WittVector> {
    ghost_inverse(&GhostVector {
        ring: a.ring,
        comps: a.values.clone(),
    })
}

/// Smallest `k >= 1` with `u^{⊗k}` equal to the unit, searching up to `limit`.
pub fn multiplicative_order(u: &WittVector, limit: u64) -> Result<u64> {
    let one = WittVector::one(u.ring, u.precision());
    let mut acc = u.clone();
    for k in 1..=limit {
        if acc == one {
            return Ok(k);
        }
        acc = witt_mul(&acc, u)?;
    }
    Err(Error::Budget(format!("no ⊗-order up to {limit}")))
}

/// All coefficients divisible by `p` (integer vectors only).
pub fn divisible_by(u: &WittVector, p: u64) -> bool {
    let pb = BigInt::from(p);
    u.coeffs
        .iter()
        .all(|c| c.is_integer() && (c.to_integer() % &pb).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(c: &[i64]) -> WittVector {
        WittVector::from_i64(Ring::Z, c).unwrap()
    }

    #[test]
    fn addition() {
        let u = z(&[3, -1, 4, 1]);
        assert_eq!(witt_add(&u, &WittVector::zero(Ring::Z, 4)).unwrap(), u);
        assert_eq!(witt_add(&u, &witt_neg(&u)).unwrap(), WittVector::zero(Ring::Z, 4));
        let a = teichmuller(Ring::Z, &rat(3), 6).unwrap();
        let b = teichmuller(Ring::Z, &rat(-3), 6).unwrap();
        assert_eq!(witt_add(&a, &b).unwrap(), z(&[0, 9, 0, 81, 0, 729]));
    }

    #[test]
    fn teichmuller_and_ghost() {
        assert_eq!(teichmuller(Ring::Z, &rat(2), 3).unwrap(), z(&[2, 4, 8]));
        assert_eq!(teichmuller(Ring::Z, &rat(0), 3).unwrap(), WittVector::zero(Ring::Z, 3));
        let g = ghost(&teichmuller(Ring::Z, &rat(5), 5).unwrap());
        assert_eq!(g.comps, [5, 25, 125, 625, 3125].map(rat).to_vec());
        let g = ghost(&z(&[0, 1, 0, 1, 0, 1]));
        assert_eq!(g.comps, [0, 2, 0, 2, 0, 2].map(rat).to_vec());
        assert_eq!(ghost_inverse(&g).unwrap(), z(&[0, 1, 0, 1, 0, 1]));
    }

    #[test]
    fn ghost_inverse_integrality() {
        let g = GhostVector::new(Ring::Z, vec![rat(1), rat(0)]).unwrap();
        match ghost_inverse(&g) {
            Err(Error::Integrality { index, .. }) => assert_eq!(index, 2),
            other => panic!("{other:?}"),
        }
        let q = GhostVector::new(Ring::Q, vec![rat(1), rat(0)]).unwrap();
        assert!(ghost_inverse(&q).is_ok());
    }

    #[test]
    fn products() {
        let a = teichmuller(Ring::Z, &rat(2), 6).unwrap();
        let b = teichmuller(Ring::Z, &rat(-3), 6).unwrap();
        assert_eq!(witt_mul(&a, &b).unwrap(), teichmuller(Ring::Z, &rat(-6), 6).unwrap());
        let one = WittVector::one(Ring::Z, 6);
        assert_eq!(witt_mul(&a, &one).unwrap(), a);
        let v2 = verschiebung(2, &one).unwrap();
        let v3 = verschiebung(3, &one).unwrap();
        let prod = witt_mul(&v2, &v3).unwrap();
        assert_eq!(ghost(&prod).comps, [0, 0, 0, 0, 0, 6].map(rat).to_vec());
    }

    #[test]
    fn frobenius_verschiebung() {
        let t = teichmuller(Ring::Z, &rat(3), 8).unwrap();
        assert_eq!(frobenius(2, &t).unwrap(), teichmuller(Ring::Z, &rat(9), 4).unwrap());
        assert_eq!(frobenius(1, &t).unwrap(), t);
        let u = z(&[0, 1, 0, 1, 0, 1, 0, 1]);
        let f = frobenius(2, &u).unwrap();
        assert_eq!(ghost(&f).comps, [2, 2, 2, 2].map(rat).to_vec());
        let one = WittVector::one(Ring::Z, 8);
        assert_eq!(f, witt_add(&one.truncate(4).unwrap(), &one.truncate(4).unwrap()).unwrap());
        assert!(frobenius_to(3, &t, 3).is_err());
        assert_eq!(verschiebung(2, &one).unwrap(), u);
    }

    #[test]
    fn multiples_and_sigma() {
        let t = teichmuller(Ring::Z, &rat(2), 4).unwrap();
        assert_eq!(add_multiple(2, &t), z(&[4, 12, 32, 80]));
        assert_eq!(add_multiple(1, &t), t);
        let s = sigma_t(&AdamsSequence::trivial(Ring::Z, rat(1), 5)).unwrap();
        assert_eq!(s, WittVector::one(Ring::Z, 5));
        let s = sigma_t(&AdamsSequence::trivial(Ring::Z, rat(2), 4)).unwrap();
        assert_eq!(s, z(&[2, 3, 4, 5]));
        let s = sigma_t(&AdamsSequence::toric(Ring::Z, rat(7), 4)).unwrap();
        assert_eq!(s, teichmuller(Ring::Z, &rat(7), 4).unwrap());
    }

    #[test]
    fn fp_product_matches_lift() {
        let p = 7;
        let r = Ring::Fp(p);
        let a = WittVector::from_i64(r, &[1, 5, 0, 3, 6, 2, 4, 1, 0, 0, 2, 3, 5, 6, 1, 4]).unwrap();
        let b = WittVector::from_i64(r, &[3, 0, 2, 6, 1, 1, 5, 0, 4, 2, 6, 3, 0, 1, 2, 5]).unwrap();
        let fast = witt_mul(&a, &b).unwrap();
        let slow = witt_mul(&a.lift_to_z(), &b.lift_to_z()).unwrap().reduce_into(r);
        assert_eq!(fast, slow);
        let t = teichmuller(r, &rat(3), 4).unwrap();
        assert_eq!(multiplicative_order(&t, 100).unwrap(), 6);
        assert!(witt_mul(&WittVector::zero(r, 17), &WittVector::zero(r, 17)).is_err());
    }

    #[test]
    fn json_shape() {
        let u = z(&[1, -2]);
        let js = serde_json::to_string(&u).unwrap();
        assert_eq!(js, r#"{"ring":"Z","N":2,"coeffs":["1","-2"]}"#);
        let back: WittVector = serde_json::from_str(&js).unwrap();
        assert_eq!(back, u);
        let bad = r#"{"ring":"Z","N":2,"coeffs":["1/2","0"]}"#;
        assert!(serde_json::from_str::<WittVector>(bad).is_err());
    }
}
