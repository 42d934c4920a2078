//! Irreducible polynomials over `F_2`, their roots among the nimbers, and the
//! induced dictionary with roots of unity.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{enclosing_field_level, frobenius_orbit, nim_inverse, nim_mul, nim_square, nimber_to_root};
use crate::error::{Error, Result};
use crate::habiro::RootOfUnity;

/// A polynomial over `F_2` as a coefficient bitmask (bit `i` is `x^i`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct F2Polynomial(pub u128);

impl F2Polynomial {
    pub const X: F2Polynomial = F2Polynomial(0b10);

    pub fn degree(&self) -> Option<u32> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros())
    }

    pub fn mask(&self) -> u128 {
        self.0
    }

    /// Rabin's test: `x^(2^n) = x mod f` and `gcd(x^(2^(n/q)) - x, f) = 1`.
    pub fn is_irreducible(&self) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n > 64 {
            return false;
        }
        let f = self.0;
        let x = 0b10u128;
        let frob = |k: u32| {
            let mut y = x;
            for _ in 0..k {
                y = f2_mulmod(y, y, f);
            }
            y
        };
        if frob(n) != f2_mod(x, f) {
            return false;
        }
        let mut m = n;
        let mut q = 2;
        let mut primes = Vec::new();
        while m > 1 {
            if m % q == 0 {
                primes.push(q);
                while m % q == 0 {
                    m /= q;
                }
            }
            q += 1;
        }
        primes
            .into_iter()
            .all(|q| f2_gcd(frob(n / q) ^ f2_mod(x, f), f) == 1)
    }
}

impl fmt::Display for F2Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for i in (0..128).rev() {
            if self.0 >> i & 1 == 1 {
                terms.push(match i {
                    0 => "1".to_string(),
                    1 => "x".to_string(),
                    _ => format!("x^{i}"),
                });
            }
        }
        write!(f, "{}", terms.join(" + "))
    }
}

fn f2_deg(a: u128) -> i32 {
    127 - a.leading_zeros() as i32
}

fn f2_mod(mut a: u128, f: u128) -> u128 {
    let df = f2_deg(f);
    while a != 0 && f2_deg(a) >= df {
        a ^= f << (f2_deg(a) - df);
    }
    a
}

/// Product mod `f` for operands of degree below `deg f <= 64`.
fn f2_mulmod(a: u128, b: u128, f: u128) -> u128 {
    let mut acc = 0u128;
    for i in 0..64 {
        if b >> i & 1 == 1 {
            acc ^= a << i;
        }
    }
    f2_mod(acc, f)
}

fn f2_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = f2_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Dense polynomial with nimber coefficients, lowest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
struct NimPoly(Vec<u64>);

impl NimPoly {
    fn trim(mut self) -> Self {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }

    fn from_f2(f: F2Polynomial) -> Self {
        NimPoly((0..=f.degree().unwrap_or(0)).map(|i| (f.0 >> i & 1) as u64).collect()).trim()
    }

    fn deg(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn add(&self, o: &NimPoly) -> NimPoly {
        let n = self.0.len().max(o.0.len());
        NimPoly(
            (0..n)
                .map(|i| self.0.get(i).copied().unwrap_or(0) ^ o.0.get(i).copied().unwrap_or(0))
                .collect(),
        )
        .trim()
    }

    fn mul(&self, o: &NimPoly) -> NimPoly {
        if self.0.is_empty() || o.0.is_empty() {
            return NimPoly(vec![]);
        }
        let mut out = vec![0u64; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] ^= nim_mul(a, b);
            }
        }
        NimPoly(out).trim()
    }

    fn div_rem(&self, d: &NimPoly) -> (NimPoly, NimPoly) {
        let dd = d.deg().expect("nonzero divisor");
        let lead_inv = nim_inverse(d.0[dd]).unwrap();
        let mut r = self.0.clone();
        let mut q = vec![0u64; r.len().saturating_sub(dd).max(1)];
        while r.len() > dd {
            let top = r.len() - 1;
            let c = nim_mul(r[top], lead_inv);
            if c != 0 {
                for (j, &dj) in d.0.iter().enumerate() {
                    r[top - dd + j] ^= nim_mul(c, dj);
                }
                q[top - dd] = c;
            }
            r.pop();
            while r.last() == Some(&0) && r.len() > dd {
                r.pop();
            }
        }
        (NimPoly(q).trim(), NimPoly(r).trim())
    }

    fn rem(&self, d: &NimPoly) -> NimPoly {
        self.div_rem(d).1
    }

    fn monic(&self) -> NimPoly {
        let inv = nim_inverse(*self.0.last().unwrap()).unwrap();
        NimPoly(self.0.iter().map(|&c| nim_mul(c, inv)).collect())
    }

    fn gcd(&self, o: &NimPoly) -> NimPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.0.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.0.is_empty() {
            a
        } else {
            a.monic()
        }
    }

    fn square_mod(&self, f: &NimPoly) -> NimPoly {
        let mut out = vec![0u64; (2 * self.0.len()).max(1)];
        for (i, &c) in self.0.iter().enumerate() {
            out[2 * i] = nim_square(c);
        }
        NimPoly(out).trim().rem(f)
    }
}

/// All roots of a squarefree `f` that splits over level `level`, by trace splitting.
fn split_roots(f: &NimPoly, level: u32, out: &mut Vec<u64>) {
    match f.deg() {
        None | Some(0) => return,
        Some(1) => {
            let m = f.monic();
            out.push(m.0[0]);
            return;
        }
        _ => {}
    }
    let m = 1u32 << level;
    for bit in 0..m {
        let beta = 1u64 << bit;
        // Tr(beta x) = Σ_{i<m} (beta x)^(2^i) mod f
        let mut y = NimPoly(vec![0, beta]).rem(f);
        let mut tr = y.clone();
        for _ in 1..m {
            y = y.square_mod(f);
            tr = tr.add(&y);
        }
        let g = f.gcd(&tr);
        if let Some(d) = g.deg() {
            if d > 0 && d < f.deg().unwrap() {
                let (h, _) = f.div_rem(&g);
                split_roots(&g, level, out);
                split_roots(&h, level, out);
                return;
            }
        }
    }
    unreachable!("trace splitting separates distinct roots");
}

fn field_level_for_degree(d: u32) -> Result<u32> {
    if !d.is_power_of_two() || d > 64 {
        return Err(Error::domain(format!(
            "degree {d} is not a power of two at most 64, so the roots are not finite nimbers"
        )));
    }
    Ok(d.trailing_zeros())
}

/// Nimber roots of an irreducible `f`, sorted.
pub fn nimber_roots(f: F2Polynomial) -> Result<Vec<u64>> {
    if !f.is_irreducible() {
        return Err(Error::domain(format!("{f} is not irreducible over F_2")));
    }
    let level = field_level_for_degree(f.degree().unwrap())?;
    let mut roots = Vec::new();
    split_roots(&NimPoly::from_f2(f), level, &mut roots);
    roots.sort_unstable();
    Ok(roots)
}

/// `∏ (X - α)` over a Frobenius-closed set of nimbers.
pub fn orbit_to_polynomial(orbit: &[u64]) -> Result<F2Polynomial> {
    let set: BTreeSet<u64> = orbit.iter().copied().collect();
    if set.is_empty() || set.len() != orbit.len() {
        return Err(Error::domain("orbit must be a nonempty set"));
    }
    if let Some(a) = set.iter().find(|&&a| !set.contains(&nim_square(a))) {
        return Err(Error::domain(format!("set is not closed under squaring at {a}")));
    }
    let mut p = NimPoly(vec![1]);
    for &a in &set {
        p = p.mul(&NimPoly(vec![a, 1]));
    }
    let mut mask = 0u128;
    for (i, &c) in p.0.iter().enumerate() {
        match c {
            0 => {}
            1 => mask |= 1 << i,
            _ => unreachable!("Frobenius-stable products have F_2 coefficients"),
        }
    }
    Ok(F2Polynomial(mask))
}

/// Root of unity attached to the smallest nimber root of `f`.
pub fn polynomial_to_root(f: F2Polynomial) -> Result<RootOfUnity> {
    if f == F2Polynomial::X {
        return Err(Error::domain("x has root 0, which is not a root of unity"));
    }
    let roots = nimber_roots(f)?;
    nimber_to_root(roots[0])
}

/// A formal sum of irreducible polynomials other than `x`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2Divisor {
    pub terms: BTreeMap<F2Polynomial, i64>,
}

impl F2Divisor {
    pub fn single(f: F2Polynomial) -> Result<Self> {
        if f == F2Polynomial::X || !f.is_irreducible() {
            return Err(Error::domain(format!("{f} is not an admissible prime divisor")));
        }
        Ok(F2Divisor {
            terms: BTreeMap::from([(f, 1)]),
        })
    }

    pub fn add(&mut self, f: F2Polynomial, c: i64) {
        let slot = self.terms.entry(f).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&f);
        }
    }
}

impl fmt::Display for F2Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, &c)| match c {
                1 => format!("[{p}]"),
                _ => format!("{c}[{p}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Products of roots regrouped into Frobenius orbits.
pub fn divisor_mul(d: &F2Divisor, e: &F2Divisor) -> Result<F2Divisor> {
    let mut out = F2Divisor::default();
    for (&f, &cf) in &d.terms {
        let a = nimber_roots(f)?;
        for (&g, &cg) in &e.terms {
            let b = nimber_roots(g)?;
            let mut count: BTreeMap<u64, i64> = BTreeMap::new();
            for &x in &a {
                for &y in &b {
                    *count.entry(nim_mul(x, y)).or_insert(0) += 1;
                }
            }
            // each orbit occurs with a constant multiplicity on its members
            while let Some((&z, &mult)) = count.iter().next() {
                let orbit = frobenius_orbit(z);
                for w in &orbit {
                    count.remove(w);
                }
                out.add(orbit_to_polynomial(&orbit)?, mult * cf * cg);
            }
        }
    }
    Ok(out)
}

/// One row of the nimber / polynomial / root-of-unity dictionary.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DictionaryEntry {
    pub nimber: u64,
    pub orbit: Vec<u64>,
    pub polynomial: F2Polynomial,
    pub root: Option<RootOfUnity>,
}

/// The dictionary for every nimber of level `level` (`level <= 4`).
pub fn dictionary(level: u32) -> Result<Vec<DictionaryEntry>> {
    if level > 4 {
        return Err(Error::Size(format!("dictionary is tabulated up to level 4, got {level}")));
    }
    let top = 1u64 << (1u32 << level);
    (0..top)
        .map(|a| {
            let orbit = frobenius_orbit(a);
            let polynomial = orbit_to_polynomial(&orbit)?;
            let root = if a == 0 { None } else { Some(nimber_to_root(a)?) };
            debug_assert!(enclosing_field_level(a) <= level);
            Ok(DictionaryEntry {
                nimber: a,
                orbit,
                polynomial,
                root,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    const X2X1: F2Polynomial = F2Polynomial(0b111);
    const X1: F2Polynomial = F2Polynomial(0b11);

    #[test]
    fn irreducibility() {
        assert!(X1.is_irreducible());
        assert!(X2X1.is_irreducible());
        assert!(F2Polynomial(0b10011).is_irreducible());
        assert!(!F2Polynomial(0b101).is_irreducible());
        assert!(!F2Polynomial(0b1).is_irreducible());
        assert_eq!(F2Polynomial(0b10011).to_string(), "x^4 + x + 1");
    }

    #[test]
    fn orbit_polynomials() {
        assert_eq!(orbit_to_polynomial(&[2, 3]).unwrap(), X2X1);
        assert_eq!(orbit_to_polynomial(&[4, 6, 5, 7]).unwrap(), F2Polynomial(0b10011));
        assert_eq!(orbit_to_polynomial(&[8, 10, 13, 14]).unwrap(), F2Polynomial(0b11111));
        assert_eq!(orbit_to_polynomial(&[0]).unwrap(), F2Polynomial::X);
        assert!(orbit_to_polynomial(&[2]).is_err());
    }

    #[test]
    fn roots_of_polynomials() {
        assert_eq!(polynomial_to_root(X1).unwrap().to_string(), "0/1");
        assert_eq!(polynomial_to_root(X2X1).unwrap().to_string(), "1/3");
        assert_eq!(polynomial_to_root(F2Polynomial(0b11111)).unwrap().to_string(), "2/5");
        assert!(polynomial_to_root(F2Polynomial(0b101)).is_err());
        assert!(polynomial_to_root(F2Polynomial(0b1011)).is_err());
        assert_eq!(nimber_roots(F2Polynomial(0b11111)).unwrap(), vec![8, 10, 13, 14]);
    }

    #[test]
    fn divisor_products() {
        let f = F2Divisor::single(X2X1).unwrap();
        let one = F2Divisor::single(X1).unwrap();
        assert_eq!(divisor_mul(&f, &one).unwrap(), f);
        assert_eq!(divisor_mul(&one, &one).unwrap(), one);
        let sq = divisor_mul(&f, &f).unwrap();
        let mut expect = F2Divisor::default();
        expect.add(X2X1, 1);
        expect.add(X1, 2);
        assert_eq!(sq, expect);
    }

    #[test]
    fn sixteen_element_dictionary() {
        let d = dictionary(2).unwrap();
        let polys: BTreeSet<F2Polynomial> = d.iter().map(|e| e.polynomial).collect();
        let expect: BTreeSet<F2Polynomial> = (2u128..32)
            .map(F2Polynomial)
            .filter(|f| f.is_irreducible() && 4 % f.degree().unwrap() == 0)
            .collect();
        assert_eq!(polys, expect);
        assert_eq!(d[4].root.unwrap().to_string(), "1/15");
    }
}
