use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::arith::{factorize_u128, FactorBudget};
use crate::error::Result;

/// An integer combination of the symbols `log p` and the constant `1`.
///
/// Kept canonical: no zero weights are stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct FormalDegree {
    pub logs: BTreeMap<u128, i64>,
    #[serde(rename = "const")]
    pub constant: i64,
}

impl FormalDegree {
    pub fn zero() -> Self {
        FormalDegree::default()
    }

    pub fn constant(c: i64) -> Self {
        FormalDegree {
            logs: BTreeMap::new(),
            constant: c,
        }
    }

    /// `c * log p` for a single prime.
    pub fn log_prime(p: u128, c: i64) -> Self {
        let mut d = FormalDegree::zero();
        d.add_log(p, c);
        d
    }

    /// `log n` expanded over the primes of `n >= 1`.
    pub fn log_of(n: u128) -> Result<Self> {
        let f = factorize_u128(n, FactorBudget::default())?;
        let mut d = FormalDegree::zero();
        for &(p, e) in f.pairs() {
            d.add_log(p, e as i64);
        }
        Ok(d)
    }

    pub fn add_log(&mut self, p: u128, c: i64) {
        let slot = self.logs.entry(p).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.logs.remove(&p);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.logs.is_empty() && self.constant == 0
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return FormalDegree::zero();
        }
        FormalDegree {
            logs: self.logs.iter().map(|(&p, &c)| (p, c * k)).collect(),
            constant: self.constant * k,
        }
    }

    /// Numerical value with natural logarithms.
    pub fn to_f64(&self) -> f64 {
        self.logs
            .iter()
            .map(|(&p, &c)| c as f64 * (p as f64).ln())
            .sum::<f64>()
            + self.constant as f64
    }
}

impl Add for &FormalDegree {
    type Output = FormalDegree;
    fn add(self, rhs: &FormalDegree) -> FormalDegree {
        let mut out = self.clone();
        for (&p, &c) in &rhs.logs {
            out.add_log(p, c);
        }
        out.constant += rhs.constant;
        out
    }
}

impl Neg for &FormalDegree {
    type Output = FormalDegree;
    fn neg(self) -> FormalDegree {
        self.scale(-1)
    }
}

impl Sub for &FormalDegree {
    type Output = FormalDegree;
    fn sub(self, rhs: &FormalDegree) -> FormalDegree {
        self + &(-rhs)
    }
}

impl fmt::Display for FormalDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut terms = Vec::new();
        for (&p, &c) in &self.logs {
            terms.push(match c {
                1 => format!("log {p}"),
                -1 => format!("-log {p}"),
                _ => format!("{c} log {p}"),
            });
        }
        if self.constant != 0 {
            terms.push(self.constant.to_string());
        }
        write!(f, "{}", terms.join(" + ").replace("+ -", "- "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let a = FormalDegree::log_of(12).unwrap();
        let b = FormalDegree::log_of(5).unwrap();
        let d = &a - &b;
        assert_eq!(d.logs, BTreeMap::from([(2, 2), (3, 1), (5, -1)]));
        assert!((&d - &d).is_zero());
        assert_eq!(d.to_string(), "2 log 2 + log 3 - log 5");
        assert!((d.to_f64() - (12.0f64 / 5.0).ln()).abs() < 1e-14);
    }

    #[test]
    fn json_shape() {
        let d = FormalDegree::log_prime(2, -1);
        assert_eq!(serde_json::to_string(&d).unwrap(), r#"{"logs":{"2":-1},"const":0}"#);
    }
}
