use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Leading factorial-base digits of a profinite integer.
///
/// `digits[i - 1]` is `c_i`, the coefficient of `i!`, bounded by `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FactorialDigits {
    digits: Vec<u32>,
}

impl FactorialDigits {
    pub fn from_digits(digits: Vec<u32>) -> Result<Self> {
        for (i, &c) in digits.iter().enumerate() {
            if c as usize > i + 1 {
                return Err(Error::domain(format!("digit c_{} = {c} exceeds {}", i + 1, i + 1)));
            }
        }
        Ok(FactorialDigits { digits })
    }

    /// `c_1, c_2, ..., c_k`.
    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    /// `sum c_i * i!`, the canonical residue modulo `(k+1)!`.
    pub fn value(&self) -> BigInt {
        let mut fact = BigInt::one();
        let mut acc = BigInt::zero();
        for (i, &c) in self.digits.iter().enumerate() {
            fact *= i + 1;
            acc += &fact * c;
        }
        acc
    }
}

impl fmt::Display for FactorialDigits {
    /// Most significant digit first, e.g. `(1001)!` for 25.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sep = if self.digits.len() > 9 { " " } else { "" };
        let parts: Vec<String> = self.digits.iter().rev().map(u32::to_string).collect();
        write!(f, "({})!", parts.join(sep))
    }
}

/// First `k` factorial-base digits of `n`, read as an element of the
/// profinite completion of Z. Negative `n` goes through its residue.
pub fn factorial_digits(n: &BigInt, k: usize) -> Result<FactorialDigits> {
    if k == 0 {
        return Err(Error::domain("digit count must be at least 1"));
    }
    let modulus: BigInt = (1..=k as u64 + 1).map(BigInt::from).product();
    let mut r = n.mod_floor(&modulus);
    let mut digits = Vec::with_capacity(k);
    for base in 2..=k as u64 + 1 {
        let (q, c) = r.div_rem(&BigInt::from(base));
        digits.push(c.to_u32().expect("digit below base"));
        r = q;
    }
    Ok(FactorialDigits { digits })
}
