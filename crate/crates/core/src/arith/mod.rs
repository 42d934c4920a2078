//! Shared exact number theory.

mod cyclotomic;
mod factor;
mod factorial;
pub mod modular;
mod poly;

pub use cyclotomic::{
    cyclotomic_comaximal, cyclotomic_poly, homogeneous_cyclotomic, resultant, Comaximality,
};
pub use factor::{factorize, factorize_u128, sieve, FactorBudget, Factorization, TRIAL_DIVISION_BOUND};
pub use factorial::{factorial_digits, FactorialDigits};
pub use modular::{gcd_u128, inv_mod, is_prime, lcm_u128, mul_mod, pow_mod, reduce_signed};
pub use poly::IntPolynomial;


use crate::error::{Error, Result};

/// Euler's totient.
pub fn euler_phi(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    Ok(phi_from(&f) as u64)
}

pub(crate) fn phi_from(f: &Factorization) -> u128 {
    f.pairs()
        .iter()
        .map(|&(p, e)| (p - 1) * p.pow(e - 1))
        .product()
}

/// Möbius function.
pub fn mobius(n: u64) -> Result<i8> {
    let f = factorize(n)?;
    Ok(mobius_from(&f))
}

pub(crate) fn mobius_from(f: &Factorization) -> i8 {
    if f.pairs().iter().any(|&(_, e)| e > 1) {
        0
    } else if f.pairs().len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// If `n = p^k` with `k >= 1`, returns `(p, k)`.
pub fn prime_power(n: u128) -> Option<(u128, u32)> {
    if n < 2 {
        return None;
    }
    let f = factorize_u128(n, FactorBudget::default()).ok()?;
    match f.pairs() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Factorization of `phi(m)` assembled from the factorization of `m`.
fn group_order_factorization(m: &Factorization, budget: FactorBudget) -> Result<Factorization> {
    let mut acc = Factorization::one();
    for &(p, e) in m.pairs() {
        if e > 1 {
            acc = acc.mul(&Factorization::from_pairs([(p, e - 1)]));
        }
        acc = acc.mul(&factorize_u128(p - 1, budget)?);
    }
    Ok(acc)
}

/// Multiplicative order of `a` modulo `m >= 2`.
pub fn multiplicative_order(a: i128, m: u128) -> Result<u128> {
    multiplicative_order_with(a, m, FactorBudget::default())
}

pub fn multiplicative_order_with(a: i128, m: u128, budget: FactorBudget) -> Result<u128> {
    if m < 2 {
        return Err(Error::domain(format!("modulus must be at least 2, got {m}")));
    }
    let a = reduce_signed(a, m);
    if gcd_u128(a, m) != 1 {
        return Err(Error::domain(format!("{a} is not a unit modulo {m}")));
    }
    let mf = factorize_u128(m, budget)?;
    let group = group_order_factorization(&mf, budget)?;
    Ok(order_in_group(a, m, &group))
}

/// Order of the unit `a` given a factorization of a multiple of it.
pub(crate) fn order_in_group(a: u128, m: u128, group: &Factorization) -> u128 {
    let mut order = group.value().expect("group order fits in u128");
    for &(p, e) in group.pairs() {
        for _ in 0..e {
            if pow_mod(a, order / p, m) == 1 {
                order /= p;
            } else {
                break;
            }
        }
    }
    order
}

/// Order of `a` modulo the prime `p`, where `p - 1` is cheap to factor.
pub(crate) fn order_mod_prime(a: u128, p: u128) -> Result<u128> {
    let group = factorize_u128(p - 1, FactorBudget::default())?;
    Ok(order_in_group(a % p, p, &group))
}
