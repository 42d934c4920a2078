use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::modular::{gcd_u128, is_prime, Montgomery};
use crate::error::{Error, Result};

/// Trial division covers every prime up to this bound before Pollard rho.
pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// Effort limit for the Pollard–Brent stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FactorBudget {
    /// Total number of polynomial iterations across all rho attempts.
    pub rho_iterations: u64,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            rho_iterations: 1 << 26,
        }
    }
}

/// Prime factorization, sorted ascending by prime. The empty list is 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Factorization {
    factors: Vec<(u128, u32)>,
}

impl Factorization {
    pub fn one() -> Self {
        Factorization::default()
    }

    /// Build from arbitrary (prime, exponent) pairs, merging duplicates.
    pub fn from_pairs(pairs: impl IntoIterator<Item = (u128, u32)>) -> Self {
        let mut factors: Vec<(u128, u32)> = pairs.into_iter().filter(|&(_, e)| e > 0).collect();
        factors.sort_unstable();
        let mut merged: Vec<(u128, u32)> = Vec::with_capacity(factors.len());
        for (p, e) in factors {
            match merged.last_mut() {
                Some((q, f)) if *q == p => *f += e,
                _ => merged.push((p, e)),
            }
        }
        Factorization { factors: merged }
    }

    pub fn pairs(&self) -> &[(u128, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = u128> + '_ {
        self.factors.iter().map(|&(p, _)| p)
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exponent of `p`, zero if absent.
    pub fn exponent(&self, p: u128) -> u32 {
        self.factors
            .binary_search_by_key(&p, |&(q, _)| q)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    /// The reconstructed value, `None` on overflow.
    pub fn value(&self) -> Option<u128> {
        self.factors.iter().try_fold(1u128, |acc, &(p, e)| {
            (0..e).try_fold(acc, |a, _| a.checked_mul(p))
        })
    }

    /// Product of the distinct primes.
    pub fn radical(&self) -> u128 {
        self.factors.iter().map(|&(p, _)| p).product()
    }

    pub fn mul(&self, other: &Factorization) -> Factorization {
        Factorization::from_pairs(self.factors.iter().chain(other.factors.iter()).copied())
    }

    /// All positive divisors, sorted ascending.
    pub fn divisors(&self) -> Vec<u128> {
        let mut divs = vec![1u128];
        for &(p, e) in &self.factors {
            let len = divs.len();
            let mut pk = 1u128;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divs.push(divs[i] * pk);
                }
            }
        }
        divs.sort_unstable();
        divs
    }
}

pub(crate) fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_DIVISION_BOUND as usize))
}

/// Sieve of Eratosthenes: all primes `<= limit`.
pub fn sieve(limit: usize) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u32);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Factor `n` in `1 ..= 2^64 - 1` with the default budget.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Size("cannot factor 0".into()));
    }
    factorize_u128(n as u128, FactorBudget::default())
}

/// Factor any nonzero `u128`. Trial division up to 10^6, then Pollard–Brent
/// with Miller–Rabin certificates. Returns [`Error::Unfactored`] carrying the
/// partial factorization when the rho budget runs out.
pub fn factorize_u128(n: u128, budget: FactorBudget) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::Size("cannot factor 0".into()));
    }
    let mut rest = n;
    let mut found: Vec<(u128, u32)> = Vec::new();

    if rest <= u64::MAX as u128 {
        let mut r = rest as u64;
        for &p in small_primes() {
            let p = p as u64;
            if p * p > r {
                break;
            }
            if r.is_multiple_of(p) {
                let mut e = 0;
                while r.is_multiple_of(p) {
                    r /= p;
                    e += 1;
                }
                found.push((p as u128, e));
            }
        }
        rest = r as u128;
    } else {
        for &p in small_primes() {
            let p = p as u128;
            if p * p > rest {
                break;
            }
            if rest.is_multiple_of(p) {
                let mut e = 0;
                while rest.is_multiple_of(p) {
                    rest /= p;
                    e += 1;
                }
                found.push((p, e));
            }
        }
    }

    if rest == 1 {
        return Ok(Factorization::from_pairs(found));
    }
    let bound = TRIAL_DIVISION_BOUND as u128;
    if rest < bound * bound {
        found.push((rest, 1));
        return Ok(Factorization::from_pairs(found));
    }

    let mut remaining_budget = budget.rho_iterations;
    let mut stack = vec![rest];
    let mut stuck = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime(m) {
            found.push((m, 1));
            continue;
        }
        if let Some(r) = exact_square_root(m) {
            stack.push(r);
            stack.push(r);
            continue;
        }
        match pollard_brent(m, &mut remaining_budget) {
            Some(d) => {
                stack.push(d);
                stack.push(m / d);
            }
            None => stuck.push(m),
        }
    }
    if stuck.is_empty() {
        Ok(Factorization::from_pairs(found))
    } else {
        let cofactor = stuck.iter().product();
        Err(Error::Unfactored {
            partial: Factorization::from_pairs(found),
            cofactor,
        })
    }
}

fn exact_square_root(n: u128) -> Option<u128> {
    let mut r = (n as f64).sqrt() as u128;
    while r.checked_mul(r).is_none_or(|sq| sq > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|sq| sq <= n) {
        r += 1;
    }
    (r * r == n).then_some(r)
}

/// Brent's variant of Pollard rho. `n` must be odd, composite and not a
/// perfect square. Consumes iterations from `budget`.
fn pollard_brent(n: u128, budget: &mut u64) -> Option<u128> {
    let mont = Montgomery::new(n);
    const BATCH: u64 = 128;
    for c_seed in 1u128.. {
        if *budget == 0 {
            return None;
        }
        let c = mont.to_mont(c_seed);
        let f = |x: u128| mont.add(mont.mul(x, x), c);
        let mut y = mont.to_mont(2);
        let mut r: u64 = 1;
        let mut q = mont.one();
        let mut g = 1u128;
        let mut x = y;
        let mut ys = y;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                let steps = BATCH.min(r - k);
                for _ in 0..steps {
                    y = f(y);
                    q = mont.mul(q, x.abs_diff(y));
                }
                g = gcd_u128(q, n);
                k += steps;
                *budget = budget.saturating_sub(steps);
                if *budget == 0 && g == 1 {
                    return None;
                }
            }
            r *= 2;
        }
        if g == n {
            // Batched product overshot; replay one step at a time.
            loop {
                ys = f(ys);
                g = gcd_u128(x.abs_diff(ys), n);
                if g > 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(mut n: u64) -> Vec<(u128, u32)> {
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            if e > 0 {
                out.push((p as u128, e));
            }
            p += 1;
        }
        if n > 1 {
            out.push((n as u128, 1));
        }
        out
    }

    #[test]
    fn spec_examples() {
        assert!(factorize(1).unwrap().is_one());
        assert_eq!(factorize(2047).unwrap().pairs(), &[(23, 1), (89, 1)]);
        assert_eq!(factorize(360).unwrap().pairs(), &[(2, 3), (3, 2), (5, 1)]);
        assert!(matches!(factorize(0), Err(Error::Size(_))));
    }

    #[test]
    fn agrees_with_trial_division() {
        for n in (1..20_000u64).chain([999_999_937 * 3, 1 << 40, 600_851_475_143]) {
            assert_eq!(factorize(n).unwrap().pairs(), naive(n).as_slice(), "n = {n}");
        }
    }

    #[test]
    fn large_semiprimes() {
        let p: u128 = 1_000_000_007;
        let q: u128 = 998_244_353;
        let f = factorize_u128(p * q, FactorBudget::default()).unwrap();
        assert_eq!(f.pairs(), &[(q, 1), (p, 1)]);

        let a: u128 = 10_000_000_019; // > 10^6, forces rho on a 128-bit product
        let b: u128 = 1_000_000_000_000_000_003;
        let f = factorize_u128(a * a * b, FactorBudget::default()).unwrap();
        assert_eq!(f.pairs(), &[(a, 2), (b, 1)]);
        assert_eq!(f.value(), Some(a * a * b));
    }

    #[test]
    fn budget_exhaustion_reports_cofactor() {
        let a: u128 = 1_000_000_000_039;
        let b: u128 = 1_000_000_000_061;
        let err = factorize_u128(7 * a * b, FactorBudget { rho_iterations: 10 }).unwrap_err();
        match err {
            Error::Unfactored { partial, cofactor } => {
                assert_eq!(partial.pairs(), &[(7, 1)]);
                assert_eq!(cofactor, a * b);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn divisors_sorted() {
        let f = factorize(12).unwrap();
        assert_eq!(f.divisors(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(Factorization::one().divisors(), vec![1]);
    }
}
