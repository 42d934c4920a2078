use num_bigint::BigInt;
use num_traits::One;
use proptest::prelude::*;

use absarith::arith::{
    cyclotomic_comaximal, cyclotomic_poly, euler_phi, factorial_digits, factorize, is_prime, resultant,
    Comaximality, IntPolynomial,
};

#[test]
fn totient_sums_to_n() {
    for n in 1..=5000u64 {
        let s: u64 = (1..=n).filter(|d| n % d == 0).map(|d| euler_phi(d).unwrap()).sum();
        assert_eq!(s, n);
    }
}

#[test]
fn cyclotomic_products_and_degrees() {
    for n in 1..=300u64 {
        let mut prod = IntPolynomial::one();
        for d in (1..=n).filter(|d| n % d == 0) {
            prod = &prod * &*cyclotomic_poly(d).unwrap();
        }
        assert_eq!(prod, IntPolynomial::x_pow_minus_one(n as usize), "n = {n}");
        assert_eq!(cyclotomic_poly(n).unwrap().degree(), Some(euler_phi(n).unwrap() as usize));
    }
}

fn reduce(f: &IntPolynomial, l: i64) -> Vec<i64> {
    let mut v: Vec<i64> = f
        .coeffs()
        .iter()
        .map(|c| {
            let r = c % BigInt::from(l);
            let r: i64 = r.try_into().unwrap();
            r.rem_euclid(l)
        })
        .collect();
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv(a: i64, l: i64) -> i64 {
    let mut r = 1;
    let mut b = a.rem_euclid(l);
    let mut e = l - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % l;
        }
        b = b * b % l;
        e >>= 1;
    }
    r
}

/// Degree of `gcd(f, g)` over `F_l`.
fn gcd_degree(mut f: Vec<i64>, mut g: Vec<i64>, l: i64) -> usize {
    while !g.is_empty() {
        let lc = inv(*g.last().unwrap(), l);
        while f.len() >= g.len() {
            let c = f.last().unwrap() * lc % l;
            let shift = f.len() - g.len();
            for (j, gc) in g.iter().enumerate() {
                f[shift + j] = (f[shift + j] - c * gc).rem_euclid(l);
            }
            while f.last() == Some(&0) {
                f.pop();
            }
        }
        std::mem::swap(&mut f, &mut g);
    }
    f.len().saturating_sub(1)
}

fn primes_to(n: i64) -> Vec<i64> {
    (2..=n).filter(|&p| is_prime(p as u128)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn comaximality_matches_reduction_oracle(m in 1u64..=200, n in 1u64..=200) {
        prop_assume!(m != n);
        let fm = cyclotomic_poly(m).unwrap();
        let fn_ = cyclotomic_poly(n).unwrap();
        // a prime divides the resultant iff the reductions share a root
        let meeting: Vec<i64> = primes_to(200)
            .into_iter()
            .filter(|&l| gcd_degree(reduce(&fm, l), reduce(&fn_, l), l) > 0)
            .collect();
        match cyclotomic_comaximal(m, n).unwrap() {
            Comaximality::Comaximal => prop_assert!(meeting.is_empty(), "{m},{n} meet mod {meeting:?}"),
            Comaximality::Intersecting { prime } => prop_assert_eq!(meeting, vec![prime as i64]),
        }
    }

    #[test]
    fn comaximality_matches_resultant(m in 1u64..=30, n in 1u64..=30) {
        prop_assume!(m != n);
        let r = resultant(&cyclotomic_poly(m).unwrap(), &cyclotomic_poly(n).unwrap());
        let r = r.magnitude().clone();
        match cyclotomic_comaximal(m, n).unwrap() {
            Comaximality::Comaximal => prop_assert!(r.is_one()),
            Comaximality::Intersecting { prime } => {
                let mut x = r;
                let p = num_bigint::BigUint::from(prime);
                prop_assert!(x > num_bigint::BigUint::one());
                while &x % &p == num_bigint::BigUint::ZERO {
                    x /= &p;
                }
                prop_assert!(x.is_one());
            }
        }
    }

    #[test]
    fn factorization_reconstructs(n in 1u64..) {
        let f = factorize(n).unwrap();
        let mut prod: u128 = 1;
        let mut last = 0;
        for &(p, e) in f.pairs() {
            prop_assert!(is_prime(p));
            prop_assert!(p > last);
            last = p;
            prod *= p.pow(e);
        }
        prop_assert_eq!(prod, n as u128);
    }

    #[test]
    fn factorial_digits_reconstruct(n in any::<i64>(), k in 1usize..=20) {
        let d = factorial_digits(&BigInt::from(n), k).unwrap();
        prop_assert_eq!(d.len(), k);
        for (i, &c) in d.digits().iter().enumerate() {
            prop_assert!(c as usize <= i + 1);
        }
        let modulus: BigInt = (1..=k as u64 + 1).map(BigInt::from).product();
        let want = ((BigInt::from(n) % &modulus) + &modulus) % &modulus;
        prop_assert_eq!(d.value(), want);
    }
}
