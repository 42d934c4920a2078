use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use absarith::habiro::P1Point;
use absarith::smirnov::{
    degree_of, divisor_of, evaluate, fiber, fiber_defect, fiber_ramification_degree, primitive_part,
    ramification_index, zsigmondy_exception, FormalDegree, FormalDivisor, RationalMap, SpecZPoint,
};
use absarith::Error;

fn map() -> impl Strategy<Value = RationalMap> {
    (-1_000_000i64..=1_000_000, 1i64..=1_000_000)
        .prop_filter("valid map", |&(a, b)| a != 0 && a.gcd(&b) == 1 && !(a.abs() == 1 && b == 1))
        .prop_map(|(a, b)| RationalMap::new(a, b).unwrap())
}

fn rad_quotient(mut n: u64) -> u64 {
    let orig = n;
    let mut rad = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            rad *= p;
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        rad *= n;
    }
    orig / rad
}

fn close(got: f64, want: f64) -> bool {
    if want == 0.0 {
        got.abs() <= 1e-12
    } else {
        ((got - want) / want).abs() <= 1e-12
    }
}

const SMALL: [(i64, i64); 4] = [(2, 1), (3, 1), (3, 2), (5, 2)];

#[test]
fn fibers_partition_small_primes() {
    let primes: Vec<u128> = (2..=10_000u128).filter(|&p| absarith::arith::is_prime(p)).collect();
    for (a, b) in SMALL {
        let q = RationalMap::new(a, b).unwrap();
        let mut checked = 0;
        for &p in &primes {
            let pt = evaluate(&q, SpecZPoint::Prime(p)).unwrap();
            match fiber(&q, pt) {
                Ok(f) => {
                    assert!(f.primes.contains(&p), "{p} missing from fiber of {q} at {pt}");
                    checked += 1;
                }
                // [n] for large n needs Φ_n(a, b) beyond 128 bits
                Err(Error::Size(_)) => {}
                Err(e) => panic!("{e}"),
            }
        }
        assert!(checked >= 50, "only {checked} primes checked for {q}");
        let mut seen = BTreeSet::new();
        for n in 1..=40 {
            for p in fiber(&q, P1Point::Finite(n)).unwrap().primes {
                assert!(seen.insert(p), "{p} lies in two fibers of {q}");
            }
        }
    }
}

#[test]
fn fibers_nonempty_outside_exceptions() {
    for (a, b) in SMALL {
        let q = RationalMap::new(a, b).unwrap();
        for n in 2..=40 {
            let exc = zsigmondy_exception(a as u64, b as u64, n).unwrap();
            assert_eq!(fiber(&q, P1Point::Finite(n)).unwrap().is_empty(), exc, "{q} at [{n}]");
        }
    }
}

#[test]
fn ramification_sums_to_primitive_part() {
    for (a, b) in SMALL {
        let q = RationalMap::new(a, b).unwrap();
        let (ab, bb) = (BigInt::from(a), BigInt::from(b));
        for n in 1..=30u32 {
            let f = fiber(&q, P1Point::Finite(n as u64)).unwrap();
            let mut sum = FormalDegree::zero();
            for &p in &f.primes {
                sum.add_log(p, ramification_index(&q, p).unwrap() as i64);
            }
            let prim = primitive_part(&q, n as u64).unwrap();
            assert_eq!(sum, FormalDegree::log_of(prim).unwrap(), "{q} at [{n}]");
            assert_eq!(fiber_ramification_degree(&q, n as u64).unwrap(), sum);
            // primitive: divides a^n - b^n and is coprime to every earlier a^m - b^m
            let prim = BigInt::from(prim);
            let top = (ab.pow(n) - bb.pow(n)).abs();
            assert!((&top % &prim).is_zero());
            for m in 1..n {
                let lower = (ab.pow(m) - bb.pow(m)).abs();
                assert!(prim.gcd(&lower).is_one(), "{q}: part at {n} shares a factor with level {m}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn divisor_has_degree_zero(q in map()) {
        prop_assert!(degree_of(&divisor_of(&q).unwrap()).is_zero());
    }

    #[test]
    fn divisor_json_roundtrip(q in map()) {
        let d = divisor_of(&q).unwrap();
        let back: FormalDivisor = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
        prop_assert_eq!(back, d);
    }

    #[test]
    fn defects_match_closed_forms(q in map()) {
        let a = q.a().unsigned_abs();
        prop_assume!(a >= 2);
        let la = (a as f64).ln();
        let w0 = (rad_quotient(a) as f64).ln() / la;
        let w1 = (rad_quotient((q.a() - q.b()).unsigned_abs()) as f64).ln() / la;
        let g0 = fiber_defect(&q, P1Point::Zero).unwrap();
        let g1 = fiber_defect(&q, P1Point::Finite(1)).unwrap();
        prop_assert!(close(g0, w0), "{} vs {}", g0, w0);
        prop_assert!(close(g1, w1), "{} vs {}", g1, w1);
    }

    #[test]
    fn map_string_roundtrip(q in map()) {
        let s = q.to_string();
        prop_assert_eq!(s.parse::<RationalMap>().unwrap(), q);
    }
}
