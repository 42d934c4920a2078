use proptest::prelude::*;

use absarith::arith::IntPolynomial;
use absarith::habiro::RootOfUnity;
use absarith::hring::{
    evaluate_at_root, kontsevich_element, q_factorial, q_factorial_at, to_factorial_basis, zagier_rhs_radial,
    HabiroElement,
};

#[test]
fn q_factorials_vanish_past_the_order() {
    for h in 1..=24u64 {
        for g in (0..h).filter(|g| num_integer::Integer::gcd(g, &h) == 1) {
            let z = RootOfUnity::new(g as i128, h).unwrap();
            for n in 0..=30usize {
                let v = q_factorial_at(n, &z);
                assert_eq!(v.is_zero(), n as u64 >= h, "[{n}!] at {z}");
            }
        }
    }
}

#[test]
fn kontsevich_leaks_through_radially() {
    let k = kontsevich_element(6).unwrap();
    for z in [RootOfUnity::ONE, RootOfUnity::new(1, 2).unwrap()] {
        let lhs = evaluate_at_root(&k, &z).to_complex();
        let errs: Vec<f64> = [0.9, 0.99, 0.999]
            .iter()
            .map(|&r| (zagier_rhs_radial(r, &z, None).unwrap().value() - lhs).norm())
            .collect();
        assert!(errs.windows(2).all(|w| w[1] < w[0]), "{z}: {errs:?}");
    }
}

fn poly_upto(level: usize) -> impl Strategy<Value = IntPolynomial> {
    let top = level * (level + 1) / 2;
    prop::collection::vec(-20i64..=20, 0..top.max(1)).prop_map(|c| IntPolynomial::from_i64(&c))
}

fn element(level: usize) -> impl Strategy<Value = HabiroElement> {
    let parts: Vec<_> = (0..level)
        .map(|n| prop::collection::vec(-5i64..=5, n + 1).prop_map(|c| IntPolynomial::from_i64(&c)))
        .collect();
    parts.prop_map(|c| HabiroElement::new(c).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn factorial_basis_roundtrip((level, f) in (1usize..=8).prop_flat_map(|n| (Just(n), poly_upto(n)))) {
        let e = to_factorial_basis(&f, level).unwrap();
        prop_assert_eq!(e.expand(), f.clone());
        // re-expansion by hand, independent of expand()
        let mut acc = IntPolynomial::zero();
        for (n, a) in e.coeffs().iter().enumerate() {
            prop_assert!(a.degree().is_none_or(|d| d <= n));
            acc = &acc + &(a * &q_factorial(n));
        }
        prop_assert_eq!(acc, f);
    }

    #[test]
    fn evaluation_stable_under_truncation(e in element(12), h in 1u64..=12, g in 0u64..12) {
        prop_assume!(num_integer::Integer::gcd(&(g % h), &h) == 1);
        let z = RootOfUnity::new((g % h) as i128, h).unwrap();
        let full = evaluate_at_root(&e, &z);
        for level in h as usize..=12 {
            prop_assert_eq!(evaluate_at_root(&e.truncate(level), &z), full.clone());
        }
    }

    #[test]
    fn evaluation_matches_numeric_substitution(e in element(6), h in 1u64..=6, g in 0u64..6) {
        prop_assume!(num_integer::Integer::gcd(&(g % h), &h) == 1);
        let z = RootOfUnity::new((g % h) as i128, h).unwrap();
        let x = num_complex::Complex64::from_polar(1.0, std::f64::consts::TAU * z.as_f64());
        let f = e.expand();
        let mut v = num_complex::Complex64::new(0.0, 0.0);
        for c in f.coeffs().iter().rev() {
            v = v * x + num_traits::ToPrimitive::to_f64(c).unwrap();
        }
        let exact = evaluate_at_root(&e, &z).to_complex();
        prop_assert!((exact - v).norm() < 1e-6 * (1.0 + v.norm()), "{} vs {}", exact, v);
    }
}
