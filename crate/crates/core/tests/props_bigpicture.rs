use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use proptest::prelude::*;

use absarith::bigpicture::{
    hecke, hyperdistance, log_distance, p_tree, reversed_form, Lattice, LatticeSum,
};

fn lattice() -> impl Strategy<Value = Lattice> {
    let small = prop::sample::select(vec![1i64, 2, 3, 4, 5, 6, 8, 9, 12, 16, 27]);
    (small.clone(), small.clone(), small, 0i64..1000).prop_map(|(mn, md, h, g)| {
        let mut g = g % h;
        while g.gcd(&h) != 1 {
            g = (g + 1) % h;
        }
        Lattice::from_ints(mn, md, g, h).unwrap()
    })
}

#[test]
fn two_tree_is_a_trivalent_tree() {
    let g = p_tree(&Lattice::one(), 2, 4).unwrap();
    assert_eq!(g.edges.len() + 1, g.vertices.len(), "a connected acyclic graph");
    assert_eq!(g.vertices.len(), 1 + 3 + 6 + 12 + 24);
    let mut valence: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in &g.edges {
        *valence.entry(a).or_default() += 1;
        *valence.entry(b).or_default() += 1;
        let d = hyperdistance(&g.vertices[a], &g.vertices[b]);
        assert_eq!(d, BigInt::from(2));
    }
    // every vertex short of the frontier has p + 1 neighbours
    let interior = 1 + 3 + 6 + 12;
    for i in 0..interior {
        assert_eq!(valence[&i], 3, "vertex {}", g.vertices[i]);
    }
    for v in &g.vertices {
        let d = hyperdistance(&Lattice::one(), v);
        assert!(d.is_one() || (d.clone() & (&d - 1u32)) == BigInt::from(0), "{v} at hyperdistance {d}");
    }
}

#[test]
fn roots_of_unity_sit_at_h_squared() {
    for h in 1..=12i64 {
        for g in (0..h).filter(|g| g.gcd(&h) == 1) {
            let base = Lattice::from_ints(5, 3, 0, 1).unwrap();
            let l = Lattice::from_ints(5, 3, g, h).unwrap();
            assert_eq!(hyperdistance(&base, &l), BigInt::from(h * h));
        }
    }
}

#[test]
fn hecke_relations_on_vertices() {
    for v in [Lattice::one(), "2,1/3".parse().unwrap(), "1/6".parse().unwrap()] {
        let s = LatticeSum::single(v.clone());
        for p in [2u64, 3] {
            for a in 1..=3u32 {
                let pa = p.pow(a);
                let lhs = hecke(p, &hecke(pa, &s).unwrap()).unwrap();
                let mut rhs = hecke(pa * p, &s).unwrap();
                let c = if a == 1 { p + 1 } else { p };
                rhs.add_sum(&hecke(pa / p, &s).unwrap(), c as i64);
                assert_eq!(lhs, rhs, "p = {p}, a = {a} at {v}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn hyperdistance_symmetric(l in lattice(), k in lattice()) {
        prop_assert_eq!(hyperdistance(&l, &k), hyperdistance(&k, &l));
        prop_assert_eq!(hyperdistance(&l, &l), BigInt::from(1));
    }

    #[test]
    fn log_metric_triangle(x in lattice(), y in lattice(), z in lattice()) {
        prop_assert!(log_distance(&x, &z) <= log_distance(&x, &y) + log_distance(&y, &z) + 1e-9);
    }

    #[test]
    fn reversal_is_an_involution(l in lattice()) {
        prop_assert_eq!(reversed_form(&reversed_form(&l)), l);
    }

    #[test]
    fn lattice_json_and_text_roundtrip(l in lattice()) {
        let s = serde_json::to_string(&l).unwrap();
        prop_assert_eq!(serde_json::from_str::<Lattice>(&s).unwrap(), l.clone());
        prop_assert_eq!(l.to_string().parse::<Lattice>().unwrap(), l);
    }
}
