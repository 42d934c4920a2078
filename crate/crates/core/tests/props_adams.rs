use std::collections::BTreeSet;

use num_integer::Integer;
use proptest::prelude::*;

use absarith::adams::{adams, conductor_data, stable_set, CharacterTable, VirtualCharacter};

fn tables() -> Vec<CharacterTable> {
    let mut t = vec![CharacterTable::s3()];
    for n in 2..=6 {
        t.push(CharacterTable::cyclic(n).unwrap());
    }
    t
}

#[test]
fn adams_operations_compose() {
    for t in tables() {
        let h = t.class_count();
        for i in 1..=h {
            let chi = VirtualCharacter::irreducible(i, h);
            for n in 1..=6 {
                for m in 1..=6 {
                    let nm = adams(n, &adams(m, &chi, &t).unwrap(), &t).unwrap();
                    assert_eq!(nm, adams(n * m, &chi, &t).unwrap(), "{} χ_{i} n={n} m={m}", t.name());
                }
            }
        }
    }
}

#[test]
fn coprime_adams_permutes_irreducibles() {
    let t = CharacterTable::s3();
    for p in [5u64, 7] {
        let images: BTreeSet<VirtualCharacter> =
            (1..=3).map(|i| adams(p, &VirtualCharacter::irreducible(i, 3), &t).unwrap()).collect();
        let irr: BTreeSet<VirtualCharacter> = (1..=3).map(|i| VirtualCharacter::irreducible(i, 3)).collect();
        assert_eq!(images, irr);
    }
}

#[test]
fn stable_sets_factor_through_the_conductor() {
    let t = CharacterTable::s3();
    let r0 = conductor_data(&t).unwrap().r0;
    for n in 1..=36u64 {
        assert_eq!(stable_set(n, &t).unwrap(), stable_set(n.gcd(&r0), &t).unwrap(), "n = {n}");
    }
}

#[test]
fn fixture_roundtrip() {
    let t = CharacterTable::s3();
    let back = CharacterTable::from_json(&t.to_json().unwrap()).unwrap();
    assert_eq!(back, t);
}

fn virtual_char(h: usize) -> impl Strategy<Value = VirtualCharacter> {
    prop::collection::vec(-3i64..=3, h).prop_map(VirtualCharacter)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn adams_is_a_ring_endomorphism(a in virtual_char(3), b in virtual_char(3), n in 1u64..=12) {
        let t = CharacterTable::s3();
        let prod = t.multiply(&a, &b).unwrap();
        let lhs = adams(n, &prod, &t).unwrap();
        let rhs = t.multiply(&adams(n, &a, &t).unwrap(), &adams(n, &b, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn cyclic_adams_endomorphism(k in 2u64..=6, n in 1u64..=12, i in 0usize..6, j in 0usize..6) {
        let t = CharacterTable::cyclic(k).unwrap();
        let h = t.class_count();
        let a = VirtualCharacter::irreducible(i % h + 1, h);
        let b = VirtualCharacter::irreducible(j % h + 1, h);
        let lhs = adams(n, &t.multiply(&a, &b).unwrap(), &t).unwrap();
        let rhs = t.multiply(&adams(n, &a, &t).unwrap(), &adams(n, &b, &t).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
