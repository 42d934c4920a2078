//! Finite nimbers: the quadratic closure of `F_2` on the natural numbers.
//!
//! Addition is xor. Multiplication is Conway's mex product; below `2^64` it is
//! computed by splitting at the Fermat 2-powers `H = 2^(2^k)`, where
//! `x H` is the ordinary product for `x < H` and `H^2 = H + H/2`.

mod oracle;
pub mod poly;

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::arith::{factorize, inv_mod};
use crate::error::{Error, Result};
use crate::habiro::RootOfUnity;

pub use oracle::nim_mul_oracle;
pub use poly::{
    dictionary, divisor_mul, orbit_to_polynomial, polynomial_to_root, DictionaryEntry, F2Divisor,
    F2Polynomial,
};

/// Nimber addition.
pub fn nim_add(a: u64, b: u64) -> u64 {
    a ^ b
}

/// Smallest `k` with `a < 2^(2^k)`.
pub fn enclosing_field_level(a: u64) -> u32 {
    let mut k = 0;
    while k < 6 && a >> (1u32 << k) != 0 {
        k += 1;
    }
    k
}

fn byte_table() -> &'static [u8] {
    static TABLE: OnceLock<Vec<u8>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0u8; 1 << 16];
        for a in 0..256u64 {
            for b in 0..256u64 {
                t[((a << 8) | b) as usize] = mul_split(a, b, 3, false) as u8;
            }
        }
        t
    })
}

fn mul_split(a: u64, b: u64, level: u32, use_table: bool) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    if level == 0 {
        return a & b;
    }
    if use_table && level <= 3 {
        return byte_table()[((a << 8) | b) as usize] as u64;
    }
    let half = 1u32 << (level - 1);
    let mask = (1u64 << half) - 1;
    let (a1, a0) = (a >> half, a & mask);
    let (b1, b0) = (b >> half, b & mask);
    let c = mul_split(a1, b1, level - 1, use_table);
    let d = mul_split(a0, b0, level - 1, use_table);
    let e = mul_split(a0 ^ a1, b0 ^ b1, level - 1, use_table);
    let low = d ^ mul_split(c, 1u64 << (half - 1), level - 1, use_table);
    ((e ^ d) << half) | low
}

/// Nimber product on the full 64-bit range.
pub fn nim_mul(a: u64, b: u64) -> u64 {
    let level = enclosing_field_level(a.max(b));
    mul_split(a, b, level, true)
}

pub fn nim_square(a: u64) -> u64 {
    nim_mul(a, a)
}

pub fn nim_pow(a: u64, mut e: u64) -> u64 {
    let mut acc = 1u64;
    let mut base = a;
    while e > 0 {
        if e & 1 == 1 {
            acc = nim_mul(acc, base);
        }
        e >>= 1;
        if e > 0 {
            base = nim_mul(base, base);
        }
    }
    acc
}

/// `2^(2^k) - 1`, the order of the multiplicative group at level `k`.
pub fn group_order(level: u32) -> u64 {
    if level >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << level)) - 1
    }
}

/// Inverse in the enclosing field, `a^(2^(2^k) - 2)`.
pub fn nim_inverse(a: u64) -> Result<u64> {
    if a == 0 {
        return Err(Error::domain("0 has no nimber inverse"));
    }
    Ok(nim_pow(a, group_order(enclosing_field_level(a)) - 1))
}

/// `{a, a^2, a^4, ...}` in order of appearance.
pub fn frobenius_orbit(a: u64) -> Vec<u64> {
    let mut orbit = vec![a];
    let mut x = nim_square(a);
    while x != a {
        orbit.push(x);
        x = nim_square(x);
    }
    orbit
}

/// Published values beyond the default search range.
const LEVEL5_GENERATOR: u64 = 1_361_923;
const LEVEL6_GENERATOR: u64 = 1_127_700_028_470;

fn order_primes(level: u32) -> Vec<u64> {
    factorize(group_order(level))
        .expect("nonzero")
        .primes()
        .map(|p| p as u64)
        .collect()
}

/// Does `g` generate the multiplicative group at `level`?
pub fn is_primitive(g: u64, level: u32) -> bool {
    if g == 0 || enclosing_field_level(g) > level {
        return false;
    }
    let n = group_order(level);
    if nim_pow(g, n) != 1 {
        return false;
    }
    order_primes(level).into_iter().all(|q| nim_pow(g, n / q) != 1)
}

fn fermat(level: u32) -> u64 {
    (1u64 << (1u32 << level)) + 1
}

/// Exhaustive search for the smallest `g` with `g^(2^(2^(k-1)) + 1) = g_{k-1}`
/// that generates level `k`.
pub fn search_tower_generator(k: u32) -> Result<u64> {
    match k {
        0 => return Err(Error::domain("tower levels start at 1")),
        1 => return Ok(2),
        7.. => return Err(Error::Size(format!("level {k} exceeds 64-bit nimbers"))),
        _ => {}
    }
    let prev = tower_generator(k - 1)?;
    let f = fermat(k - 1);
    let lo = 1u64 << (1u32 << (k - 1));
    let hi = group_order(k);
    (lo..=hi)
        .find(|&g| nim_pow(g, f) == prev && is_primitive(g, k))
        .ok_or_else(|| Error::Budget(format!("no generator found at level {k}")))
}

/// Generator `g_k` of level `k`. Levels up to 4 are found by search;
/// levels 5 and 6 use the published values after checking them.
pub fn tower_generator(k: u32) -> Result<u64> {
    static CACHE: OnceLock<Vec<u64>> = OnceLock::new();
    if k == 0 || k > 6 {
        return Err(Error::domain(format!("tower level must be in 1..=6, got {k}")));
    }
    let table = CACHE.get_or_init(|| {
        let mut gens = vec![0u64, 2];
        for level in 2..=4 {
            let prev = gens[level as usize - 1];
            let f = fermat(level - 1);
            let lo = 1u64 << (1u32 << (level - 1));
            let g = (lo..=group_order(level))
                .find(|&g| nim_pow(g, f) == prev && is_primitive(g, level))
                .expect("generator exists");
            gens.push(g);
        }
        for (level, g) in [(5u32, LEVEL5_GENERATOR), (6, LEVEL6_GENERATOR)] {
            let prev = gens[level as usize - 1];
            let ok = nim_pow(g, fermat(level - 1)) == prev && is_primitive(g, level);
            gens.push(if ok { g } else { 0 });
        }
        gens
    });
    match table[k as usize] {
        0 => Err(Error::Budget(format!("published generator at level {k} failed verification"))),
        g => Ok(g),
    }
}

/// Largest prime-power factor handled by baby-step giant-step.
pub const DLOG_PRIME_BUDGET: u64 = 1 << 26;

fn bsgs(g: u64, h: u64, order: u64) -> Option<u64> {
    let m = (order as f64).sqrt().ceil() as u64 + 1;
    let mut table = HashMap::with_capacity(m as usize);
    let mut x = 1u64;
    for j in 0..m {
        table.entry(x).or_insert(j);
        x = nim_mul(x, g);
    }
    let step = nim_inverse(nim_pow(g, m)).ok()?;
    let mut y = h;
    for i in 0..=m {
        if let Some(&j) = table.get(&y) {
            let e = (i as u128 * m as u128 + j as u128) % order as u128;
            return Some(e as u64);
        }
        y = nim_mul(y, step);
    }
    None
}

/// `e` with `g^e = a`, where `g` generates a group of order `n`.
fn discrete_log(g: u64, a: u64, n: u64) -> Result<u64> {
    let f = factorize(n)?;
    let mut residue: u128 = 0;
    let mut modulus: u128 = 1;
    for &(q, e) in f.pairs() {
        let q = q as u64;
        if q > DLOG_PRIME_BUDGET {
            return Err(Error::Budget(format!("prime factor {q} exceeds the discrete-log budget")));
        }
        let qe = q.pow(e);
        let cof = n / qe;
        let gq = nim_pow(g, cof);
        let aq = nim_pow(a, cof);
        // x = x_0 + x_1 q + ... digit by digit
        let gamma = nim_pow(gq, qe / q);
        let mut x: u64 = 0;
        let mut qk = 1u64;
        for _ in 0..e {
            let ginv = nim_inverse(nim_pow(gq, x)).expect("nonzero");
            let hk = nim_pow(nim_mul(aq, ginv), qe / (qk * q));
            let d = bsgs(gamma, hk, q)
                .ok_or_else(|| Error::domain(format!("{a} is not a power of {g}")))?;
            x += d * qk;
            qk *= q;
        }
        // CRT
        let m2 = qe as u128;
        let inv = inv_mod(modulus % m2, m2).expect("coprime moduli");
        let diff = (x as u128 + m2 - residue % m2) % m2;
        residue += modulus * (diff * inv % m2);
        modulus *= m2;
    }
    Ok(residue as u64)
}

/// `a = g_k^e` at the enclosing level `k`, returned as `e / (2^(2^k) - 1)`.
pub fn nimber_to_root(a: u64) -> Result<RootOfUnity> {
    if a == 0 {
        return Err(Error::domain("0 is not a root of unity"));
    }
    let k = enclosing_field_level(a);
    if k == 0 {
        return Ok(RootOfUnity::ONE);
    }
    let g = tower_generator(k)?;
    let n = group_order(k);
    let e = discrete_log(g, a, n)?;
    RootOfUnity::new(e as i128, n)
}

/// The nimber `g_k^e` for a root `e/N` whose order divides `2^(2^k) - 1`.
pub fn root_to_nimber(r: &RootOfUnity) -> Result<u64> {
    let h = r.order();
    if h == 1 {
        return Ok(1);
    }
    let k = (1..=6u32)
        .find(|&k| group_order(k).is_multiple_of(h))
        .ok_or_else(|| Error::domain(format!("order {h} is not a nimber multiplicative order")))?;
    let n = group_order(k);
    let e = (r.numerator() as u128 * (n / h) as u128) as u64;
    Ok(nim_pow(tower_generator(k)?, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_products() {
        assert_eq!(nim_add(5, 3), 6);
        assert_eq!(nim_mul(2, 2), 3);
        assert_eq!(nim_mul(2, 3), 1);
        assert_eq!(nim_mul(4, 4), 6);
        assert_eq!(nim_mul(8, 8), 13);
        assert_eq!(nim_mul(256, 256), 384);
        assert_eq!(nim_mul(12345, 1), 12345);
        for k in [2u64, 4, 16, 256, 65536, 1 << 32] {
            assert_eq!(nim_square(k), k ^ (k / 2));
        }
    }

    #[test]
    fn powers_and_inverses() {
        assert_eq!(nim_pow(4, 5), 2);
        assert_eq!(nim_pow(77, 0), 1);
        assert_eq!(nim_inverse(2).unwrap(), 3);
        assert!(nim_inverse(0).is_err());
        let a = 0xdead_beef_1234_5678;
        assert_eq!(nim_mul(a, nim_inverse(a).unwrap()), 1);
    }

    #[test]
    fn levels() {
        assert_eq!(enclosing_field_level(3), 1);
        assert_eq!(enclosing_field_level(4), 2);
        assert_eq!(enclosing_field_level(65535), 4);
        assert_eq!(enclosing_field_level(1), 0);
        assert_eq!(enclosing_field_level(u64::MAX), 6);
    }

    #[test]
    fn generators() {
        assert_eq!(tower_generator(1).unwrap(), 2);
        assert_eq!(tower_generator(2).unwrap(), 4);
        assert_eq!(tower_generator(3).unwrap(), 32);
        assert_eq!(tower_generator(4).unwrap(), 1051);
        assert_eq!(tower_generator(5).unwrap(), LEVEL5_GENERATOR);
        assert_eq!(tower_generator(6).unwrap(), LEVEL6_GENERATOR);
    }

    #[test]
    fn roots() {
        let r = |a| nimber_to_root(a).unwrap().to_string();
        assert_eq!(r(1), "0/1");
        assert_eq!(r(2), "1/3");
        assert_eq!(r(4), "1/15");
        assert_eq!(r(8), "2/5");
        assert_eq!(nim_pow(4, 6), 8);
        for a in [3u64, 200, 40000, 123_456_789, 0xfeed_face_cafe_beef] {
            let root = nimber_to_root(a).unwrap();
            assert_eq!(root_to_nimber(&root).unwrap(), a);
        }
    }

    #[test]
    fn orbits() {
        assert_eq!(frobenius_orbit(0), vec![0]);
        assert_eq!(frobenius_orbit(2), vec![2, 3]);
        assert_eq!(frobenius_orbit(4), vec![4, 6, 5, 7]);
    }
}
