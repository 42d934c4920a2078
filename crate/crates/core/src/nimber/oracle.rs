//! Reference nimber product straight from the mex definition
//! `a b = mex { a' b + a b' + a' b' : a' < a, b' < b }`.
//!
//! The mex table covers `0..=256`. Pairs below `2^16` are reduced to it by
//! writing `a = a_1 256 + a_0` and expanding with distributivity only.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const SIDE: usize = 257;

fn mex_table() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut t = vec![0u32; SIDE * SIDE];
        let mut seen: Vec<u64> = Vec::new();
        for a in 0..SIDE {
            for b in a..SIDE {
                // the mex is at most the number of candidates, a * b
                let words = (a * b) / 64 + 1;
                seen.clear();
                seen.resize(words, 0);
                let cap = (words * 64) as u32;
                for a2 in 0..a {
                    let ta = t[a2 * SIDE + b];
                    for b2 in 0..b {
                        let v = ta ^ t[a * SIDE + b2] ^ t[a2 * SIDE + b2];
                        if v < cap {
                            seen[(v / 64) as usize] |= 1 << (v % 64);
                        }
                    }
                }
                let mex = seen
                    .iter()
                    .enumerate()
                    .find(|(_, w)| **w != u64::MAX)
                    .map(|(i, w)| i as u32 * 64 + w.trailing_ones())
                    .unwrap_or(cap);
                t[a * SIDE + b] = mex;
                t[b * SIDE + a] = mex;
            }
        }
        t
    })
}

fn small(a: usize, b: usize) -> u32 {
    mex_table()[a * SIDE + b]
}

/// `x * 256` for `x < 256`, read from the mex table.
fn times_256(x: u32) -> u32 {
    small(x as usize, 256)
}

/// `x * y` where `x < 256` and `y < 2^16`, by splitting `y`.
fn times_wide(x: u32, y: u32) -> u32 {
    let (y1, y0) = ((y >> 8) as usize, (y & 0xff) as usize);
    times_256(small(x as usize, y1)) ^ small(x as usize, y0)
}

/// Nimber product for `a, b < 2^16` derived from the mex recursion.
pub fn nim_mul_oracle(a: u64, b: u64) -> Result<u64> {
    if a >= 1 << 16 || b >= 1 << 16 {
        return Err(Error::Size(format!("oracle covers nimbers below 2^16, got ({a}, {b})")));
    }
    let (a1, a0) = ((a >> 8) as usize, (a & 0xff) as usize);
    let (b1, b0) = ((b >> 8) as usize, (b & 0xff) as usize);
    let hh = small(256, 256);
    // a b = a1 b1 (256 * 256) + (a1 b0 + a0 b1) 256 + a0 b0
    let top = times_wide(small(a1, b1), hh);
    let mid = times_256(small(a1, b0) ^ small(a0, b1));
    Ok((top ^ mid ^ small(a0, b0)) as u64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mex_values() {
        assert_eq!(nim_mul_oracle(2, 2).unwrap(), 3);
        assert_eq!(nim_mul_oracle(2, 3).unwrap(), 1);
        assert_eq!(nim_mul_oracle(4, 4).unwrap(), 6);
        assert_eq!(nim_mul_oracle(8, 8).unwrap(), 13);
        assert_eq!(nim_mul_oracle(256, 256).unwrap(), 384);
        assert!(nim_mul_oracle(1 << 16, 1).is_err());
    }
}
