//! Modular arithmetic on `u128` residues.
//!
//! Moduli below 2^64 use the native 128-bit product. Larger odd moduli go
//! through Montgomery multiplication with a hand-rolled 256-bit product, which
//! is what makes Pollard rho practical on cofactors up to 2^128.

/// Full 256-bit product of two `u128` values as `(hi, lo)`.
#[inline]
pub fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a as u64 as u128, a >> 64);
    let (b0, b1) = (b as u64 as u128, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 as u64 as u128) + (p10 as u64 as u128);
    let lo = (p00 as u64 as u128) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[inline]
fn add_mod(a: u128, b: u128, m: u128) -> u128 {
    if a >= m - b {
        a - (m - b)
    } else {
        a + b
    }
}

/// Shift-and-add product, valid for every modulus. Only used where no faster
/// route applies (even moduli above 2^64, Montgomery setup).
fn mul_mod_slow(a: u128, b: u128, m: u128) -> u128 {
    let mut a = a % m;
    let mut b = b % m;
    let mut acc = 0u128;
    while b > 0 {
        if b & 1 == 1 {
            acc = add_mod(acc, a, m);
        }
        a = add_mod(a, a, m);
        b >>= 1;
    }
    acc
}

/// Montgomery context for an odd modulus `n > 1`.
#[derive(Debug, Clone, Copy)]
pub struct Montgomery {
    n: u128,
    neg_inv: u128,
    r2: u128,
}

impl Montgomery {
    pub fn new(n: u128) -> Self {
        assert!(n > 1 && n & 1 == 1, "Montgomery modulus must be odd and > 1");
        // Newton iteration doubles the number of correct low bits each step.
        let mut inv = n;
        for _ in 0..7 {
            inv = inv.wrapping_mul(2u128.wrapping_sub(n.wrapping_mul(inv)));
        }
        let r = (u128::MAX % n + 1) % n;
        let r2 = mul_mod_slow(r, r, n);
        Montgomery {
            n,
            neg_inv: inv.wrapping_neg(),
            r2,
        }
    }

    #[inline]
    pub fn modulus(&self) -> u128 {
        self.n
    }

    #[inline]
    fn redc(&self, hi: u128, lo: u128) -> u128 {
        let m = lo.wrapping_mul(self.neg_inv);
        let (mh, ml) = mul_wide(m, self.n);
        let (_, c1) = lo.overflowing_add(ml);
        let (t, c2) = hi.overflowing_add(mh);
        let (t, c3) = t.overflowing_add(c1 as u128);
        if c2 || c3 || t >= self.n {
            t.wrapping_sub(self.n)
        } else {
            t
        }
    }

    #[inline]
    pub fn mul(&self, a: u128, b: u128) -> u128 {
        let (hi, lo) = mul_wide(a, b);
        self.redc(hi, lo)
    }

    #[inline]
    pub fn to_mont(&self, a: u128) -> u128 {
        self.mul(a % self.n, self.r2)
    }

    #[inline]
    pub fn from_mont(&self, a: u128) -> u128 {
        self.redc(0, a)
    }

    #[inline]
    pub fn one(&self) -> u128 {
        self.to_mont(1)
    }

    #[inline]
    pub fn add(&self, a: u128, b: u128) -> u128 {
        add_mod(a, b, self.n)
    }

    #[inline]
    pub fn sub(&self, a: u128, b: u128) -> u128 {
        if a >= b {
            a - b
        } else {
            self.n - (b - a)
        }
    }

    /// `base^exp` with `base` in Montgomery form; result in Montgomery form.
    pub fn pow(&self, base: u128, mut exp: u128) -> u128 {
        let mut result = self.one();
        let mut b = base;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, b);
            }
            b = self.mul(b, b);
            exp >>= 1;
        }
        result
    }
}

/// `a * b mod m` for any `m >= 1`.
pub fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    debug_assert!(m > 0);
    if m <= u64::MAX as u128 {
        (a % m) * (b % m) % m
    } else if m & 1 == 1 {
        let mont = Montgomery::new(m);
        mont.from_mont(mont.mul(mont.to_mont(a), mont.to_mont(b)))
    } else {
        mul_mod_slow(a, b, m)
    }
}

/// `base^exp mod m` for any `m >= 1`.
pub fn pow_mod(base: u128, mut exp: u128, m: u128) -> u128 {
    if m == 1 {
        return 0;
    }
    if m <= u64::MAX as u128 {
        let mut result = 1u128;
        let mut b = base % m;
        while exp > 0 {
            if exp & 1 == 1 {
                result = result * b % m;
            }
            b = b * b % m;
            exp >>= 1;
        }
        result
    } else if m & 1 == 1 {
        let mont = Montgomery::new(m);
        mont.from_mont(mont.pow(mont.to_mont(base), exp))
    } else {
        let mut result = 1u128;
        let mut b = base % m;
        while exp > 0 {
            if exp & 1 == 1 {
                result = mul_mod_slow(result, b, m);
            }
            b = mul_mod_slow(b, b, m);
            exp >>= 1;
        }
        result
    }
}

/// Reduce a signed integer into `[0, m)`.
pub fn reduce_signed(a: i128, m: u128) -> u128 {
    if a >= 0 {
        (a as u128) % m
    } else {
        let r = a.unsigned_abs() % m;
        if r == 0 {
            0
        } else {
            m - r
        }
    }
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: u128, m: u128) -> Option<u128> {
    if m == 1 {
        return Some(0);
    }
    // Extended Euclid on signed values; m < 2^127 keeps everything in range,
    // larger moduli fall back to the BigInt path.
    if m < (1u128 << 126) {
        let (mut old_r, mut r) = ((a % m) as i128, m as i128);
        let (mut old_s, mut s) = (1i128, 0i128);
        while r != 0 {
            let q = old_r / r;
            (old_r, r) = (r, old_r - q * r);
            (old_s, s) = (s, old_s - q * s);
        }
        if old_r != 1 {
            return None;
        }
        Some(reduce_signed(old_s, m))
    } else {
        use num_bigint::BigInt;
        use num_integer::Integer;
        let a = BigInt::from(a % m);
        let mb = BigInt::from(m);
        let e = a.extended_gcd(&mb);
        if e.gcd != BigInt::from(1) {
            return None;
        }
        let x = ((e.x % &mb) + &mb) % &mb;
        Some(u128::try_from(x).expect("residue fits"))
    }
}

const SMALL_PRIMES: [u128; 20] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
];

/// Miller–Rabin. Deterministic below 3.3 * 10^24 (first 13 prime bases); above
/// that bound the 20 bases give a strong-probable-prime verdict.
pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for &p in SMALL_PRIMES.iter() {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    if n < 71 * 71 {
        return true;
    }
    let bases: &[u128] = if n < 3_317_044_064_679_887_385_961_981 {
        &SMALL_PRIMES[..13]
    } else {
        &SMALL_PRIMES[..]
    };
    let mont = Montgomery::new(n);
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    let one = mont.one();
    let minus_one = mont.to_mont(n - 1);
    'witness: for &a in bases {
        let mut x = mont.pow(mont.to_mont(a), d);
        if x == one || x == minus_one {
            continue;
        }
        for _ in 1..s {
            x = mont.mul(x, x);
            if x == minus_one {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

pub fn gcd_u128(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm_u128(a: u128, b: u128) -> u128 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd_u128(a, b) * b
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wide_product_matches_bigint() {
        use num_bigint::BigUint;
        let cases = [
            (u128::MAX, u128::MAX),
            (u128::MAX, 1),
            (0x1234_5678_9abc_def0_1122_3344_5566_7788, 0xffee_ddcc_bbaa_9988_7766_5544_3322_1100),
            (1 << 127, 3),
        ];
        for (a, b) in cases {
            let (hi, lo) = mul_wide(a, b);
            let expect = BigUint::from(a) * BigUint::from(b);
            let got = (BigUint::from(hi) << 128u32) + BigUint::from(lo);
            assert_eq!(got, expect);
        }
    }

    #[test]
    fn montgomery_agrees_with_slow_path() {
        let n: u128 = 340_282_366_920_938_463_463_374_607_431_768_211_297; // 2^128 - 159
        let mont = Montgomery::new(n);
        let a = 123_456_789_012_345_678_901_234_567_890u128;
        let b = n - 17;
        let fast = mont.from_mont(mont.mul(mont.to_mont(a), mont.to_mont(b)));
        assert_eq!(fast, mul_mod_slow(a, b, n));
    }

    #[test]
    fn primality() {
        assert!(is_prime(2));
        assert!(is_prime(1093));
        assert!(!is_prime(2047));
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to bases 2,3,5,7
        assert!(is_prime(340_282_366_920_938_463_463_374_607_431_768_211_297));
        assert!(is_prime((1u128 << 61) - 1));
        assert!(!is_prime(((1u128 << 61) - 1) * ((1u128 << 31) - 1)));
    }

    #[test]
    fn inverse_and_power() {
        assert_eq!(inv_mod(2, 7), Some(4));
        assert_eq!(inv_mod(6, 9), None);
        assert_eq!(pow_mod(2, 364, 1093 * 1093), 1);
        assert_eq!(reduce_signed(-1, 7), 6);
    }
}
