//! The completed Burnside ring of the infinite cyclic group `C`, equivalently
//! the necklace algebra `Nr(Z)`.
//!
//! `b = (b_1, ..., b_N)` stands for the virtual `C`-set `Σ b_n [C_n]`, where
//! `C_n` is the orbit with `n` points.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ghost, Ring, WittVector};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BurnsideVector {
    #[serde(with = "crate::serde_str::vec")]
    pub b: Vec<BigInt>,
}

impl BurnsideVector {
    pub fn new(b: Vec<BigInt>) -> Self {
        BurnsideVector { b }
    }

    pub fn from_i64(b: &[i64]) -> Self {
        BurnsideVector {
            b: b.iter().map(|&x| BigInt::from(x)).collect(),
        }
    }

    pub fn zero(n: usize) -> Self {
        BurnsideVector {
            b: vec![BigInt::zero(); n],
        }
    }

    /// The unit `[C_1]`, the one-point set.
    pub fn one(n: usize) -> Self {
        BurnsideVector::orbit(1, n)
    }

    /// A single orbit `[C_m]` in precision `n` (zero if `m > n`).
    pub fn orbit(m: usize, n: usize) -> Self {
        let mut v = BurnsideVector::zero(n);
        if (1..=n).contains(&m) {
            v.b[m - 1] = BigInt::one();
        }
        v
    }

    pub fn precision(&self) -> usize {
        self.b.len()
    }

    /// `b_m`, zero outside the stored range.
    pub fn get(&self, m: usize) -> BigInt {
        if m == 0 {
            return BigInt::zero();
        }
        self.b.get(m - 1).cloned().unwrap_or_default()
    }
}

/// `(b·c)_n = Σ_{lcm(i,j)=n} gcd(i,j) b_i c_j`.
pub fn necklace_mul(b: &BurnsideVector, c: &BurnsideVector) -> Result<BurnsideVector> {
    if b.precision() != c.precision() {
        return Err(Error::Mismatch(format!(
            "precisions {} and {}",
            b.precision(),
            c.precision()
        )));
    }
    let n = b.precision();
    let mut out = BurnsideVector::zero(n);
    for i in 1..=n {
        if b.b[i - 1].is_zero() {
            continue;
        }
        for j in 1..=n {
            if c.b[j - 1].is_zero() {
                continue;
            }
            let l = i.lcm(&j);
            if l <= n {
                out.b[l - 1] += &b.b[i - 1] * &c.b[j - 1] * BigInt::from(i.gcd(&j));
            }
        }
    }
    Ok(out)
}

/// The mark `b̂_n = Σ_{i|n} i b_i`: fixed points of `C^n` on `X(b)`.
pub fn burnside_ghost(b: &BurnsideVector, n: usize) -> Result<BigInt> {
    if n == 0 || n > b.precision() {
        return Err(Error::Precision(format!(
            "mark {n} outside precision {}",
            b.precision()
        )));
    }
    let mut acc = BigInt::zero();
    for i in (1..=n).filter(|i| n.is_multiple_of(*i)) {
        acc += &b.b[i - 1] * BigInt::from(i);
    }
    Ok(acc)
}

/// All marks `b̂_1, ..., b̂_N`.
pub fn burnside_marks(b: &BurnsideVector) -> Vec<BigInt> {
    (1..=b.precision())
        .map(|n| burnside_ghost(b, n).expect("in range"))
        .collect()
}

/// `s = series * (1 - t^n)^{-e}` truncated to `s.len()` coefficients
/// (index 0 is the constant term).
fn mul_orbit_power(s: &mut [BigInt], n: usize, e: &BigInt) {
    if e.is_zero() {
        return;
    }
    let len = s.len();
    // (1 - t^n)^{-e} = Σ_j e(e+1)...(e+j-1)/j! t^{nj}
    let mut factor = vec![BigInt::one()];
    let mut j = 1usize;
    while n * j < len {
        let prev = &factor[j - 1];
        let next = prev * (e + BigInt::from(j - 1)) / BigInt::from(j);
        factor.push(next);
        j += 1;
    }
    let old = s.to_vec();
    for (k, slot) in s.iter_mut().enumerate() {
        let mut acc = BigInt::zero();
        for (j, f) in factor.iter().enumerate() {
            if n * j > k {
                break;
            }
            if !f.is_zero() {
                acc += f * &old[k - n * j];
            }
        }
        *slot = acc;
    }
}

/// `∏_n (1 - t^n)^{-b_n}` as an integral Witt vector.
pub fn burnside_to_witt(b: &BurnsideVector) -> WittVector {
    let len = b.precision();
    let mut s = vec![BigInt::zero(); len + 1];
    s[0] = BigInt::one();
    for n in 1..=len {
        mul_orbit_power(&mut s, n, &b.b[n - 1]);
    }
    WittVector {
        ring: Ring::Z,
        coeffs: s.into_iter().skip(1).map(BigRational::from_integer).collect(),
    }
}

/// Inverse of [`burnside_to_witt`]: `b̂_n = γ_n(u)`, then Möbius-style peeling
/// `b_n = (b̂_n - Σ_{d|n, d<n} d b_d) / n`. A non-integral step is an error.
pub fn witt_to_burnside(u: &WittVector) -> Result<BurnsideVector> {
    if let Ring::Fp(p) = u.ring {
        return Err(Error::domain(format!("no Burnside model over F_{p}")));
    }
    let g = ghost(u);
    let n = u.precision();
    let mut b: Vec<BigInt> = Vec::with_capacity(n);
    for k in 1..=n {
        let mark = &g.comps[k - 1];
        if !mark.is_integer() {
            return Err(Error::Integrality {
                index: k,
                detail: format!("ghost component {mark} is not an integer"),
            });
        }
        let mut acc = mark.to_integer();
        for d in (1..k).filter(|d| k % d == 0) {
            acc -= &b[d - 1] * BigInt::from(d);
        }
        let (q, r) = acc.div_rem(&BigInt::from(k));
        if !r.is_zero() {
            return Err(Error::Integrality {
                index: k,
                detail: format!("{acc} is not divisible by {k}"),
            });
        }
        b.push(q);
    }
    Ok(BurnsideVector { b })
}

/// True iff `u = [p] v` for an integral Witt vector `v`, i.e. every Burnside
/// coordinate of `u` is divisible by `p`. This is divisibility in the ring
/// `w(Z)`, which is weaker than divisibility of the series coefficients.
pub fn is_multiple_of(p: u64, u: &WittVector) -> Result<bool> {
    let pb = BigInt::from(p);
    Ok(witt_to_burnside(u)?.b.iter().all(|x| (x % &pb).is_zero()))
}

/// Dress–Siebeneicher coordinates of `∏ 1/(1 - q_n t^n)`.
pub fn tau(q: &[BigInt]) -> Result<BurnsideVector> {
    let len = q.len();
    let mut s = vec![BigInt::zero(); len + 1];
    s[0] = BigInt::one();
    for n in 1..=len {
        let qn = &q[n - 1];
        if qn.is_zero() {
            continue;
        }
        // multiply by Σ_j q^j t^{nj}: s_k += q s_{k-n}, ascending k
        for k in n..=len {
            let add = qn * &s[k - n];
            s[k] += add;
        }
    }
    let u = WittVector {
        ring: Ring::Z,
        coeffs: s.into_iter().skip(1).map(BigRational::from_integer).collect(),
    };
    witt_to_burnside(&u)
}

/// `res_n(C_m) = gcd(n, m) C_{lcm(n,m)/n}`. The result has precision
/// `floor(N / n)`, the largest range fully determined by the input.
pub fn burnside_res(n: usize, b: &BurnsideVector) -> Result<BurnsideVector> {
    if n == 0 {
        return Err(Error::domain("restriction index must be positive"));
    }
    let out_len = b.precision() / n;
    let mut out = BurnsideVector::zero(out_len);
    for m in 1..=b.precision() {
        if b.b[m - 1].is_zero() {
            continue;
        }
        let g = n.gcd(&m);
        let k = m / g;
        if k <= out_len {
            out.b[k - 1] += &b.b[m - 1] * BigInt::from(g);
        }
    }
    Ok(out)
}

/// `ind_n(C_m) = C_{nm}`, kept at the input precision.
pub fn burnside_ind(n: usize, b: &BurnsideVector) -> Result<BurnsideVector> {
    if n == 0 {
        return Err(Error::domain("induction index must be positive"));
    }
    let len = b.precision();
    let mut out = BurnsideVector::zero(len);
    for m in 1..=len / n {
        out.b[n * m - 1] = b.b[m - 1].clone();
    }
    Ok(out)
}

/// `f_n(b)_k = Σ_{lcm(n,i) = nk} gcd(n,i) b_i`; the same map as [`burnside_res`].
pub fn necklace_frobenius(n: usize, b: &BurnsideVector) -> Result<BurnsideVector> {
    burnside_res(n, b)
}

/// `v_n(b)`: `n - 1` zeros between entries, precision `n N`.
pub fn necklace_verschiebung(n: usize, b: &BurnsideVector) -> Result<BurnsideVector> {
    if n == 0 {
        return Err(Error::domain("Verschiebung index must be positive"));
    }
    let mut out = BurnsideVector::zero(n * b.precision());
    for (i, x) in b.b.iter().enumerate() {
        out.b[n * (i + 1) - 1] = x.clone();
    }
    Ok(out)
}
