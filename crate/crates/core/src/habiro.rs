//! Habiro adjacency on schematic points `[n]` and on roots of unity, and the
//! basic open sets `U_m`.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::arith::{factorize, gcd_u128, lcm_u128, prime_power};
use crate::error::{Error, Result};

/// A point of the projective line over the field with one element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum P1Point {
    Zero,
    Infinity,
    /// The Galois orbit of primitive n-th roots of unity.
    Finite(u64),
}

impl P1Point {
    /// `phi(n)` for `[n]`, one for `[0]` and `[∞]`.
    pub fn degree(&self) -> u64 {
        match *self {
            P1Point::Finite(n) => crate::arith::euler_phi(n).expect("n >= 1"),
            _ => 1,
        }
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Point::Zero => write!(f, "[0]"),
            P1Point::Infinity => write!(f, "[inf]"),
            P1Point::Finite(n) => write!(f, "[{n}]"),
        }
    }
}

/// Accepts `0`, `inf`, `n`, or the bracketed forms `[0]`, `[inf]`, `[n]`.
impl FromStr for P1Point {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        let t = t.strip_prefix('[').and_then(|r| r.strip_suffix(']')).unwrap_or(t);
        match t {
            "0" => Ok(P1Point::Zero),
            "inf" | "∞" => Ok(P1Point::Infinity),
            _ => match t.parse::<u64>() {
                Ok(n) if n >= 1 => Ok(P1Point::Finite(n)),
                _ => Err(Error::Parse(format!("expected 0, inf or a positive integer, got {s:?}"))),
            },
        }
    }
}

/// An element `g/h` of Q/Z, standing for `exp(2 pi i g/h)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootOfUnity {
    g: u64,
    h: u64,
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity { g: 0, h: 1 };

    /// `g/h` reduced into `[0, 1)`.
    pub fn new(g: i128, h: u64) -> Result<Self> {
        if h == 0 {
            return Err(Error::domain("root of unity with zero denominator"));
        }
        let r = g.rem_euclid(h as i128) as u128;
        Ok(Self::reduced(r, h as u128))
    }

    fn reduced(g: u128, h: u128) -> Self {
        let d = gcd_u128(g, h);
        RootOfUnity {
            g: (g / d) as u64,
            h: (h / d) as u64,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.g
    }

    /// The order of the root, i.e. the reduced denominator.
    pub fn order(&self) -> u64 {
        self.h
    }

    pub fn add(&self, other: &RootOfUnity) -> RootOfUnity {
        let h = lcm_u128(self.h as u128, other.h as u128);
        let g = (self.g as u128 * (h / self.h as u128) + other.g as u128 * (h / other.h as u128)) % h;
        Self::reduced(g, h)
    }

    pub fn neg(&self) -> RootOfUnity {
        Self::reduced((self.h - self.g) as u128 % self.h as u128, self.h as u128)
    }

    pub fn sub(&self, other: &RootOfUnity) -> RootOfUnity {
        self.add(&other.neg())
    }

    /// `k * (g/h)` in Q/Z.
    pub fn scale(&self, k: u64) -> RootOfUnity {
        let h = self.h as u128;
        Self::reduced((self.g as u128 * (k as u128 % h)) % h, h)
    }

    pub fn as_f64(&self) -> f64 {
        self.g as f64 / self.h as f64
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.g, self.h)
    }
}

impl FromStr for RootOfUnity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected g/h, got {s:?}"));
        let (g, h) = s.split_once('/').unwrap_or((s, "1"));
        let g: i128 = g.trim().parse().map_err(|_| bad())?;
        let h: u64 = h.trim().parse().map_err(|_| bad())?;
        RootOfUnity::new(g, h)
    }
}

impl Serialize for RootOfUnity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RootOfUnity {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        crate::serde_str::deserialize(d)
    }
}

/// The prime `p` when `x/y = p^{±a}` with `a >= 1`.
pub fn adjacency_prime(m: u64, n: u64) -> Option<u64> {
    if m == 0 || n == 0 || m == n {
        return None;
    }
    let (lo, hi) = (m.min(n), m.max(n));
    if hi % lo != 0 {
        return None;
    }
    prime_power((hi / lo) as u128).map(|(p, _)| p as u64)
}

/// Habiro adjacency on indices: `m != n` and their ratio is a prime power.
pub fn adjacent(m: u64, n: u64) -> bool {
    adjacency_prime(m, n).is_some()
}

/// The prime of the prime-power order of `x - y`, if any.
pub fn root_adjacency_prime(x: &RootOfUnity, y: &RootOfUnity) -> Option<u64> {
    if x == y {
        return None;
    }
    prime_power(x.sub(y).order() as u128).map(|(p, _)| p as u64)
}

pub fn adjacent_roots(x: &RootOfUnity, y: &RootOfUnity) -> bool {
    root_adjacency_prime(x, y).is_some()
}

/// Shape of a Habiro open set, before adjoining `[0]` and `[∞]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum OpenShape {
    /// `U_m`: every `[n]` such that `p | n` implies `p^{k+1} | n` for each `p^k || m`.
    Basic { m: u64 },
    /// All finite points except the listed ones.
    Cofinite { excluded: BTreeSet<u64> },
}

/// A Habiro open set of finite points, optionally with `[0]` and `[∞]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HabiroOpen {
    #[serde(flatten)]
    pub shape: OpenShape,
    pub zero: bool,
    pub infinity: bool,
}

impl HabiroOpen {
    pub fn basic(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("U_m needs m >= 1"));
        }
        Ok(HabiroOpen {
            shape: OpenShape::Basic { m },
            zero: false,
            infinity: false,
        })
    }

    /// The complement of finitely many finite points; contains `[0]` and `[∞]`.
    pub fn cofinite(excluded: impl IntoIterator<Item = u64>) -> Self {
        HabiroOpen {
            shape: OpenShape::Cofinite {
                excluded: excluded.into_iter().collect(),
            },
            zero: true,
            infinity: true,
        }
    }

    /// Adjoin `[0]` and `[∞]`.
    pub fn with_boundary(mut self) -> Self {
        self.zero = true;
        self.infinity = true;
        self
    }

    pub fn contains(&self, pt: &P1Point) -> bool {
        in_open(self, pt)
    }
}

/// `U_m` with the factorization of `m` resolved, for repeated membership tests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasicOpen {
    m: u64,
    /// `(p, p^{k+1})` for each `p^k || m`; `None` when `p^{k+1}` overflows.
    tests: Vec<(u64, Option<u64>)>,
}

impl BasicOpen {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("U_m needs m >= 1"));
        }
        let tests = factorize(m)?
            .pairs()
            .iter()
            .map(|&(p, k)| (p as u64, (p as u64).checked_pow(k + 1)))
            .collect();
        Ok(BasicOpen { m, tests })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn contains(&self, n: u64) -> bool {
        self.tests
            .iter()
            .all(|&(p, pk)| !n.is_multiple_of(p) || pk.is_some_and(|pk| n.is_multiple_of(pk)))
    }
}

/// True iff `[n]` lies in `U_m`.
pub fn in_basic(m: u64, n: u64) -> bool {
    BasicOpen::new(m).expect("m >= 1").contains(n)
}

pub fn in_open(open: &HabiroOpen, pt: &P1Point) -> bool {
    match *pt {
        P1Point::Zero => open.zero,
        P1Point::Infinity => open.infinity,
        P1Point::Finite(n) => match &open.shape {
            OpenShape::Basic { m } => in_basic(*m, n),
            OpenShape::Cofinite { excluded } => !excluded.contains(&n),
        },
    }
}

/// `U_m ∩ U_n = U_lcm(m, n)`.
pub fn intersect_basic(m: u64, n: u64) -> u64 {
    (lcm_u128(m as u128, n as u128)) as u64
}

/// The finite points adjacent to `[n] ∈ U_m` that fall outside `U_m`:
/// `n p^a` with `p ∤ n`, `a <= k`, and `n / p^j` with `1 <= v_p(n) - j <= k`.
pub fn escape_set(m: u64, n: u64) -> Result<BTreeSet<u64>> {
    if !in_basic(m, n) {
        return Err(Error::domain(format!("[{n}] is not in U_{m}")));
    }
    let mut out = BTreeSet::new();
    for &(p, k) in factorize(m)?.pairs() {
        let p = p as u64;
        let mut v = 0;
        let mut r = n;
        while r.is_multiple_of(p) {
            r /= p;
            v += 1;
        }
        if v == 0 {
            let mut t = n;
            for _ in 0..k {
                match t.checked_mul(p) {
                    Some(x) => {
                        t = x;
                        out.insert(t);
                    }
                    None => break,
                }
            }
        } else {
            for j in 1..=v {
                let rest = v - j;
                if (1..=k).contains(&rest) {
                    out.insert(n / p.pow(j));
                }
            }
        }
    }
    Ok(out)
}

/// The complement of `U_p` up to `bound`: `[n]` with `p || n`, plus `[0]`, `[∞]`.
pub fn complement_of_u_p(p: u64, bound: u64) -> Result<Vec<P1Point>> {
    if !crate::arith::is_prime(p as u128) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    let mut out: Vec<P1Point> = (1..=bound / p)
        .filter(|a| a % p != 0)
        .map(|a| P1Point::Finite(a * p))
        .collect();
    out.push(P1Point::Zero);
    out.push(P1Point::Infinity);
    Ok(out)
}

/// A point missed by every `U_p^{0∞}` of a finite family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NoncompactnessWitness {
    pub primes: Vec<u64>,
    pub point: u64,
}

/// `[p_1 ... p_k]` avoids each `U_{p_i}` with boundary adjoined, so the cover
/// `{U_p^{0∞}}` of all primes has no finite subcover.
pub fn noncompactness_witness(primes: &[u64]) -> Result<NoncompactnessWitness> {
    if primes.is_empty() {
        return Err(Error::domain("need at least one prime"));
    }
    let distinct: BTreeSet<u64> = primes.iter().copied().collect();
    if distinct.len() != primes.len() {
        return Err(Error::domain("primes must be distinct"));
    }
    let mut point: u64 = 1;
    for &p in primes {
        if !crate::arith::is_prime(p as u128) {
            return Err(Error::domain(format!("{p} is not prime")));
        }
        point = point
            .checked_mul(p)
            .ok_or_else(|| Error::Size("product of primes overflows".into()))?;
    }
    let pt = P1Point::Finite(point);
    for &p in primes {
        let open = HabiroOpen::basic(p)?.with_boundary();
        if in_open(&open, &pt) {
            return Err(Error::domain(format!("[{point}] unexpectedly in U_{p}")));
        }
    }
    Ok(NoncompactnessWitness {
        primes: primes.to_vec(),
        point,
    })
}

/// Adjacency graph on the N-th roots of unity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdjacencyWheel {
    pub n: u64,
    /// `g/N` reduced, in order of `g`.
    pub vertices: Vec<RootOfUnity>,
    /// `(i, j, p)` with `i < j` indexing `vertices`.
    pub edges: Vec<(usize, usize, u64)>,
}

pub fn adjacency_wheel(n: u64) -> Result<AdjacencyWheel> {
    if n < 2 {
        return Err(Error::domain("wheel needs N >= 2"));
    }
    let vertices: Vec<RootOfUnity> = (0..n)
        .map(|g| RootOfUnity::new(g as i128, n))
        .collect::<Result<_>>()?;
    let mut edges = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if let Some(p) = root_adjacency_prime(&vertices[i], &vertices[j]) {
                edges.push((i, j, p));
            }
        }
    }
    Ok(AdjacencyWheel { n, vertices, edges })
}
