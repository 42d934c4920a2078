//! Smirnov's maps from the completed spectrum of Z to the projective line
//! over the field with one element.
//!
//! A rational number `q = a/b` sends a prime `p` to `[0]` when `p | a`, to
//! `[∞]` when `p | b`, and otherwise to `[n]` with `n` the multiplicative
//! order of `a b^{-1}` modulo `p`.

mod degree;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

pub use degree::FormalDegree;

use crate::arith::{
    factorize, factorize_u128, homogeneous_cyclotomic, inv_mod, is_prime, mul_mod, reduce_signed,
    sieve, FactorBudget, Factorization,
};
use crate::error::{Error, Result};
use crate::habiro::{in_open, HabiroOpen, P1Point};

/// A nonconstant rational number `a/b`, reduced, `b >= 1`, `a/b ∉ {0, 1, -1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RationalMap {
    a: i64,
    b: i64,
}

impl RationalMap {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        if b == 0 {
            return Err(Error::domain("zero denominator"));
        }
        if a == i64::MIN || b == i64::MIN {
            return Err(Error::Size("magnitude too large".into()));
        }
        let g = a.gcd(&b);
        let s = b.signum();
        let (a, b) = (s * a / g, s * b / g);
        if a == 0 || (a.abs() == 1 && b == 1) {
            return Err(Error::domain(format!("{a}/{b} is a constant, not a cover")));
        }
        Ok(RationalMap { a, b })
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    fn abs_a(&self) -> u128 {
        self.a.unsigned_abs() as u128
    }

    fn abs_b(&self) -> u128 {
        self.b as u128
    }

    /// `a b^{-1} mod p` for a prime not dividing `ab`.
    fn ratio_mod(&self, p: u128) -> u128 {
        let a = reduce_signed(self.a as i128, p);
        let b = reduce_signed(self.b as i128, p);
        mul_mod(a, inv_mod(b, p).expect("p does not divide b"), p)
    }

    /// `log |a|`, the degree of the cover.
    fn log_degree(&self) -> Result<f64> {
        if self.abs_a() == 1 {
            return Err(Error::domain("defects need |a| > 1 (deg q = log|a| vanishes)"));
        }
        Ok((self.abs_a() as f64).ln())
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.a, self.b)
    }
}

impl FromStr for RationalMap {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected a/b, got {s:?}"));
        let (a, b) = s.split_once('/').unwrap_or((s, "1"));
        let a: i64 = a.trim().parse().map_err(|_| bad())?;
        let b: i64 = b.trim().parse().map_err(|_| bad())?;
        RationalMap::new(a, b)
    }
}

impl TryFrom<String> for RationalMap {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RationalMap> for String {
    fn from(q: RationalMap) -> String {
        q.to_string()
    }
}

/// A point of the completed spectrum of Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SpecZPoint {
    Prime(u128),
    Infinity,
}

impl SpecZPoint {
    pub fn prime(p: u128) -> Result<Self> {
        if is_prime(p) {
            Ok(SpecZPoint::Prime(p))
        } else {
            Err(Error::domain(format!("{p} is not prime")))
        }
    }

    /// Formal degree: `log p`, or `1` for the archimedean point.
    pub fn degree(&self) -> FormalDegree {
        match *self {
            SpecZPoint::Prime(p) => FormalDegree::log_prime(p, 1),
            SpecZPoint::Infinity => FormalDegree::constant(1),
        }
    }
}

impl fmt::Display for SpecZPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecZPoint::Prime(p) => write!(f, "{p}"),
            SpecZPoint::Infinity => write!(f, "inf"),
        }
    }
}

fn finite_point(n: u128) -> Result<P1Point> {
    u64::try_from(n)
        .map(P1Point::Finite)
        .map_err(|_| Error::Size(format!("order {n} exceeds 64 bits")))
}

/// Image of a point of Spec Z under `q`.
pub fn evaluate(q: &RationalMap, x: SpecZPoint) -> Result<P1Point> {
    match x {
        SpecZPoint::Infinity => Ok(if q.abs_a() < q.abs_b() {
            P1Point::Zero
        } else {
            P1Point::Infinity
        }),
        SpecZPoint::Prime(p) => {
            if !is_prime(p) {
                return Err(Error::domain(format!("{p} is not prime")));
            }
            if q.abs_a().is_multiple_of(p) {
                Ok(P1Point::Zero)
            } else if q.abs_b().is_multiple_of(p) {
                Ok(P1Point::Infinity)
            } else {
                finite_point(crate::arith::order_mod_prime(q.ratio_mod(p), p)?)
            }
        }
    }
}

/// Preimage of a point of the projective line.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Fiber {
    pub primes: Vec<u128>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub infinity: bool,
}

impl Fiber {
    pub fn is_empty(&self) -> bool {
        self.primes.is_empty() && !self.infinity
    }

    pub fn points(&self) -> Vec<SpecZPoint> {
        let mut v: Vec<SpecZPoint> = self.primes.iter().map(|&p| SpecZPoint::Prime(p)).collect();
        if self.infinity {
            v.push(SpecZPoint::Infinity);
        }
        v
    }
}

/// `|b^{phi(n)} Phi_n(a/b)|` as a machine integer.
fn cyclotomic_value(q: &RationalMap, n: u64) -> Result<u128> {
    let v = homogeneous_cyclotomic(n, &BigInt::from(q.a), &BigInt::from(q.b))?;
    v.abs()
        .to_u128()
        .ok_or_else(|| Error::Size(format!("Phi_{n}({q}) exceeds 128 bits")))
}

/// True iff `r` has order exactly `n` modulo `p`: `r^n = 1` and no maximal
/// proper divisor of `n` already kills `r`.
fn has_exact_order(r: u128, n: u64, p: u128, n_primes: &Factorization) -> bool {
    use crate::arith::pow_mod;
    pow_mod(r, n as u128, p) == 1
        && n_primes
            .primes()
            .all(|l| pow_mod(r, n as u128 / l, p) != 1)
}

pub fn fiber(q: &RationalMap, target: P1Point) -> Result<Fiber> {
    fiber_with(q, target, FactorBudget::default())
}

/// Exact fiber. For `[n]` the candidates are the prime factors of
/// `Phi_n(a, b)`, which contain every prime of order `n`; each one is kept
/// iff its order is exactly `n`.
pub fn fiber_with(q: &RationalMap, target: P1Point, budget: FactorBudget) -> Result<Fiber> {
    match target {
        P1Point::Zero => Ok(Fiber {
            primes: factorize_u128(q.abs_a(), budget)?.primes().collect(),
            infinity: q.abs_a() < q.abs_b(),
        }),
        P1Point::Infinity => Ok(Fiber {
            primes: factorize_u128(q.abs_b(), budget)?.primes().collect(),
            infinity: q.abs_a() > q.abs_b(),
        }),
        P1Point::Finite(0) => Err(Error::domain("[0] is written P1Point::Zero")),
        P1Point::Finite(n) => {
            let value = cyclotomic_value(q, n)?;
            let cands = factorize_u128(value, budget)?;
            let n_primes = factorize(n)?;
            let primes = cands
                .primes()
                .filter(|&p| has_exact_order(q.ratio_mod(p), n, p, &n_primes))
                .collect();
            Ok(Fiber {
                primes,
                infinity: false,
            })
        }
    }
}

/// The exceptions to Zsigmondy's theorem for `a^n - b^n`, `n >= 2`.
pub fn zsigmondy_exception(a: u64, b: u64, n: u64) -> Result<bool> {
    if !(1 <= b && b < a) || a.gcd(&b) != 1 || n < 2 {
        return Err(Error::domain("need 1 <= b < a, gcd(a, b) = 1, n >= 2"));
    }
    Ok((a, b, n) == (2, 1, 6) || (n == 2 && (a + b).is_power_of_two()))
}

/// `v_p(a^n - b^n)` for `p ∤ ab`, by lifting the congruence `a^n ≡ b^n`.
fn valuation_of_difference(q: &RationalMap, n: u128, p: u128) -> u32 {
    let a = BigInt::from(q.a);
    let b = BigInt::from(q.b);
    let e = BigInt::from(n);
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut v = 0;
    loop {
        let lhs = a.mod_floor(&modulus).modpow(&e, &modulus);
        let rhs = b.mod_floor(&modulus).modpow(&e, &modulus);
        if lhs != rhs {
            return v;
        }
        v += 1;
        modulus *= &pb;
    }
}

fn valuation(mut x: u128, p: u128) -> u32 {
    let mut v = 0;
    while x.is_multiple_of(p) {
        x /= p;
        v += 1;
    }
    v
}

/// Ramification index `e_q(p)`.
pub fn ramification_index(q: &RationalMap, p: u128) -> Result<u32> {
    match evaluate(q, SpecZPoint::Prime(p))? {
        P1Point::Zero => Ok(valuation(q.abs_a(), p)),
        P1Point::Infinity => Ok(valuation(q.abs_b(), p)),
        P1Point::Finite(n) => Ok(valuation_of_difference(q, n as u128, p)),
    }
}

/// `(e_q(p) - 1) log p / log|a|`.
pub fn defect(q: &RationalMap, p: u128) -> Result<f64> {
    let e = ramification_index(q, p)?;
    Ok((e as f64 - 1.0) * (p as f64).ln() / q.log_degree()?)
}

/// The defect as an exact quotient `numerator / log|a|` of formal degrees.
pub fn defect_exact(q: &RationalMap, p: u128) -> Result<(FormalDegree, FormalDegree)> {
    let e = ramification_index(q, p)? as i64;
    Ok((FormalDegree::log_prime(p, e - 1), FormalDegree::log_of(q.abs_a())?))
}

fn fiber_ramification(q: &RationalMap, target: P1Point, f: &Fiber) -> Vec<(u128, u32)> {
    f.primes
        .iter()
        .map(|&p| {
            let e = match target {
                P1Point::Zero => valuation(q.abs_a(), p),
                P1Point::Infinity => valuation(q.abs_b(), p),
                P1Point::Finite(n) => valuation_of_difference(q, n as u128, p),
            };
            (p, e)
        })
        .collect()
}

/// Exact numerator `sum_{p in fiber} (e_q(p) - 1) log p` of the fiber defect.
pub fn fiber_defect_exact(q: &RationalMap, target: P1Point) -> Result<FormalDegree> {
    let f = fiber(q, target)?;
    let mut acc = FormalDegree::zero();
    for (p, e) in fiber_ramification(q, target, &f) {
        acc.add_log(p, e as i64 - 1);
    }
    Ok(acc)
}

/// Sum of the defects over the prime points of a fiber.
pub fn fiber_defect(q: &RationalMap, target: P1Point) -> Result<f64> {
    let deg = q.log_degree()?;
    Ok(fiber_defect_exact(q, target)?.to_f64() / deg)
}

/// `sum_{p in q^{-1}[n]} e_q(p) log p`.
pub fn fiber_ramification_degree(q: &RationalMap, n: u64) -> Result<FormalDegree> {
    let target = P1Point::Finite(n);
    let f = fiber(q, target)?;
    let mut acc = FormalDegree::zero();
    for (p, e) in fiber_ramification(q, target, &f) {
        acc.add_log(p, e as i64);
    }
    Ok(acc)
}

/// `Phi_n(a, b)` with every prime dividing `n` removed: the part of
/// `a^n - b^n` coming from primes of order exactly `n`.
pub fn primitive_part(q: &RationalMap, n: u64) -> Result<u128> {
    let mut v = cyclotomic_value(q, n)?;
    for l in factorize(n)?.primes() {
        while v % l == 0 {
            v /= l;
        }
    }
    Ok(v)
}

/// `n / rad(n)`.
pub fn powerful_part(n: u128) -> Result<u128> {
    let f = factorize_u128(n, FactorBudget::default())?;
    Ok(n / f.radical())
}

/// A formal sum over points of Spec Z; the archimedean coefficient may
/// involve logarithms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FormalDivisor {
    pub points: BTreeMap<u128, i64>,
    pub infinity: FormalDegree,
}

#[derive(Serialize, Deserialize)]
struct PointCoeff {
    p: u128,
    c: i64,
}

#[derive(Serialize, Deserialize)]
struct DivisorRepr {
    points: Vec<PointCoeff>,
    infinity: FormalDegree,
}

impl Serialize for FormalDivisor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DivisorRepr {
            points: self.points.iter().map(|(&p, &c)| PointCoeff { p, c }).collect(),
            infinity: self.infinity.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FormalDivisor {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DivisorRepr::deserialize(d)?;
        let mut points = BTreeMap::new();
        for pc in r.points {
            *points.entry(pc.p).or_insert(0) += pc.c;
        }
        points.retain(|_, c| *c != 0);
        Ok(FormalDivisor {
            points,
            infinity: r.infinity,
        })
    }
}

impl fmt::Display for FormalDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<String> = self.points.iter().map(|(p, c)| format!("{c}[{p}]")).collect();
        if !self.infinity.is_zero() {
            terms.push(format!("({})[inf]", self.infinity));
        }
        if terms.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", terms.join(" + "))
        }
    }
}

/// `div(q) = sum e_i [p_i] - sum f_j [q_j] - log|q| [∞]`.
pub fn divisor_of(q: &RationalMap) -> Result<FormalDivisor> {
    let mut points = BTreeMap::new();
    for &(p, e) in factorize_u128(q.abs_a(), FactorBudget::default())?.pairs() {
        points.insert(p, e as i64);
    }
    for &(p, e) in factorize_u128(q.abs_b(), FactorBudget::default())?.pairs() {
        points.insert(p, -(e as i64));
    }
    let log_q = &FormalDegree::log_of(q.abs_a())? - &FormalDegree::log_of(q.abs_b())?;
    Ok(FormalDivisor {
        points,
        infinity: -&log_q,
    })
}

/// `sum c_P deg(P)` with `deg p = log p` and `deg ∞ = 1`.
pub fn degree_of(d: &FormalDivisor) -> FormalDegree {
    let mut acc = d.infinity.clone();
    for (&p, &c) in &d.points {
        acc.add_log(p, c);
    }
    acc
}

/// Defect bookkeeping for an abc triple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbcReport {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub radical: u128,
    /// `c / rad(abc)` as an exact fraction `"c/rad"` and as a float.
    pub ratio_exact: String,
    pub ratio: f64,
    pub q: RationalMap,
    pub delta_zero: f64,
    pub delta_one: f64,
    /// `(log b_1 + (log q - 1)) / log a`, reading `log q - 1` as the
    /// archimedean contribution. The grouping is ambiguous.
    pub delta_infinity: f64,
    pub infinity_grouping_ambiguous: bool,
}

pub fn abc_report(a: u64, b: u64, c: u64) -> Result<AbcReport> {
    if a == 0 || b == 0 || a.checked_add(b) != Some(c) {
        return Err(Error::domain("need positive A, B with A + B = C"));
    }
    if a.gcd(&b) != 1 {
        return Err(Error::domain("A, B, C must be coprime"));
    }
    let mut primes: Vec<u128> = Vec::new();
    for x in [a, b, c] {
        primes.extend(factorize(x)?.primes());
    }
    primes.sort_unstable();
    primes.dedup();
    let radical: u128 = primes.iter().product();
    let lo = a.min(b);
    let q = RationalMap::new(
        i64::try_from(c).map_err(|_| Error::Size("C exceeds 63 bits".into()))?,
        lo as i64,
    )?;
    let log_a = (c as f64).ln();
    let a1 = powerful_part(c as u128)? as f64;
    let amb1 = powerful_part((c - lo) as u128)? as f64;
    let b1 = powerful_part(lo as u128)? as f64;
    let log_q = (c as f64).ln() - (lo as f64).ln();
    let g = (c as u128).gcd(&radical);
    Ok(AbcReport {
        a,
        b,
        c,
        radical,
        ratio_exact: format!("{}/{}", c as u128 / g, radical / g),
        ratio: c as f64 / radical as f64,
        q,
        delta_zero: a1.ln() / log_a,
        delta_one: amb1.ln() / log_a,
        delta_infinity: (b1.ln() + (log_q - 1.0)) / log_a,
        infinity_grouping_ambiguous: true,
    })
}

/// Primes `p <= bound` whose image under `q` lies in `open`.
pub fn exotic_preimage(q: &RationalMap, open: &HabiroOpen, prime_bound: u64) -> Result<Vec<u128>> {
    let mut out = Vec::new();
    for (p, pt) in graph_scan(q, prime_bound)? {
        if in_open(open, &pt) {
            out.push(p);
        }
    }
    Ok(out)
}

/// `q` evaluated at every prime up to `bound`, ascending.
pub fn graph_scan(q: &RationalMap, prime_bound: u64) -> Result<Vec<(u128, P1Point)>> {
    let bound = usize::try_from(prime_bound)
        .ok()
        .filter(|&b| b <= 1 << 32)
        .ok_or_else(|| Error::Size("prime bound above 2^32".into()))?;
    sieve(bound)
        .into_iter()
        .map(|p| Ok((p as u128, evaluate(q, SpecZPoint::Prime(p as u128))?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> RationalMap {
        s.parse().unwrap()
    }

    #[test]
    fn construction() {
        assert!(RationalMap::new(1, 1).is_err());
        assert!(RationalMap::new(-3, -3).is_err());
        assert!(RationalMap::new(0, 5).is_err());
        assert_eq!(RationalMap::new(4, -6).unwrap(), RationalMap::new(-2, 3).unwrap());
    }

    #[test]
    fn evaluation() {
        let two = q("2");
        assert_eq!(evaluate(&two, SpecZPoint::Prime(7)).unwrap(), P1Point::Finite(3));
        assert_eq!(evaluate(&two, SpecZPoint::Prime(2)).unwrap(), P1Point::Zero);
        assert_eq!(evaluate(&two, SpecZPoint::Infinity).unwrap(), P1Point::Infinity);
        assert_eq!(evaluate(&q("1/2"), SpecZPoint::Infinity).unwrap(), P1Point::Zero);
    }

    #[test]
    fn fibers() {
        let two = q("2");
        assert!(fiber(&two, P1Point::Finite(6)).unwrap().is_empty());
        assert_eq!(fiber(&two, P1Point::Finite(11)).unwrap().primes, vec![23, 89]);
        assert_eq!(fiber(&two, P1Point::Finite(4)).unwrap().primes, vec![5]);
        assert_eq!(fiber(&two, P1Point::Finite(1)).unwrap().primes, Vec::<u128>::new());
        let f0 = fiber(&two, P1Point::Zero).unwrap();
        assert_eq!((f0.primes, f0.infinity), (vec![2], false));
        let finf = fiber(&two, P1Point::Infinity).unwrap();
        assert_eq!((finf.primes, finf.infinity), (vec![], true));
    }

    #[test]
    fn zsigmondy() {
        assert!(zsigmondy_exception(2, 1, 6).unwrap());
        assert!(zsigmondy_exception(3, 1, 2).unwrap());
        assert!(!zsigmondy_exception(2, 1, 5).unwrap());
    }

    #[test]
    fn ramification() {
        assert_eq!(ramification_index(&q("8"), 2).unwrap(), 3);
        assert_eq!(ramification_index(&q("2"), 7).unwrap(), 1);
        assert_eq!(ramification_index(&q("2"), 1093).unwrap(), 2);
        assert_eq!(ramification_index(&q("2"), 3511).unwrap(), 2);
    }

    #[test]
    fn defects() {
        assert_eq!(defect(&q("2"), 7).unwrap(), 0.0);
        assert!((defect(&q("8"), 2).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(defect(&q("4"), 3).unwrap(), 0.0);
        assert!((fiber_defect(&q("8"), P1Point::Zero).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(fiber_defect(&q("2"), P1Point::Finite(1)).unwrap(), 0.0);
        assert_eq!(fiber_defect(&q("9/2"), P1Point::Finite(1)).unwrap(), 0.0);
        assert!(defect(&q("1/2"), 2).is_err());
    }

    #[test]
    fn divisors() {
        let d = divisor_of(&q("12/5")).unwrap();
        assert_eq!(d.points, BTreeMap::from([(2, 2), (3, 1), (5, -1)]));
        assert_eq!(d.infinity.logs, BTreeMap::from([(2, -2), (3, -1), (5, 1)]));
        assert!(degree_of(&d).is_zero());
        let d = divisor_of(&q("2")).unwrap();
        assert_eq!(
            serde_json::to_string(&d).unwrap(),
            r#"{"points":[{"p":2,"c":1}],"infinity":{"logs":{"2":-1},"const":0}}"#
        );
        let single_inf = FormalDivisor {
            points: BTreeMap::new(),
            infinity: FormalDegree::constant(1),
        };
        assert_eq!(degree_of(&single_inf), FormalDegree::constant(1));
    }

    #[test]
    fn abc() {
        let r = abc_report(1, 8, 9).unwrap();
        assert_eq!(r.radical, 6);
        assert_eq!(r.ratio, 1.5);
        assert_eq!(r.ratio_exact, "3/2");
        let r = abc_report(1, 1, 2).unwrap();
        assert_eq!((r.radical, r.ratio), (2, 1.0));
        let r = abc_report(5, 27, 32).unwrap();
        assert_eq!(r.radical, 30);
        assert!((r.ratio - 32.0 / 30.0).abs() < 1e-15);
        assert!(abc_report(2, 4, 6).is_err());
        assert!(abc_report(2, 3, 6).is_err());
    }

    #[test]
    fn graph() {
        use P1Point::*;
        assert_eq!(
            graph_scan(&q("2"), 10).unwrap(),
            vec![(2, Zero), (3, Finite(2)), (5, Finite(4)), (7, Finite(3))]
        );
        assert_eq!(
            graph_scan(&q("3/2"), 7).unwrap(),
            vec![(2, Infinity), (3, Zero), (5, Finite(2)), (7, Finite(6))]
        );
        assert!(graph_scan(&q("5"), 1).unwrap().is_empty());
    }

    #[test]
    fn exotic() {
        let two = q("2");
        let all: Vec<u128> = sieve(50).into_iter().map(u128::from).collect();
        let open = HabiroOpen::cofinite([1]);
        assert_eq!(exotic_preimage(&two, &open, 50).unwrap(), all);
    }
}
