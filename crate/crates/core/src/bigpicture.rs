//! Conway's big picture: projectivity classes of lattices commensurable with
//! `Z^2`, written `L_{M, g/h} = <M e_1 + (g/h) e_2, e_2>`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, inv_mod, is_prime};
use crate::error::{Error, Result};

/// Default cap on the number of lattices a ball or Hecke operator may produce.
pub const DEFAULT_BALL_BUDGET: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "LatticeRepr")]
pub struct Lattice {
    #[serde(rename = "M", serialize_with = "crate::serde_str::serialize")]
    m: BigRational,
    #[serde(rename = "gh", serialize_with = "crate::serde_str::serialize")]
    gh: BigRational,
}

#[derive(Deserialize)]
struct LatticeRepr {
    #[serde(rename = "M", deserialize_with = "crate::serde_str::deserialize")]
    m: BigRational,
    #[serde(rename = "gh", deserialize_with = "crate::serde_str::deserialize")]
    gh: BigRational,
}

impl TryFrom<LatticeRepr> for Lattice {
    type Error = Error;
    fn try_from(r: LatticeRepr) -> Result<Self> {
        Lattice::new(r.m, r.gh)
    }
}

fn ri(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

fn frac_part(x: &BigRational) -> BigRational {
    x - x.floor()
}

impl Lattice {
    pub fn new(m: BigRational, gh: BigRational) -> Result<Self> {
        if !m.is_positive() {
            return Err(Error::domain(format!("M = {m} must be positive")));
        }
        Ok(Lattice { m, gh: frac_part(&gh) })
    }

    /// `L_M`.
    pub fn scalar(m: BigRational) -> Result<Self> {
        Lattice::new(m, BigRational::zero())
    }

    pub fn from_ints(mn: i64, md: i64, g: i64, h: i64) -> Result<Self> {
        if md == 0 || h == 0 {
            return Err(Error::domain("zero denominator"));
        }
        Lattice::new(
            BigRational::new(mn.into(), md.into()),
            BigRational::new(g.into(), h.into()),
        )
    }

    pub fn one() -> Self {
        Lattice::scalar(BigRational::one()).unwrap()
    }

    pub fn m(&self) -> &BigRational {
        &self.m
    }

    /// `g/h` in `[0, 1)`.
    pub fn gh(&self) -> &BigRational {
        &self.gh
    }

    /// Basis rows `[[M, g/h], [0, 1]]`.
    pub fn basis(&self) -> [[BigRational; 2]; 2] {
        [
            [self.m.clone(), self.gh.clone()],
            [BigRational::zero(), BigRational::one()],
        ]
    }
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.gh.is_zero() {
            write!(f, "{}", self.m)
        } else {
            write!(f, "{},{}", self.m, self.gh)
        }
    }
}

impl std::str::FromStr for Lattice {
    type Err = Error;
    /// `M` or `M,g/h`.
    fn from_str(s: &str) -> Result<Self> {
        let parse = |t: &str| -> Result<BigRational> {
            t.trim()
                .parse::<BigRational>()
                .map_err(|e| Error::Parse(format!("{t:?}: {e}")))
        };
        match s.split_once(',') {
            Some((m, gh)) => Lattice::new(parse(m)?, parse(gh)?),
            None => Lattice::scalar(parse(s)?),
        }
    }
}

/// Canonical form of the lattice spanned by the rows of `basis`.
pub fn normalize(basis: &[[BigRational; 2]; 2]) -> Result<Lattice> {
    let det = &basis[0][0] * &basis[1][1] - &basis[0][1] * &basis[1][0];
    if det.is_zero() {
        return Err(Error::domain("singular basis"));
    }
    let den = basis
        .iter()
        .flatten()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let int = |x: &BigRational| (x * BigRational::from_integer(den.clone())).to_integer();
    let r1 = [int(&basis[0][0]), int(&basis[0][1])];
    let r2 = [int(&basis[1][0]), int(&basis[1][1])];
    // Row Hermite form [[a, b], [0, d]].
    let e = r1[0].extended_gcd(&r2[0]);
    let (a, b, d) = if e.gcd.is_zero() {
        return Err(Error::domain("singular basis"));
    } else {
        let a = e.gcd.clone();
        let b = &e.x * &r1[1] + &e.y * &r2[1];
        let d = (&r2[0] / &a) * &r1[1] - (&r1[0] / &a) * &r2[1];
        (a, b, d)
    };
    let (a, b) = if a.is_negative() { (-a, -b) } else { (a, b) };
    let d = d.abs();
    Lattice::new(BigRational::new(a, d.clone()), BigRational::new(b, d))
}

type Mat = [[BigRational; 2]; 2];

fn mat_mul(x: &Mat, y: &Mat) -> Mat {
    let e = |i: usize, j: usize| &x[i][0] * &y[0][j] + &x[i][1] * &y[1][j];
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn mat_inv(x: &Mat) -> Mat {
    let det = &x[0][0] * &x[1][1] - &x[0][1] * &x[1][0];
    [
        [&x[1][1] / &det, -&x[0][1] / &det],
        [-&x[1][0] / &det, &x[0][0] / &det],
    ]
}

/// `δ(L, K) = det(α M_L M_K^{-1})` with `α` making the matrix integral and primitive.
pub fn hyperdistance(l: &Lattice, k: &Lattice) -> BigInt {
    let d = mat_mul(&l.basis(), &mat_inv(&k.basis()));
    let den = d.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = d
        .iter()
        .flatten()
        .map(|x| (x * BigRational::from_integer(den.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let ints: Vec<BigInt> = ints.iter().map(|x| x / &content).collect();
    (&ints[0] * &ints[3] - &ints[1] * &ints[2]).abs()
}

/// `log δ(L, K)`, the metric on vertices.
pub fn log_distance(l: &Lattice, k: &Lattice) -> f64 {
    let d = hyperdistance(l, k);
    d.to_f64().map(f64::ln).unwrap_or(f64::INFINITY)
}

/// Primitive `[[α, β], [0, δ]]` with `αδ = n`, `0 <= β < δ`.
fn primitive_matrices(n: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    for alpha in (1..=n).filter(|a| n.is_multiple_of(*a)) {
        let delta = n / alpha;
        for beta in 0..delta {
            if alpha.gcd(&beta).gcd(&delta) == 1 {
                out.push((alpha, beta, delta));
            }
        }
    }
    out
}

/// `ψ(n) = n ∏_{p|n} (1 + 1/p)`, the size of every ball of radius `n`.
pub fn ball_size(n: u64) -> Result<u64> {
    let f = factorize(n)?;
    let mut s = n as u128;
    for &(p, _) in f.pairs() {
        s = s / p * (p + 1);
    }
    u64::try_from(s).map_err(|_| Error::Size(format!("ball of radius {n} is too large")))
}

/// All `K` with `δ(L, K) = n`.
pub fn ball(l: &Lattice, n: u64) -> Result<Vec<Lattice>> {
    ball_with(l, n, DEFAULT_BALL_BUDGET)
}

pub fn ball_with(l: &Lattice, n: u64, budget: u64) -> Result<Vec<Lattice>> {
    if n == 0 {
        return Err(Error::domain("radius must be positive"));
    }
    let size = ball_size(n)?;
    if size > budget {
        return Err(Error::Budget(format!(
            "ball of radius {n} has {size} vertices, budget is {budget}"
        )));
    }
    let b = l.basis();
    let mut out: Vec<Lattice> = primitive_matrices(n)
        .into_iter()
        .map(|(a, be, d)| {
            let m: Mat = [[ri(a as i64), ri(be as i64)], [ri(0), ri(d as i64)]];
            normalize(&mat_mul(&m, &b)).expect("nonsingular")
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

/// The `p + 1` neighbours of `L` in the `p`-tree.
pub fn neighbors(l: &Lattice, p: u64) -> Result<Vec<Lattice>> {
    if !is_prime(p as u128) {
        return Err(Error::domain(format!("{p} is not prime")));
    }
    ball(l, p)
}

/// `(M, g/h) -> (1/(h^2 M), g'/h)` with `g g' = 1 mod h`.
pub fn reversed_form(l: &Lattice) -> Lattice {
    let h = l.gh.denom().clone();
    let g = l.gh.numer().clone();
    let gp = if h.is_one() {
        BigInt::zero()
    } else {
        let inv = inv_mod(
            g.to_u128().expect("g/h fits in u128"),
            h.to_u128().expect("g/h fits in u128"),
        )
        .expect("g/h is reduced");
        BigInt::from(inv)
    };
    let m = BigRational::one() / (BigRational::from_integer(&h * &h) * &l.m);
    Lattice::new(m, BigRational::new(gp, h)).unwrap()
}

/// Finite formal integer combination of vertices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<SumTerm>", from = "Vec<SumTerm>")]
pub struct LatticeSum {
    terms: BTreeMap<Lattice, i64>,
}

/// JSON form of one term: `{"M":"1/2","gh":"1/2","c":3}`.
#[derive(Clone, Serialize, Deserialize)]
struct SumTerm {
    #[serde(flatten)]
    lattice: Lattice,
    c: i64,
}

impl From<LatticeSum> for Vec<SumTerm> {
    fn from(s: LatticeSum) -> Self {
        s.terms.into_iter().map(|(lattice, c)| SumTerm { lattice, c }).collect()
    }
}

impl From<Vec<SumTerm>> for LatticeSum {
    fn from(v: Vec<SumTerm>) -> Self {
        let mut s = LatticeSum::zero();
        for t in v {
            s.add(t.lattice, t.c);
        }
        s
    }
}

impl LatticeSum {
    pub fn zero() -> Self {
        LatticeSum::default()
    }

    pub fn single(l: Lattice) -> Self {
        let mut s = LatticeSum::zero();
        s.add(l, 1);
        s
    }

    pub fn add(&mut self, l: Lattice, c: i64) {
        if c == 0 {
            return;
        }
        let slot = self.terms.entry(l.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&l);
        }
    }

    pub fn add_sum(&mut self, other: &LatticeSum, c: i64) {
        for (l, &v) in &other.terms {
            self.add(l.clone(), v * c);
        }
    }

    pub fn scale(&self, c: i64) -> LatticeSum {
        let mut s = LatticeSum::zero();
        s.add_sum(self, c);
        s
    }

    pub fn terms(&self) -> &BTreeMap<Lattice, i64> {
        &self.terms
    }

    pub fn coeff(&self, l: &Lattice) -> i64 {
        self.terms.get(l).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for LatticeSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(l, &c)| match c {
                1 => format!("[{l}]"),
                _ => format!("{c}[{l}]"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Hecke operator `T_n`: each vertex goes to the sum of its ball of radius `n`.
pub fn hecke(n: u64, s: &LatticeSum) -> Result<LatticeSum> {
    hecke_with(n, s, DEFAULT_BALL_BUDGET)
}

pub fn hecke_with(n: u64, s: &LatticeSum, budget: u64) -> Result<LatticeSum> {
    let mut out = LatticeSum::zero();
    for (l, &c) in &s.terms {
        for k in ball_with(l, n, budget)? {
            out.add(k, c);
        }
    }
    Ok(out)
}

/// Generators of the integral Bost–Connes algebra acting on vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BcGenerator {
    E(u64),
    EStar(u64),
    /// `e(a/b)` for `a/b` in `Q/Z`.
    Char(BigRational),
}

/// `Ψ^k(x) = k x mod 1`.
fn psi(k: &BigInt, x: &BigRational) -> BigRational {
    frac_part(&(x * BigRational::from_integer(k.clone())))
}

/// The `m` solutions of `m x = g/h` in `Q/Z`.
fn rho(m: u64, x: &BigRational) -> Vec<BigRational> {
    let mr = ri(m as i64);
    (0..m).map(|k| (x + ri(k as i64)) / &mr).collect()
}

/// Apply one generator to a vertex, with `M = c/d` in lowest terms:
///
/// * `e_n L = Σ L_{nc/d, x}` over `x ∈ ρ_m(g/h)`, `m = (n, d)`;
/// * `e*_n L = (n, c) L_{c/(nd), Ψ^{n/m}(g/h)}`, `m = (n, c)`;
/// * `e(a/b) L = L_{c/d, g/h + Ψ^c(a/b)}`.
///
/// The `e*_n` rule is applied exactly as displayed, also when `(n, c) > 1`.
pub fn bost_connes_vertex(gen: &BcGenerator, l: &Lattice) -> Result<LatticeSum> {
    let c = l.m.numer().clone();
    let d = l.m.denom().clone();
    let mut out = LatticeSum::zero();
    match gen {
        BcGenerator::E(n) | BcGenerator::EStar(n) if *n == 0 => {
            return Err(Error::domain("generator index must be positive"))
        }
        BcGenerator::E(n) => {
            let nb = BigInt::from(*n);
            let m = nb.gcd(&d).to_u64().unwrap();
            let new_m = BigRational::new(&nb * &c, d);
            for x in rho(m, &l.gh) {
                out.add(Lattice::new(new_m.clone(), x)?, 1);
            }
        }
        BcGenerator::EStar(n) => {
            let nb = BigInt::from(*n);
            let m = nb.gcd(&c);
            let scalar = m.to_i64().unwrap();
            let new_m = BigRational::new(c, &nb * d);
            out.add(Lattice::new(new_m, psi(&(&nb / &m), &l.gh))?, scalar);
        }
        BcGenerator::Char(x) => {
            out.add(Lattice::new(l.m.clone(), &l.gh + psi(&c, x))?, 1);
        }
    }
    Ok(out)
}

/// Linear extension of [`bost_connes_vertex`].
pub fn bost_connes_apply(gen: &BcGenerator, s: &LatticeSum) -> Result<LatticeSum> {
    let mut out = LatticeSum::zero();
    for (l, &c) in &s.terms {
        out.add_sum(&bost_connes_vertex(gen, l)?, c);
    }
    Ok(out)
}

/// Vertices and edges of an explored part of the big picture.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeGraph {
    pub vertices: Vec<Lattice>,
    pub edges: Vec<(usize, usize)>,
}

impl LatticeGraph {
    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for (i, v) in self.vertices.iter().enumerate() {
            s.push_str(&format!("  v{i} [label=\"{v}\"];\n"));
        }
        for (a, b) in &self.edges {
            s.push_str(&format!("  v{a} -- v{b};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// Breadth-first exploration of the `p`-tree around `root` to `depth` steps.
pub fn p_tree(root: &Lattice, p: u64, depth: usize) -> Result<LatticeGraph> {
    let mut index: HashMap<Lattice, usize> = HashMap::new();
    let mut vertices = vec![root.clone()];
    let mut edges = Vec::new();
    let mut seen = HashSet::new();
    index.insert(root.clone(), 0);
    let mut queue = VecDeque::from([(0usize, 0usize)]);
    while let Some((i, level)) = queue.pop_front() {
        if level == depth {
            continue;
        }
        for k in neighbors(&vertices[i].clone(), p)? {
            let j = match index.get(&k) {
                Some(&j) => j,
                None => {
                    let j = vertices.len();
                    index.insert(k.clone(), j);
                    vertices.push(k);
                    queue.push_back((j, level + 1));
                    j
                }
            };
            if seen.insert((i.min(j), i.max(j))) {
                edges.push((i.min(j), i.max(j)));
            }
        }
    }
    Ok(LatticeGraph { vertices, edges })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lat(s: &str) -> Lattice {
        s.parse().unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn normal_forms() {
        let id = [[ri(1), ri(0)], [ri(0), ri(1)]];
        assert_eq!(normalize(&id).unwrap(), Lattice::one());
        let b = [[ri(2), ri(0)], [ri(0), ri(1)]];
        assert_eq!(normalize(&b).unwrap(), lat("2"));
        let b = [[ri(1), ri(1)], [ri(0), ri(2)]];
        assert_eq!(normalize(&b).unwrap(), lat("1/2,1/2"));
        let swapped = [[ri(0), ri(2)], [ri(1), ri(1)]];
        assert_eq!(normalize(&swapped).unwrap(), lat("1/2,1/2"));
        let scaled = [[q(3, 7), ri(0)], [ri(0), q(3, 7)]];
        assert_eq!(normalize(&scaled).unwrap(), Lattice::one());
        assert!(normalize(&[[ri(1), ri(2)], [ri(2), ri(4)]]).is_err());
    }

    #[test]
    fn distances() {
        let l1 = Lattice::one();
        assert_eq!(hyperdistance(&l1, &l1), BigInt::from(1));
        assert_eq!(hyperdistance(&l1, &lat("2")), BigInt::from(2));
        for h in 1..=12i64 {
            for g in (0..h).filter(|g| g.gcd(&h) == 1) {
                let m = q(5, 3);
                let a = Lattice::scalar(m.clone()).unwrap();
                let b = Lattice::new(m, q(g, h)).unwrap();
                assert_eq!(hyperdistance(&a, &b), BigInt::from(h * h));
            }
        }
    }

    #[test]
    fn neighbor_sets() {
        let n = neighbors(&Lattice::one(), 2).unwrap();
        assert_eq!(n, vec![lat("1/2"), lat("1/2,1/2"), lat("2")]);
        let n2 = neighbors(&lat("2"), 2).unwrap();
        assert!(n2.contains(&Lattice::one()) && n2.contains(&lat("4")));
        assert!(n2.contains(&lat("1,1/2")));
        assert_eq!(ball(&Lattice::one(), 1).unwrap(), vec![Lattice::one()]);
        assert_eq!(ball(&Lattice::one(), 9).unwrap().len(), 12);
        assert!(neighbors(&Lattice::one(), 4).is_err());
        assert!(matches!(ball_with(&Lattice::one(), 30, 10), Err(Error::Budget(_))));
    }

    #[test]
    fn reversal() {
        assert_eq!(reversed_form(&lat("3/2")), lat("2/3"));
        assert_eq!(reversed_form(&lat("1,1/2")), lat("1/4,1/2"));
        assert_eq!(reversed_form(&lat("1,2/5")), lat("1/25,3/5"));
        let l = lat("7/3,5/12");
        assert_eq!(reversed_form(&reversed_form(&l)), l);
    }

    #[test]
    fn hecke_relations() {
        let s = LatticeSum::single(Lattice::one());
        assert_eq!(hecke(1, &s).unwrap(), s);
        let t2 = hecke(2, &s).unwrap();
        assert_eq!(t2.terms().len(), 3);
        let lhs = hecke(2, &hecke(4, &s).unwrap()).unwrap();
        let mut rhs = hecke(2, &s).unwrap().scale(2);
        rhs.add_sum(&hecke(8, &s).unwrap(), 1);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn bost_connes() {
        let l = lat("3/5,1/4");
        let s = LatticeSum::single(l.clone());
        assert_eq!(bost_connes_apply(&BcGenerator::E(1), &s).unwrap(), s);
        let c = LatticeSum::single(lat("3/5"));
        let back = bost_connes_apply(
            &BcGenerator::EStar(7),
            &bost_connes_apply(&BcGenerator::E(7), &c).unwrap(),
        )
        .unwrap();
        assert_eq!(back, c.scale(7));
        let r = bost_connes_apply(&BcGenerator::Char(q(1, 2)), &LatticeSum::single(lat("3"))).unwrap();
        assert_eq!(r, LatticeSum::single(lat("3,1/2")));
        // e_2 on M = 1/2 splits g/h into its two halves
        let r = bost_connes_vertex(&BcGenerator::E(2), &lat("1/2")).unwrap();
        assert_eq!(r.terms().len(), 2);
        assert_eq!(r.coeff(&lat("1,1/2")), 1);
    }

    #[test]
    fn tree_and_json() {
        let g = p_tree(&Lattice::one(), 2, 3).unwrap();
        assert_eq!(g.vertices.len(), 1 + 3 + 6 + 12);
        assert_eq!(g.edges.len(), g.vertices.len() - 1);
        assert!(g.to_dot("t").starts_with("graph t {"));
        let js = serde_json::to_string(&lat("1/2,1/2")).unwrap();
        assert_eq!(js, r#"{"M":"1/2","gh":"1/2"}"#);
        let back: Lattice = serde_json::from_str(&js).unwrap();
        assert_eq!(back, lat("1/2,1/2"));
    }
}
