//! Adams operations on the representation ring `R(G)` of a finite group,
//! working only from character-table data and power maps.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, IntPolynomial};
use crate::error::{Error, Result};
use crate::hring::CyclotomicNumber;

const S3_JSON: &str = include_str!("../fixtures/s3.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassData {
    pub label: String,
    pub size: u64,
    /// `x -> x^p` for the primes `p` below the exponent, by label.
    #[serde(default)]
    pub power: BTreeMap<u64, String>,
}

/// A character value: an integer, or coordinates on `1, ζ_N, ζ_N^2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRepr {
    Int(i64),
    Cyclotomic(Vec<i64>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct TableRepr {
    #[serde(default)]
    name: String,
    exponent: u64,
    #[serde(default = "one_u64")]
    conductor: u64,
    classes: Vec<ClassData>,
    chars: Vec<Vec<ValueRepr>>,
}

fn one_u64() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct CharacterTable {
    name: String,
    exponent: u64,
    conductor: u64,
    classes: Vec<ClassData>,
    /// `power[p][i]` is the class of `x_i^p`.
    power: BTreeMap<u64, Vec<usize>>,
    chars: Vec<Vec<CyclotomicNumber>>,
    order: u64,
}

/// Integer coordinates in the basis of irreducible characters.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VirtualCharacter(pub Vec<i64>);

impl VirtualCharacter {
    /// The irreducible `χ_i`, 1-based as in the usual tables.
    pub fn irreducible(i: usize, h: usize) -> Self {
        let mut v = vec![0; h];
        v[i - 1] = 1;
        VirtualCharacter(v)
    }
}

fn value_of(v: &ValueRepr, n: u64) -> Result<CyclotomicNumber> {
    match v {
        ValueRepr::Int(c) => Ok(CyclotomicNumber::integer(n, *c)),
        ValueRepr::Cyclotomic(cs) => CyclotomicNumber::from_poly(n, IntPolynomial::from_i64(cs)),
    }
}

fn repr_of(v: &CyclotomicNumber) -> ValueRepr {
    match v.as_integer().and_then(|c| c.to_i64()) {
        Some(c) => ValueRepr::Int(c),
        None => ValueRepr::Cyclotomic(
            v.poly().coeffs().iter().map(|c| c.to_i64().unwrap_or(i64::MAX)).collect(),
        ),
    }
}

impl TryFrom<TableRepr> for CharacterTable {
    type Error = Error;
    fn try_from(r: TableRepr) -> Result<Self> {
        let h = r.classes.len();
        if h == 0 || r.exponent == 0 || r.conductor == 0 {
            return Err(Error::Parse("empty table".into()));
        }
        let index: BTreeMap<&str, usize> =
            r.classes.iter().enumerate().map(|(i, c)| (c.label.as_str(), i)).collect();
        let mut power: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
        for (i, c) in r.classes.iter().enumerate() {
            for (&p, target) in &c.power {
                let j = *index
                    .get(target.as_str())
                    .ok_or_else(|| Error::Parse(format!("unknown class {target:?}")))?;
                power.entry(p).or_insert_with(|| vec![usize::MAX; h])[i] = j;
            }
        }
        for (p, m) in &power {
            if m.contains(&usize::MAX) {
                return Err(Error::Parse(format!("power map for {p} is incomplete")));
            }
        }
        if r.chars.len() != h || r.chars.iter().any(|row| row.len() != h) {
            return Err(Error::Parse("character table must be square".into()));
        }
        let chars = r
            .chars
            .iter()
            .map(|row| row.iter().map(|v| value_of(v, r.conductor)).collect())
            .collect::<Result<Vec<Vec<_>>>>()?;
        let order = r.classes.iter().map(|c| c.size).sum();
        let t = CharacterTable {
            name: r.name,
            exponent: r.exponent,
            conductor: r.conductor,
            classes: r.classes,
            power,
            chars,
            order,
        };
        t.validate()?;
        Ok(t)
    }
}

impl From<CharacterTable> for TableRepr {
    fn from(t: CharacterTable) -> Self {
        TableRepr {
            name: t.name,
            exponent: t.exponent,
            conductor: t.conductor,
            classes: t.classes,
            chars: t.chars.iter().map(|row| row.iter().map(repr_of).collect()).collect(),
        }
    }
}

impl CharacterTable {
    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn s3() -> Self {
        CharacterTable::from_json(S3_JSON).expect("bundled table is valid")
    }

    pub fn trivial() -> Self {
        CharacterTable::cyclic(1).unwrap()
    }

    /// `C_n` with classes `g^k` and characters `χ_j(g^k) = ζ_n^{jk}`.
    pub fn cyclic(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("group order must be positive"));
        }
        let label = |k: u64| format!("g^{k}");
        let primes: Vec<u64> = (2..n).filter(|&p| crate::arith::is_prime(p as u128)).collect();
        let classes = (0..n)
            .map(|k| ClassData {
                label: label(k),
                size: 1,
                power: primes.iter().map(|&p| (p, label(p * k % n))).collect(),
            })
            .collect();
        let chars = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        let e = (j * k % n) as usize;
                        let mut cs = vec![0i64; e + 1];
                        cs[e] = 1;
                        if e == 0 {
                            ValueRepr::Int(1)
                        } else {
                            ValueRepr::Cyclotomic(cs)
                        }
                    })
                    .collect()
            })
            .collect();
        CharacterTable::try_from(TableRepr {
            name: format!("C{n}"),
            exponent: n,
            conductor: n,
            classes,
            chars,
        })
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// Number of conjugacy classes, which is also the number of irreducibles.
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.classes.iter().map(|c| c.label.as_str()).collect()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Tables list the identity class first.
    fn identity_class(&self) -> usize {
        0
    }

    /// Column orthogonality and power-map sanity.
    fn validate(&self) -> Result<()> {
        let h = self.class_count();
        for x in 0..h {
            for y in 0..h {
                let mut s = CyclotomicNumber::zero(self.conductor);
                for row in &self.chars {
                    s = &s + &(&row[x] * &row[y].conj());
                }
                let expect = if x == y { self.order / self.classes[x].size } else { 0 };
                if s.as_integer() != Some(BigInt::from(expect)) {
                    return Err(Error::Mismatch(format!(
                        "column orthogonality fails at classes {} and {}",
                        self.classes[x].label, self.classes[y].label
                    )));
                }
            }
        }
        for (p, m) in &self.power {
            if m[self.identity_class()] != self.identity_class() {
                return Err(Error::Mismatch(format!("power map {p} moves the identity class")));
            }
        }
        Ok(())
    }

    /// Class of `x^n` for every class `x`.
    pub fn power_map(&self, n: u64) -> Result<Vec<usize>> {
        if n == 0 {
            return Err(Error::domain("power must be positive"));
        }
        let h = self.class_count();
        let r = n % self.exponent;
        if r == 0 {
            return Ok(vec![self.identity_class(); h]);
        }
        let mut map: Vec<usize> = (0..h).collect();
        for &(p, e) in factorize(r)?.pairs() {
            let p = p as u64;
            let pm = self
                .power
                .get(&p)
                .ok_or_else(|| Error::Mismatch(format!("table has no {p}-power map")))?;
            for _ in 0..e {
                map = map.iter().map(|&i| pm[i]).collect();
            }
        }
        Ok(map)
    }

    /// Values of a virtual character on the classes.
    pub fn class_function(&self, chi: &VirtualCharacter) -> Result<Vec<CyclotomicNumber>> {
        let h = self.class_count();
        if chi.0.len() != h {
            return Err(Error::Mismatch(format!("expected {h} coordinates, got {}", chi.0.len())));
        }
        Ok((0..h)
            .map(|x| {
                let mut s = CyclotomicNumber::zero(self.conductor);
                for (c, row) in chi.0.iter().zip(&self.chars) {
                    if *c != 0 {
                        s = &s + &row[x].scale(&BigInt::from(*c));
                    }
                }
                s
            })
            .collect())
    }

    /// Coordinates of a class function: `<f, χ_i> = Σ |x| f(x) conj χ_i(x) / |G|`.
    pub fn decompose(&self, f: &[CyclotomicNumber]) -> Result<VirtualCharacter> {
        let g = BigInt::from(self.order);
        let mut coords = Vec::with_capacity(self.class_count());
        for (i, row) in self.chars.iter().enumerate() {
            let mut s = CyclotomicNumber::zero(self.conductor);
            for (x, class) in self.classes.iter().enumerate() {
                s = &s + &(&f[x] * &row[x].conj()).scale(&BigInt::from(class.size));
            }
            let c = s
                .div_exact(&g)
                .and_then(|v| v.as_integer())
                .and_then(|v| v.to_i64())
                .ok_or_else(|| {
                    Error::Mismatch(format!("class function has non-integral coordinate on χ_{}", i + 1))
                })?;
            coords.push(c);
        }
        Ok(VirtualCharacter(coords))
    }

    /// Pointwise product of virtual characters.
    pub fn multiply(&self, a: &VirtualCharacter, b: &VirtualCharacter) -> Result<VirtualCharacter> {
        let fa = self.class_function(a)?;
        let fb = self.class_function(b)?;
        let prod: Vec<CyclotomicNumber> = fa.iter().zip(&fb).map(|(x, y)| x * y).collect();
        self.decompose(&prod)
    }
}

/// `Ψ^n(χ)(g) = χ(g^n)`, decomposed in the irreducible basis.
pub fn adams(n: u64, chi: &VirtualCharacter, t: &CharacterTable) -> Result<VirtualCharacter> {
    let values = t.class_function(chi)?;
    let map = t.power_map(n)?;
    let shifted: Vec<CyclotomicNumber> = map.iter().map(|&j| values[j].clone()).collect();
    t.decompose(&shifted)
}

/// `(#G)^{#X} / ∏ #x`.
pub fn discriminant(t: &CharacterTable) -> BigRational {
    let num = BigInt::from(t.order()).pow(t.class_count() as u32);
    let den = t
        .classes
        .iter()
        .fold(BigInt::one(), |acc, c| acc * BigInt::from(c.size));
    BigRational::new(num, den)
}

/// The action `n.[x] = [x] ∘ Ψ^n` on algebra maps, i.e. `x -> x^n` on classes.
pub fn monoid_action(n: u64, t: &CharacterTable) -> Result<Vec<usize>> {
    t.power_map(n)
}

/// `n.S`, the image of the action, as class indices.
pub fn stable_set(n: u64, t: &CharacterTable) -> Result<BTreeSet<usize>> {
    Ok(monoid_action(n, t)?.into_iter().collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConductorData {
    pub r0: u64,
    /// `a_p` for each prime `p` dividing the discriminant.
    pub exponents: BTreeMap<u64, u32>,
    /// `d.S` for every divisor `d` of `r_0`, by class label.
    pub stable_sets: BTreeMap<u64, Vec<String>>,
}

/// `r_0 = ∏ p^{a_p}` with `a_p` least such that `p^{a_p + 1}.S = p^{a_p}.S`.
pub fn conductor_data(t: &CharacterTable) -> Result<ConductorData> {
    let disc = discriminant(t);
    let num = disc.numer().to_u64();
    let den = disc.denom().to_u64();
    let mut primes = BTreeSet::new();
    for part in [num, den] {
        let v = part.ok_or_else(|| Error::Size("discriminant exceeds 64 bits".into()))?;
        primes.extend(factorize(v)?.primes().map(|p| p as u64));
    }
    let mut r0 = 1u64;
    let mut exponents = BTreeMap::new();
    for p in primes {
        let mut a = 0u32;
        let mut pa = 1u64;
        loop {
            let cur = stable_set(pa, t)?;
            let next = stable_set(pa * p, t)?;
            if cur == next {
                break;
            }
            a += 1;
            pa *= p;
        }
        if a > 0 {
            exponents.insert(p, a);
        }
        r0 *= pa;
    }
    let labels = t.labels();
    let mut stable_sets = BTreeMap::new();
    for d in (1..=r0).filter(|d| r0.is_multiple_of(*d)) {
        let s = stable_set(d, t)?;
        stable_sets.insert(d, s.into_iter().map(|i| labels[i].to_string()).collect());
    }
    Ok(ConductorData {
        r0,
        exponents,
        stable_sets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi(v: &[i64]) -> VirtualCharacter {
        VirtualCharacter(v.to_vec())
    }

    #[test]
    fn s3_adams() {
        let t = CharacterTable::s3();
        assert_eq!(adams(2, &chi(&[0, 0, 1]), &t).unwrap(), chi(&[1, -1, 1]));
        assert_eq!(adams(3, &chi(&[0, 0, 1]), &t).unwrap(), chi(&[1, 1, 0]));
        assert_eq!(adams(2, &chi(&[0, 1, 0]), &t).unwrap(), chi(&[1, 0, 0]));
        for n in 1..20 {
            assert_eq!(adams(n, &chi(&[1, 0, 0]), &t).unwrap(), chi(&[1, 0, 0]));
        }
        assert_eq!(adams(5, &chi(&[0, 0, 1]), &t).unwrap(), chi(&[0, 0, 1]));
    }

    #[test]
    fn discriminants() {
        assert_eq!(discriminant(&CharacterTable::s3()), BigRational::from_integer(36.into()));
        assert_eq!(discriminant(&CharacterTable::trivial()), BigRational::one());
        assert_eq!(
            discriminant(&CharacterTable::cyclic(2).unwrap()),
            BigRational::from_integer(4.into())
        );
    }

    #[test]
    fn stable_sets_and_conductor() {
        let t = CharacterTable::s3();
        let s = |n| stable_set(n, &t).unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(s(1), vec![0, 1, 2]);
        assert_eq!(s(2), vec![0, 2]);
        assert_eq!(s(4), vec![0, 2]);
        assert_eq!(s(3), vec![0, 1]);
        assert_eq!(s(6), vec![0]);
        assert_eq!(conductor_data(&t).unwrap().r0, 6);
        assert_eq!(conductor_data(&CharacterTable::trivial()).unwrap().r0, 1);
        assert_eq!(conductor_data(&CharacterTable::cyclic(3).unwrap()).unwrap().r0, 3);
    }

    #[test]
    fn cyclic_tables() {
        let t = CharacterTable::cyclic(5).unwrap();
        // Ψ^2 sends χ_1 (ζ^k) to χ_2 (ζ^{2k})
        assert_eq!(
            adams(2, &VirtualCharacter::irreducible(2, 5), &t).unwrap(),
            VirtualCharacter::irreducible(3, 5)
        );
        let js = t.to_json().unwrap();
        assert_eq!(CharacterTable::from_json(&js).unwrap(), t);
    }

    #[test]
    fn bad_tables() {
        let bad = S3_JSON.replace("[2, 0, -1]", "[2, 0, 1]");
        assert!(CharacterTable::from_json(&bad).is_err());
    }
}
