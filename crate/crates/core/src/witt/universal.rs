//! Universal polynomials for the product of big Witt vectors.
//!
//! `c_n(a_1..a_n, b_1..b_n)` is the `n`-th coefficient of
//! `(1 + Σ a_i t^i) ⊗ (1 + Σ b_j t^j)`. It has integer coefficients, so it
//! can be evaluated over any ring; here it is used for `F_p`.
//!
//! The polynomials are built once from the ghost recursion over `Z` and
//! kept in a process-wide cache. When `ABSARITH_CACHE_DIR` is set they are
//! also persisted there as JSON.

use std::collections::HashMap;
use std::path::PathBuf;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest precision for which universal polynomials are generated.
pub const MAX_PRECISION: usize = 16;

const VARS: usize = 2 * MAX_PRECISION;
const CACHE_VERSION: u32 = 1;

type Monomial = [u8; VARS];

/// Sparse integer polynomial in `a_1..a_16, b_1..b_16`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct UniversalPoly {
    terms: HashMap<Monomial, BigInt>,
}

impl UniversalPoly {
    fn var(i: usize) -> Self {
        let mut m = [0u8; VARS];
        m[i] = 1;
        UniversalPoly {
            terms: HashMap::from([(m, BigInt::from(1))]),
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_scaled(&mut self, other: &UniversalPoly, c: &BigInt) {
        for (m, v) in &other.terms {
            self.add_term(*m, v * c);
        }
    }

    fn add_term(&mut self, m: Monomial, v: BigInt) {
        let slot = self.terms.entry(m).or_default();
        *slot += v;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    fn mul(&self, other: &UniversalPoly) -> UniversalPoly {
        let mut out = UniversalPoly::default();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let mut m = *m1;
                for (x, y) in m.iter_mut().zip(m2) {
                    *x += y;
                }
                out.add_term(m, c1 * c2);
            }
        }
        out
    }

    fn div_exact(&mut self, d: u64) -> Result<()> {
        let d = BigInt::from(d);
        for c in self.terms.values_mut() {
            let (q, r) = c.div_rem(&d);
            if !r.is_zero() {
                return Err(Error::Integrality {
                    index: 0,
                    detail: format!("universal coefficient {c} not divisible by {d}"),
                });
            }
            *c = q;
        }
        Ok(())
    }

    /// Evaluate modulo `p` at `a`, `b` (each of length at least the degree index).
    pub fn eval_mod(&self, pow_a: &[Vec<u64>], pow_b: &[Vec<u64>], p: u64) -> u64 {
        let pb = BigInt::from(p);
        let mut acc: u128 = 0;
        let p128 = p as u128;
        for (m, c) in &self.terms {
            let mut v = c.mod_floor(&pb).to_u64().unwrap() as u128;
            for (i, &e) in m.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = if i < MAX_PRECISION {
                    &pow_a[i]
                } else {
                    &pow_b[i - MAX_PRECISION]
                };
                v = v * table[e as usize] as u128 % p128;
                if v == 0 {
                    break;
                }
            }
            acc = (acc + v) % p128;
        }
        acc as u64
    }
}

#[derive(Default)]
struct Cache {
    /// `c_1, c_2, ...` computed so far.
    products: Vec<UniversalPoly>,
    /// Ghost components `γ_k(a)`, `γ_k(b)` used to extend.
    ghost_a: Vec<UniversalPoly>,
    ghost_b: Vec<UniversalPoly>,
}

fn cache() -> &'static RwLock<Cache> {
    static CACHE: OnceLock<RwLock<Cache>> = OnceLock::new();
    CACHE.get_or_init(|| RwLock::new(Cache::default()))
}

fn ghost_poly(prev: &[UniversalPoly], offset: usize) -> UniversalPoly {
    // γ_k = k a_k - Σ_{i<k} γ_i a_{k-i}
    let k = prev.len() + 1;
    let mut g = UniversalPoly::default();
    g.add_scaled(&UniversalPoly::var(offset + k - 1), &BigInt::from(k));
    for i in 1..k {
        let t = prev[i - 1].mul(&UniversalPoly::var(offset + k - i - 1));
        g.add_scaled(&t, &BigInt::from(-1));
    }
    g
}

impl Cache {
    fn extend_to(&mut self, n: usize) -> Result<()> {
        while self.ghost_a.len() < n {
            let g = ghost_poly(&self.ghost_a, 0);
            self.ghost_a.push(g);
            let g = ghost_poly(&self.ghost_b, MAX_PRECISION);
            self.ghost_b.push(g);
        }
        while self.products.len() < n {
            // c_n = (Σ_{k=1}^n g_k c_{n-k}) / n with g_k = γ_k(a) γ_k(b), c_0 = 1.
            let n = self.products.len() + 1;
            let mut acc = UniversalPoly::default();
            for k in 1..=n {
                let gk = self.ghost_a[k - 1].mul(&self.ghost_b[k - 1]);
                if k == n {
                    acc.add_scaled(&gk, &BigInt::from(1));
                } else {
                    acc.add_scaled(&gk.mul(&self.products[n - k - 1]), &BigInt::from(1));
                }
            }
            acc.div_exact(n as u64)?;
            self.products.push(acc);
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct CacheFile {
    version: u32,
    vars: usize,
    /// One entry per `c_n`: a list of `(exponents, coefficient)`.
    polys: Vec<Vec<(Vec<u8>, String)>>,
}

fn cache_path() -> Option<PathBuf> {
    std::env::var_os("ABSARITH_CACHE_DIR").map(|d| PathBuf::from(d).join("witt_universal_v1.json"))
}

fn load_disk(c: &mut Cache) {
    let Some(path) = cache_path() else { return };
    let Ok(text) = std::fs::read_to_string(&path) else { return };
    let Ok(file) = serde_json::from_str::<CacheFile>(&text) else { return };
    if file.version != CACHE_VERSION || file.vars != VARS || file.polys.len() <= c.products.len() {
        return;
    }
    let mut products = Vec::with_capacity(file.polys.len());
    for poly in file.polys {
        let mut p = UniversalPoly::default();
        for (exps, coeff) in poly {
            let (Ok(m), Ok(v)) = (<Monomial>::try_from(exps.as_slice()), coeff.parse::<BigInt>()) else {
                return;
            };
            p.add_term(m, v);
        }
        products.push(p);
    }
    c.products = products;
}

fn store_disk(c: &Cache) {
    let Some(path) = cache_path() else { return };
    let file = CacheFile {
        version: CACHE_VERSION,
        vars: VARS,
        polys: c
            .products
            .iter()
            .map(|p| {
                let mut terms: Vec<_> =
                    p.terms.iter().map(|(m, v)| (m.to_vec(), v.to_string())).collect();
                terms.sort();
                terms
            })
            .collect(),
    };
    if let Some(dir) = path.parent() {
        let _ = std::fs::create_dir_all(dir);
    }
    if let Ok(text) = serde_json::to_string(&file) {
        let tmp = path.with_extension("tmp");
        if std::fs::write(&tmp, text).is_ok() {
            let _ = std::fs::rename(&tmp, &path);
        }
    }
}

/// Make sure `c_1..c_n` are available.
pub fn ensure(n: usize) -> Result<()> {
    if n > MAX_PRECISION {
        return Err(Error::Size(format!(
            "universal Witt polynomials are limited to precision {MAX_PRECISION}, asked for {n}"
        )));
    }
    if cache().read().unwrap().products.len() >= n {
        return Ok(());
    }
    let mut c = cache().write().unwrap();
    if c.products.len() >= n {
        return Ok(());
    }
    load_disk(&mut c);
    if c.products.len() >= n {
        return Ok(());
    }
    // Disk copy may have filled `products` without the ghost helpers.
    let keep = c.products.len().min(c.ghost_a.len());
    c.products.truncate(keep);
    c.extend_to(n)?;
    store_disk(&c);
    Ok(())
}

/// The polynomial `c_n`, `1 <= n <= 16`.
pub fn product_poly(n: usize) -> Result<UniversalPoly> {
    if n == 0 {
        return Err(Error::domain("index must be positive"));
    }
    ensure(n)?;
    Ok(cache().read().unwrap().products[n - 1].clone())
}

fn power_table(x: u64, p: u64, n: usize) -> Vec<u64> {
    let mut t = Vec::with_capacity(n + 1);
    let mut v = 1u64 % p;
    for _ in 0..=n {
        t.push(v);
        v = ((v as u128 * x as u128) % p as u128) as u64;
    }
    t
}

/// Witt product over `F_p` of two coefficient vectors of equal length.
pub fn multiply_mod_p(a: &[BigInt], b: &[BigInt], p: u64) -> Result<Vec<BigInt>> {
    let n = a.len();
    if b.len() != n {
        return Err(Error::Mismatch(format!("precisions {} and {}", n, b.len())));
    }
    ensure(n)?;
    let pb = BigInt::from(p);
    let red = |v: &[BigInt]| -> Vec<Vec<u64>> {
        let mut tables: Vec<Vec<u64>> = v
            .iter()
            .map(|x| power_table(x.mod_floor(&pb).to_u64().unwrap(), p, n))
            .collect();
        tables.resize(MAX_PRECISION, vec![1; n + 1]);
        tables
    };
    let pa = red(a);
    let pbv = red(b);
    let guard = cache().read().unwrap();
    Ok(guard.products[..n]
        .iter()
        .map(|c| BigInt::from(c.eval_mod(&pa, &pbv, p)))
        .collect())
}
