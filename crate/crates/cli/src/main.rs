mod output;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use absarith::adams::{self, CharacterTable, VirtualCharacter};
use absarith::arith::FactorBudget;
use absarith::bigpicture::{self as bp, BcGenerator, Lattice, LatticeSum};
use absarith::habiro::{self, HabiroOpen, P1Point, RootOfUnity};
use absarith::hring;
use absarith::nimber;
use absarith::smirnov::{self, RationalMap, SpecZPoint};
use absarith::witt::burnside::{self, BurnsideVector};
use absarith::witt::{self, AdamsSequence, Ring, WittVector};

use output::{sig17, CliError, CliResult, Format, Output};
use render::SvgConfig;

#[derive(Parser)]
#[command(name = "absarith", version, about = "Exact arithmetic over F1-flavoured number theory")]
struct Cli {
    /// Output format; each subcommand supports a subset.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Enumeration bound (primes for graphs, points for opens).
    #[arg(long, global = true, env = "ABSARITH_BOUND")]
    bound: Option<u64>,
    /// Witt / Burnside precision N.
    #[arg(long, global = true, env = "ABSARITH_PRECISION")]
    precision: Option<usize>,
    /// Effort budget: rho iterations for factoring, vertex count for balls.
    #[arg(long, global = true, env = "ABSARITH_BUDGET")]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Smirnov maps q: Spec Z -> P^1 over F1.
    #[command(subcommand)]
    Smirnov(SmirnovCmd),
    /// Habiro topology on P^1 over F1.
    #[command(subcommand)]
    Habiro(HabiroCmd),
    /// Habiro ring elements and the Kontsevich-Zagier series.
    #[command(subcommand)]
    Hring(HringCmd),
    /// Big Witt vectors.
    #[command(subcommand)]
    Witt(WittCmd),
    /// Burnside ring of the infinite cyclic group and necklaces.
    #[command(subcommand)]
    Burnside(BurnsideCmd),
    /// Conway's big picture of commensurable lattices.
    #[command(subcommand)]
    Bigpicture(BigpictureCmd),
    /// Finite nimbers.
    #[command(subcommand)]
    Nimber(NimberCmd),
    /// Adams operations on character tables.
    #[command(subcommand)]
    Adams(AdamsCmd),
}

#[derive(Subcommand)]
enum SmirnovCmd {
    /// Image of a prime (or `inf`).
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        q: RationalMap,
        #[arg(long, value_parser = parse_place)]
        p: SpecZPoint,
    },
    /// Preimage of a point `0`, `inf` or `n`.
    Fiber {
        #[arg(long, allow_hyphen_values = true)]
        q: RationalMap,
        #[arg(long)]
        n: P1Point,
    },
    /// `(p, q(p))` for primes up to --bound (default 1000).
    Graph {
        #[arg(long, allow_hyphen_values = true)]
        q: RationalMap,
    },
    /// Principal divisor of q.
    Divisor {
        #[arg(long, allow_hyphen_values = true)]
        q: RationalMap,
    },
    /// Defect of a prime (--p) or summed over a fiber (--n).
    Defect {
        #[arg(long, allow_hyphen_values = true)]
        q: RationalMap,
        #[arg(long, conflicts_with = "p", required_unless_present = "p")]
        n: Option<P1Point>,
        #[arg(long)]
        p: Option<u128>,
    },
    /// Defect bookkeeping for a + b = c.
    Abc {
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
}

#[derive(Subcommand)]
enum HabiroCmd {
    /// The open U_m, or the complement of --exclude.
    Open {
        #[arg(long, required_unless_present = "exclude")]
        m: Option<u64>,
        #[arg(long, value_delimiter = ',', conflicts_with = "m")]
        exclude: Vec<u64>,
        /// Adjoin [0] and [inf].
        #[arg(long)]
        boundary: bool,
    },
    /// Adjacency graph on the N-th roots of unity.
    Wheel {
        #[arg(long, default_value_t = 60)]
        n: u64,
    },
    /// A point outside every U_p for the listed primes.
    Witness {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
    },
}

#[derive(Subcommand)]
enum HringCmd {
    /// Value at a root of unity of the Kontsevich element, or of --coeffs expanded in the [n!] basis.
    Eval {
        #[arg(long)]
        root: RootOfUnity,
        /// Polynomial coefficients, constant term first.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        coeffs: Option<Vec<i64>>,
        #[arg(long)]
        level: Option<usize>,
    },
    /// Radial approach of the Zagier series to the exact value.
    Zagier {
        #[arg(long)]
        root: RootOfUnity,
        #[arg(long, value_delimiter = ',', default_value = "0.9,0.99,0.999")]
        r: Vec<f64>,
    },
}

#[derive(clap::Args)]
struct OneVector {
    #[arg(long, default_value = "Z")]
    ring: Ring,
    /// Coefficients a_1, ..., a_N.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    u: Vec<BigRational>,
}

#[derive(clap::Args)]
struct TwoVectors {
    #[command(flatten)]
    first: OneVector,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    v: Vec<BigRational>,
}

#[derive(Subcommand)]
enum WittCmd {
    Add(TwoVectors),
    Mul(TwoVectors),
    Ghost(OneVector),
    /// Frobenius Ψ^n.
    Frob {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        vec: OneVector,
    },
    /// Verschiebung V_n.
    Versch {
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        vec: OneVector,
    },
    /// σ_t of an Adams sequence Ψ^1(a), ..., Ψ^N(a).
    Sigma {
        #[arg(long, default_value = "Z")]
        ring: Ring,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        values: Vec<BigRational>,
    },
}

#[derive(Subcommand)]
enum BurnsideCmd {
    /// Coordinates of ∏ 1/(1 - q_n t^n).
    Tau {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        q: Vec<BigInt>,
    },
    /// Burnside coordinates to a Witt vector (--b) or back (--u).
    Convert {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "u", required_unless_present = "u")]
        b: Option<Vec<BigInt>>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        u: Option<Vec<BigInt>>,
    },
    /// Necklace product.
    Necklace {
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        b: Vec<BigInt>,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        c: Vec<BigInt>,
    },
}

#[derive(Subcommand)]
enum BigpictureCmd {
    /// Hyperdistance of two lattices written `M` or `M,g/h`.
    Dist { l: Lattice, k: Lattice },
    /// The p + 1 neighbours; with --depth > 1, the p-tree.
    Neighbors {
        l: Lattice,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = 1)]
        depth: usize,
    },
    /// All lattices at hyperdistance exactly n.
    Ball {
        l: Lattice,
        #[arg(long)]
        n: u64,
    },
    /// Hecke operator T_n on a vertex.
    Hecke {
        l: Lattice,
        #[arg(long)]
        n: u64,
    },
    /// Bost-Connes generator `e:n`, `estar:n` or `char:a/b` on a vertex.
    Bc {
        l: Lattice,
        #[arg(long, value_parser = parse_generator)]
        generator: BcGenerator,
    },
}

#[derive(Subcommand)]
enum NimberCmd {
    Mul { a: u64, b: u64 },
    Pow { a: u64, e: u64 },
    /// Multiplicative order of a nonzero nimber.
    Order { a: u64 },
    /// The root of unity e/(2^(2^k) - 1) with a = g_k^e.
    Root { a: u64 },
    /// Frobenius orbit a, a^2, a^4, ...
    Orbit { a: u64 },
    /// Minimal polynomial over F_2; with --level, the whole dictionary.
    Poly {
        #[arg(required_unless_present = "level")]
        a: Option<u64>,
        #[arg(long, conflicts_with = "a")]
        level: Option<u32>,
    },
    /// Generator of level k of the tower.
    Tower { k: u32 },
}

#[derive(clap::Args)]
struct TableArg {
    /// Character table JSON; S3 when omitted.
    #[arg(long)]
    table: Option<PathBuf>,
}

#[derive(Subcommand)]
enum AdamsCmd {
    /// Ψ^n of a virtual character given by coordinates.
    Apply {
        #[arg(long)]
        n: u64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        chi: Vec<i64>,
        #[command(flatten)]
        table: TableArg,
    },
    /// The class map x -> x^n and its image n.S.
    Action {
        #[arg(long)]
        n: u64,
        #[command(flatten)]
        table: TableArg,
    },
    /// Discriminant and conductor r_0.
    Disc {
        #[command(flatten)]
        table: TableArg,
    },
}

fn parse_place(s: &str) -> Result<SpecZPoint, String> {
    if s == "inf" {
        return Ok(SpecZPoint::Infinity);
    }
    let p: u128 = s.parse().map_err(|_| format!("expected a prime or inf, got {s:?}"))?;
    SpecZPoint::prime(p).map_err(|e| e.to_string())
}

fn parse_generator(s: &str) -> Result<BcGenerator, String> {
    let (kind, arg) = s.split_once(':').ok_or("expected e:n, estar:n or char:a/b")?;
    let bad = |e: &dyn std::fmt::Display| format!("bad generator argument {arg:?}: {e}");
    match kind {
        "e" => arg.parse().map(BcGenerator::E).map_err(|e| bad(&e)),
        "estar" => arg.parse().map(BcGenerator::EStar).map_err(|e| bad(&e)),
        "char" => arg.parse::<BigRational>().map(BcGenerator::Char).map_err(|e| bad(&e)),
        _ => Err(format!("unknown generator kind {kind:?}")),
    }
}

struct Ctx {
    bound: Option<u64>,
    precision: Option<usize>,
    budget: Option<u64>,
}

impl Ctx {
    fn factor_budget(&self) -> FactorBudget {
        match self.budget {
            Some(b) => FactorBudget { rho_iterations: b },
            None => FactorBudget::default(),
        }
    }

    fn ball_budget(&self) -> u64 {
        self.budget.unwrap_or(bp::DEFAULT_BALL_BUDGET)
    }

    fn resize<T: Clone>(&self, mut v: Vec<T>, zero: T) -> CliResult<Vec<T>> {
        if let Some(n) = self.precision {
            v.resize(n, zero);
        }
        if v.is_empty() {
            return Err(CliError::Usage("precision must be at least 1".into()));
        }
        Ok(v)
    }

    fn witt(&self, ring: Ring, u: Vec<BigRational>) -> CliResult<WittVector> {
        let u = self.resize(u, BigRational::from_integer(BigInt::from(0)))?;
        Ok(WittVector::new(ring, u)?)
    }
}

fn list<T: ToString>(v: &[T]) -> String {
    v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn witt_output(u: &WittVector) -> CliResult<Output> {
    let coeffs: Vec<String> = u.coeffs().iter().map(|c| c.to_string()).collect();
    Output::default()
        .text(coeffs.join(","))
        .csv(&["n", "a_n"], coeffs.iter().enumerate().map(|(i, c)| [(i + 1).to_string(), c.clone()]))?
        .json(u)
}

fn burnside_output(b: &BurnsideVector) -> CliResult<Output> {
    let coeffs: Vec<String> = (1..=b.precision()).map(|i| b.get(i).to_string()).collect();
    Output::default()
        .text(coeffs.join(","))
        .csv(&["n", "b_n"], coeffs.iter().enumerate().map(|(i, c)| [(i + 1).to_string(), c.clone()]))?
        .json(b)
}

fn lattices_output(ls: &[Lattice]) -> CliResult<Output> {
    let text: Vec<String> = ls.iter().map(|l| l.to_string()).collect();
    Output::default()
        .text(text.join("\n"))
        .csv(&["M", "gh"], ls.iter().map(|l| [l.m().to_string(), l.gh().to_string()]))?
        .json(&ls)
}

fn sum_output(s: &LatticeSum) -> CliResult<Output> {
    Output::default()
        .text(s.to_string())
        .csv(
            &["M", "gh", "c"],
            s.terms().iter().map(|(l, c)| [l.m().to_string(), l.gh().to_string(), c.to_string()]),
        )?
        .json(s)
}

fn load_table(t: &TableArg) -> CliResult<CharacterTable> {
    match &t.table {
        Some(p) => Ok(CharacterTable::from_json(&std::fs::read_to_string(p)?)?),
        None => Ok(CharacterTable::s3()),
    }
}

#[derive(Serialize, Deserialize)]
struct DefectReport {
    q: RationalMap,
    at: String,
    numerator: smirnov::FormalDegree,
    denominator: smirnov::FormalDegree,
    value: f64,
}

#[derive(Serialize, Deserialize)]
struct Distance {
    #[serde(with = "string")]
    hyperdistance: BigInt,
    log: f64,
}

#[derive(Serialize, Deserialize)]
struct ZagierRow {
    r: f64,
    error: f64,
    rhs: hring::ZagierSum,
}

#[derive(Serialize, Deserialize)]
struct ClassAction {
    n: u64,
    map: Vec<String>,
    stable: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct Discriminant {
    discriminant: String,
    conductor: adams::ConductorData,
}

mod string {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(v)
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<T, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        String::deserialize(d)?.parse().map_err(D::Error::custom)
    }
}

fn smirnov_cmd(cmd: SmirnovCmd, ctx: &Ctx) -> CliResult<Output> {
    match cmd {
        SmirnovCmd::Eval { q, p } => {
            let pt = smirnov::evaluate(&q, p)?;
            Output::default().text(pt.to_string()).json(&pt)
        }
        SmirnovCmd::Fiber { q, n } => {
            let f = smirnov::fiber_with(&q, n, ctx.factor_budget())?;
            let points: Vec<String> = f.points().iter().map(|p| p.to_string()).collect();
            Output::default()
                .text(if points.is_empty() { "empty".to_string() } else { points.join(",") })
                .csv(&["point"], points.iter().map(|p| [p.clone()]))?
                .json(&f)
        }
        SmirnovCmd::Graph { q } => {
            let bound = ctx.bound.unwrap_or(1000);
            let pts = smirnov::graph_scan(&q, bound)?;
            let rows: Vec<[String; 2]> = pts.iter().map(|(p, pt)| [p.to_string(), pt.to_string()]).collect();
            let svg = render::render_smirnov_svg(&format!("graph of q = {q} for p <= {bound}"), &pts, &SvgConfig::default());
            Ok(Output::default()
                .text(rows.iter().map(|r| format!("{} {}", r[0], r[1])).collect::<Vec<_>>().join("\n"))
                .csv(&["p", "point"], rows)?
                .json(&pts)?
                .svg(svg))
        }
        SmirnovCmd::Divisor { q } => {
            let d = smirnov::divisor_of(&q)?;
            Output::default().text(d.to_string()).json(&d)
        }
        SmirnovCmd::Defect { q, n, p } => {
            let (at, numerator, denominator, value) = match (n, p) {
                (Some(pt), _) => {
                    let num = smirnov::fiber_defect_exact(&q, pt)?;
                    let den = smirnov::FormalDegree::log_of(q.a().unsigned_abs() as u128)?;
                    (pt.to_string(), num, den, smirnov::fiber_defect(&q, pt)?)
                }
                (None, Some(p)) => {
                    let (num, den) = smirnov::defect_exact(&q, p)?;
                    (p.to_string(), num, den, smirnov::defect(&q, p)?)
                }
                (None, None) => unreachable!("clap requires one of --n, --p"),
            };
            let r = DefectReport { q, at, numerator, denominator, value };
            Output::default()
                .text(format!("{} = ({}) / ({})", sig17(r.value), r.numerator, r.denominator))
                .csv(&["q", "at", "defect"], [[r.q.to_string(), r.at.clone(), sig17(r.value)]])?
                .json(&r)
        }
        SmirnovCmd::Abc { a, b } => {
            let c = a.checked_add(b).ok_or_else(|| absarith::Error::Size("a + b overflows".into()))?;
            let r = smirnov::abc_report(a, b, c)?;
            let text = format!(
                "{a} + {b} = {c}\nrad = {}\nc/rad = {} ({})\ndelta[0] = {}\ndelta[1] = {}\ndelta[inf] = {} (grouping of log(q) - 1 ambiguous)",
                r.radical,
                r.ratio_exact,
                sig17(r.ratio),
                sig17(r.delta_zero),
                sig17(r.delta_one),
                sig17(r.delta_infinity)
            );
            Output::default().text(text).json(&r)
        }
    }
}

fn habiro_cmd(cmd: HabiroCmd, ctx: &Ctx) -> CliResult<Output> {
    match cmd {
        HabiroCmd::Open { m, exclude, boundary } => {
            let mut open = match m {
                Some(m) => HabiroOpen::basic(m)?,
                None => HabiroOpen::cofinite(exclude),
            };
            if boundary {
                open = open.with_boundary();
            }
            let bound = ctx.bound.unwrap_or(100);
            let mut members: Vec<P1Point> = Vec::new();
            for pt in [P1Point::Zero, P1Point::Infinity] {
                if open.contains(&pt) {
                    members.push(pt);
                }
            }
            members.extend((1..=bound).map(P1Point::Finite).filter(|pt| open.contains(pt)));
            let names: Vec<String> = members.iter().map(|p| p.to_string()).collect();
            Output::default()
                .text(names.join(","))
                .csv(&["point"], names.iter().map(|n| [n.clone()]))?
                .json(&open)
        }
        HabiroCmd::Wheel { n } => {
            let w = habiro::adjacency_wheel(n)?;
            let rows: Vec<[String; 3]> = w
                .edges
                .iter()
                .map(|&(i, j, p)| [w.vertices[i].to_string(), w.vertices[j].to_string(), p.to_string()])
                .collect();
            Ok(Output::default()
                .text(rows.iter().map(|r| format!("{} ~ {} ({})", r[0], r[1], r[2])).collect::<Vec<_>>().join("\n"))
                .csv(&["x", "y", "p"], rows)?
                .json(&w)?
                .svg(render::render_wheel_svg(&w, &SvgConfig::default()))
                .dot(render::wheel_dot(&w)))
        }
        HabiroCmd::Witness { primes } => {
            let w = habiro::noncompactness_witness(&primes)?;
            Output::default().text(format!("[{}]", w.point)).json(&w)
        }
    }
}

fn hring_cmd(cmd: HringCmd, ctx: &Ctx) -> CliResult<Output> {
    match cmd {
        HringCmd::Eval { root, coeffs, level } => {
            let level = level.or(ctx.precision).unwrap_or(root.order().max(1) as usize);
            let e = match coeffs {
                Some(c) => hring::to_factorial_basis(&absarith::arith::IntPolynomial::from_i64(&c), level)?,
                None => hring::kontsevich_element(level)?,
            };
            let v = hring::evaluate_at_root(&e, &root);
            Output::default().text(v.to_string()).json(&v)
        }
        HringCmd::Zagier { root, r } => {
            let lhs = hring::evaluate_at_root(&hring::kontsevich_element(root.order() as usize)?, &root).to_complex();
            let rows: Vec<ZagierRow> = r
                .iter()
                .map(|&r| {
                    let rhs = hring::zagier_rhs_radial(r, &root, None)?;
                    Ok(ZagierRow { r, error: (rhs.value() - lhs).norm(), rhs })
                })
                .collect::<absarith::Result<_>>()?;
            let table: Vec<[String; 3]> =
                rows.iter().map(|z| [z.r.to_string(), sig17(z.error), z.rhs.last_n.to_string()]).collect();
            Output::default()
                .text(table.iter().map(|t| t.join(" ")).collect::<Vec<_>>().join("\n"))
                .csv(&["r", "abs_error", "terms"], table)?
                .json(&rows)
        }
    }
}

fn witt_cmd(cmd: WittCmd, ctx: &Ctx) -> CliResult<Output> {
    let pair = |t: TwoVectors| -> CliResult<(WittVector, WittVector)> {
        let u = ctx.witt(t.first.ring, t.first.u)?;
        let v = ctx.witt(t.first.ring, t.v)?;
        Ok((u, v))
    };
    match cmd {
        WittCmd::Add(t) => {
            let (u, v) = pair(t)?;
            witt_output(&witt::witt_add(&u, &v)?)
        }
        WittCmd::Mul(t) => {
            let (u, v) = pair(t)?;
            witt_output(&witt::witt_mul(&u, &v)?)
        }
        WittCmd::Ghost(o) => {
            let g = witt::ghost(&ctx.witt(o.ring, o.u)?);
            Output::default().text(list(&g.comps)).json(&g)
        }
        WittCmd::Frob { n, vec } => witt_output(&witt::frobenius(n, &ctx.witt(vec.ring, vec.u)?)?),
        WittCmd::Versch { n, vec } => witt_output(&witt::verschiebung(n, &ctx.witt(vec.ring, vec.u)?)?),
        WittCmd::Sigma { ring, values } => {
            let values = ctx.resize(values, BigRational::from_integer(BigInt::from(0)))?;
            witt_output(&witt::sigma_t(&AdamsSequence { ring, values })?)
        }
    }
}

fn burnside_cmd(cmd: BurnsideCmd, ctx: &Ctx) -> CliResult<Output> {
    let zero = BigInt::from(0);
    match cmd {
        BurnsideCmd::Tau { q } => burnside_output(&burnside::tau(&ctx.resize(q, zero)?)?),
        BurnsideCmd::Convert { b: Some(b), .. } => {
            witt_output(&burnside::burnside_to_witt(&BurnsideVector::new(ctx.resize(b, zero)?)))
        }
        BurnsideCmd::Convert { u: Some(u), .. } => {
            let u = ctx.witt(Ring::Z, u.into_iter().map(BigRational::from_integer).collect())?;
            burnside_output(&burnside::witt_to_burnside(&u)?)
        }
        BurnsideCmd::Convert { .. } => unreachable!("clap requires one of --b, --u"),
        BurnsideCmd::Necklace { b, c } => {
            let b = BurnsideVector::new(ctx.resize(b, zero.clone())?);
            let c = BurnsideVector::new(ctx.resize(c, zero)?);
            burnside_output(&burnside::necklace_mul(&b, &c)?)
        }
    }
}

fn bigpicture_cmd(cmd: BigpictureCmd, ctx: &Ctx) -> CliResult<Output> {
    match cmd {
        BigpictureCmd::Dist { l, k } => {
            let d = Distance { hyperdistance: bp::hyperdistance(&l, &k), log: bp::log_distance(&l, &k) };
            Output::default().text(d.hyperdistance.to_string()).json(&d)
        }
        BigpictureCmd::Neighbors { l, p, depth } => {
            let tree = bp::p_tree(&l, p, depth)?;
            let out = if depth == 1 {
                lattices_output(&bp::neighbors(&l, p)?)?
            } else {
                lattices_output(&tree.vertices)?
            };
            Ok(out.dot(tree.to_dot(&format!("tree{p}"))))
        }
        BigpictureCmd::Ball { l, n } => lattices_output(&bp::ball_with(&l, n, ctx.ball_budget())?),
        BigpictureCmd::Hecke { l, n } => sum_output(&bp::hecke_with(n, &LatticeSum::single(l), ctx.ball_budget())?),
        BigpictureCmd::Bc { l, generator } => sum_output(&bp::bost_connes_vertex(&generator, &l)?),
    }
}

fn nimber_cmd(cmd: NimberCmd) -> CliResult<Output> {
    match cmd {
        NimberCmd::Mul { a, b } => {
            let v = nimber::nim_mul(a, b);
            Output::default().text(v.to_string()).json(&v)
        }
        NimberCmd::Pow { a, e } => {
            let v = nimber::nim_pow(a, e);
            Output::default().text(v.to_string()).json(&v)
        }
        NimberCmd::Order { a } => {
            let o = nimber::nimber_to_root(a)?.order();
            Output::default().text(o.to_string()).json(&o)
        }
        NimberCmd::Root { a } => {
            let r = nimber::nimber_to_root(a)?;
            Output::default().text(r.to_string()).json(&r)
        }
        NimberCmd::Orbit { a } => {
            let o = nimber::frobenius_orbit(a);
            Output::default().text(list(&o)).json(&o)
        }
        NimberCmd::Poly { a: Some(a), .. } => {
            let f = nimber::orbit_to_polynomial(&nimber::frobenius_orbit(a))?;
            Output::default().text(f.to_string()).json(&f)
        }
        NimberCmd::Poly { level: Some(k), .. } => {
            let d = nimber::dictionary(k)?;
            let rows: Vec<[String; 4]> = d
                .iter()
                .map(|e| {
                    let orbit = e.orbit.iter().map(u64::to_string).collect::<Vec<_>>().join(" ");
                    let root = e.root.map(|r| r.to_string()).unwrap_or_default();
                    [e.nimber.to_string(), orbit, e.polynomial.0.to_string(), root]
                })
                .collect();
            let text: Vec<String> = d
                .iter()
                .map(|e| {
                    let root = e.root.map(|r| r.to_string()).unwrap_or_else(|| "-".into());
                    format!("{} {{{}}} {} {}", e.nimber, list(&e.orbit), e.polynomial, root)
                })
                .collect();
            Output::default()
                .text(text.join("\n"))
                .csv(&["nimber", "orbit", "polynomial", "root"], rows)?
                .json(&d)
        }
        NimberCmd::Poly { .. } => unreachable!("clap requires a nimber or --level"),
        NimberCmd::Tower { k } => {
            let g = nimber::tower_generator(k)?;
            Output::default().text(g.to_string()).json(&g)
        }
    }
}

fn adams_cmd(cmd: AdamsCmd) -> CliResult<Output> {
    match cmd {
        AdamsCmd::Apply { n, chi, table } => {
            let t = load_table(&table)?;
            let v = adams::adams(n, &VirtualCharacter(chi), &t)?;
            Output::default().text(list(&v.0)).json(&v)
        }
        AdamsCmd::Action { n, table } => {
            let t = load_table(&table)?;
            let labels = t.labels();
            let map = adams::monoid_action(n, &t)?;
            let stable = adams::stable_set(n, &t)?;
            let a = ClassAction {
                n,
                map: map.iter().map(|&i| labels[i].to_string()).collect(),
                stable: stable.iter().map(|&i| labels[i].to_string()).collect(),
            };
            let lines: Vec<String> = labels.iter().zip(&a.map).map(|(x, y)| format!("{x} -> {y}")).collect();
            Output::default()
                .text(format!("{}\n{n}.S = {{{}}}", lines.join("\n"), a.stable.join(",")))
                .json(&a)
        }
        AdamsCmd::Disc { table } => {
            let t = load_table(&table)?;
            let d = Discriminant {
                discriminant: adams::discriminant(&t).to_string(),
                conductor: adams::conductor_data(&t)?,
            };
            Output::default()
                .text(format!("discriminant {}\nr0 {}", d.discriminant, d.conductor.r0))
                .json(&d)
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    let ctx = Ctx { bound: cli.bound, precision: cli.precision, budget: cli.budget };
    let out = match cli.cmd {
        Cmd::Smirnov(c) => smirnov_cmd(c, &ctx)?,
        Cmd::Habiro(c) => habiro_cmd(c, &ctx)?,
        Cmd::Hring(c) => hring_cmd(c, &ctx)?,
        Cmd::Witt(c) => witt_cmd(c, &ctx)?,
        Cmd::Burnside(c) => burnside_cmd(c, &ctx)?,
        Cmd::Bigpicture(c) => bigpicture_cmd(c, &ctx)?,
        Cmd::Nimber(c) => nimber_cmd(c)?,
        Cmd::Adams(c) => adams_cmd(c)?,
    };
    out.emit(cli.format, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("absarith: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
