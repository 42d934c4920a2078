//! SVG figures. Output is a pure function of the input and the config, with
//! every coordinate printed to two decimals so the bytes are reproducible.

use std::collections::BTreeSet;
use std::f64::consts::TAU;
use std::fmt::Write;

use absarith::habiro::{AdjacencyWheel, P1Point};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvgConfig {
    pub width: f64,
    pub height: f64,
    pub margin: f64,
}

impl Default for SvgConfig {
    fn default() -> Self {
        SvgConfig {
            width: 800.0,
            height: 600.0,
            margin: 60.0,
        }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

fn header(cfg: &SvgConfig, title: &str) -> String {
    let mut s = String::new();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w} {h}" width="{w}" height="{h}" font-family="sans-serif" font-size="11">"#,
        w = cfg.width,
        h = cfg.height
    )
    .unwrap();
    writeln!(s, "  <title>{}</title>", escape(title)).unwrap();
    writeln!(s, r#"  <rect x="0" y="0" width="{}" height="{}" fill="white"/>"#, cfg.width, cfg.height).unwrap();
    s
}

/// Ticks at 1, 2, 5 times powers of ten so that about `target` fit below `max`.
fn nice_step(max: f64, target: f64) -> f64 {
    let raw = (max / target).max(1.0);
    let mag = 10f64.powf(raw.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .into_iter()
        .map(|m| m * mag)
        .find(|&s| s >= raw)
        .unwrap_or(10.0 * mag)
}

/// Scatter plot of `p -> q(p)`: primes on a logarithmic horizontal axis,
/// `[n]` on the vertical axis, `[0]` and `[∞]` as rails below and above.
pub fn render_smirnov_svg(title: &str, points: &[(u128, P1Point)], cfg: &SvgConfig) -> String {
    let m = cfg.margin;
    let (left, right) = (m, cfg.width - m / 2.0);
    let rail_inf = m;
    let rail_zero = cfg.height - m;
    let (top, bottom) = (rail_inf + 25.0, rail_zero - 25.0);
    let pmax = points.iter().map(|p| p.0).max().unwrap_or(2).max(3) as f64;
    let nmax = points
        .iter()
        .filter_map(|(_, pt)| match pt {
            P1Point::Finite(n) => Some(*n),
            _ => None,
        })
        .max()
        .unwrap_or(1)
        .max(1) as f64;
    let lmin = 2f64.ln();
    let x_of = |p: f64| left + (p.ln() - lmin) / (pmax.ln() - lmin) * (right - left);
    let y_of = |n: f64| bottom - n / nmax * (bottom - top);

    let mut s = header(cfg, title);
    s.push_str("  <g stroke=\"black\" stroke-width=\"1\">\n");
    writeln!(s, r#"    <line x1="{left:.2}" y1="{bottom:.2}" x2="{right:.2}" y2="{bottom:.2}"/>"#).unwrap();
    writeln!(s, r#"    <line x1="{left:.2}" y1="{bottom:.2}" x2="{left:.2}" y2="{top:.2}"/>"#).unwrap();
    s.push_str("  </g>\n");
    s.push_str("  <g stroke=\"gray\" stroke-dasharray=\"4 3\">\n");
    for y in [rail_inf, rail_zero] {
        writeln!(s, r#"    <line x1="{left:.2}" y1="{y:.2}" x2="{right:.2}" y2="{y:.2}"/>"#).unwrap();
    }
    s.push_str("  </g>\n");
    s.push_str("  <g text-anchor=\"end\">\n");
    writeln!(s, r#"    <text x="{:.2}" y="{:.2}">[∞]</text>"#, left - 6.0, rail_inf + 4.0).unwrap();
    writeln!(s, r#"    <text x="{:.2}" y="{:.2}">[0]</text>"#, left - 6.0, rail_zero + 4.0).unwrap();
    let step = nice_step(nmax, 5.0);
    let mut n = step;
    while n <= nmax {
        let y = y_of(n);
        writeln!(s, r#"    <text x="{:.2}" y="{:.2}">[{}]</text>"#, left - 6.0, y + 4.0, n as u64).unwrap();
        n += step;
    }
    s.push_str("  </g>\n");
    s.push_str("  <g text-anchor=\"middle\">\n");
    let mut tick = 10.0;
    while tick <= pmax {
        let x = x_of(tick);
        writeln!(s, r#"    <line x1="{x:.2}" y1="{bottom:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, bottom + 5.0).unwrap();
        writeln!(s, r#"    <text x="{x:.2}" y="{:.2}">{}</text>"#, bottom + 18.0, tick as u64).unwrap();
        tick *= 10.0;
    }
    writeln!(s, r#"    <text x="{:.2}" y="{:.2}">p</text>"#, (left + right) / 2.0, cfg.height - 8.0).unwrap();
    s.push_str("  </g>\n");

    s.push_str("  <g stroke=\"none\">\n");
    for &(p, pt) in points {
        let x = x_of(p as f64);
        let (y, fill) = match pt {
            P1Point::Zero => (rail_zero, "#d62728"),
            P1Point::Infinity => (rail_inf, "#2ca02c"),
            P1Point::Finite(n) => (y_of(n as f64), "#1f77b4"),
        };
        writeln!(s, r#"    <circle cx="{x:.2}" cy="{y:.2}" r="2" fill="{fill}"><title>{p} ↦ {pt}</title></circle>"#).unwrap();
    }
    s.push_str("  </g>\n</svg>\n");
    s
}

/// Edge colour for the prime of an adjacency.
pub fn prime_color(p: u64) -> &'static str {
    match p {
        2 => "#1f77b4",
        3 => "#d62728",
        5 => "#2ca02c",
        7 => "#9467bd",
        11 => "#ff7f0e",
        13 => "#8c564b",
        _ => "#7f7f7f",
    }
}

/// The N-th roots of unity on a circle with adjacency edges coloured by prime.
pub fn render_wheel_svg(w: &AdjacencyWheel, cfg: &SvgConfig) -> String {
    let (cx, cy) = (cfg.width / 2.0, cfg.height / 2.0);
    let radius = (cfg.height / 2.0 - cfg.margin).max(10.0);
    let pos: Vec<(f64, f64)> = w
        .vertices
        .iter()
        .map(|r| {
            let a = TAU * r.as_f64();
            (cx + radius * a.cos(), cy - radius * a.sin())
        })
        .collect();
    let mut s = header(cfg, &format!("adjacency on the {}-th roots of unity", w.n));
    let primes: BTreeSet<u64> = w.edges.iter().map(|e| e.2).collect();
    for &p in &primes {
        writeln!(s, r#"  <g stroke="{}" stroke-width="0.8" stroke-opacity="0.7">"#, prime_color(p)).unwrap();
        for &(i, j, q) in w.edges.iter().filter(|e| e.2 == p) {
            let ((x1, y1), (x2, y2)) = (pos[i], pos[j]);
            writeln!(s, r#"    <line x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}"><title>{} ~ {} ({q})</title></line>"#, w.vertices[i], w.vertices[j]).unwrap();
        }
        s.push_str("  </g>\n");
    }
    s.push_str("  <g fill=\"black\" text-anchor=\"middle\">\n");
    for (r, &(x, y)) in w.vertices.iter().zip(&pos) {
        writeln!(s, r#"    <circle cx="{x:.2}" cy="{y:.2}" r="2.5"/>"#).unwrap();
        let a = TAU * r.as_f64();
        let (lx, ly) = (cx + (radius + 16.0) * a.cos(), cy - (radius + 16.0) * a.sin() + 4.0);
        writeln!(s, r#"    <text x="{lx:.2}" y="{ly:.2}" font-size="8">{r}</text>"#).unwrap();
    }
    s.push_str("  </g>\n");
    s.push_str("  <g>\n");
    for (k, &p) in primes.iter().enumerate() {
        let y = 20.0 + 16.0 * k as f64;
        writeln!(s, r#"    <line x1="16" y1="{y:.2}" x2="36" y2="{y:.2}" stroke="{}" stroke-width="2"/>"#, prime_color(p)).unwrap();
        writeln!(s, r#"    <text x="42" y="{:.2}">p = {p}</text>"#, y + 4.0).unwrap();
    }
    s.push_str("  </g>\n</svg>\n");
    s
}

pub fn wheel_dot(w: &AdjacencyWheel) -> String {
    let mut s = format!("graph wheel{} {{\n", w.n);
    for (i, r) in w.vertices.iter().enumerate() {
        writeln!(s, "  v{i} [label=\"{r}\"];").unwrap();
    }
    for &(i, j, p) in &w.edges {
        writeln!(s, "  v{i} -- v{j} [label=\"{p}\", color=\"{}\"];", prime_color(p)).unwrap();
    }
    s.push_str("}\n");
    s
}
