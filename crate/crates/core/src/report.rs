//! Run reports: a zeta computation by formula, by brute force or both, in
//! a form that serializes to canonical JSON and renders as text or LaTeX;
//! and reproductions of the per-class formula tables.

use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Number;
use thiserror::Error;

use crate::building::{class_triple, mdim_classes, mdim_orbit, x0_component, x0_graph, x2_component, x2_graph, BuildingError};
use crate::digraph::{Digraph, DigraphError, DEFAULT_EXACT_CAP};
use crate::geodesic::{count_geodesic_cycles_product, GeodesicError, ScaleCap};
use crate::gf::{Field, FieldError};
use crate::partition::{d_lambda, kostka_closed3, partitions_of, Partition};
use crate::poly::IntPoly;
use crate::subspace::{Lattice, SubspaceError};
use crate::zeta::{
    building_zeta, product_building_zeta, x0_generic, x0_special, x0_zeta, x2_class_zeta, x2_zeta, FactoredZeta,
    ZetaError,
};

pub const REPORT_VERSION: u32 = 1;
/// Walk length used for trace comparisons when none is given.
pub const DEFAULT_WALK_LENGTH: usize = 12;
/// Walk length used by the direct cycle enumeration when none is given.
pub const DEFAULT_DFS_LENGTH: usize = 8;
/// Largest graph built at all; above the exact cap only walks are counted.
pub const DEFAULT_GRAPH_CAP: usize = 1 << 20;

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Building(#[from] BuildingError),
    #[error(transparent)]
    Digraph(#[from] DigraphError),
    #[error(transparent)]
    Geodesic(#[from] GeodesicError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error("{0}")]
    Invalid(String),
}

/// Which zeta function to compute.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Target {
    /// One X0 class if `k` is given, else all of X0.
    X0 { n: usize, k: Option<usize> },
    /// The X2 class containing `(a, b)` if given, else all of X2.
    X2 { n: usize, mdim: Option<(usize, usize)> },
    Building { n: usize },
    Product { dims: Vec<usize> },
}

impl Target {
    fn name(&self) -> &'static str {
        match self {
            Target::X0 { .. } => "x0",
            Target::X2 { .. } => "x2",
            Target::Building { .. } => "building",
            Target::Product { .. } => "product",
        }
    }

    fn n(&self) -> Option<usize> {
        match self {
            Target::X0 { n, .. } | Target::X2 { n, .. } | Target::Building { n } => Some(*n),
            Target::Product { .. } => None,
        }
    }

    fn class(&self) -> Option<Vec<usize>> {
        match self {
            Target::X0 { k: Some(k), .. } => Some(vec![*k]),
            Target::X2 { mdim: Some((a, b)), .. } => Some(vec![*a, *b]),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Formula,
    Brute,
    Verify,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Formula => "formula",
            Mode::Brute => "brute",
            Mode::Verify => "verify",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest graph handled by an exact characteristic polynomial.
    pub max_vertices: usize,
    /// Largest graph built for walk counting.
    pub graph_cap: usize,
    /// Walk length for trace comparisons; defaults differ per route.
    pub max_walk_length: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_vertices: DEFAULT_EXACT_CAP,
            graph_cap: DEFAULT_GRAPH_CAP,
            max_walk_length: None,
            cache_dir: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Match,
    Mismatch,
    Computed,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub coeffs: Vec<Number>,
    pub mult: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruteJson {
    /// `"polynomial"` for `det(I - uA)`, `"traces"` for walk or cycle counts.
    pub method: String,
    pub vertices: u64,
    pub values: Vec<Number>,
}

/// A zeta computation. Field order is the JSON key order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub version: u32,
    pub kind: String,
    pub target: String,
    pub mode: String,
    pub q: u64,
    pub n: Option<usize>,
    pub class: Option<Vec<usize>>,
    pub dims: Option<Vec<usize>>,
    pub factors: Vec<FactorJson>,
    pub expanded: Vec<Number>,
    pub degree: Option<u64>,
    pub brute: Option<BruteJson>,
    pub verdict: Verdict,
    pub note: Option<String>,
    pub timing_ms: u64,
}

pub fn number(x: &BigInt) -> Number {
    Number::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

pub fn parse_number(x: &Number) -> BigInt {
    BigInt::from_str(&x.to_string()).expect("report numbers are integers")
}

fn numbers(xs: &[BigInt]) -> Vec<Number> {
    xs.iter().map(number).collect()
}

fn poly_of(xs: &[Number]) -> IntPoly {
    IntPoly::new(xs.iter().map(parse_number).collect())
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }

    pub fn factor_polys(&self) -> Vec<(IntPoly, u64)> {
        self.factors.iter().map(|f| (poly_of(&f.coeffs), f.mult)).collect()
    }

    pub fn expanded_poly(&self) -> IntPoly {
        poly_of(&self.expanded)
    }

    fn factored_text(&self, latex: bool) -> String {
        if self.factors.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .factor_polys()
            .iter()
            .map(|(p, k)| {
                let body = format!("({})", p.render("u", latex));
                match (*k, latex) {
                    (1, _) => body,
                    (k, true) => format!("{body}^{{{k}}}"),
                    (k, false) => format!("{body}^{k}"),
                }
            })
            .collect();
        parts.join(if latex { "" } else { " " })
    }

    fn heading(&self) -> String {
        let mut h = format!("zeta {}", self.target);
        if let Some(n) = self.n {
            h.push_str(&format!(" n={n}"));
        }
        if let Some(c) = &self.class {
            let label = if c.len() == 1 { "k" } else { "class" };
            let vals: Vec<String> = c.iter().map(|x| x.to_string()).collect();
            h.push_str(&format!(" {label}={}", vals.join(",")));
        }
        if let Some(d) = &self.dims {
            let vals: Vec<String> = d.iter().map(|x| x.to_string()).collect();
            h.push_str(&format!(" dims={}", vals.join(",")));
        }
        h.push_str(&format!(" q={} ({})", self.q, self.mode));
        h
    }

    pub fn to_text(&self) -> String {
        let mut out = vec![self.heading()];
        if self.mode != "brute" {
            out.push(format!("factored: {}", self.factored_text(false)));
        }
        if !self.expanded.is_empty() {
            out.push(format!("expanded: {}", self.expanded_poly()));
        }
        if let Some(d) = self.degree {
            out.push(format!("degree: {d}"));
        }
        if let Some(b) = &self.brute {
            let vals: Vec<String> = b.values.iter().map(|v| v.to_string()).collect();
            match b.method.as_str() {
                "polynomial" => out.push(format!("brute force: det(I - uA) over {} vertices", b.vertices)),
                _ => out.push(format!("brute force: traces over {} vertices: {}", b.vertices, vals.join(", "))),
            }
        }
        out.push(format!("verdict: {}", verdict_name(self.verdict)));
        if let Some(note) = &self.note {
            out.push(format!("note: {note}"));
        }
        out.push(format!("time: {} ms", self.timing_ms));
        out.join("\n") + "\n"
    }

    pub fn to_latex(&self) -> String {
        let mut out = format!("% {}\n", self.heading());
        if self.mode != "brute" {
            out.push_str(&format!("\\[ {} \\]\n", self.factored_text(true)));
        }
        if !self.expanded.is_empty() {
            out.push_str(&format!("\\[ {} \\]\n", self.expanded_poly().render("u", true)));
        }
        out
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Match => "match",
        Verdict::Mismatch => "mismatch",
        Verdict::Computed => "computed",
        Verdict::Skipped => "skipped",
    }
}

fn formula(target: &Target, q: u64) -> Result<FactoredZeta, RunError> {
    Ok(match target {
        Target::X0 { n, k: Some(k) } => {
            if *k == 0 || *k >= *n {
                return Err(RunError::Invalid(format!("k = {k} must lie in 1..{n}")));
            }
            let k = (*k).min(n - k);
            if 2 * k == *n {
                x0_special(*n, q)?
            } else {
                x0_generic(*n, k, q)?
            }
        }
        Target::X0 { n, k: None } => x0_zeta(*n, q)?,
        Target::X2 { n, mdim: Some(m) } => {
            mdim_orbit(*n, *m)?;
            x2_class_zeta(*n, *m, q)?
        }
        Target::X2 { n, mdim: None } => x2_zeta(*n, q)?,
        Target::Building { n } => building_zeta(*n, q)?,
        Target::Product { dims } => product_building_zeta(dims, q)?,
    })
}

enum Brute {
    Polynomial(IntPoly, usize),
    Traces(Vec<BigInt>, usize),
}

fn build_graph(target: &Target, q: u64, limits: &Limits) -> Result<Digraph, RunError> {
    let field = Field::new(q)?;
    let n = target.n().expect("graph targets have n");
    let lattice = Lattice::with_cache(field, n, limits.cache_dir.as_deref())?;
    let cap = limits.graph_cap;
    Ok(match target {
        Target::X0 { k: Some(k), .. } => x0_component(&lattice, *k, cap)?.graph,
        Target::X0 { k: None, .. } => x0_graph(&lattice, cap)?.graph,
        Target::X2 { mdim: Some(m), .. } => x2_component(&lattice, *m, cap)?.graph,
        Target::X2 { mdim: None, .. } | Target::Building { .. } => x2_graph(&lattice, cap)?.graph,
        Target::Product { .. } => unreachable!("products are enumerated directly"),
    })
}

fn brute(target: &Target, q: u64, limits: &Limits) -> Result<Brute, RunError> {
    if let Target::Product { dims } = target {
        let len = limits.max_walk_length.unwrap_or(DEFAULT_DFS_LENGTH);
        let cap = ScaleCap { max_len: len.max(ScaleCap::default().max_len), ..ScaleCap::default() };
        let counts = count_geodesic_cycles_product(dims, q, len, cap)?;
        let vertices = dims.iter().map(|&n| vertex_count_of_building(n, q)).sum();
        return Ok(Brute::Traces(counts.into_iter().map(BigInt::from).collect(), vertices));
    }
    let graph = build_graph(target, q, limits)?;
    let v = graph.vertex_count();
    if v <= limits.max_vertices {
        Ok(Brute::Polynomial(graph.inverse_zeta_polynomial(limits.max_vertices)?, v))
    } else {
        let len = limits.max_walk_length.unwrap_or(DEFAULT_WALK_LENGTH);
        Ok(Brute::Traces(graph.closed_walk_counts(len), v))
    }
}

fn vertex_count_of_building(n: usize, q: u64) -> usize {
    (1..n).map(|k| crate::subspace::gaussian_binomial(n, k, q) as usize).sum()
}

fn factors_json(f: &FactoredZeta) -> Vec<FactorJson> {
    f.factor_polys()
        .into_iter()
        .map(|(p, mult)| FactorJson { coeffs: numbers(p.coeffs()), mult })
        .collect()
}

/// Computes a zeta function and, depending on the mode, its brute-force
/// counterpart and their comparison.
pub fn run_zeta(target: &Target, q: u64, mode: Mode, limits: &Limits) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mut report = RunReport {
        version: REPORT_VERSION,
        kind: "zeta".into(),
        target: target.name().into(),
        mode: mode.name().into(),
        q,
        n: target.n(),
        class: target.class(),
        dims: match target {
            Target::Product { dims } => Some(dims.clone()),
            _ => None,
        },
        factors: Vec::new(),
        expanded: Vec::new(),
        degree: None,
        brute: None,
        verdict: Verdict::Computed,
        note: None,
        timing_ms: 0,
    };
    let f = if mode == Mode::Brute { None } else { Some(formula(target, q)?) };
    if let Some(f) = &f {
        report.factors = factors_json(f);
        report.degree = Some(f.degree());
    }
    let b = if mode == Mode::Formula { None } else { Some(brute(target, q, limits)?) };
    match (&f, &b) {
        (Some(f), None) => {
            report.expanded = numbers(f.expand().coeffs());
        }
        (None, Some(Brute::Polynomial(p, v))) => {
            report.expanded = numbers(p.coeffs());
            report.degree = p.degree().map(|d| d as u64);
            report.brute = Some(BruteJson { method: "polynomial".into(), vertices: *v as u64, values: Vec::new() });
        }
        (None, Some(Brute::Traces(t, v))) => {
            report.brute = Some(BruteJson { method: "traces".into(), vertices: *v as u64, values: numbers(t) });
        }
        (Some(f), Some(Brute::Polynomial(p, v))) => {
            let expanded = f.expand();
            report.verdict = if &expanded == p { Verdict::Match } else { Verdict::Mismatch };
            report.expanded = numbers(expanded.coeffs());
            report.brute = Some(BruteJson {
                method: "polynomial".into(),
                vertices: *v as u64,
                values: numbers(p.coeffs()),
            });
        }
        (Some(f), Some(Brute::Traces(t, v))) => {
            let len = t.len();
            let predicted = f.expand_truncated(len).newton_power_sums(len);
            report.verdict = if &predicted == t { Verdict::Match } else { Verdict::Mismatch };
            report.note = Some(format!("compared power sums for l = 1..{len}"));
            report.brute = Some(BruteJson { method: "traces".into(), vertices: *v as u64, values: numbers(t) });
        }
        (None, None) => unreachable!("every mode computes something"),
    }
    report.timing_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

/// Which family of classes a table lists.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TableKind {
    X0,
    X2,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: usize,
    /// `[i]` for X0 classes, the triple `[i, j, k]` for X2 classes.
    pub class: Vec<usize>,
    pub factors: Vec<FactorJson>,
    pub degree: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableReport {
    pub version: u32,
    pub kind: String,
    pub which: String,
    pub q: u64,
    pub rows: Vec<TableRow>,
    #[serde(skip)]
    latex: Vec<String>,
}

impl TableReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("table serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let mut last_n = 0;
        for row in &self.rows {
            if row.n != last_n {
                out.push_str(&format!("n = {}\n", row.n));
                last_n = row.n;
            }
            let class: Vec<String> = row.class.iter().map(|x| x.to_string()).collect();
            let label = if row.class.len() == 1 { "i" } else { "class" };
            let factors: Vec<String> = row
                .factors
                .iter()
                .map(|f| {
                    let p = poly_of(&f.coeffs);
                    if f.mult == 1 {
                        format!("({p})")
                    } else {
                        format!("({p})^{}", f.mult)
                    }
                })
                .collect();
            let body = if factors.is_empty() { "1".to_string() } else { factors.join(" ") };
            out.push_str(&format!("  {label} = {}: {body}\n", class.join(",")));
        }
        out
    }

    /// A LaTeX table with multiplicities written as polynomials in q.
    pub fn to_latex(&self) -> String {
        let mut out = String::from("\\begin{tabular}{|c|c|l|}\n\\hline\n");
        let header = if self.which == "x0" { "$n$ & $i$" } else { "$n$ & $(i,j,k)$" };
        out.push_str(&format!("{header} & $1/Z_c$ \\\\\n\\hline\n"));
        for (row, tex) in self.rows.iter().zip(&self.latex) {
            let class: Vec<String> = row.class.iter().map(|x| x.to_string()).collect();
            let class = if row.class.len() == 1 { class[0].clone() } else { format!("({})", class.join(",")) };
            out.push_str(&format!("{} & {} & ${}$ \\\\\n", row.n, class, tex));
        }
        out.push_str("\\hline\n\\end{tabular}\n");
        out
    }
}

fn q_power(e: i64) -> String {
    match e {
        0 => String::new(),
        1 => "q".into(),
        _ => format!("q^{{{e}}}"),
    }
}

fn with_mult(base: String, mult: &str) -> String {
    if mult.is_empty() || mult == "1" {
        base
    } else {
        format!("{base}^{{{mult}}}")
    }
}

fn qbinom_diff(n: usize, j: usize) -> String {
    match j {
        0 => String::new(),
        1 => format!("\\qbinom{{{n}}}{{1}}-1"),
        _ => format!("\\qbinom{{{n}}}{{{j}}}-\\qbinom{{{n}}}{{{}}}", j - 1),
    }
}

fn x0_latex(n: usize, i: usize) -> String {
    let (n_i, i_i) = (n as i64, i as i64);
    let mut parts = Vec::new();
    if 2 * i == n {
        for j in (0..=i_i).rev() {
            let e = i_i * i_i - i_i * j + (j * j - j) / 2;
            let sign = if j % 2 == 0 { '-' } else { '+' };
            parts.push(with_mult(format!("(1 {sign} {}u)", q_power(e)), &qbinom_diff(n, j as usize)));
        }
    } else {
        for j in (0..=i_i).rev() {
            let e = -j * (n_i - j + 1) + 2 * i_i * (n_i - i_i);
            parts.push(with_mult(format!("(1 - {}u^2)", q_power(e)), &qbinom_diff(n, j as usize)));
        }
    }
    parts.join(" ")
}

fn scaled(c: i64, d: &IntPoly) -> String {
    let body = d.render("q", true);
    match c {
        1 => body,
        _ if d.coeffs().iter().filter(|x| !num_traits::Zero::is_zero(*x)).count() == 1 => format!("{c}{body}"),
        _ => format!("{c}({body})"),
    }
}

fn x2_latex(triple: (usize, usize, usize)) -> String {
    let mu = Partition::new(vec![triple.0, triple.1, triple.2]);
    let special = triple.0 == triple.1 && triple.1 == triple.2;
    let base = 2 * mu.wt_r();
    let mut parts = Vec::new();
    for lambda in partitions_of(mu.size()).into_iter().rev() {
        if !lambda.dominates(&mu) {
            continue;
        }
        let s = (lambda.f_exponent() - base) as i64;
        let k = kostka_closed3(&lambda, &mu).expect("three rows") as i64;
        let d = d_lambda(&lambda);
        if !special {
            parts.push(with_mult(format!("(1 - {}u^6)", q_power(s)), &scaled(k, &d)));
            continue;
        }
        let (y, z) = (lambda.part(1) as i64, lambda.part(2) as i64);
        let (one, omega) = match (y - z).rem_euclid(3) {
            0 => ((k + 2) / 3, (k - 1) / 3),
            1 => ((k - 2) / 3, (k + 1) / 3),
            _ => (k / 3, k / 3),
        };
        if one == omega {
            parts.push(with_mult(format!("(1 - {}u^6)", q_power(s)), &scaled(one, &d)));
            continue;
        }
        let t = s / 3;
        if one > 0 {
            parts.push(with_mult(format!("(1 - {}u^2)", q_power(t)), &scaled(one, &d)));
        }
        if omega > 0 {
            parts.push(with_mult(
                format!("(1 + {}u^2 + {}u^4)", q_power(t), q_power(2 * t)),
                &scaled(omega, &d),
            ));
        }
    }
    parts.join(" ")
}

/// The per-class formulas for `n <= max_n` evaluated at `q`.
pub fn formula_table(which: TableKind, q: u64, max_n: usize) -> Result<TableReport, RunError> {
    let mut rows = Vec::new();
    let mut latex = Vec::new();
    match which {
        TableKind::X0 => {
            for n in 2..=max_n {
                for i in 1..=n / 2 {
                    let f = formula(&Target::X0 { n, k: Some(i) }, q)?;
                    rows.push(TableRow { n, class: vec![i], factors: factors_json(&f), degree: f.degree() });
                    latex.push(x0_latex(n, i));
                }
            }
        }
        TableKind::X2 => {
            for n in 3..=max_n {
                for mdim in mdim_classes(n) {
                    let f = x2_class_zeta(n, mdim, q)?;
                    let t = class_triple(n, mdim);
                    rows.push(TableRow { n, class: vec![t.0, t.1, t.2], factors: factors_json(&f), degree: f.degree() });
                    latex.push(x2_latex(t));
                }
            }
        }
    }
    Ok(TableReport {
        version: REPORT_VERSION,
        kind: "table".into(),
        which: match which {
            TableKind::X0 => "x0",
            TableKind::X2 => "x2",
        }
        .into(),
        q,
        rows,
        latex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let r = run_zeta(&Target::X0 { n: 3, k: Some(1) }, 2, Mode::Verify, &Limits::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Match);
        assert_eq!(r.degree, Some(14));
        let s = r.to_json();
        assert_eq!(RunReport::from_json(&s).unwrap().to_json(), s);
        assert!(!s.contains('.'));
        assert!(s.starts_with("{\"version\":1,\"kind\":\"zeta\""));
    }

    #[test]
    fn trivial_building() {
        let r = run_zeta(&Target::Building { n: 2 }, 2, Mode::Formula, &Limits::default()).unwrap();
        assert!(r.to_text().contains("factored: 1\n"));
        assert_eq!(r.expanded_poly(), IntPoly::one());
    }

    #[test]
    fn trace_route_above_exact_cap() {
        let limits = Limits { max_vertices: 10, ..Limits::default() };
        let r = run_zeta(&Target::X2 { n: 3, mdim: None }, 2, Mode::Verify, &limits).unwrap();
        assert_eq!(r.verdict, Verdict::Match);
        assert_eq!(r.brute.unwrap().method, "traces");
    }

    #[test]
    fn latex_rows() {
        assert_eq!(x0_latex(3, 1), "(1 - qu^2)^{\\qbinom{3}{1}-1} (1 - q^{4}u^2)");
        assert_eq!(x0_latex(2, 1), "(1 + u)^{\\qbinom{2}{1}-1} (1 - qu)");
        assert_eq!(
            x2_latex((1, 1, 1)),
            "(1 - u^2)^{q^{3}} (1 + qu^2 + q^{2}u^4)^{q + q^{2}} (1 - q^{2}u^2)"
        );
        let t = formula_table(TableKind::X0, 2, 5).unwrap();
        assert_eq!(t.rows.len(), 6);
        assert_eq!(t.to_latex().matches("\\\\\n").count(), 7);
    }
}
