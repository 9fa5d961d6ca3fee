//! Inequality sweeps behind `hardylog verify`.
//!
//! Each suite produces rows `(case, lhs, rhs, ratio)` with a suite-wide
//! limit on the ratio, plus side checks, and serializes to CSV and JSON.

use std::f64::consts::E;
use std::fmt::Write as _;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::factor::{coifman_rochberg_symbol, doubling_check, factorize, product, DOUBLING_TOLERANCE};
use crate::grid::{Grid1D, HalfPlaneField, HeightLadder, SampledFunction};
use crate::hankel::{boundedness_study, hankel_apply, Symbol};
use crate::library::{self, analytic_bump, bmo_mixture, closed_form_boundary, gaussian_pair};
use crate::maximal::{hl_maximal, nontangential_max};
use crate::spaces::{bmo_plus_norm, hlog_norm, hp_norm, luxemburg_norm, MusielakWeight};
use crate::transforms::{poisson_at, poisson_extend, szego_project};

/// Suite names accepted by [`run_suite`].
pub const SUITES: &[&str] = &["lemma31", "prop31", "thm21", "thm11", "cr", "hankel"];

/// Heights of the Poisson-growth sweep.
pub const GROWTH_HEIGHTS: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub case: String,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
}

impl Row {
    fn new(case: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let ratio = if rhs == 0.0 && lhs == 0.0 { 0.0 } else { lhs / rhs };
        Self {
            case: case.into(),
            lhs,
            rhs,
            ratio,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">=")]
    AtLeast,
}

/// A side assertion of a suite.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub relation: Relation,
    pub bound: f64,
    pub ok: bool,
}

impl Check {
    fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtMost,
            bound,
            ok: value <= bound,
        }
    }

    fn at_least(name: impl Into<String>, value: f64, bound: f64) -> Self {
        Self {
            name: name.into(),
            value,
            relation: Relation::AtLeast,
            bound,
            ok: value >= bound,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub max_ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<f64>,
    pub pass: bool,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
    pub config_hash: String,
    pub version: String,
    #[serde(skip)]
    pub rows: Vec<Row>,
}

impl SuiteReport {
    fn new(suite: &str, cfg: &RunConfig, rows: Vec<Row>, limit: Option<f64>, checks: Vec<Check>, notes: Vec<String>) -> Self {
        let max_ratio = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
        let finite = rows.iter().all(|r| r.ratio.is_finite());
        let pass = finite && limit.is_none_or(|l| max_ratio <= l) && checks.iter().all(|c| c.ok);
        Self {
            suite: suite.to_string(),
            max_ratio,
            limit,
            pass,
            checks,
            notes,
            config_hash: cfg.hash(),
            version: VERSION.to_string(),
            rows,
        }
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("case,lhs,rhs,ratio\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{:e},{:e},{:e}", r.case, r.lhs, r.rhs, r.ratio);
        }
        s
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Runs one suite by name.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    match name {
        "lemma31" => poisson_growth(cfg),
        "prop31" => product_bound(cfg),
        "thm21" => maximal_bounds(cfg),
        "thm11" => factorization(cfg),
        "cr" => symbol_bound(cfg),
        "hankel" => hankel_sweep(cfg),
        _ => Err(Error::InvalidArgument(format!(
            "unknown suite `{name}` (known: {})",
            SUITES.join(", ")
        ))),
    }
}

fn par_collect<T: Send, U: Sync>(items: &[U], f: impl Fn(&U) -> Result<T> + Sync + Send) -> Result<Vec<T>> {
    items.par_iter().map(f).collect()
}

fn require_names(kind: &str, names: &[String], known: &[&str]) -> Result<()> {
    if names.is_empty() {
        return Err(Error::EmptyFamily(format!("the {kind} test family is empty")));
    }
    for n in names {
        if !known.contains(&n.as_str()) {
            return Err(Error::InvalidArgument(format!(
                "`{n}` is not in the {kind} family (known: {})",
                known.join(", ")
            )));
        }
    }
    Ok(())
}

/// BMO test symbols: `sgn`, `log|x|` and seeded mixtures.
pub fn bmo_symbols(grid: Grid1D, cfg: &RunConfig) -> Result<Vec<(String, SampledFunction)>> {
    let mut out = vec![
        ("sgn".to_string(), library::boundary("sgn", grid)?),
        ("logabs".to_string(), library::log_abs(grid)?),
    ];
    for k in 0..cfg.mixtures {
        let seed = cfg.seed.wrapping_add(k as u64);
        out.push((format!("mixture{k}"), bmo_mixture(grid, seed)?));
    }
    Ok(out)
}

/// `‖P_y * f₀‖_{BMO⁺} ≤ C log(e + y) ‖f₀‖_{BMO⁺}`.
fn poisson_growth(cfg: &RunConfig) -> Result<SuiteReport> {
    let grid = cfg.grid()?;
    let symbols = bmo_symbols(grid, cfg)?;
    let per_symbol: Vec<(Vec<Row>, Check)> = par_collect(&symbols, |(name, f0)| {
        let base = bmo_plus_norm(f0)?.value;
        let mut rows = Vec::new();
        for y in GROWTH_HEIGHTS {
            let lhs = bmo_plus_norm(&poisson_at(f0, y)?)?.value;
            rows.push(Row::new(format!("{name}@y={y}"), lhs, (E + y).ln() * base));
        }
        let growth = if rows[1].lhs == 0.0 { 0.0 } else { rows[3].lhs / rows[1].lhs };
        let bound = 2.0 * (E + 1000.0).ln() / (E + 10.0).ln();
        Ok((rows, Check::at_most(format!("growth_1000_over_10:{name}"), growth, bound)))
    })?;
    let (rows, checks): (Vec<Vec<Row>>, Vec<Check>) = per_symbol.into_iter().unzip();
    Ok(SuiteReport::new(
        "lemma31",
        cfg,
        rows.into_iter().flatten().collect(),
        Some(10.0),
        checks,
        vec![],
    ))
}

/// `‖fg‖_{H^log} ≤ C ‖f‖_{H¹} ‖g‖_{BMOA⁺}` over a closed-form family.
fn product_bound(cfg: &RunConfig) -> Result<SuiteReport> {
    require_names("f", &cfg.f_family, library::H1_FAMILY)?;
    require_names("g", &cfg.g_family, library::BMOA_FAMILY)?;
    let (grid, ladder) = (cfg.grid()?, cfg.ladder()?);
    let fs: Vec<(HalfPlaneField, f64)> = par_collect(&cfg.f_family, |n| {
        let field = library::field(n, grid, &ladder)?;
        let h1 = hp_norm(&field, 1.0)?.value;
        Ok((field, h1))
    })?;
    let gs: Vec<(HalfPlaneField, f64)> = par_collect(&cfg.g_family, |n| {
        let field = library::field(n, grid, &ladder)?;
        let norm = bmo_plus_norm(&closed_form_boundary(n, grid)?)?.value;
        Ok((field, norm))
    })?;
    let pairs: Vec<(usize, usize)> = (0..fs.len()).flat_map(|i| (0..gs.len()).map(move |j| (i, j))).collect();
    let rows = par_collect(&pairs, |&(i, j)| {
        let lhs = hlog_norm(&product(&fs[i].0, &gs[j].0)?)?.value;
        Ok(Row::new(
            format!("{}*{}", cfg.f_family[i], cfg.g_family[j]),
            lhs,
            fs[i].1 * gs[j].1,
        ))
    })?;
    Ok(SuiteReport::new("prop31", cfg, rows, Some(50.0), vec![], vec![]))
}

/// Nontangential maximal function against slice norms, and its pointwise
/// majorant `(f*)^{1/2} ≤ C M(|f₀|^{1/2})`.
fn maximal_bounds(cfg: &RunConfig) -> Result<SuiteReport> {
    require_names("f", &cfg.f_family, library::H1_FAMILY)?;
    let (grid, ladder) = (cfg.grid()?, cfg.ladder()?);
    let per: Vec<(Row, Vec<Check>)> = par_collect(&cfg.f_family, |name| {
        let field = library::field(name, grid, &ladder)?;
        let fstar = nontangential_max(&field, ladder.y_max())?;
        let lhs = luxemburg_norm(&fstar, MusielakWeight::Theta)?.value;
        let rhs = hlog_norm(&field)?.value;
        let f0 = closed_form_boundary(name, grid)?;
        let root = f0.map(f0.decay().pow(0.5), |_, v| Complex64::new(v.norm().sqrt(), 0.0))?;
        let m = hl_maximal(&root)?;
        let majorant = grid
            .nodes()
            .zip(fstar.values().iter().zip(m.values()))
            .filter(|(x, _)| grid.is_central(*x))
            .map(|(_, (s, mv))| s.re.sqrt() / mv.re)
            .fold(0.0, f64::max);
        Ok((
            Row::new(name.clone(), lhs, rhs),
            vec![
                Check::at_most(format!("slice_norm_minus_maximal_norm:{name}"), rhs - lhs, 1e-6),
                Check::at_most(format!("majorant_constant:{name}"), majorant, 10.0),
            ],
        ))
    })?;
    let (rows, checks): (Vec<Row>, Vec<Vec<Check>>) = per.into_iter().unzip();
    Ok(SuiteReport::new(
        "thm21",
        cfg,
        rows,
        Some(10.0),
        checks.into_iter().flatten().collect(),
        vec![],
    ))
}

/// Holomorphic inputs of the factorization sweep.
#[derive(Debug, Clone)]
pub enum FactorCase {
    ClosedForm(String),
    /// Szegő projection of a seeded mean-zero pair of Gaussians. A single
    /// Gaussian projects to data with a `1/x` tail, which is not in `H^log`.
    Gaussian(u64),
}

impl FactorCase {
    pub fn label(&self) -> String {
        match self {
            FactorCase::ClosedForm(n) => n.clone(),
            FactorCase::Gaussian(s) => format!("gauss{s}"),
        }
    }

    pub fn build(&self, grid: Grid1D, ladder: &HeightLadder) -> Result<HalfPlaneField> {
        match self {
            FactorCase::ClosedForm(n) => library::field(n, grid, ladder),
            FactorCase::Gaussian(s) => poisson_extend(&szego_project(&gaussian_pair(grid, *s)?)?, ladder),
        }
    }
}

pub fn factor_cases(cfg: &RunConfig) -> Vec<FactorCase> {
    let mut cases = vec![
        FactorCase::ClosedForm("dpole".into()),
        FactorCase::ClosedForm("pole_bump".into()),
    ];
    cases.extend((0..3).map(|k| FactorCase::Gaussian(cfg.seed.wrapping_add(k))));
    cases
}

/// `h = f g`: residual, `|g₀| ≥ 1`, `b ≥ 1`, `|f₀| ≤ |h₀|` and stability of
/// `∫|f₀|` when the window doubles.
fn factorization(cfg: &RunConfig) -> Result<SuiteReport> {
    let (grid, ladder) = (cfg.grid()?, cfg.ladder()?);
    let cases = factor_cases(cfg);
    let per: Vec<(Row, Vec<Check>)> = par_collect(&cases, |case| {
        let label = case.label();
        let r = factorize(&case.build(grid, &ladder)?)?;
        let s = r.summary();
        let doubling = doubling_check(&|g| case.build(g, &ladder), grid)?;
        Ok((
            Row::new(label.clone(), s.residual, cfg.residual_tol),
            vec![
                Check::at_least(format!("min_abs_g0:{label}"), s.min_abs_g0, 1.0),
                Check::at_least(format!("min_b:{label}"), s.min_b, 1.0),
                Check::at_most(format!("max_f0_over_h0:{label}"), s.max_f0_over_h0, 1.0 + 1e-12),
                Check::at_most(format!("l1_doubling_change:{label}"), doubling.relative_change, DOUBLING_TOLERANCE),
            ],
        ))
    })?;
    let (rows, checks): (Vec<Row>, Vec<Vec<Check>>) = per.into_iter().unzip();
    Ok(SuiteReport::new(
        "thm11",
        cfg,
        rows,
        Some(1.0),
        checks.into_iter().flatten().collect(),
        vec![],
    ))
}

/// Scales spanning six orders of magnitude.
pub const SYMBOL_SCALES: [f64; 3] = [1e-3, 1.0, 1e3];

/// Boundary data for the symbol sweep.
pub fn symbol_inputs(grid: Grid1D, cfg: &RunConfig) -> Result<Vec<(String, SampledFunction)>> {
    let mut base = Vec::new();
    for n in ["dpole", "chi01", "gauss", "poisson1"] {
        base.push((n.to_string(), library::boundary(n, grid)?));
    }
    base.push(("pole_bump".to_string(), closed_form_boundary("pole_bump", grid)?));
    base.push(("bump".to_string(), analytic_bump(grid, cfg.seed)?));
    let mut out = Vec::new();
    for (n, f) in base {
        for s in SYMBOL_SCALES {
            out.push((format!("{n}x{s:e}"), f.scale(Complex64::new(s, 0.0))));
        }
    }
    Ok(out)
}

/// `‖log(e + |x|) + log(e + M(|h₀|^{1/2}))‖_{BMO⁺} ≤ C`.
fn symbol_bound(cfg: &RunConfig) -> Result<SuiteReport> {
    let grid = cfg.grid()?;
    let inputs = symbol_inputs(grid, cfg)?;
    let per: Vec<(Row, Check)> = par_collect(&inputs, |(name, h0)| {
        let b = coifman_rochberg_symbol(h0)?;
        let min_b = b.values().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        Ok((
            Row::new(name.clone(), bmo_plus_norm(&b)?.value, 1.0),
            Check::at_least(format!("min_b:{name}"), min_b, 1.0),
        ))
    })?;
    let (rows, checks): (Vec<Row>, Vec<Check>) = per.into_iter().unzip();
    Ok(SuiteReport::new("cr", cfg, rows, Some(20.0), checks, vec![]))
}

/// Antilinearity of `H_b` and the seeded form sweep for `b = e^{iz}`; the
/// constant symbol is reported as degenerate.
fn hankel_sweep(cfg: &RunConfig) -> Result<SuiteReport> {
    let (grid, ladder) = (cfg.grid()?, cfg.ladder()?);
    let symbol = Symbol {
        id: "expiz".into(),
        b0: library::boundary("expi", grid)?,
        b_field: library::field("expiz", grid, &ladder)?,
    };
    let mut checks = Vec::new();
    let mut worst: f64 = 0.0;
    for k in 0..3u64 {
        let f = analytic_bump(grid, cfg.seed.wrapping_add(k))?;
        let c = Complex64::from_polar(1.0 + k as f64, 0.7 * k as f64 + 0.3);
        let a = hankel_apply(&symbol.b0, &f)?;
        let ac = hankel_apply(&symbol.b0, &f.scale(c))?;
        let scale = symbol.b0.max_abs() * f.max_abs() * c.norm();
        let err = a
            .values()
            .iter()
            .zip(ac.values())
            .map(|(u, v)| (v - c.conj() * u).norm())
            .fold(0.0, f64::max);
        worst = worst.max(err / scale);
    }
    checks.push(Check::at_most("antilinearity_relative_error", worst, 1e-12));

    let study = boundedness_study(&symbol, cfg.trials, cfg.seed)?;
    let root = study.seminorm.sqrt();
    let rows = study
        .records
        .iter()
        .enumerate()
        .map(|(k, t)| Row::new(format!("expiz:trial{k}"), t.form, root * t.f_norm * t.g_norm))
        .collect();

    let constant = Symbol {
        id: "one".into(),
        b0: library::boundary("one", grid)?,
        b_field: library::field("one", grid, &ladder)?,
    };
    let degenerate = boundedness_study(&constant, cfg.trials.min(3), cfg.seed)?;
    let mut notes = vec![format!(
        "symbol expiz: seminorm {:e}, max form {:e}",
        study.seminorm, study.max_form
    )];
    if degenerate.degenerate {
        notes.push(format!(
            "symbol one: degenerate (seminorm {:e}), ratio not asserted; max form {:e}",
            degenerate.seminorm, degenerate.max_form
        ));
    }
    Ok(SuiteReport::new("hankel", cfg, rows, None, checks, notes))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> RunConfig {
        RunConfig {
            grid_l: 16.0,
            grid_n: 512,
            levels: 16,
            trials: 3,
            mixtures: 2,
            ..RunConfig::default()
        }
    }

    #[test]
    fn unknown_suite() {
        assert!(matches!(run_suite("lemma99", &small()), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn empty_family_is_reported() {
        let mut c = small();
        c.f_family.clear();
        assert!(matches!(run_suite("prop31", &c), Err(Error::EmptyFamily(_))));
        let mut c = small();
        c.g_family = vec!["nope".into()];
        assert!(matches!(run_suite("prop31", &c), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn growth_rows_cover_all_heights() {
        let r = run_suite("lemma31", &small()).unwrap();
        assert_eq!(r.rows.len(), 4 * 4);
        assert!(r.rows.iter().any(|row| row.case == "sgn@y=1000"));
        let csv = r.to_csv();
        assert!(csv.starts_with("case,lhs,rhs,ratio\n"));
        assert_eq!(csv.lines().count(), 17);
    }

    #[test]
    fn ratio_of_zero_over_zero() {
        assert_eq!(Row::new("z", 0.0, 0.0).ratio, 0.0);
        assert!(Row::new("z", 1.0, 0.0).ratio.is_infinite());
    }

    #[test]
    fn json_carries_hash_and_version() {
        let c = small();
        let r = run_suite("cr", &c).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["config_hash"], c.hash());
        assert_eq!(v["version"], VERSION);
        assert!(v["max_ratio"].is_number() && v["pass"].is_boolean());
    }
}
