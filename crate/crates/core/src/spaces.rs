//! Musielak weights, Luxemburg norms, BMO, Hardy norms and the Carleson box
//! quantities.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{DecayClass, Grid1D, HalfPlaneField, SampledFunction};

/// Maximum number of bracket doublings in the Luxemburg solver.
pub const MAX_DOUBLINGS: usize = 200;

/// Target `|I(λ) − 1|` for the Luxemburg root.
pub const LUXEMBURG_TOL: f64 = 1e-10;

#[inline]
fn log_plus(s: f64) -> f64 {
    if s > 1.0 {
        s.ln()
    } else {
        0.0
    }
}

/// The three position-dependent Orlicz weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MusielakWeight {
    /// `θ(x, t) = t / (1 + log₊|x| + ½ log₊ t)`
    Theta,
    /// `θ₀(x, t) = θ(x, t²)`
    Theta0,
    /// `θ₁(x, t) = θ(x, t)²`
    Theta1,
}

impl MusielakWeight {
    /// Unchecked evaluation; `t` must be non-negative.
    #[inline]
    pub fn eval(self, x: f64, t: f64) -> f64 {
        let theta = |t: f64| t / (1.0 + log_plus(x.abs()) + 0.5 * log_plus(t));
        match self {
            MusielakWeight::Theta => theta(t),
            MusielakWeight::Theta0 => theta(t * t),
            MusielakWeight::Theta1 => theta(t).powi(2),
        }
    }

    /// Decay of `w(x, |f(x)|)` for `f` of the given decay class.
    fn composed_decay(self, d: DecayClass) -> DecayClass {
        match self {
            MusielakWeight::Theta => d,
            MusielakWeight::Theta0 | MusielakWeight::Theta1 => d.pow(2.0),
        }
    }
}

impl fmt::Display for MusielakWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MusielakWeight::Theta => "theta",
            MusielakWeight::Theta0 => "theta0",
            MusielakWeight::Theta1 => "theta1",
        })
    }
}

impl FromStr for MusielakWeight {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "theta" => Ok(MusielakWeight::Theta),
            "theta0" => Ok(MusielakWeight::Theta0),
            "theta1" => Ok(MusielakWeight::Theta1),
            _ => Err(Error::Parse(format!("unknown weight `{s}`"))),
        }
    }
}

pub fn weight_eval(w: MusielakWeight, x: f64, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::InvalidArgument(format!("weight argument must be non-negative, got {t}")));
    }
    Ok(w.eval(x, t))
}

/// The open interval `(x0 − r, x0 + r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Interval {
    pub center: f64,
    pub radius: f64,
}

impl Interval {
    pub fn new(center: f64, radius: f64) -> Result<Self> {
        if !(radius > 0.0 && radius.is_finite()) {
            return Err(Error::InvalidArgument(format!("radius must be positive, got {radius}")));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, x: f64) -> bool {
        (x - self.center).abs() < self.radius
    }
}

/// Carleson box `{|x − x0| < r, 0 < y < r}` over an interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tent {
    pub base: Interval,
}

impl Tent {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        self.base.contains(x) && y > 0.0 && y < self.base.radius
    }
}

/// A run of consecutive nodes `lo..=hi` standing for an interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct NodeRun {
    lo: usize,
    hi: usize,
}

impl NodeRun {
    fn len(&self) -> usize {
        self.hi - self.lo + 1
    }

    fn interval(&self, grid: &Grid1D) -> Interval {
        let dx = grid.dx();
        Interval {
            center: 0.5 * (grid.node(self.lo) + grid.node(self.hi)),
            radius: 0.5 * self.len() as f64 * dx,
        }
    }
}

/// Half-octave radii per doubling in the centred part of the family.
const CENTRED_STEPS_PER_OCTAVE: usize = 2;

/// The finite interval family shared by every supremum: all dyadic node
/// counts `2^k` at every offset, plus runs centred on each node with radii
/// on a half-octave ladder. Only runs inside the window are used.
fn interval_family(grid: &Grid1D, min_len: usize) -> Vec<NodeRun> {
    let n = grid.len();
    let mut fam = Vec::new();
    let mut len = min_len.max(1).next_power_of_two();
    while len <= n {
        fam.extend((0..=n - len).map(|lo| NodeRun { lo, hi: lo + len - 1 }));
        len *= 2;
    }
    let dx = grid.dx();
    let mut widths: Vec<usize> = Vec::new();
    let mut k = 0usize;
    loop {
        let r = dx * 2f64.powf(k as f64 / CENTRED_STEPS_PER_OCTAVE as f64);
        if r > grid.half_width() {
            break;
        }
        let w = ((r / dx).ceil() as usize).saturating_sub(1);
        if 2 * w + 1 >= min_len && widths.last() != Some(&w) {
            widths.push(w);
        }
        k += 1;
    }
    for &w in &widths {
        if 2 * w + 1 > n {
            break;
        }
        fam.extend((w..n - w).map(|j| NodeRun { lo: j - w, hi: j + w }));
    }
    fam
}

/// Which parameter attained a supremum or solved a root problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Attaining {
    None,
    Scale(f64),
    Level(f64),
    Interval { center: f64, radius: f64 },
}

/// A norm value with solver diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NormReport {
    pub value: f64,
    pub attaining_parameter: Attaining,
    pub iterations: usize,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bracket: Option<(f64, f64)>,
}

impl NormReport {
    fn plain(value: f64, attaining_parameter: Attaining) -> Self {
        Self {
            value,
            attaining_parameter,
            iterations: 0,
            tolerance: 0.0,
            bracket: None,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// `∫ w(x, |f(x)|/λ) dx` with the tail from the decay model.
pub fn luxemburg_integral(f0: &SampledFunction, w: MusielakWeight, lambda: f64) -> Result<f64> {
    let decay = w.composed_decay(f0.decay());
    let g = f0.map(decay, |x, v| Complex64::new(w.eval(x, v.norm() / lambda), 0.0))?;
    Ok(g.integrate()?.re)
}

/// Luxemburg norm `inf{λ > 0 : ∫ w(x, |f|/λ) dx ≤ 1}` by bracketed
/// bisection in `log λ`.
///
/// The returned value always satisfies `I(λ) ≤ 1`.
pub fn luxemburg_norm(f0: &SampledFunction, w: MusielakWeight) -> Result<NormReport> {
    f0.require_integrable()?;
    let scale = f0.max_abs();
    if scale == 0.0 {
        return Ok(NormReport {
            tolerance: LUXEMBURG_TOL,
            ..NormReport::plain(0.0, Attaining::Scale(0.0))
        });
    }
    // Solve for μ = λ / max|f| so that tiny inputs stay representable.
    let unit = f0.map(f0.decay(), |_, v| v / scale)?;
    let integral = |mu: f64| luxemburg_integral(&unit, w, mu);
    let mut iterations = 0usize;
    let (mut lo, mut hi) = (1.0f64, 1.0f64);
    let i_start = integral(lo)?;
    let mut i_hi;
    if i_start > 1.0 {
        loop {
            hi *= 2.0;
            iterations += 1;
            i_hi = integral(hi)?;
            if i_hi <= 1.0 {
                break;
            }
            lo = hi;
            if iterations >= MAX_DOUBLINGS {
                return Err(Error::BracketFailure(MAX_DOUBLINGS));
            }
        }
    } else {
        i_hi = i_start;
        loop {
            lo *= 0.5;
            iterations += 1;
            let i_lo = integral(lo)?;
            if i_lo > 1.0 {
                break;
            }
            hi = lo;
            i_hi = i_lo;
            if iterations >= MAX_DOUBLINGS {
                return Err(Error::BracketFailure(MAX_DOUBLINGS));
            }
        }
    }
    let bracket = (lo, hi);
    while (i_hi - 1.0).abs() > LUXEMBURG_TOL && hi / lo - 1.0 > 4.0 * f64::EPSILON {
        let mid = (lo * hi).sqrt();
        iterations += 1;
        let i_mid = integral(mid)?;
        if i_mid > 1.0 {
            lo = mid;
        } else {
            hi = mid;
            i_hi = i_mid;
        }
        if iterations > 10 * MAX_DOUBLINGS {
            break;
        }
    }
    Ok(NormReport {
        value: hi * scale,
        attaining_parameter: Attaining::Scale(hi * scale),
        iterations,
        tolerance: LUXEMBURG_TOL,
        bracket: Some((bracket.0 * scale, bracket.1 * scale)),
    })
}

fn best_of(candidates: Vec<(f64, Attaining)>) -> (f64, Attaining) {
    candidates
        .into_iter()
        .fold((0.0, Attaining::None), |acc, c| if c.0 > acc.0 { c } else { acc })
}

/// Mean oscillation `m_I |f − m_I f|` over one run of nodes.
fn mean_oscillation(values: &[Complex64], prefix: &[Complex64], run: NodeRun) -> f64 {
    let len = run.len() as f64;
    let mean = (prefix[run.hi + 1] - prefix[run.lo]) / len;
    values[run.lo..=run.hi].iter().map(|v| (v - mean).norm()).sum::<f64>() / len
}

/// BMO seminorm: supremum of mean oscillations over the interval family.
pub fn bmo_norm(f0: &SampledFunction) -> Result<NormReport> {
    let grid = *f0.grid();
    let values = f0.values();
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(Complex64::new(0.0, 0.0));
    for v in values {
        let last = *prefix.last().expect("non-empty");
        prefix.push(last + v);
    }
    let family = interval_family(&grid, 2);
    let scores: Vec<(f64, Attaining)> = family
        .par_iter()
        .map(|run| {
            let iv = run.interval(&grid);
            (
                mean_oscillation(values, &prefix, *run),
                Attaining::Interval {
                    center: iv.center,
                    radius: iv.radius,
                },
            )
        })
        .collect();
    let (value, at) = best_of(scores);
    Ok(NormReport::plain(value, at))
}

/// `‖f‖_BMO + ∫_{−1}^{1} |f|`.
pub fn bmo_plus_norm(f0: &SampledFunction) -> Result<NormReport> {
    let mut r = bmo_norm(f0)?;
    r.value += f0.integrate_abs_over(-1.0, 1.0);
    Ok(r)
}

/// `sup_y (∫ |f(x + iy)|^p dx)^{1/p}` over the ladder.
pub fn hp_norm(field: &HalfPlaneField, p: f64) -> Result<NormReport> {
    if !(p > 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!("exponent must be positive, got {p}")));
    }
    let decay = field.decay().pow(p);
    if !decay.is_integrable() {
        return Err(Error::NonIntegrable(format!(
            "|f|^{p} has decay class `{decay}` and cannot be integrated"
        )));
    }
    let levels = field.ladder().levels();
    let per_level: Vec<(f64, Attaining)> = (0..levels.len())
        .into_par_iter()
        .map(|l| {
            let s = field.slice_function(l);
            let g = s.map(decay, |_, v| Complex64::new(v.norm().powf(p), 0.0))?;
            Ok((g.integrate()?.re.powf(1.0 / p), Attaining::Level(levels[l])))
        })
        .collect::<Result<_>>()?;
    let (value, at) = best_of(per_level);
    Ok(NormReport::plain(value, at))
}

/// `sup_y ‖f(· + iy)‖_{L^log}` over the ladder.
pub fn hlog_norm(field: &HalfPlaneField) -> Result<NormReport> {
    let levels = field.ladder().levels();
    let per_level: Vec<(f64, Attaining, usize)> = (0..levels.len())
        .into_par_iter()
        .map(|l| {
            let r = luxemburg_norm(&field.slice_function(l), MusielakWeight::Theta)?;
            Ok((r.value, Attaining::Level(levels[l]), r.iterations))
        })
        .collect::<Result<_>>()?;
    let iterations = per_level.iter().map(|p| p.2).sum();
    let (value, at) = best_of(per_level.into_iter().map(|p| (p.0, p.1)).collect());
    Ok(NormReport {
        iterations,
        tolerance: LUXEMBURG_TOL,
        ..NormReport::plain(value, at)
    })
}

/// Centred first-derivative stencils of order 8, 6, 4 and 2.
const STENCILS: [&[f64]; 4] = [
    &[4.0 / 5.0, -1.0 / 5.0, 4.0 / 105.0, -1.0 / 280.0],
    &[3.0 / 4.0, -3.0 / 20.0, 1.0 / 60.0],
    &[2.0 / 3.0, -1.0 / 12.0],
    &[1.0 / 2.0],
];

/// `∂_x` of one slice by high-order finite differences, dropping to lower
/// order near the window edges and one-sided at the edge nodes.
pub(crate) fn derivative(values: &[Complex64], dx: f64) -> Vec<Complex64> {
    let n = values.len();
    let inv = 1.0 / dx;
    (0..n)
        .map(|j| {
            let room = j.min(n - 1 - j);
            if room == 0 {
                return if j == 0 {
                    (values[1] * 4.0 - values[0] * 3.0 - values[2]) * (0.5 * inv)
                } else {
                    (values[n - 3] + values[n - 1] * 3.0 - values[n - 2] * 4.0) * (0.5 * inv)
                };
            }
            let stencil = STENCILS.iter().find(|s| s.len() <= room).expect("order-2 fits");
            let mut acc = Complex64::new(0.0, 0.0);
            for (k, c) in stencil.iter().enumerate() {
                acc += (values[j + k + 1] - values[j - k - 1]) * *c;
            }
            acc * inv
        })
        .collect()
}

/// Per-level prefix sums of `|∂_x f|²` in x.
struct GradientSums {
    prefix: Vec<Vec<f64>>,
    levels: Vec<f64>,
    dx: f64,
}

impl GradientSums {
    fn new(field: &HalfPlaneField) -> Self {
        let dx = field.grid().dx();
        let prefix = (0..field.ladder().len())
            .into_par_iter()
            .map(|l| {
                let d = derivative(field.slice(l), dx);
                let mut p = Vec::with_capacity(d.len() + 1);
                let mut acc = 0.0;
                p.push(0.0);
                for v in d {
                    acc += v.norm_sqr();
                    p.push(acc);
                }
                p
            })
            .collect();
        Self {
            prefix,
            levels: field.ladder().levels().to_vec(),
            dx,
        }
    }

    /// `∫_0^r ∫_run |∂_x f|² y dx dy`: trapezoid in `log y` over the ladder,
    /// linear interpolation to the top `r`, and `F(y₀) y₀ / 2` below the
    /// lowest level.
    fn box_integral(&self, run: NodeRun, r: f64) -> f64 {
        let row = |l: usize| (self.prefix[l][run.hi + 1] - self.prefix[l][run.lo]) * self.dx * self.levels[l];
        let y0 = self.levels[0];
        if r <= y0 {
            return row(0) * r * r / (2.0 * y0);
        }
        let mut acc = row(0) * y0 * 0.5;
        let mut prev = (y0.ln(), row(0) * y0);
        for l in 1..self.levels.len() {
            let y = self.levels[l];
            let cur = (y.ln(), row(l) * y);
            if y >= r {
                let t = (r.ln() - prev.0) / (cur.0 - prev.0);
                let top = prev.1 + t * (cur.1 - prev.1);
                acc += 0.5 * (prev.1 + top) * (r.ln() - prev.0);
                return acc;
            }
            acc += 0.5 * (prev.1 + cur.1) * (cur.0 - prev.0);
            prev = cur;
        }
        acc
    }
}

fn box_supremum(field: &HalfPlaneField, factor: f64, weight: impl Fn(&Interval) -> f64 + Sync) -> NormReport {
    let grid = *field.grid();
    let sums = GradientSums::new(field);
    let family = interval_family(&grid, 1);
    let scores: Vec<(f64, Attaining)> = family
        .par_iter()
        .map(|run| {
            let iv = run.interval(&grid);
            let v = factor * weight(&iv) * sums.box_integral(*run, iv.radius);
            (
                v,
                Attaining::Interval {
                    center: iv.center,
                    radius: iv.radius,
                },
            )
        })
        .collect();
    let (value, at) = best_of(scores);
    NormReport::plain(value, at)
}

/// Carleson box ratio `sup_I |I|^{-1} ∫∫_{T(I)} |g'|² y dx dy`.
pub fn carleson_ratio(g_field: &HalfPlaneField) -> Result<NormReport> {
    Ok(box_supremum(g_field, 1.0, |iv| 1.0 / (2.0 * iv.radius)))
}

/// Logarithmically weighted tent seminorm
/// `sup_I (|log r| + log(e + |x0|)) / r · ∫∫_{T(I)} |∇b|² y dx dy`, with
/// `|∇b|² = 2|b'|²`.
pub fn bmoa_log_seminorm(b_field: &HalfPlaneField) -> Result<NormReport> {
    Ok(box_supremum(b_field, 2.0, |iv| {
        (iv.radius.ln().abs() + (std::f64::consts::E + iv.center.abs()).ln()) / iv.radius
    }))
}
