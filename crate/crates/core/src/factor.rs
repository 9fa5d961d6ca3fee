//! Explicit factorization `h = f · g` with `g = P[b + iHb]` built from the
//! Coifman–Rochberg symbol `b = log(e + |x|) + log(e + M(|h₀|^{1/2}))`.

use std::f64::consts::E;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::{make_grid, DecayClass, Extension, Grid1D, HalfPlaneField, HeightLadder, SampledFunction};
use crate::maximal::hl_maximal;
use crate::spaces::bmo_plus_norm;
use crate::transforms::{boundary_value, hilbert_transform, holomorphic_extend, poisson_extend, szego_project};

/// Relative change of `∫|f₀|` under domain doubling above which the result
/// is flagged.
pub const DOUBLING_TOLERANCE: f64 = 0.05;

/// Output of [`factorize`].
#[derive(Debug, Clone)]
pub struct FactorizationResult {
    pub f_field: HalfPlaneField,
    pub g_field: HalfPlaneField,
    pub h0: SampledFunction,
    pub b: SampledFunction,
    pub g0: SampledFunction,
    pub f0: SampledFunction,
    /// `max |h − f g| / max |h|` over grid × ladder.
    pub residual: f64,
    /// `Σ |f₀(x_j)| dx` over the window.
    pub f_l1: f64,
    /// BMO⁺ norm of `Re g₀ = b`.
    pub g_norm: f64,
    pub boundary_gap: f64,
    pub boundary_flagged: bool,
}

/// Scalar diagnostics of a factorization, for reports.
#[derive(Debug, Clone, Serialize)]
pub struct FactorizationSummary {
    pub residual: f64,
    pub f_l1: f64,
    pub g_norm: f64,
    pub min_b: f64,
    pub min_abs_g0: f64,
    pub max_f0_over_h0: f64,
    pub boundary_gap: f64,
    pub boundary_flagged: bool,
}

impl FactorizationResult {
    pub fn summary(&self) -> FactorizationSummary {
        let min_b = self.b.values().iter().map(|v| v.re).fold(f64::INFINITY, f64::min);
        let min_abs_g0 = self.g0.values().iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
        let max_f0_over_h0 = self
            .f0
            .values()
            .iter()
            .zip(self.h0.values())
            .filter(|(_, h)| h.norm() > 0.0)
            .map(|(f, h)| f.norm() / h.norm())
            .fold(0.0, f64::max);
        FactorizationSummary {
            residual: self.residual,
            f_l1: self.f_l1,
            g_norm: self.g_norm,
            min_b,
            min_abs_g0,
            max_f0_over_h0,
            boundary_gap: self.boundary_gap,
            boundary_flagged: self.boundary_flagged,
        }
    }
}

/// `b = log(e + |x|) + log(e + M(|h₀|^{1/2}))`, real and at least one.
///
/// Beyond the window the maximal term is continued by its `1/|t|` decay
/// from the edge values.
pub fn coifman_rochberg_symbol(h0: &SampledFunction) -> Result<SampledFunction> {
    let root = h0.map(h0.decay().pow(0.5), |_, v| Complex64::new(v.norm().sqrt(), 0.0))?;
    let m = hl_maximal(&root)?;
    let grid = *h0.grid();
    let n = grid.len();
    let mv = m.values();
    let values: Vec<Complex64> = grid
        .nodes()
        .zip(mv)
        .map(|(x, mx)| Complex64::new((E + x.abs()).ln() + (E + mx.re).ln(), 0.0))
        .collect();
    let (xl, ml) = (grid.node(0).abs(), mv[0].re);
    let (xr, mr) = (grid.node(n - 1).abs(), mv[n - 1].re);
    let ext = Extension::new(move |t: f64| {
        let tail = if t >= 0.0 { mr * xr / t.abs() } else { ml * xl / t.abs() };
        Complex64::new((E + t.abs()).ln() + (E + tail).ln(), 0.0)
    });
    Ok(SampledFunction::new(grid, values, DecayClass::LogGrowth)?.with_extension(ext))
}

/// `g₀ = b + iHb` and its holomorphic extension `g = (P_y + iQ_y) * b`.
pub fn build_g(b: &SampledFunction, ladder: &HeightLadder) -> Result<(SampledFunction, HalfPlaneField)> {
    if !b.is_real() {
        return Err(Error::InvalidArgument("the symbol must be real".into()));
    }
    if let Some(j) = b.values().iter().position(|v| v.re < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "the symbol must be at least 1, got {} at node {j}",
            b.values()[j].re
        )));
    }
    let hb = hilbert_transform(b)?;
    let values = b
        .values()
        .iter()
        .zip(hb.values())
        .map(|(bv, h)| Complex64::new(bv.re, h.re))
        .collect();
    let g0 = SampledFunction::new(*b.grid(), values, DecayClass::LogGrowth)?;
    let g_field = holomorphic_extend(b, ladder)?;
    Ok((g0, g_field))
}

/// Pointwise product of two fields on the same grid and ladder.
pub fn product(f_field: &HalfPlaneField, g_field: &HalfPlaneField) -> Result<HalfPlaneField> {
    f_field.check_compatible(g_field)?;
    let values = f_field.values().iter().zip(g_field.values()).map(|(a, b)| a * b).collect();
    HalfPlaneField::new(
        *f_field.grid(),
        f_field.ladder().clone(),
        values,
        f_field.decay().product(&g_field.decay()),
    )
}

/// Factorizes `h` as `f · g` with `g` from [`build_g`] of the symbol of the
/// boundary value of `h`, and `f = h / g` pointwise.
pub fn factorize(h_field: &HalfPlaneField) -> Result<FactorizationResult> {
    let bv = boundary_value(h_field)?;
    let h0 = bv.function;
    let b = coifman_rochberg_symbol(&h0)?;
    let (g0, g_field) = build_g(&b, h_field.ladder())?;
    let f_values: Vec<Complex64> = h_field.values().iter().zip(g_field.values()).map(|(h, g)| h / g).collect();
    let f_field = HalfPlaneField::new(*h_field.grid(), h_field.ladder().clone(), f_values, h_field.decay())?;
    let f0_values = h0.values().iter().zip(g0.values()).map(|(h, g)| h / g).collect();
    let f0 = SampledFunction::new(*h0.grid(), f0_values, h0.decay())?;

    let h_max = h_field.max_abs();
    let residual = if h_max == 0.0 {
        0.0
    } else {
        h_field
            .values()
            .iter()
            .zip(f_field.values())
            .zip(g_field.values())
            .map(|((h, f), g)| (h - f * g).norm())
            .fold(0.0, f64::max)
            / h_max
    };
    let f_l1 = f0.values().iter().map(|v| v.norm()).sum::<f64>() * f0.grid().dx();
    let g_norm = bmo_plus_norm(&b)?.value;
    Ok(FactorizationResult {
        f_field,
        g_field,
        h0,
        b,
        g0,
        f0,
        residual,
        f_l1,
        g_norm,
        boundary_gap: bv.cauchy_gap,
        boundary_flagged: bv.flagged,
    })
}

/// Factorizes `h` given by boundary data: the data are projected onto
/// non-negative frequencies and Poisson-extended first.
pub fn factorize_boundary(h0: &SampledFunction, ladder: &HeightLadder) -> Result<FactorizationResult> {
    let analytic = szego_project(h0)?;
    factorize(&poisson_extend(&analytic, ladder)?)
}

/// `∫|f₀|` on a grid and on the grid of twice the half-width and twice the
/// samples.
#[derive(Debug, Clone, Serialize)]
pub struct DoublingCheck {
    pub l1_base: f64,
    pub l1_doubled: f64,
    pub relative_change: f64,
    /// Set when the change exceeds [`DOUBLING_TOLERANCE`].
    pub flagged: bool,
}

/// Runs [`factorize`] on the field `build(grid)` and on the field built on
/// the grid of twice the half-width and twice the samples.
pub fn doubling_check(build: &dyn Fn(Grid1D) -> Result<HalfPlaneField>, grid: Grid1D) -> Result<DoublingCheck> {
    let run = |g: Grid1D| -> Result<f64> { Ok(factorize(&build(g)?)?.f_l1) };
    let l1_base = run(grid)?;
    let l1_doubled = run(make_grid(2.0 * grid.half_width(), 2 * grid.len())?)?;
    let relative_change = if l1_base == 0.0 {
        if l1_doubled == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        (l1_doubled - l1_base).abs() / l1_base
    };
    Ok(DoublingCheck {
        l1_base,
        l1_doubled,
        relative_change,
        flagged: relative_change > DOUBLING_TOLERANCE,
    })
}
