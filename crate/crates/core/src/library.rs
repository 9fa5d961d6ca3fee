//! Closed-form inputs addressable by name.
//!
//! Boundary functions carry their exact continuation so that transforms see
//! the true tails; fields are evaluated directly at `x + iy`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::grid::{DecayClass, Extension, Grid1D, HalfPlaneField, HeightLadder, SampledFunction};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Names accepted by [`boundary`].
pub const BOUNDARY_NAMES: &[&str] = &[
    "zero", "one", "poisson1", "conj_poisson1", "gauss", "wcos", "indicator", "chi01", "sgn", "logabs", "expi", "dpole",
];

/// Names accepted by [`field`].
pub const FIELD_NAMES: &[&str] = &[
    "zero", "one", "dpole", "pole", "expiz", "pole_bump", "pole_exp", "dpole2", "tpole", "cpole", "logratio", "expiz_half",
];

/// Closed-form members of `H¹`.
pub const H1_FAMILY: &[&str] = &["dpole", "pole_bump", "pole_exp", "dpole2", "tpole"];

/// Closed-form bounded holomorphic functions, members of BMOA.
pub const BMOA_FAMILY: &[&str] = &["one", "expiz", "cpole", "logratio", "expiz_half"];

fn real(v: f64) -> Complex64 {
    Complex64::new(v, 0.0)
}

/// `sgn(x)` with `sgn(0) = 0`.
pub fn sgn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

fn with_ext(
    grid: Grid1D,
    decay: DecayClass,
    f: impl Fn(f64) -> Complex64 + Send + Sync + Clone + 'static,
) -> Result<SampledFunction> {
    Ok(SampledFunction::from_fn(grid, decay, f.clone())?.with_extension(Extension::new(f)))
}

/// `log|x|` with the sample at the origin taken at `dx/2`.
pub fn log_abs(grid: Grid1D) -> Result<SampledFunction> {
    let half = 0.5 * grid.dx();
    let f = move |x: f64| real(x.abs().max(half).ln());
    Ok(SampledFunction::from_fn(grid, DecayClass::LogGrowth, f)?
        .with_extension(Extension::new(|t: f64| real(t.abs().ln()))))
}

/// Boundary function by name.
pub fn boundary(name: &str, grid: Grid1D) -> Result<SampledFunction> {
    match name {
        "zero" => Ok(SampledFunction::zeros(grid)),
        "one" => with_ext(grid, DecayClass::LogGrowth, |_| real(1.0)),
        "poisson1" => with_ext(grid, DecayClass::Power(2.0), |x| real(1.0 / (PI * (1.0 + x * x)))),
        "conj_poisson1" => with_ext(grid, DecayClass::Power(1.0), |x| real(x / (PI * (1.0 + x * x)))),
        "gauss" => SampledFunction::from_real_fn(grid, DecayClass::Rapid, |x| (-x * x).exp()),
        "wcos" => SampledFunction::from_real_fn(grid, DecayClass::Rapid, wcos),
        "indicator" => SampledFunction::from_real_fn(grid, DecayClass::Rapid, |x| indicator(x, -0.5, 0.5)),
        "chi01" => SampledFunction::from_real_fn(grid, DecayClass::Rapid, |x| indicator(x, 0.0, 1.0)),
        "sgn" => with_ext(grid, DecayClass::LogGrowth, |x| real(sgn(x))),
        "logabs" => log_abs(grid),
        "expi" => with_ext(grid, DecayClass::LogGrowth, |x| (I * x).exp()),
        "dpole" => with_ext(grid, DecayClass::Power(2.0), |x| (real(x) + I).powi(-2)),
        _ => Err(Error::InvalidArgument(format!(
            "unknown boundary function `{name}` (known: {})",
            BOUNDARY_NAMES.join(", ")
        ))),
    }
}

/// `χ_[a, b)`.
pub fn indicator(x: f64, a: f64, b: f64) -> f64 {
    if x >= a && x < b {
        1.0
    } else {
        0.0
    }
}

/// `exp(−x²/100) cos x`. Its Hilbert transform is `exp(−x²/100) sin x` up
/// to about `1e-11`, the Gaussian's spectral mass beyond frequency one.
pub fn wcos(x: f64) -> f64 {
    (-x * x / 100.0).exp() * x.cos()
}

/// `exp(−x²/100) sin x`.
pub fn wsin(x: f64) -> f64 {
    (-x * x / 100.0).exp() * x.sin()
}

/// A holomorphic function of `z` with its decay class.
pub struct ClosedForm {
    pub decay: DecayClass,
    pub eval: Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
}

/// Closed-form holomorphic function by name.
pub fn closed_form(name: &str) -> Result<ClosedForm> {
    let (decay, eval): (DecayClass, Box<dyn Fn(Complex64) -> Complex64 + Send + Sync>) = match name {
        "zero" => (DecayClass::Rapid, Box::new(|_| real(0.0))),
        "one" => (DecayClass::LogGrowth, Box::new(|_| real(1.0))),
        "dpole" => (DecayClass::Power(2.0), Box::new(|z| (z + I).powi(-2))),
        "pole" => (DecayClass::Power(1.0), Box::new(|z| (z + I).inv())),
        "expiz" => (DecayClass::LogGrowth, Box::new(|z| (I * z).exp())),
        // 1/(z+i) times the bounded bump 1/(z+2i)
        "pole_bump" => (DecayClass::Power(2.0), Box::new(|z| ((z + I) * (z + 2.0 * I)).inv())),
        // 1/(z+i)² times e^{iz}
        "pole_exp" => (DecayClass::Power(2.0), Box::new(|z| (I * z).exp() * (z + I).powi(-2))),
        "dpole2" => (DecayClass::Power(2.0), Box::new(|z| (z + 2.0 * I).powi(-2))),
        "tpole" => (DecayClass::Power(3.0), Box::new(|z| (z + I).powi(-3))),
        "cpole" => (DecayClass::Power(1.0), Box::new(|z| I / (z + I))),
        // (z+2i)/(z+i) stays in the disc |w − 3/2| ≤ 1/2, so the principal log is holomorphic
        "logratio" => (DecayClass::Power(1.0), Box::new(|z| ((z + 2.0 * I) / (z + I)).ln())),
        "expiz_half" => (DecayClass::LogGrowth, Box::new(|z| (0.5 * I * z).exp())),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "unknown field `{name}` (known: {})",
                FIELD_NAMES.join(", ")
            )))
        }
    };
    Ok(ClosedForm { decay, eval })
}

/// Field by name on `grid × ladder`.
pub fn field(name: &str, grid: Grid1D, ladder: &HeightLadder) -> Result<HalfPlaneField> {
    let cf = closed_form(name)?;
    HalfPlaneField::from_fn(grid, ladder.clone(), cf.decay, |z| (cf.eval)(z))
}

/// Boundary trace of a closed-form field, with its exact continuation.
pub fn closed_form_boundary(name: &str, grid: Grid1D) -> Result<SampledFunction> {
    let cf = closed_form(name)?;
    let eval = std::sync::Arc::new(cf.eval);
    let e2 = eval.clone();
    Ok(SampledFunction::from_fn(grid, cf.decay, |x| eval(real(x)))?
        .with_extension(Extension::new(move |t| e2(real(t)))))
}

/// Seeded BMO test function: a mixture of shifted signs, logarithms
/// `log|x − c|` and bounded oscillations, each with its own weight.
pub fn bmo_mixture(grid: Grid1D, seed: u64) -> Result<SampledFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 0.5 * grid.dx();
    let mut terms: Vec<(u8, f64, f64)> = Vec::new();
    for kind in 0..3u8 {
        for _ in 0..2 {
            let w: f64 = rng.gen_range(-1.0..1.0);
            let c: f64 = rng.gen_range(-4.0..4.0);
            terms.push((kind, w, c));
        }
    }
    let eval = move |x: f64, guard: f64| -> f64 {
        terms
            .iter()
            .map(|&(kind, w, c)| {
                w * match kind {
                    0 => sgn(x - c),
                    1 => (x - c).abs().max(guard).ln(),
                    _ => (x / (1.0 + c.abs())).cos(),
                }
            })
            .sum()
    };
    let e2 = eval.clone();
    Ok(SampledFunction::from_real_fn(grid, DecayClass::LogGrowth, |x| eval(x, half))?
        .with_extension(Extension::new(move |t| real(e2(t, 0.0)))))
}

/// Seeded smooth bump with spectrum in `[0, ∞)`: a modulated Gaussian
/// `exp(−(x − c)²/(2σ²) + iωx)` with `ω ≥ 3/σ`.
pub fn analytic_bump(grid: Grid1D, seed: u64) -> Result<SampledFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: f64 = rng.gen_range(-3.0..3.0);
    let sigma: f64 = rng.gen_range(0.7..2.0);
    let omega = rng.gen_range(6.0..9.0) / sigma;
    let amp = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    SampledFunction::from_fn(grid, DecayClass::Rapid, |x| {
        amp * (-(x - c).powi(2) / (2.0 * sigma * sigma)).exp() * (I * omega * x).exp()
    })
}

/// Seeded Gaussian `exp(−(x − c)²/(2σ²))`.
pub fn gaussian(grid: Grid1D, seed: u64) -> Result<SampledFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c: f64 = rng.gen_range(-3.0..3.0);
    let sigma: f64 = rng.gen_range(0.5..2.0);
    SampledFunction::from_real_fn(grid, DecayClass::Rapid, |x| (-(x - c).powi(2) / (2.0 * sigma * sigma)).exp())
}

/// Seeded mean-zero pair `a·(G(x − c₁) − G(x − c₂))` of equal Gaussians
/// with a random complex amplitude.
pub fn gaussian_pair(grid: Grid1D, seed: u64) -> Result<SampledFunction> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let c1: f64 = rng.gen_range(-4.0..4.0);
    let gap: f64 = rng.gen_range(0.5..3.0);
    let c2 = if c1 > 0.0 { c1 - gap } else { c1 + gap };
    let sigma: f64 = rng.gen_range(0.5..1.5);
    let amp = Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI));
    let g = move |x: f64| (-x * x / (2.0 * sigma * sigma)).exp();
    SampledFunction::from_fn(grid, DecayClass::Rapid, |x| amp * (g(x - c1) - g(x - c2)))
}
