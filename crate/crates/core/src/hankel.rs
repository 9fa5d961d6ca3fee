//! Hankel operator `H_b f = P(b · conj f)`, the bilinear form `⟨b, fg⟩` and
//! a seeded boundedness study against the tent seminorm.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor::product;
use crate::grid::{DecayClass, HalfPlaneField, HeightLadder, SampledFunction};
use crate::library::gaussian_pair;
use crate::spaces::{bmo_plus_norm, bmoa_log_seminorm, hp_norm};
use crate::transforms::{boundary_value, poisson_extend, szego_project};

/// Growth factor of the continuation, relative to the window maximum, above
/// which a symbol counts as unbounded.
const BOUNDED_SLACK: f64 = 2.0;

/// Whether `b0` stays bounded beyond the window: its continuation is probed
/// at geometrically spaced points out to `10⁸ L`.
pub fn is_bounded(b0: &SampledFunction) -> bool {
    let cap = BOUNDED_SLACK * b0.max_abs().max(f64::MIN_POSITIVE);
    let l = b0.grid().half_width();
    (1..=8).all(|k| {
        let t = l * 10f64.powi(k);
        b0.continuation(t).norm() <= cap && b0.continuation(-t).norm() <= cap
    })
}

fn require_bounded(b0: &SampledFunction) -> Result<()> {
    if is_bounded(b0) {
        Ok(())
    } else {
        Err(Error::UnboundedSymbol(
            "the symbol's continuation grows beyond the window".into(),
        ))
    }
}

/// `P(b₀ · conj f₀)`.
pub fn hankel_apply(b0: &SampledFunction, f0: &SampledFunction) -> Result<SampledFunction> {
    require_bounded(b0)?;
    f0.require_integrable()?;
    b0.grid().check_same(f0.grid())?;
    let values = b0.values().iter().zip(f0.values()).map(|(b, f)| b * f.conj()).collect();
    let prod = SampledFunction::new(*b0.grid(), values, b0.decay().product(&f0.decay()))?;
    szego_project(&prod)
}

/// Value of the form with the boundary diagnostic of the product.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelForm {
    pub value: Complex64,
    pub boundary_flagged: bool,
}

/// `∫ b₀ · conj(p₀)` for boundary data `p₀` of a product.
pub fn boundary_pairing(b0: &SampledFunction, p0: &SampledFunction) -> Result<Complex64> {
    b0.grid().check_same(p0.grid())?;
    let values = b0.values().iter().zip(p0.values()).map(|(b, p)| b * p.conj()).collect();
    SampledFunction::new(*b0.grid(), values, b0.decay().product(&p0.decay()))?.integrate()
}

/// `⟨b, fg⟩ = ∫ b₀ · conj((fg)₀) dx` with `(fg)₀` the boundary value of the
/// product field.
pub fn hankel_form(b0: &SampledFunction, f_field: &HalfPlaneField, g_field: &HalfPlaneField) -> Result<HankelForm> {
    let fg = product(f_field, g_field)?;
    let bv = boundary_value(&fg)?;
    Ok(HankelForm {
        value: boundary_pairing(b0, &bv.function)?,
        boundary_flagged: bv.flagged,
    })
}

/// A symbol with its holomorphic extension.
#[derive(Debug, Clone)]
pub struct Symbol {
    pub id: String,
    pub b0: SampledFunction,
    pub b_field: HalfPlaneField,
}

/// Report of [`boundedness_study`].
#[derive(Debug, Clone, Serialize)]
pub struct StudyReport {
    pub symbol_id: String,
    pub seminorm: f64,
    pub max_form: f64,
    /// `max |⟨b, fg⟩| / (√seminorm · ‖f‖_{H¹} · ‖g‖_{BMOA⁺})`; absent for a
    /// degenerate (zero-seminorm) symbol.
    pub ratio: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    /// Set when the seminorm vanishes, as for constant symbols.
    pub degenerate: bool,
    #[serde(skip)]
    pub records: Vec<TrialRecord>,
}

/// Bounded holomorphic test factor `g(z) = 1 + Σ a_k / (z − w_k)` with
/// poles in the lower half-plane.
fn test_factor(rng: &mut ChaCha8Rng) -> impl Fn(Complex64) -> Complex64 + Send + Sync {
    let poles: Vec<(Complex64, Complex64)> = (0..2)
        .map(|_| {
            let a = Complex64::from_polar(rng.gen_range(0.2..1.0), rng.gen_range(0.0..std::f64::consts::TAU));
            let w = Complex64::new(rng.gen_range(-3.0..3.0), -rng.gen_range(0.5..2.0));
            (a, w)
        })
        .collect();
    move |z: Complex64| Complex64::new(1.0, 0.0) + poles.iter().map(|(a, w)| a / (z - w)).sum::<Complex64>()
}

/// One trial: `|⟨b, fg⟩|`, `‖f‖_{H¹}` and `‖g₀‖_{BMO⁺}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRecord {
    pub form: f64,
    pub f_norm: f64,
    pub g_norm: f64,
}

fn run_trial(symbol: &Symbol, ladder: &HeightLadder, seed: u64) -> Result<TrialRecord> {
    let grid = *symbol.b0.grid();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let f0 = szego_project(&gaussian_pair(grid, rng.gen())?)?;
    let f_raw = poisson_extend(&f0, ladder)?;
    let scale = hp_norm(&f_raw, 1.0)?.value;
    let f_field = f_raw.scale(Complex64::new(1.0 / scale, 0.0));
    let g = test_factor(&mut rng);
    let g_field = HalfPlaneField::from_fn(grid, ladder.clone(), DecayClass::LogGrowth, &g)?;
    let g0 = SampledFunction::from_fn(grid, DecayClass::LogGrowth, |x| g(Complex64::new(x, 0.0)))?;
    let form = hankel_form(&symbol.b0, &f_field, &g_field)?;
    Ok(TrialRecord {
        form: form.value.norm(),
        f_norm: hp_norm(&f_field, 1.0)?.value,
        g_norm: bmo_plus_norm(&g0)?.value,
    })
}

/// Largest `|⟨b, fg⟩|` over `trials` seeded pairs of `H¹`-normalized
/// Szegő-projected Gaussian pairs `f` and bounded holomorphic factors `g`,
/// compared with
/// the tent seminorm of the symbol.
pub fn boundedness_study(symbol: &Symbol, trials: usize, seed: u64) -> Result<StudyReport> {
    require_bounded(&symbol.b0)?;
    if trials == 0 {
        return Err(Error::EmptyFamily("boundedness study needs at least one trial".into()));
    }
    let ladder = symbol.b_field.ladder().clone();
    let mut master = ChaCha8Rng::seed_from_u64(seed);
    let seeds: Vec<u64> = (0..trials).map(|_| master.gen()).collect();
    let results: Vec<TrialRecord> = seeds
        .par_iter()
        .map(|&s| run_trial(symbol, &ladder, s))
        .collect::<Result<_>>()?;
    let seminorm = bmoa_log_seminorm(&symbol.b_field)?.value;
    let max_form = results.iter().map(|t| t.form).fold(0.0, f64::max);
    let degenerate = seminorm <= 1e-14 * symbol.b0.max_abs().powi(2).max(f64::MIN_POSITIVE);
    let ratio = if degenerate {
        None
    } else {
        let root = seminorm.sqrt();
        Some(results.iter().map(|t| t.form / (root * t.f_norm * t.g_norm)).fold(0.0, f64::max))
    };
    Ok(StudyReport {
        symbol_id: symbol.id.clone(),
        seminorm,
        max_form,
        ratio,
        trials,
        seed,
        degenerate,
        records: results,
    })
}
