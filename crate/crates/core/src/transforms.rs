//! Poisson extension, conjugate Poisson extension, Hilbert transform and
//! the Szegő projection.
//!
//! The Poisson and conjugate kernels act on the band-limited interpolant of
//! the samples: convolving the sinc basis with `P_y` and `Q_y` gives exact
//! discrete weights
//!
//! ```text
//! w_m = dx/π · (1 − (−1)^m e^{−yπ/dx}) · y      / (y² + m²dx²)
//! q_m = dx/π · (1 − (−1)^m e^{−yπ/dx}) · m·dx   / (y² + m²dx²)
//! ```
//!
//! which are applied as a zero-padded (non-periodic) FFT convolution. At
//! `y = 0` they reduce to the identity and the discrete Hilbert kernel
//! `2/(πm)` on odd `m`. Whatever lies outside the window is added from the
//! function's continuation (see `tail_term`), pairing the two tails so that
//! conditionally convergent conjugate integrals of even log-growth data
//! converge.
//!
//! The Szegő projection is the periodic DFT projection onto bins
//! `0..n/2`; it is exactly idempotent on the grid.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::grid::{DecayClass, Grid1D, HalfPlaneField, HeightLadder, SampledFunction};
use crate::quadrature::{gl_panel_nodes, graded_half_line_nodes};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Relative size of the mean below which a function counts as mean-zero
/// when assigning the decay class of its Hilbert transform.
const MEAN_ZERO_TOL: f64 = 1e-8;

/// Default relative threshold on the two-lowest-levels gap in [`boundary_value`].
pub const DEFAULT_GAP_THRESHOLD: f64 = 1e-2;

/// The half-plane Poisson kernel `P_y(x) = y / (π (x² + y²))`.
pub fn poisson_kernel(y: f64, x: f64) -> Result<f64> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("Poisson kernel needs y > 0, got {y}")));
    }
    Ok(y / (PI * (x * x + y * y)))
}

/// The conjugate Poisson kernel `Q_y(x) = x / (π (x² + y²))`.
pub fn conjugate_poisson_kernel(y: f64, x: f64) -> f64 {
    x / (PI * (x * x + y * y))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Kernel {
    Poisson,
    Conjugate,
}

impl Kernel {
    #[inline]
    fn eval(self, y: f64, u: f64) -> f64 {
        let den = PI * (u * u + y * y);
        match self {
            Kernel::Poisson => y / den,
            Kernel::Conjugate => u / den,
        }
    }
}

/// Band-limited discrete weights for offsets `m = -(n-1)..=(n-1)`, stored at
/// index `m + n - 1`.
fn kernel_weights(grid: &Grid1D, y: f64, kernel: Kernel) -> Vec<f64> {
    let n = grid.len() as i64;
    let dx = grid.dx();
    let omega = PI / dx;
    let damp = (-y * omega).exp();
    (-(n - 1)..n)
        .map(|m| {
            if m == 0 {
                return match kernel {
                    Kernel::Poisson if y > 0.0 => -(-y * omega).exp_m1() / (PI * y) * dx,
                    Kernel::Poisson => 1.0,
                    Kernel::Conjugate => 0.0,
                };
            }
            let u = m as f64 * dx;
            let alias = if m % 2 == 0 { 1.0 - damp } else { 1.0 + damp };
            let num = match kernel {
                Kernel::Poisson => y,
                Kernel::Conjugate => u,
            };
            dx * alias * num / (PI * (y * y + u * u))
        })
        .collect()
}

/// Linear (zero-padded) convolution of one sampled signal against many
/// kernels.
struct Convolver {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
    data_hat: Vec<Complex64>,
}

impl Convolver {
    fn new(values: &[Complex64]) -> Self {
        let n = values.len();
        let mut planner = FftPlanner::new();
        let forward = planner.plan_fft_forward(2 * n);
        let inverse = planner.plan_fft_inverse(2 * n);
        let mut data_hat = vec![ZERO; 2 * n];
        data_hat[..n].copy_from_slice(values);
        forward.process(&mut data_hat);
        Self {
            n,
            forward,
            inverse,
            data_hat,
        }
    }

    /// `out_j = Σ_k f_k w_{j-k}`.
    fn apply(&self, weights: &[f64]) -> Vec<Complex64> {
        let n = self.n;
        let mut buf = vec![ZERO; 2 * n];
        for m in 0..n {
            buf[m] = Complex64::new(weights[m + n - 1], 0.0);
        }
        for m in 1..n {
            buf[2 * n - m] = Complex64::new(weights[n - 1 - m], 0.0);
        }
        self.forward.process(&mut buf);
        for (b, d) in buf.iter_mut().zip(&self.data_hat) {
            *b *= d;
        }
        self.inverse.process(&mut buf);
        let scale = 1.0 / (2 * n) as f64;
        buf.truncate(n);
        buf.iter_mut().for_each(|v| *v *= scale);
        buf
    }
}

/// Number of continuation samples beyond each window edge summed with the
/// exact discrete weights before switching to quadrature.
const EXPLICIT_TAIL: usize = 64;

/// Continuation values at every point the tail term needs. None of the
/// points depend on the target node or the height, so one cache serves a
/// whole field.
struct TailCache {
    dx: f64,
    n: usize,
    /// `(t, F(t))` at `t = edge ± p·dx`, `p = 1..=EXPLICIT_TAIL + 2`.
    right: Vec<(f64, Complex64)>,
    left: Vec<(f64, Complex64)>,
    /// `(t, weight·F(t))` on the sliver between the right quadrature start
    /// and the mirror of the left one.
    sliver: Vec<(f64, Complex64)>,
    /// `(s, weight·F(s), weight·F(−s))` on the paired half-line.
    paired: Vec<(f64, Complex64, Complex64)>,
}

impl TailCache {
    fn new(f: &SampledFunction) -> Option<Self> {
        if f.has_zero_tail() {
            return None;
        }
        let grid = f.grid();
        let n = grid.len();
        let dx = grid.dx();
        let (right_edge, left_edge) = (grid.node(n - 1), grid.node(0));
        let samples = |edge: f64, dir: f64| -> Vec<(f64, Complex64)> {
            (1..=EXPLICIT_TAIL + 2)
                .map(|p| {
                    let t = edge + dir * p as f64 * dx;
                    (t, f.continuation(t))
                })
                .collect()
        };
        let offset = (EXPLICIT_TAIL as f64 + 0.5) * dx;
        let start = right_edge + offset;
        let s0 = -(left_edge - offset);
        let mid = 0.5 * (start + s0);
        let sliver = gl_panel_nodes(start, mid)
            .chain(gl_panel_nodes(mid, s0))
            .map(|(t, w)| (t, f.continuation(t) * w))
            .collect();
        // Every target node is at least `offset` away from the quadrature
        // region, so one grading serves all of them.
        let cutoff = 1e6 * grid.half_width().max(1.0);
        let paired = graded_half_line_nodes(s0, offset, cutoff)
            .into_iter()
            .map(|(s, w)| (s, f.continuation(s) * w, f.continuation(-s) * w))
            .collect();
        Some(Self {
            dx,
            n,
            right: samples(right_edge, 1.0),
            left: samples(left_edge, -1.0),
            sliver,
            paired,
        })
    }

    /// Contribution of the continuation beyond the window at node `j`.
    ///
    /// The target is the infinite discrete sum `Σ_{k outside} F(x_k) w_{j-k}`.
    /// The first [`EXPLICIT_TAIL`] samples on each side are summed directly.
    /// Beyond them the smooth part of the weights is integrated (midpoint
    /// correction included) and the alternating alias part is summed by its
    /// Euler–Boole expansion.
    fn term(&self, x: f64, j: usize, y: f64, kernel: Kernel, damp: f64) -> Complex64 {
        let dx = self.dx;
        let n = self.n as i64;
        let big_p = EXPLICIT_TAIL as i64;
        let k = |u: f64| kernel.eval(y, u);
        let sign = |idx: i64| if (j as i64 - idx).rem_euclid(2) == 0 { 1.0 } else { -1.0 };

        let mut acc = ZERO;
        for p in 1..=big_p {
            let (tr, fr) = self.right[(p - 1) as usize];
            let (tl, fl) = self.left[(p - 1) as usize];
            acc += fr * (dx * k(x - tr) * (1.0 - sign(n - 1 + p) * damp));
            acc += fl * (dx * k(x - tl) * (1.0 - sign(-p) * damp));
        }

        for (side, first_idx) in [(&self.right, n + big_p), (&self.left, -big_p - 1)] {
            let h = |p: i64| {
                let (t, v) = side[(p - 1) as usize];
                v * k(x - t)
            };
            let (h0, h1, h2) = (h(big_p), h(big_p + 1), h(big_p + 2));
            acc += (h1 - h0) * (dx / 24.0);
            if damp > 0.0 {
                acc -= (h1 * 0.5 - (h2 - h0) * 0.125) * (damp * dx * sign(first_idx));
            }
        }

        for &(t, wf) in &self.sliver {
            acc += wf * k(x - t);
        }
        for &(s, wp, wm) in &self.paired {
            acc += wp * k(x - s) + wm * k(x + s);
        }
        acc
    }
}

fn tail_slice(f: &SampledFunction, cache: Option<&TailCache>, y: f64, kernel: Kernel) -> Vec<Complex64> {
    let Some(cache) = cache else {
        return vec![ZERO; f.len()];
    };
    let grid = f.grid();
    let damp = (-y * PI / grid.dx()).exp();
    (0..f.len())
        .into_par_iter()
        .map(|j| cache.term(grid.node(j), j, y, kernel, damp))
        .collect()
}

/// A sampled function ready for repeated kernel application.
struct Prepared<'a> {
    f: &'a SampledFunction,
    conv: Convolver,
    cache: Option<TailCache>,
}

impl<'a> Prepared<'a> {
    fn new(f: &'a SampledFunction) -> Self {
        Self {
            f,
            conv: Convolver::new(f.values()),
            cache: TailCache::new(f),
        }
    }

    fn apply(&self, y: f64, kernel: Kernel) -> Vec<Complex64> {
        let mut core = self.conv.apply(&kernel_weights(self.f.grid(), y, kernel));
        let tail = tail_slice(self.f, self.cache.as_ref(), y, kernel);
        for (c, t) in core.iter_mut().zip(tail) {
            *c += t;
        }
        core
    }
}

fn check_conjugate_tails(f: &SampledFunction) -> Result<()> {
    if f.decay() == DecayClass::LogGrowth && f.extension().is_none() {
        let v = f.values();
        let (l, r) = (v[0], v[v.len() - 1]);
        if (l - r).norm() > 1e-12 * (l.norm() + r.norm()).max(1.0) {
            return Err(Error::NonIntegrable(
                "conjugate integral diverges: log-growth input has unequal edge limits and no closed-form continuation"
                    .into(),
            ));
        }
    }
    Ok(())
}

fn poisson_output_decay(decay: DecayClass) -> DecayClass {
    match decay {
        DecayClass::Rapid => DecayClass::Power(2.0),
        DecayClass::Power(p) => DecayClass::Power(p.min(2.0)),
        DecayClass::LogGrowth => DecayClass::LogGrowth,
    }
}

fn conjugate_output_decay(f: &SampledFunction) -> DecayClass {
    match f.decay() {
        DecayClass::LogGrowth => DecayClass::LogGrowth,
        d => {
            let (mass, l1) = match (f.integrate(), f.integrate_abs()) {
                (Ok(m), Ok(a)) => (m.norm(), a),
                _ => return DecayClass::Power(1.0),
            };
            if mass <= MEAN_ZERO_TOL * l1.max(f64::MIN_POSITIVE) {
                match d {
                    DecayClass::Power(p) => DecayClass::Power(p.min(2.0)),
                    _ => DecayClass::Power(2.0),
                }
            } else {
                DecayClass::Power(1.0)
            }
        }
    }
}

/// `P_y * f0` on the grid.
pub fn poisson_at(f0: &SampledFunction, y: f64) -> Result<SampledFunction> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("height must be positive, got {y}")));
    }
    let values = Prepared::new(f0).apply(y, Kernel::Poisson);
    SampledFunction::new(*f0.grid(), values, poisson_output_decay(f0.decay()))
}

/// Poisson extension of boundary data to every ladder level.
pub fn poisson_extend(f0: &SampledFunction, ladder: &HeightLadder) -> Result<HalfPlaneField> {
    let prep = Prepared::new(f0);
    let slices: Vec<Vec<Complex64>> = ladder
        .levels()
        .par_iter()
        .map(|&y| prep.apply(y, Kernel::Poisson))
        .collect();
    HalfPlaneField::from_slices(*f0.grid(), ladder.clone(), slices, poisson_output_decay(f0.decay()))
}

/// `Q_y * f0`, the harmonic conjugate of the Poisson extension.
pub fn conjugate_poisson_at(f0: &SampledFunction, y: f64) -> Result<SampledFunction> {
    if !(y >= 0.0 && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("height must be non-negative, got {y}")));
    }
    check_conjugate_tails(f0)?;
    let values = Prepared::new(f0).apply(y, Kernel::Conjugate);
    SampledFunction::new(*f0.grid(), values, conjugate_output_decay(f0))
}

/// Hilbert transform with multiplier `−i·sign(ξ)`, so that `H(cos) = sin`.
pub fn hilbert_transform(f0: &SampledFunction) -> Result<SampledFunction> {
    conjugate_poisson_at(f0, 0.0)
}

/// Holomorphic extension `(P_y + i Q_y) * b` of boundary data.
///
/// For real `b` this is the Poisson integral of `b + i H b`.
pub fn holomorphic_extend(b: &SampledFunction, ladder: &HeightLadder) -> Result<HalfPlaneField> {
    check_conjugate_tails(b)?;
    let prep = Prepared::new(b);
    let i = Complex64::new(0.0, 1.0);
    let slices: Vec<Vec<Complex64>> = ladder
        .levels()
        .par_iter()
        .map(|&y| {
            let p = prep.apply(y, Kernel::Poisson);
            let q = prep.apply(y, Kernel::Conjugate);
            p.into_iter().zip(q).map(|(p, q)| p + i * q).collect()
        })
        .collect();
    let decay = poisson_output_decay(b.decay()).weaker(&conjugate_output_decay(b));
    HalfPlaneField::from_slices(*b.grid(), ladder.clone(), slices, decay)
}

fn dft(values: &[Complex64], inverse: bool) -> Vec<Complex64> {
    let mut planner = FftPlanner::new();
    let plan = if inverse {
        planner.plan_fft_inverse(values.len())
    } else {
        planner.plan_fft_forward(values.len())
    };
    let mut buf = values.to_vec();
    plan.process(&mut buf);
    buf
}

/// Projection onto non-negative frequencies: DFT, clear bins `n/2..n`
/// (the Nyquist bin and all negative frequencies), inverse DFT.
pub fn szego_project(f0: &SampledFunction) -> Result<SampledFunction> {
    let n = f0.len();
    let mut spec = dft(f0.values(), false);
    for v in spec.iter_mut().skip(n / 2) {
        *v = ZERO;
    }
    let scale = 1.0 / n as f64;
    let values: Vec<Complex64> = dft(&spec, true).into_iter().map(|v| v * scale).collect();
    let decay = conjugate_output_decay(&f0.clone().without_extension()).weaker(&f0.decay());
    SampledFunction::new(*f0.grid(), values, decay)
}

/// Boundary trace recovered from a field.
#[derive(Debug, Clone)]
pub struct BoundaryValue {
    pub function: SampledFunction,
    /// `max_x |f(x + i y_1) − f(x + i y_0)|` over the two lowest levels.
    pub cauchy_gap: f64,
    /// Set when the gap, relative to the lowest slice, exceeds the threshold.
    pub flagged: bool,
}

/// Boundary value by linear extrapolation to `y = 0` from the two lowest
/// ladder levels.
pub fn boundary_value(field: &HalfPlaneField) -> Result<BoundaryValue> {
    boundary_value_with_threshold(field, DEFAULT_GAP_THRESHOLD)
}

pub fn boundary_value_with_threshold(field: &HalfPlaneField, threshold: f64) -> Result<BoundaryValue> {
    let ladder = field.ladder();
    if ladder.len() < 2 {
        return Err(Error::InvalidLadder("boundary value needs at least two levels".into()));
    }
    let (y0, y1) = (ladder.levels()[0], ladder.levels()[1]);
    let (s0, s1) = (field.slice(0), field.slice(1));
    let mut gap: f64 = 0.0;
    let values: Vec<Complex64> = s0
        .iter()
        .zip(s1)
        .map(|(&a, &b)| {
            gap = gap.max((b - a).norm());
            a - (b - a) * (y0 / (y1 - y0))
        })
        .collect();
    let scale = s0.iter().map(|v| v.norm()).fold(0.0, f64::max);
    let flagged = gap > threshold * scale.max(f64::MIN_POSITIVE);
    Ok(BoundaryValue {
        function: SampledFunction::new(*field.grid(), values, field.decay())?,
        cauchy_gap: gap,
        flagged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    fn p1(grid: Grid1D) -> SampledFunction {
        SampledFunction::from_real_fn(grid, DecayClass::Power(2.0), |x| 1.0 / (PI * (1.0 + x * x))).unwrap()
    }

    fn max_err(a: &[Complex64], f: impl Fn(usize) -> Complex64) -> f64 {
        a.iter().enumerate().map(|(j, v)| (v - f(j)).norm()).fold(0.0, f64::max)
    }

    #[test]
    #[allow(clippy::approx_constant)]
    fn kernel_values() {
        assert!((poisson_kernel(1.0, 0.0).unwrap() - 0.318309886).abs() < 1e-9);
        assert!((poisson_kernel(2.0, 0.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert_eq!(poisson_kernel(1.0, 3.0).unwrap(), poisson_kernel(1.0, -3.0).unwrap());
        assert!(poisson_kernel(0.0, 1.0).is_err());
        assert!(poisson_kernel(-1.0, 1.0).is_err());
    }

    #[test]
    fn kernel_mass_is_one() {
        let g = make_grid(64.0, 4096).unwrap();
        for y in [0.5, 1.0, 3.0] {
            let k = SampledFunction::from_real_fn(g, DecayClass::Power(2.0), |x| poisson_kernel(y, x).unwrap()).unwrap();
            let m = k.integrate().unwrap().re;
            assert!((m - 1.0).abs() < 1e-4, "y={y}: {m}");
        }
    }

    #[test]
    fn constants_are_preserved() {
        let g = make_grid(16.0, 512).unwrap();
        let one = SampledFunction::from_real_fn(g, DecayClass::LogGrowth, |_| 1.0).unwrap();
        let ladder = HeightLadder::log_spaced(1e-3, 1e3, 12).unwrap();
        let field = poisson_extend(&one, &ladder).unwrap();
        let err = max_err(field.values(), |_| Complex64::new(1.0, 0.0));
        assert!(err < 1e-9, "{err}");
    }

    #[test]
    fn semigroup_on_lorentzian() {
        let g = make_grid(64.0, 4096).unwrap();
        let out = poisson_at(&p1(g), 2.0).unwrap();
        let err = max_err(out.values(), |j| Complex64::new(poisson_kernel(3.0, g.node(j)).unwrap(), 0.0));
        assert!(err <= 1e-4, "{err}");
    }

    #[test]
    fn windowed_cosine_damped_by_poisson_multiplier() {
        // the spectrum of w·e^{ix} sits in ξ > 0, so P_y acts as evaluation
        // at x + iy: P_y*(w cos)(x) = e^{-y} Re[w(x + iy) e^{ix}]
        let g = make_grid(64.0, 4096).unwrap();
        let w = |z: Complex64| (-z * z / 200.0).exp();
        let f = SampledFunction::from_real_fn(g, DecayClass::Rapid, |x| w(Complex64::new(x, 0.0)).re * x.cos()).unwrap();
        let out = poisson_at(&f, 1.0).unwrap();
        let err = max_err(out.values(), |j| {
            let x = g.node(j);
            Complex64::new((-1.0f64).exp() * (w(Complex64::new(x, 1.0)) * Complex64::from_polar(1.0, x)).re, 0.0)
        });
        assert!(err < 1e-10, "{err}");
    }

    #[test]
    fn hilbert_of_lorentzian_is_conjugate_kernel() {
        let g = make_grid(64.0, 4096).unwrap();
        let h = hilbert_transform(&p1(g)).unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for (j, v) in h.values().iter().enumerate() {
            let x = g.node(j);
            let q = x / (PI * (1.0 + x * x));
            num += (v.re - q).powi(2) + v.im.powi(2);
            den += q * q;
        }
        let rel = (num / den).sqrt();
        assert!(rel <= 1e-4, "{rel}");
        assert_eq!(h.decay(), DecayClass::Power(1.0));
    }

    #[test]
    fn hilbert_of_windowed_cosine() {
        let g = make_grid(64.0, 4096).unwrap();
        let w = |x: f64| (-x * x / 288.0).exp();
        let f = SampledFunction::from_real_fn(g, DecayClass::Rapid, |x| w(x) * x.cos()).unwrap();
        let h = hilbert_transform(&f).unwrap();
        let err = h
            .values()
            .iter()
            .enumerate()
            .filter(|(j, _)| g.is_central(g.node(*j)))
            .map(|(j, v)| (v.re - w(g.node(j)) * g.node(j).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err <= 1e-3, "{err}");
    }

    #[test]
    fn hilbert_squared_is_minus_identity() {
        let g = make_grid(64.0, 4096).unwrap();
        let f = SampledFunction::from_real_fn(g, DecayClass::Rapid, |x| x * (-x * x).exp()).unwrap();
        let hh = hilbert_transform(&hilbert_transform(&f).unwrap()).unwrap();
        let (mut num, mut den) = (0.0, 0.0);
        for (a, b) in hh.values().iter().zip(f.values()) {
            num += (a + b).norm_sqr();
            den += b.norm_sqr();
        }
        let rel = (num / den).sqrt();
        assert!(rel <= 1e-6, "{rel}");
    }

    #[test]
    fn hilbert_kills_constants_with_closed_form_tail() {
        let g = make_grid(16.0, 256).unwrap();
        let one = SampledFunction::from_real_fn(g, DecayClass::LogGrowth, |_| 1.0).unwrap();
        let h = hilbert_transform(&one).unwrap();
        assert!(h.max_abs() < 1e-7, "{}", h.max_abs());
    }

    #[test]
    fn hilbert_rejects_divergent_edges() {
        let g = make_grid(16.0, 256).unwrap();
        let sgn = SampledFunction::from_real_fn(g, DecayClass::LogGrowth, f64::signum).unwrap();
        assert!(matches!(hilbert_transform(&sgn), Err(Error::NonIntegrable(_))));
    }

    #[test]
    fn szego_examples() {
        let g = make_grid(64.0, 1024).unwrap();
        let w = 2.0 * PI * 20.0 / 128.0;
        let cos = SampledFunction::from_real_fn(g, DecayClass::LogGrowth, |x| (w * x).cos()).unwrap();
        let p = szego_project(&cos).unwrap();
        let err = max_err(p.values(), |j| Complex64::from_polar(0.5, w * g.node(j)));
        assert!(err < 1e-12, "{err}");

        let analytic =
            SampledFunction::from_fn(g, DecayClass::LogGrowth, |x| Complex64::from_polar(1.0, w * x) + 2.0).unwrap();
        let p = szego_project(&analytic).unwrap();
        let err = max_err(p.values(), |j| analytic.values()[j]);
        assert!(err < 1e-10 * analytic.max_abs(), "{err}");
    }

    #[test]
    fn boundary_of_constant_field() {
        let g = make_grid(8.0, 64).unwrap();
        let l = HeightLadder::log_spaced(1e-3, 10.0, 8).unwrap();
        let f = HalfPlaneField::from_fn(g, l, DecayClass::LogGrowth, |_| Complex64::new(2.5, -1.0)).unwrap();
        let b = boundary_value(&f).unwrap();
        assert_eq!(b.cauchy_gap, 0.0);
        assert!(!b.flagged);
        assert!(b.function.values().iter().all(|v| *v == Complex64::new(2.5, -1.0)));
    }

    #[test]
    fn boundary_of_closed_form_field() {
        let g = make_grid(64.0, 4096).unwrap();
        let l = HeightLadder::log_spaced(1e-3, 1e3, 48).unwrap();
        let i = Complex64::new(0.0, 1.0);
        let f = HalfPlaneField::from_fn(g, l, DecayClass::Power(2.0), |z| (z + i).powi(-2)).unwrap();
        let b = boundary_value(&f).unwrap();
        let err = max_err(b.function.values(), |j| (Complex64::new(g.node(j), 1.0)).powi(-2));
        assert!(err <= 1e-3, "{err}");
    }

    #[test]
    fn boundary_recovers_smooth_data() {
        let g = make_grid(32.0, 2048).unwrap();
        let l = HeightLadder::log_spaced(1e-3, 1e2, 24).unwrap();
        let f0 = SampledFunction::from_real_fn(g, DecayClass::Rapid, |x| (-x * x / 4.0).exp()).unwrap();
        let field = poisson_extend(&f0, &l).unwrap();
        let b = boundary_value(&field).unwrap();
        let err = max_err(b.function.values(), |j| f0.values()[j]);
        assert!(err <= 10.0 * l.y_min(), "{err}");
    }
}
