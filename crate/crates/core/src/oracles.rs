//! Brute-force reference implementations.
//!
//! Nothing here shares code with the fast paths beyond grid arithmetic and
//! the continuation model of a [`SampledFunction`]. Everything is `O(n²)` or
//! worse and meant for tests and verification sweeps on small grids.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grid::{DecayClass, SampledFunction};
use crate::spaces::MusielakWeight;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest grid accepted by the interval scans.
pub const MAX_SCAN_SAMPLES: usize = 4096;

fn simpson_rec(
    g: &dyn Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
) -> Complex64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (g(lm), g(rm));
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    let floor = 1e-14 * (left.norm() + right.norm());
    if depth == 0 || delta.norm() <= 15.0 * tol.max(floor) {
        return left + right + delta / 15.0;
    }
    simpson_rec(g, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_rec(g, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}

/// Adaptive Simpson quadrature on `[a, b]`.
fn adaptive_simpson(g: &dyn Fn(f64) -> Complex64, a: f64, b: f64, tol: f64) -> Complex64 {
    let (fa, fm, fb) = (g(a), g(0.5 * (a + b)), g(b));
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    simpson_rec(g, a, b, fa, fm, fb, whole, tol, 32)
}

/// Convolution kernels with closed-form even and odd pairings, so that
/// `F(s)K(x−s) + F(−s)K(x+s)` is evaluated without cancellation at large `s`.
#[derive(Debug, Clone, Copy)]
enum PairedKernel {
    /// `1 / (π u)`
    Hilbert,
    /// `y / (π (u² + y²))`
    Poisson(f64),
}

impl PairedKernel {
    fn at(self, u: f64) -> f64 {
        match self {
            PairedKernel::Hilbert => 1.0 / (PI * u),
            PairedKernel::Poisson(y) => y / (PI * (u * u + y * y)),
        }
    }

    /// `(K(x−s) + K(x+s), K(x−s) − K(x+s))`
    fn pair(self, x: f64, s: f64) -> (f64, f64) {
        match self {
            PairedKernel::Hilbert => {
                let d = PI * (x - s) * (x + s);
                (2.0 * x / d, 2.0 * s / d)
            }
            PairedKernel::Poisson(y) => {
                let (a, b) = ((x - s).powi(2) + y * y, (x + s).powi(2) + y * y);
                let c = y / PI;
                (c * (a + b) / (a * b), c * 4.0 * x * s / (a * b))
            }
        }
    }
}

/// Continuation samples beyond each window edge that join the node sums.
const OUTER: usize = 64;

/// Window samples padded with [`OUTER`] continuation samples on each side;
/// index `k` stands for grid node `k − OUTER`.
fn padded_samples(f0: &SampledFunction) -> Vec<Complex64> {
    let grid = f0.grid();
    let n = grid.len();
    let dx = grid.dx();
    let mut out = Vec::with_capacity(n + 2 * OUTER);
    for p in (1..=OUTER).rev() {
        out.push(f0.continuation(grid.node(0) - p as f64 * dx));
    }
    out.extend_from_slice(f0.values());
    for p in 1..=OUTER {
        out.push(f0.continuation(grid.node(n - 1) + p as f64 * dx));
    }
    out
}

/// `∫` of `F(t) K(x − t)` beyond the padded lattice, minus what a midpoint
/// rule would assign to it, so that adding it to a lattice sum continues
/// that sum to infinity.
///
/// The right sliver between the lattice edge and the mirror of the left
/// edge is integrated directly; the rest is paired over `s > s0` and mapped
/// to `(0, 1]` by `s = s0 / u`.
fn continuation_integral(f0: &SampledFunction, x: f64, kernel: PairedKernel) -> Complex64 {
    if f0.has_zero_tail() {
        return ZERO;
    }
    let grid = f0.grid();
    let dx = grid.dx();
    let pad = OUTER as f64 * dx;
    let right = grid.window_right() + pad;
    let left = grid.window_left() - pad;
    let s0 = -left;
    let tol = 1e-13;
    let g = |t: f64| f0.continuation(t) * kernel.at(x - t);
    let mut acc = adaptive_simpson(&g, right, s0, tol);
    let paired = |u: f64| {
        let s = s0 / u;
        let (fp, fm) = (f0.continuation(s), f0.continuation(-s));
        let (even, odd) = kernel.pair(x, s);
        ((fp + fm) * even + (fp - fm) * odd) * (0.5 * s0 / (u * u))
    };
    let mut a = 1e-12;
    for b in [1e-6, 1e-3, 0.1, 0.5, 1.0] {
        acc += adaptive_simpson(&paired, a, b, tol);
        a = b;
    }
    // midpoint sum = integral + h²/24 · (g'(right) − g'(left))
    let e = 0.125 * dx;
    let slope = |t: f64| (g(t + e) - g(t - e)) / (2.0 * e);
    acc + (slope(right) - slope(left)) * (dx * dx / 24.0)
}

/// Derivative estimate at index `j` by a centred 4th-order stencil,
/// dropping to 2nd order and one-sided at the ends.
fn node_derivative(v: &[Complex64], j: usize, dx: f64) -> Complex64 {
    let n = v.len();
    if j >= 2 && j + 2 < n {
        (v[j - 2] - v[j - 1] * 8.0 + v[j + 1] * 8.0 - v[j + 2]) / (12.0 * dx)
    } else if j >= 1 && j + 1 < n {
        (v[j + 1] - v[j - 1]) / (2.0 * dx)
    } else if j == 0 {
        (v[1] - v[0]) / dx
    } else {
        (v[n - 1] - v[n - 2]) / dx
    }
}

fn check_pv_tails(f0: &SampledFunction) -> Result<()> {
    if f0.decay() == DecayClass::LogGrowth && f0.extension().is_none() {
        let v = f0.values();
        if (v[0] - v[v.len() - 1]).norm() > 1e-12 * v[0].norm().max(1.0) {
            return Err(Error::NonIntegrable(
                "principal value diverges for unequal log-growth edges".into(),
            ));
        }
    }
    Ok(())
}

/// Principal-value Riemann sum for the Hilbert transform,
/// `(1/π) Σ_{k≠j} f_k dx / (x_j − x_k)`, with the half-weight correction of
/// the excluded node and the continuation integrated separately.
///
/// The symmetric sum misses the `u = 0` endpoint of the trapezoid rule for
/// `∫ (f(x−u) − f(x+u))/u du`, whose integrand tends to `−2f'(x)`; adding
/// `−dx f'(x)` restores spectral accuracy.
pub fn hilbert_pv_direct(f0: &SampledFunction) -> Result<SampledFunction> {
    check_pv_tails(f0)?;
    let grid = *f0.grid();
    let dx = grid.dx();
    let v = padded_samples(f0);
    let n = grid.len();
    let values: Vec<Complex64> = (0..n)
        .into_par_iter()
        .map(|j0| {
            let j = j0 + OUTER;
            let mut acc = ZERO;
            for (k, f) in v.iter().enumerate() {
                if k != j {
                    acc += f / (j as f64 - k as f64);
                }
            }
            acc -= node_derivative(&v, j, dx) * dx;
            acc / PI + continuation_integral(f0, grid.node(j0), PairedKernel::Hilbert)
        })
        .collect();
    let decay = match f0.decay() {
        DecayClass::LogGrowth => DecayClass::LogGrowth,
        _ => DecayClass::Power(1.0),
    };
    SampledFunction::new(grid, values, decay)
}

/// Direct quadrature of `P_y * f0` against the point kernel, plus the
/// continuation integral. Accurate when `y` is several grid spacings.
pub fn poisson_direct(f0: &SampledFunction, y: f64) -> Result<SampledFunction> {
    if !(y > 0.0 && y.is_finite()) {
        return Err(Error::InvalidArgument(format!("height must be positive, got {y}")));
    }
    let grid = *f0.grid();
    let dx = grid.dx();
    let v = padded_samples(f0);
    let kernel = PairedKernel::Poisson(y);
    let first = grid.node(0) - OUTER as f64 * dx;
    let values: Vec<Complex64> = (0..grid.len())
        .into_par_iter()
        .map(|j| {
            let x = grid.node(j);
            let mut acc = ZERO;
            for (k, f) in v.iter().enumerate() {
                acc += f * kernel.at(x - (first + k as f64 * dx));
            }
            acc * dx + continuation_integral(f0, x, kernel)
        })
        .collect();
    let decay = match f0.decay() {
        DecayClass::LogGrowth => DecayClass::LogGrowth,
        DecayClass::Power(p) => DecayClass::Power(p.min(2.0)),
        DecayClass::Rapid => DecayClass::Power(2.0),
    };
    SampledFunction::new(grid, values, decay)
}

struct Fenwick {
    count: Vec<u32>,
    sum: Vec<f64>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Self {
            count: vec![0; n + 1],
            sum: vec![0.0; n + 1],
        }
    }

    fn add(&mut self, rank: usize, v: f64) {
        let mut i = rank + 1;
        while i < self.count.len() {
            self.count[i] += 1;
            self.sum[i] += v;
            i += i & i.wrapping_neg();
        }
    }

    /// Count and sum of inserted values with rank `< upto`.
    fn prefix(&self, upto: usize) -> (u32, f64) {
        let (mut c, mut s) = (0, 0.0);
        let mut i = upto;
        while i > 0 {
            c += self.count[i];
            s += self.sum[i];
            i -= i & i.wrapping_neg();
        }
        (c, s)
    }
}

/// Exact discrete BMO supremum over every run of consecutive nodes.
///
/// Real input uses a Fenwick tree over value ranks (`O(n² log n)`); complex
/// input falls back to direct summation and is limited to 512 samples.
pub fn bmo_bruteforce(f0: &SampledFunction) -> Result<f64> {
    let n = f0.len();
    if n > MAX_SCAN_SAMPLES {
        return Err(Error::InvalidArgument(format!(
            "exhaustive scan is limited to {MAX_SCAN_SAMPLES} samples, got {n}"
        )));
    }
    let v = f0.values();
    if !f0.is_real() {
        if n > 512 {
            return Err(Error::InvalidArgument("complex exhaustive scan is limited to 512 samples".into()));
        }
        let best = (0..n)
            .into_par_iter()
            .map(|lo| {
                let mut best = 0.0f64;
                let mut sum = ZERO;
                for hi in lo..n {
                    sum += v[hi];
                    let len = (hi - lo + 1) as f64;
                    let mean = sum / len;
                    let osc: f64 = v[lo..=hi].iter().map(|w| (w - mean).norm()).sum::<f64>() / len;
                    best = best.max(osc);
                }
                best
            })
            .collect::<Vec<_>>();
        return Ok(best.into_iter().fold(0.0, f64::max));
    }
    let re: Vec<f64> = v.iter().map(|w| w.re).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| re[a].total_cmp(&re[b]));
    let sorted: Vec<f64> = order.iter().map(|&k| re[k]).collect();
    let mut rank = vec![0usize; n];
    for (r, &k) in order.iter().enumerate() {
        rank[k] = r;
    }
    let best = (0..n)
        .into_par_iter()
        .map(|lo| {
            let mut tree = Fenwick::new(n);
            let mut total = 0.0;
            let mut best = 0.0f64;
            for hi in lo..n {
                tree.add(rank[hi], re[hi]);
                total += re[hi];
                let cnt = (hi - lo + 1) as f64;
                let mean = total / cnt;
                let below = sorted.partition_point(|&s| s < mean);
                let (c, s) = tree.prefix(below);
                let c = c as f64;
                let osc = (mean * c - s) + (total - s) - mean * (cnt - c);
                best = best.max(osc / cnt);
            }
            best
        })
        .collect::<Vec<_>>();
    Ok(best.into_iter().fold(0.0, f64::max))
}

/// Independent evaluation of `∫ w(x, |f|/λ) dx`: node sum plus the power
/// tail `v_e x_e^q a^{1−q} / (q − 1)` beyond each window edge `a`.
fn scan_integral(mags: &[f64], xs: &[f64], w: MusielakWeight, lambda: f64, dx: f64, tail_q: Option<f64>, edges: (f64, f64)) -> f64 {
    let mut acc = 0.0;
    for (m, x) in mags.iter().zip(xs) {
        acc += w.eval(*x, m / lambda);
    }
    acc *= dx;
    if let Some(q) = tail_q {
        let n = mags.len();
        let left = w.eval(xs[0], mags[0] / lambda) * xs[0].abs().powf(q) * edges.0.abs().powf(1.0 - q) / (q - 1.0);
        let right =
            w.eval(xs[n - 1], mags[n - 1] / lambda) * xs[n - 1].abs().powf(q) * edges.1.abs().powf(1.0 - q) / (q - 1.0);
        acc += left + right;
    }
    acc
}

/// Luxemburg norm by a geometric scan of `10⁴` values of `λ` followed by
/// plain bisection inside the crossing cell.
pub fn luxemburg_scan(f0: &SampledFunction, w: MusielakWeight) -> Result<f64> {
    let tail_q = match f0.decay() {
        DecayClass::Rapid => None,
        DecayClass::Power(p) if p > 1.0 => Some(match w {
            MusielakWeight::Theta => p,
            _ => 2.0 * p,
        }),
        d => {
            return Err(Error::NonIntegrable(format!("decay class `{d}` is not integrable")));
        }
    };
    let grid = *f0.grid();
    let dx = grid.dx();
    let mags: Vec<f64> = f0.values().iter().map(|v| v.norm()).collect();
    let xs: Vec<f64> = grid.nodes().collect();
    let top = mags.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return Ok(0.0);
    }
    let edges = (grid.window_left(), grid.window_right());
    let integral = |lam: f64| scan_integral(&mags, &xs, w, lam, dx, tail_q, edges);
    let (lo_end, hi_end) = (top * 1e-8, top * 1e8);
    let steps = 10_000;
    let ratio = (hi_end / lo_end).powf(1.0 / steps as f64);
    let mut prev = lo_end;
    if integral(prev) <= 1.0 {
        return Err(Error::BracketFailure(steps));
    }
    for k in 1..=steps {
        let lam = lo_end * ratio.powi(k as i32);
        if integral(lam) <= 1.0 {
            let (mut a, mut b) = (prev, lam);
            for _ in 0..200 {
                let m = 0.5 * (a + b);
                if m <= a || m >= b {
                    break;
                }
                if integral(m) > 1.0 {
                    a = m;
                } else {
                    b = m;
                }
            }
            return Ok(b);
        }
        prev = lam;
    }
    Err(Error::BracketFailure(steps))
}
