//! Gauss–Legendre rules and graded panel quadrature on half-lines.

use std::sync::OnceLock;

use num_complex::Complex64;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// 16-point Gauss–Legendre on `[a, b]`.
pub fn gl_panel(a: f64, b: f64, mut g: impl FnMut(f64) -> Complex64) -> Complex64 {
    let (nodes, weights) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, w) in nodes.iter().zip(weights) {
        acc += g(mid + half * x) * *w;
    }
    acc * half
}

/// `∫_{s0}^{∞} g(s) ds` for an integrand analytic on the half-line whose
/// nearest singularity lies about `d` to the left of `s0`.
///
/// Panels grow geometrically from width `d` until `cutoff`; the remainder is
/// mapped to `(0, 1]` by `s = cutoff / u`. The integrand must decay at least
/// like `s^{-1-eps}` (up to logarithms).
pub fn graded_half_line(s0: f64, d: f64, cutoff: f64, mut g: impl FnMut(f64) -> Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut a = s0;
    let mut width = d.max(f64::MIN_POSITIVE);
    let cutoff = cutoff.max(s0 + width);
    while a < cutoff {
        let b = (a + width).min(cutoff);
        acc += gl_panel(a, b, &mut g);
        a = b;
        width *= 2.0;
    }
    acc += gl_panel(0.0, 1.0, |u| g(cutoff / u) * (cutoff / (u * u)));
    acc
}

/// Nodes and weights of the 16-point rule on `[a, b]`.
pub fn gl_panel_nodes(a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> {
    let (nodes, weights) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes.iter().zip(weights).map(move |(x, w)| (mid + half * x, w * half))
}

/// Nodes and weights of [`graded_half_line`] as a fixed rule, with the
/// Jacobian of the outer map folded into the weights.
pub fn graded_half_line_nodes(s0: f64, d: f64, cutoff: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut a = s0;
    let mut width = d.max(f64::MIN_POSITIVE);
    let cutoff = cutoff.max(s0 + width);
    while a < cutoff {
        let b = (a + width).min(cutoff);
        out.extend(gl_panel_nodes(a, b));
        a = b;
        width *= 2.0;
    }
    out.extend(gl_panel_nodes(0.0, 1.0).map(|(u, w)| (cutoff / u, w * cutoff / (u * u))));
    out
}
