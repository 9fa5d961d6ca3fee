//! Hardy–Littlewood and nontangential maximal functions.

use std::collections::VecDeque;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{DecayClass, HalfPlaneField, SampledFunction};

/// The truncated cone `{u + iy : |u − x| < y, 0 < y ≤ y_max}` of aperture one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cone {
    pub apex: f64,
    pub y_max: f64,
}

impl Cone {
    pub fn new(apex: f64, y_max: f64) -> Result<Self> {
        if !(y_max > 0.0 && y_max.is_finite()) {
            return Err(Error::InvalidArgument(format!("cone height must be positive, got {y_max}")));
        }
        Ok(Self { apex, y_max })
    }

    #[inline]
    pub fn contains(&self, u: f64, y: f64) -> bool {
        y > 0.0 && y <= self.y_max && (u - self.apex).abs() < y
    }
}

type Point = (f64, f64);

#[inline]
fn cross(o: Point, a: Point, b: Point) -> f64 {
    (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0)
}

/// Upper convex hull of points sorted by strictly increasing abscissa,
/// returned as indices into `pts`.
fn upper_hull(pts: &[Point]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(pts.len());
    for i in 0..pts.len() {
        while hull.len() >= 2 && cross(pts[hull[hull.len() - 2]], pts[hull[hull.len() - 1]], pts[i]) >= 0.0 {
            hull.pop();
        }
        hull.push(i);
    }
    hull
}

/// For a query point strictly left of every hull vertex, the vertex seen at
/// the steepest slope. Slopes along an upper hull are unimodal from outside.
fn steepest(q: Point, pts: &[Point], hull: &[usize]) -> usize {
    let (mut lo, mut hi) = (0usize, hull.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if cross(q, pts[hull[mid]], pts[hull[mid + 1]]) > 0.0 {
            lo = mid + 1;
        } else {
            hi = mid;
        }
    }
    hull[lo]
}

/// Divide and conquer over index ranges. Every interval `[a, b]` is a chord
/// between prefix-sum points `P_a` and `P_{b+1}`; intervals crossing the
/// split are resolved by tangent queries against the convex hull of the
/// opposite half.
fn solve(prefix: &[f64], lo: usize, hi: usize, out: &mut [f64]) {
    let len = hi - lo;
    if len == 1 {
        out[0] = prefix[hi] - prefix[lo];
        return;
    }
    let m = lo + len / 2;
    {
        let (left, right) = out.split_at_mut(m - lo);
        if len > 2048 {
            rayon::join(|| solve(prefix, lo, m, left), || solve(prefix, m, hi, right));
        } else {
            solve(prefix, lo, m, left);
            solve(prefix, m, hi, right);
        }
    }
    let mean = |a: usize, b1: usize| (prefix[b1] - prefix[a]) / (b1 - a) as f64;
    let point = |k: usize| ((k - lo) as f64, prefix[k] - prefix[lo]);

    // j in the left half: max over a <= j of the best right endpoint.
    let right_pts: Vec<Point> = (m + 1..=hi).map(point).collect();
    let right_hull = upper_hull(&right_pts);
    let mut run = f64::NEG_INFINITY;
    for a in lo..m {
        let b1 = m + 1 + steepest(point(a), &right_pts, &right_hull);
        run = run.max(mean(a, b1));
        let slot = &mut out[a - lo];
        *slot = slot.max(run);
    }

    // j in the right half: reflect so the left points become a hull to the
    // right of the query.
    let left_pts: Vec<Point> = (lo..m)
        .rev()
        .map(|k| {
            let (x, y) = point(k);
            (-x, -y)
        })
        .collect();
    let left_hull = upper_hull(&left_pts);
    let mut run = f64::NEG_INFINITY;
    for b in (m..hi).rev() {
        let (x, y) = point(b + 1);
        let a = m - 1 - steepest((-x, -y), &left_pts, &left_hull);
        run = run.max(mean(a, b + 1));
        let slot = &mut out[b - lo];
        *slot = slot.max(run);
    }
}

/// Uncentered Hardy–Littlewood maximal function of `|f0|` over all
/// sample-aligned intervals inside the window that contain the node.
///
/// Runs in `O(n log² n)`.
pub fn hl_maximal(f0: &SampledFunction) -> Result<SampledFunction> {
    if f0.decay() == DecayClass::LogGrowth {
        return Err(Error::NonIntegrable(
            "maximal function of a log-growth input is not controlled on a finite window".into(),
        ));
    }
    let n = f0.len();
    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for v in f0.values() {
        acc += v.norm();
        prefix.push(acc);
    }
    let mut out = vec![0.0; n];
    solve(&prefix, 0, n, &mut out);
    // Rounding in the prefix sums must not push the output below |f0|.
    let values = out
        .iter()
        .zip(f0.values())
        .map(|(m, v)| Complex64::new(m.max(v.norm()), 0.0))
        .collect();
    SampledFunction::new(*f0.grid(), values, f0.decay())
}

/// Largest half-width `w` (in samples) with `w·dx < y`.
fn cone_half_width(y: f64, dx: f64) -> usize {
    let w = (y / dx).ceil() as usize;
    w.saturating_sub(1)
}

/// Sliding-window maximum of `a` with half-width `w`.
fn window_max(a: &[f64], w: usize, out: &mut [f64]) {
    let n = a.len();
    let mut dq: VecDeque<usize> = VecDeque::new();
    let mut next = 0usize;
    for j in 0..n {
        let hi = (j + w).min(n - 1);
        while next <= hi {
            while dq.back().is_some_and(|&k| a[k] <= a[next]) {
                dq.pop_back();
            }
            dq.push_back(next);
            next += 1;
        }
        while dq.front().is_some_and(|&k| k + w < j) {
            dq.pop_front();
        }
        let m = a[*dq.front().expect("window is never empty")];
        if m > out[j] {
            out[j] = m;
        }
    }
}

/// Nontangential maximal function: at each node the largest `|f|` over
/// ladder points inside the cone of height `y_max` above it.
pub fn nontangential_max(field: &HalfPlaneField, y_max: f64) -> Result<SampledFunction> {
    if !(y_max > 0.0) {
        return Err(Error::InvalidArgument(format!("cone height must be positive, got {y_max}")));
    }
    let grid = field.grid();
    let dx = grid.dx();
    let levels: Vec<usize> = field
        .ladder()
        .levels()
        .iter()
        .enumerate()
        .filter(|(_, &y)| y <= y_max * (1.0 + 1e-12))
        .map(|(l, _)| l)
        .collect();
    if levels.is_empty() {
        return Err(Error::InvalidArgument(format!(
            "no ladder level lies below the cone height {y_max}"
        )));
    }
    let mut out = vec![0.0; grid.len()];
    let mut mags = vec![0.0; grid.len()];
    for l in levels {
        let y = field.ladder().levels()[l];
        for (m, v) in mags.iter_mut().zip(field.slice(l)) {
            *m = v.norm();
        }
        window_max(&mags, cone_half_width(y, dx), &mut out);
    }
    let values = out.into_iter().map(|v| Complex64::new(v, 0.0)).collect();
    SampledFunction::new(*grid, values, field.decay())
}
