//! Uniform sampling of the real line, tail-corrected quadrature and the
//! logarithmic height ladder used for half-plane fields.
//!
//! Node `j` of a grid with half-width `L` and `n` samples sits at
//! `x_j = -L + j*dx` with `dx = 2L/n`. Each node owns the cell
//! `[x_j - dx/2, x_j + dx/2]`, so the sampled window covers
//! `[-L - dx/2, L - dx/2]`; everything outside is described by the
//! function's continuation (an explicit closure, or a model derived from
//! its [`DecayClass`]).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Uniform symmetric grid on `[-L, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    half_width: f64,
    n: usize,
}

/// Builds a grid with `n` samples on `[-L, L)`.
/// Distance in samples between the two nodes of the power-tail fit.
pub const TAIL_FIT_OFFSET: usize = 64;

pub fn make_grid(half_width: f64, n: usize) -> Result<Grid1D> {
    Grid1D::new(half_width, n)
}

impl Grid1D {
    pub const MIN_SAMPLES: usize = 16;

    pub fn new(half_width: f64, n: usize) -> Result<Self> {
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "half width must be positive and finite, got {half_width}"
            )));
        }
        if !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!("n = {n} is not a power of two")));
        }
        if n < Self::MIN_SAMPLES {
            return Err(Error::InvalidGrid(format!(
                "n = {n} is below the minimum of {}",
                Self::MIN_SAMPLES
            )));
        }
        Ok(Self { half_width, n })
    }

    #[inline]
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn dx(&self) -> f64 {
        2.0 * self.half_width / self.n as f64
    }

    #[inline]
    pub fn node(&self, j: usize) -> f64 {
        -self.half_width + j as f64 * self.dx()
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n).map(move |j| self.node(j))
    }

    /// Index of the node nearest to `x`, clamped to the grid.
    pub fn nearest_index(&self, x: f64) -> usize {
        let k = ((x + self.half_width) / self.dx()).round();
        k.clamp(0.0, (self.n - 1) as f64) as usize
    }

    /// Right end of the sampled window (edge of the last cell).
    #[inline]
    pub fn window_right(&self) -> f64 {
        self.half_width - 0.5 * self.dx()
    }

    /// Left end of the sampled window (edge of the first cell).
    #[inline]
    pub fn window_left(&self) -> f64 {
        -self.half_width - 0.5 * self.dx()
    }

    /// True when `|x| <= L/2`.
    #[inline]
    pub fn is_central(&self, x: f64) -> bool {
        x.abs() <= 0.5 * self.half_width
    }

    pub(crate) fn check_same(&self, other: &Grid1D) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch(format!(
                "(L={}, n={}) vs (L={}, n={})",
                self.half_width, self.n, other.half_width, other.n
            )))
        }
    }
}

/// How a sampled function behaves beyond the window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DecayClass {
    /// Negligible outside the window.
    Rapid,
    /// Decays like `|x|^{-p}`; integrable only when `p > 1`.
    Power(f64),
    /// Bounded or logarithmically growing (BMO-type); never integrable.
    LogGrowth,
}

impl DecayClass {
    pub fn is_integrable(&self) -> bool {
        match *self {
            DecayClass::Rapid => true,
            DecayClass::Power(p) => p > 1.0,
            DecayClass::LogGrowth => false,
        }
    }

    /// Decay of `|f|^q` given the decay of `f`.
    pub fn pow(&self, q: f64) -> DecayClass {
        match *self {
            DecayClass::Power(p) => DecayClass::Power(p * q),
            other => other,
        }
    }

    /// Decay of a pointwise product. A logarithmic factor is absorbed into
    /// the power law of the other operand.
    pub fn product(&self, other: &DecayClass) -> DecayClass {
        use DecayClass::*;
        match (*self, *other) {
            (Rapid, _) | (_, Rapid) => Rapid,
            (Power(p), Power(q)) => Power(p + q),
            (Power(p), LogGrowth) | (LogGrowth, Power(p)) => Power(p),
            (LogGrowth, LogGrowth) => LogGrowth,
        }
    }

    /// The weaker (slower) of two decay classes.
    pub fn weaker(&self, other: &DecayClass) -> DecayClass {
        use DecayClass::*;
        match (*self, *other) {
            (LogGrowth, _) | (_, LogGrowth) => LogGrowth,
            (Power(p), Power(q)) => Power(p.min(q)),
            (Power(p), Rapid) | (Rapid, Power(p)) => Power(p),
            (Rapid, Rapid) => Rapid,
        }
    }
}

impl fmt::Display for DecayClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DecayClass::Rapid => write!(f, "rapid"),
            DecayClass::Power(p) => write!(f, "power({p})"),
            DecayClass::LogGrowth => write!(f, "log_growth"),
        }
    }
}

impl FromStr for DecayClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "rapid" => Ok(DecayClass::Rapid),
            "log_growth" => Ok(DecayClass::LogGrowth),
            _ => {
                let inner = s
                    .strip_prefix("power(")
                    .and_then(|r| r.strip_suffix(')'))
                    .ok_or_else(|| Error::Parse(format!("unknown decay tag `{s}`")))?;
                let p: f64 = inner
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad power exponent `{inner}`")))?;
                if !(p.is_finite() && p > 0.0) {
                    return Err(Error::Parse(format!("power exponent must be positive, got {p}")));
                }
                Ok(DecayClass::Power(p))
            }
        }
    }
}

/// Closed-form continuation of a sampled function beyond its window.
#[derive(Clone)]
pub struct Extension(Arc<dyn Fn(f64) -> Complex64 + Send + Sync>);

impl Extension {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self(Arc::new(f))
    }

    #[inline]
    pub fn eval(&self, x: f64) -> Complex64 {
        (self.0)(x)
    }
}

impl fmt::Debug for Extension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Extension(<closure>)")
    }
}

/// Complex samples on a [`Grid1D`] together with their tail behaviour.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    grid: Grid1D,
    values: Vec<Complex64>,
    decay: DecayClass,
    extension: Option<Extension>,
}

impl SampledFunction {
    pub fn new(grid: Grid1D, values: Vec<Complex64>, decay: DecayClass) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} samples, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            grid,
            values,
            decay,
            extension: None,
        })
    }

    pub fn from_fn(grid: Grid1D, decay: DecayClass, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = grid.nodes().map(f).collect();
        Self::new(grid, values, decay)
    }

    pub fn from_real_fn(grid: Grid1D, decay: DecayClass, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::from_fn(grid, decay, |x| Complex64::new(f(x), 0.0))
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            values: vec![Complex64::new(0.0, 0.0); grid.len()],
            decay: DecayClass::Rapid,
            extension: None,
        }
    }

    /// Attaches a closed-form continuation used beyond the window.
    pub fn with_extension(mut self, ext: Extension) -> Self {
        self.extension = Some(ext);
        self
    }

    pub fn without_extension(mut self) -> Self {
        self.extension = None;
        self
    }

    pub fn with_decay(mut self, decay: DecayClass) -> Self {
        self.decay = decay;
        self
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    pub fn extension(&self) -> Option<&Extension> {
        self.extension.as_ref()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Pointwise map; the result has no closed-form continuation.
    pub fn map(&self, decay: DecayClass, f: impl Fn(f64, Complex64) -> Complex64) -> Result<Self> {
        let values = self
            .grid
            .nodes()
            .zip(&self.values)
            .map(|(x, &v)| f(x, v))
            .collect();
        Self::new(self.grid, values, decay)
    }

    /// `|f|` sampled, with matching decay.
    pub fn abs(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect(),
            decay: self.decay,
            extension: self.extension.clone().map(|e| Extension::new(move |x| Complex64::new(e.eval(x).norm(), 0.0))),
        }
    }

    pub fn real_part(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| Complex64::new(v.re, 0.0)).collect(),
            decay: self.decay,
            extension: self.extension.clone().map(|e| Extension::new(move |x| Complex64::new(e.eval(x).re, 0.0))),
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v.conj()).collect(),
            decay: self.decay,
            extension: self.extension.clone().map(|e| Extension::new(move |x| e.eval(x).conj())),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            values: self.values.iter().map(|v| v * c).collect(),
            decay: self.decay,
            extension: self.extension.clone().map(|e| Extension::new(move |x| e.eval(x) * c)),
        }
    }

    /// `a*self + b*other` on a shared grid.
    pub fn linear_combination(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        self.grid.check_same(&other.grid)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(u, v)| a * u + b * v)
            .collect();
        let ext = match (&self.extension, &other.extension) {
            (Some(e1), Some(e2)) => {
                let (e1, e2) = (e1.clone(), e2.clone());
                Some(Extension::new(move |x| a * e1.eval(x) + b * e2.eval(x)))
            }
            _ => None,
        };
        let mut out = Self::new(self.grid, values, self.decay.weaker(&other.decay))?;
        out.extension = ext;
        Ok(out)
    }

    /// Value of the continuation at `t` outside the window.
    ///
    /// Uses the attached closure when present; otherwise `Rapid` continues
    /// by zero, `Power(p)` by `A (t² + c)^{−p/2}` fitted to the edge node and
    /// the node [`TAIL_FIT_OFFSET`] samples inside (falling back to
    /// `f(edge)(|edge|/|t|)^p` when the two samples are not in phase or the
    /// fit degenerates), and `LogGrowth` by holding the edge value.
    pub fn continuation(&self, t: f64) -> Complex64 {
        if let Some(ext) = &self.extension {
            return ext.eval(t);
        }
        let (edge_x, edge_v) = self.edge(t);
        match self.decay {
            DecayClass::Rapid => Complex64::new(0.0, 0.0),
            DecayClass::Power(p) => match self.tail_offset(t, p) {
                Some(c) => edge_v * ((edge_x * edge_x + c) / (t * t + c)).powf(0.5 * p),
                None => edge_v * (edge_x.abs() / t.abs()).powf(p),
            },
            DecayClass::LogGrowth => edge_v,
        }
    }

    /// Offset `c` of the two-point tail fit on the side of `t`.
    fn tail_offset(&self, t: f64, p: f64) -> Option<f64> {
        let n = self.grid.len();
        let m = TAIL_FIT_OFFSET.min(n / 4);
        let (j0, j1) = if t >= 0.0 { (n - 1, n - 1 - m) } else { (0, m) };
        let (x0, x1) = (self.grid.node(j0), self.grid.node(j1));
        let (v0, v1) = (self.values[j0], self.values[j1]);
        if v1.norm() == 0.0 || v0.norm() == 0.0 {
            return None;
        }
        let q = v0 / v1;
        if q.re <= 0.0 || q.im.abs() > 1e-6 * q.re {
            return None;
        }
        // |v0/v1| = ((x1² + c)/(x0² + c))^{p/2}
        let r = q.norm().powf(2.0 / p);
        if !(r > 0.0 && r < 1.0) {
            return None;
        }
        let c = (x1 * x1 - r * x0 * x0) / (r - 1.0);
        (c.is_finite() && c > -0.5 * x1 * x1).then_some(c)
    }

    /// True when the continuation is identically zero.
    pub fn has_zero_tail(&self) -> bool {
        self.extension.is_none() && self.decay == DecayClass::Rapid
    }

    fn edge(&self, t: f64) -> (f64, Complex64) {
        if t >= 0.0 {
            let j = self.grid.len() - 1;
            (self.grid.node(j), self.values[j])
        } else {
            (self.grid.node(0), self.values[0])
        }
    }

    /// Trapezoidal quadrature over the window plus the analytic tail of the
    /// decay model. Rejects non-integrable classes.
    pub fn integrate(&self) -> Result<Complex64> {
        self.require_integrable()?;
        let core: Complex64 = self.values.iter().sum::<Complex64>() * self.grid.dx();
        Ok(core + self.tail_mass(|v| v))
    }

    /// Quadrature of `|f|`.
    pub fn integrate_abs(&self) -> Result<f64> {
        self.require_integrable()?;
        let core: f64 = self.values.iter().map(|v| v.norm()).sum::<f64>() * self.grid.dx();
        Ok(core + self.tail_mass(|v| Complex64::new(v.norm(), 0.0)).re)
    }

    /// Integral of `|f|` over the cells whose nodes lie in `(a, b)`, with
    /// half weight for nodes sitting on an endpoint.
    pub fn integrate_abs_over(&self, a: f64, b: f64) -> f64 {
        let dx = self.grid.dx();
        let eps = 1e-9 * dx;
        let mut acc = 0.0;
        for (x, v) in self.grid.nodes().zip(&self.values) {
            if x > a + eps && x < b - eps {
                acc += v.norm();
            } else if (x - a).abs() <= eps || (x - b).abs() <= eps {
                acc += 0.5 * v.norm();
            }
        }
        acc * dx
    }

    pub(crate) fn require_integrable(&self) -> Result<()> {
        if self.decay.is_integrable() {
            Ok(())
        } else {
            Err(Error::NonIntegrable(format!(
                "decay class `{}` cannot be integrated over the real line",
                self.decay
            )))
        }
    }

    fn tail_mass(&self, g: impl Fn(Complex64) -> Complex64) -> Complex64 {
        match self.decay {
            DecayClass::Power(p) if p > 1.0 => {
                let (xl, vl) = self.edge(-1.0);
                let (xr, vr) = self.edge(1.0);
                let al = -self.grid.window_left();
                let ar = self.grid.window_right();
                let left = g(vl) * xl.abs().powf(p) * al.powf(1.0 - p) / (p - 1.0);
                let right = g(vr) * xr.abs().powf(p) * ar.powf(1.0 - p) / (p - 1.0);
                left + right
            }
            _ => Complex64::new(0.0, 0.0),
        }
    }

    /// Columnar text form: `# L=<real> n=<int> decay=<tag>` then `x re im`.
    pub fn to_columnar(&self) -> String {
        let mut out = format!(
            "# L={} n={} decay={}\n",
            self.grid.half_width(),
            self.grid.len(),
            self.decay
        );
        for (x, v) in self.grid.nodes().zip(&self.values) {
            out.push_str(&format!("{} {} {}\n", x, v.re, v.im));
        }
        out
    }

    pub fn from_columnar(text: &str) -> Result<Self> {
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty input".into()))?;
        let header = header
            .trim()
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse("missing `#` header line".into()))?;
        let (mut half_width, mut n, mut decay) = (None, None, None);
        for field in header.split_whitespace() {
            let (key, value) = field
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("bad header field `{field}`")))?;
            match key {
                "L" => {
                    half_width = Some(value.parse::<f64>().map_err(|_| {
                        Error::Parse(format!("bad L value `{value}`"))
                    })?)
                }
                "n" => {
                    n = Some(value.parse::<usize>().map_err(|_| {
                        Error::Parse(format!("bad n value `{value}`"))
                    })?)
                }
                "decay" => decay = Some(value.parse::<DecayClass>()?),
                other => return Err(Error::Parse(format!("unknown header key `{other}`"))),
            }
        }
        let half_width = half_width.ok_or_else(|| Error::Parse("header lacks L".into()))?;
        let n = n.ok_or_else(|| Error::Parse("header lacks n".into()))?;
        let decay = decay.ok_or_else(|| Error::Parse("header lacks decay".into()))?;
        let grid = Grid1D::new(half_width, n)?;

        let mut values = Vec::with_capacity(n);
        for (lineno, line) in lines.enumerate() {
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 3 {
                return Err(Error::Parse(format!(
                    "data line {} has {} columns, expected 3",
                    lineno + 2,
                    cols.len()
                )));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad number `{s}` on data line {}", lineno + 2)))
            };
            let x = parse(cols[0])?;
            let expected = grid.node(values.len().min(n - 1));
            if values.len() < n && (x - expected).abs() > 1e-9 * grid.dx().max(1.0) {
                return Err(Error::Parse(format!(
                    "node {x} on data line {} does not match grid node {expected}",
                    lineno + 2
                )));
            }
            values.push(Complex64::new(parse(cols[1])?, parse(cols[2])?));
        }
        if values.len() != n {
            return Err(Error::Parse(format!("expected {n} data lines, found {}", values.len())));
        }
        SampledFunction::new(grid, values, decay)
    }
}

/// Strictly increasing positive heights `y_k`, logarithmically spaced.
#[derive(Debug, Clone, PartialEq)]
pub struct HeightLadder {
    levels: Vec<f64>,
}

impl HeightLadder {
    pub const MIN_LEVELS: usize = 8;

    pub fn log_spaced(y_min: f64, y_max: f64, count: usize) -> Result<Self> {
        if !(y_min.is_finite() && y_min > 0.0) {
            return Err(Error::InvalidLadder(format!("y_min must be positive, got {y_min}")));
        }
        if !(y_max.is_finite() && y_max >= 1.0) {
            return Err(Error::InvalidLadder(format!("y_max must be at least 1, got {y_max}")));
        }
        if y_max <= y_min {
            return Err(Error::InvalidLadder(format!(
                "y_max = {y_max} must exceed y_min = {y_min}"
            )));
        }
        if count < Self::MIN_LEVELS {
            return Err(Error::InvalidLadder(format!(
                "need at least {} levels, got {count}",
                Self::MIN_LEVELS
            )));
        }
        let (lo, hi) = (y_min.ln(), y_max.ln());
        let step = (hi - lo) / (count - 1) as f64;
        let mut levels: Vec<f64> = (0..count).map(|k| (lo + step * k as f64).exp()).collect();
        levels[0] = y_min;
        levels[count - 1] = y_max;
        Ok(Self { levels })
    }

    #[inline]
    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn y_min(&self) -> f64 {
        self.levels[0]
    }

    pub fn y_max(&self) -> f64 {
        *self.levels.last().expect("ladder is never empty")
    }
}

/// Values of a function on `grid x ladder`, stored level by level.
#[derive(Debug, Clone)]
pub struct HalfPlaneField {
    grid: Grid1D,
    ladder: HeightLadder,
    values: Vec<Complex64>,
    decay: DecayClass,
}

impl HalfPlaneField {
    pub fn new(
        grid: Grid1D,
        ladder: HeightLadder,
        values: Vec<Complex64>,
        decay: DecayClass,
    ) -> Result<Self> {
        let expected = grid.len() * ladder.len();
        if values.len() != expected {
            return Err(Error::InvalidArgument(format!(
                "field needs {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            grid,
            ladder,
            values,
            decay,
        })
    }

    /// Evaluates `f(x + iy)` at every grid node and ladder level.
    pub fn from_fn(
        grid: Grid1D,
        ladder: HeightLadder,
        decay: DecayClass,
        f: impl Fn(Complex64) -> Complex64,
    ) -> Result<Self> {
        let mut values = Vec::with_capacity(grid.len() * ladder.len());
        for &y in ladder.levels() {
            values.extend(grid.nodes().map(|x| f(Complex64::new(x, y))));
        }
        Self::new(grid, ladder, values, decay)
    }

    pub(crate) fn from_slices(
        grid: Grid1D,
        ladder: HeightLadder,
        slices: Vec<Vec<Complex64>>,
        decay: DecayClass,
    ) -> Result<Self> {
        let values = slices.into_iter().flatten().collect();
        Self::new(grid, ladder, values, decay)
    }

    #[inline]
    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    #[inline]
    pub fn ladder(&self) -> &HeightLadder {
        &self.ladder
    }

    #[inline]
    pub fn decay(&self) -> DecayClass {
        self.decay
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn slice(&self, level: usize) -> &[Complex64] {
        let n = self.grid.len();
        &self.values[level * n..(level + 1) * n]
    }

    /// One horizontal line as a sampled function.
    pub fn slice_function(&self, level: usize) -> SampledFunction {
        SampledFunction {
            grid: self.grid,
            values: self.slice(level).to_vec(),
            decay: self.decay,
            extension: None,
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            grid: self.grid,
            ladder: self.ladder.clone(),
            values: self.values.iter().map(|v| v * c).collect(),
            decay: self.decay,
        }
    }

    pub(crate) fn check_compatible(&self, other: &Self) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        if self.ladder != other.ladder {
            return Err(Error::GridMismatch("height ladders differ".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn grid_spacing() {
        assert_eq!(make_grid(1.0, 16).unwrap().dx(), 0.125);
        assert_eq!(make_grid(64.0, 4096).unwrap().dx(), 0.03125);
        let g = make_grid(1.0, 16).unwrap();
        assert_eq!(g.node(0), -1.0);
        assert_eq!(g.node(15), 1.0 - 0.125);
    }

    #[test]
    fn grid_rejects_bad_input() {
        assert!(matches!(make_grid(1.0, 15), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(1.0, 8), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(0.0, 16), Err(Error::InvalidGrid(_))));
        assert!(matches!(make_grid(-2.0, 16), Err(Error::InvalidGrid(_))));
    }

    #[test]
    fn indicator_mass() {
        let g = make_grid(4.0, 1024).unwrap();
        let f = SampledFunction::from_real_fn(g, DecayClass::Rapid, |x| {
            if (-0.5..0.5).contains(&x) { 1.0 } else { 0.0 }
        })
        .unwrap();
        let v = f.integrate().unwrap().re;
        assert!((v - 1.0).abs() <= g.dx(), "{v}");
    }

    #[test]
    fn lorentzian_with_power_tail() {
        let g = make_grid(64.0, 4096).unwrap();
        let f = SampledFunction::from_real_fn(g, DecayClass::Power(2.0), |x| 1.0 / (1.0 + x * x)).unwrap();
        let v = f.integrate().unwrap().re;
        assert!((v - PI).abs() < 1e-3, "{v}");
    }

    #[test]
    fn zero_integrates_to_zero() {
        let g = make_grid(8.0, 64).unwrap();
        assert_eq!(SampledFunction::zeros(g).integrate().unwrap(), c(0.0));
    }

    #[test]
    fn log_growth_is_not_integrated() {
        let g = make_grid(8.0, 64).unwrap();
        let f = SampledFunction::from_real_fn(g, DecayClass::LogGrowth, |x| (1.0 + x.abs()).ln()).unwrap();
        assert!(matches!(f.integrate(), Err(Error::NonIntegrable(_))));
    }

    #[test]
    fn rejects_non_finite_samples() {
        let g = make_grid(1.0, 16).unwrap();
        let mut v = vec![c(0.0); 16];
        v[3] = c(f64::NAN);
        assert!(matches!(SampledFunction::new(g, v, DecayClass::Rapid), Err(Error::NonFinite { index: 3 })));
    }

    #[test]
    fn refinement_tracks_trapezoid_bound() {
        // trapezoid error for 1/(1+x^2) is dominated by dx^2/12 * [f']; the
        // tail model is identical on both grids, so doubling n moves the
        // result by far less than the coarse bound.
        let coarse = make_grid(64.0, 1024).unwrap();
        let fine = make_grid(64.0, 2048).unwrap();
        let f = |g| {
            SampledFunction::from_real_fn(g, DecayClass::Power(2.0), |x| 1.0 / (1.0 + x * x))
                .unwrap()
                .integrate()
                .unwrap()
                .re
        };
        let diff = (f(coarse) - f(fine)).abs();
        // |f''| <= 2 on the line; bound = (2L) * dx^2 / 12 * max|f''|.
        let bound = 128.0 * coarse.dx().powi(2) / 12.0 * 2.0;
        assert!(diff <= 4.0 * bound, "{diff} vs {bound}");
    }

    #[test]
    fn decay_tags_parse() {
        assert_eq!("rapid".parse::<DecayClass>().unwrap(), DecayClass::Rapid);
        assert_eq!("power(2.5)".parse::<DecayClass>().unwrap(), DecayClass::Power(2.5));
        assert_eq!("log_growth".parse::<DecayClass>().unwrap(), DecayClass::LogGrowth);
        assert!("power(-1)".parse::<DecayClass>().is_err());
        assert!("fast".parse::<DecayClass>().is_err());
    }

    #[test]
    fn columnar_round_trip() {
        let g = make_grid(2.0, 16).unwrap();
        let f = SampledFunction::from_fn(g, DecayClass::Power(2.0), |x| Complex64::new(x.sin(), 1.0 / (1.0 + x * x)))
            .unwrap();
        let text = f.to_columnar();
        assert!(text.starts_with("# L=2 n=16 decay=power(2)\n"));
        let back = SampledFunction::from_columnar(&text).unwrap();
        assert_eq!(back.values(), f.values());
        assert_eq!(back.decay(), f.decay());
    }

    #[test]
    fn columnar_rejects_garbage() {
        assert!(matches!(SampledFunction::from_columnar(""), Err(Error::Parse(_))));
        assert!(matches!(
            SampledFunction::from_columnar("# L=1 n=16 decay=rapid\n0 0\n"),
            Err(Error::Parse(_))
        ));
    }

    #[test]
    fn ladder_invariants() {
        let l = HeightLadder::log_spaced(1e-3, 1e3, 48).unwrap();
        assert_eq!(l.len(), 48);
        assert_eq!(l.y_min(), 1e-3);
        assert_eq!(l.y_max(), 1e3);
        assert!(l.levels().windows(2).all(|w| w[1] > w[0]));
        assert!(HeightLadder::log_spaced(1e-3, 1e3, 7).is_err());
        assert!(HeightLadder::log_spaced(0.0, 1e3, 8).is_err());
        assert!(HeightLadder::log_spaced(1e-3, 0.5, 8).is_err());
    }

    #[test]
    fn power_continuation_fits_offset_tails() {
        let g = make_grid(8.0, 64).unwrap();
        let f = SampledFunction::from_real_fn(g, DecayClass::Power(2.0), |x| 1.0 / (1.0 + x * x)).unwrap();
        for t in [16.0, -16.0, 1e4] {
            let at = f.continuation(t).re;
            assert!((at - 1.0 / (1.0 + t * t)).abs() < 1e-15 * (1.0 + at), "{t}: {at}");
        }
    }

    #[test]
    fn power_continuation_falls_back_without_phase_match() {
        let g = make_grid(8.0, 64).unwrap();
        let f = SampledFunction::from_fn(g, DecayClass::Power(2.0), |x| {
            Complex64::from_polar(1.0 / (1.0 + x * x), x)
        })
        .unwrap();
        let (edge, v) = (g.node(63), f.values()[63]);
        let at = f.continuation(16.0);
        assert!((at - v * (edge / 16.0).powi(2)).norm() < 1e-15);
    }
}
