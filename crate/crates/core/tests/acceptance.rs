//! Acceptance criteria on the default rig: L = 64, n = 4096, 48 heights in
//! [1e-3, 1e3]. Prints one PASS/FAIL line per criterion.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::Command;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use hardylog::config::RunConfig;
use hardylog::library::{self, gaussian, gaussian_pair};
use hardylog::oracles::{hilbert_pv_direct, luxemburg_scan, poisson_direct};
use hardylog::spaces::{luxemburg_integral, luxemburg_norm, MusielakWeight};
use hardylog::transforms::{hilbert_transform, poisson_at};
use hardylog::verify::{run_suite, SuiteReport};
use hardylog::{make_grid, DecayClass, Grid1D, SampledFunction};

/// `Err` is a failure. `Ok((detail, false))` is a pass; `Ok((detail, true))`
/// is a failure that matches the known counterexample and does not fail the
/// run.
type Outcome = Result<(String, bool), String>;

fn pass(detail: String) -> Outcome {
    Ok((detail, false))
}

fn rig() -> Grid1D {
    make_grid(64.0, 4096).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn max_abs_diff(a: &SampledFunction, b: &SampledFunction) -> f64 {
    a.values().iter().zip(b.values()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

fn oracle_set(g: Grid1D) -> Vec<(&'static str, SampledFunction)> {
    ["poisson1", "gauss", "wcos"]
        .into_iter()
        .map(|n| (n, library::boundary(n, g).unwrap()))
        .collect()
}

fn suite(name: &str) -> Result<SuiteReport, String> {
    run_suite(name, &RunConfig::default()).map_err(|e| format!("{name}: {e}"))
}

fn failed_checks(r: &SuiteReport) -> String {
    r.checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| format!("{}={:e}", c.name, c.value))
        .collect::<Vec<_>>()
        .join(", ")
}

fn operator_oracles() -> Outcome {
    let g = rig();
    let mut worst_h: f64 = 0.0;
    let mut worst_p: f64 = 0.0;
    for (name, f0) in oracle_set(g) {
        let fast = hilbert_transform(&f0).unwrap();
        let slow = hilbert_pv_direct(&f0).unwrap();
        let num: f64 = fast.values().iter().zip(slow.values()).map(|(a, b)| (a - b).norm_sqr()).sum();
        let den: f64 = slow.values().iter().map(|v| v.norm_sqr()).sum();
        let rel = (num / den).sqrt();
        ensure(rel <= 1e-4, || format!("{name}: Hilbert relative L2 error {rel:e}"))?;
        worst_h = worst_h.max(rel);

        for y in [0.25, 1.0, 4.0] {
            let direct = poisson_direct(&f0, y).unwrap();
            let err = max_abs_diff(&poisson_at(&f0, y).unwrap(), &direct) / f0.max_abs();
            ensure(err <= 1e-6, || format!("{name}, y={y}: Poisson error {err:e}"))?;
            worst_p = worst_p.max(err);
        }
    }
    pass(format!("Hilbert rel L2 {worst_h:.2e}, Poisson rel max {worst_p:.2e}"))
}

fn poisson_semigroup() -> Outcome {
    let g = rig();
    let mut worst: f64 = 0.0;
    for (name, f0) in oracle_set(g) {
        for (y1, y2) in [(0.5, 0.5), (1.0, 2.0), (3.0, 7.0)] {
            let twice = poisson_at(&poisson_at(&f0, y2).unwrap(), y1).unwrap();
            let once = poisson_at(&f0, y1 + y2).unwrap();
            let err = max_abs_diff(&twice, &once) / f0.max_abs();
            ensure(err <= 1e-6, || format!("{name}, ({y1}, {y2}): {err:e}"))?;
            worst = worst.max(err);
        }
    }
    pass(format!("max relative deviation {worst:.2e}"))
}

fn random_input(g: Grid1D, seed: u64) -> SampledFunction {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let amp = 10f64.powf(rng.gen_range(-3.0..3.0));
    let c = Complex64::new(amp, 0.0);
    match seed % 5 {
        0 => gaussian(g, seed).unwrap().scale(c),
        1 => {
            let a: f64 = rng.gen_range(-5.0..4.0);
            let w: f64 = rng.gen_range(0.1..4.0);
            SampledFunction::from_real_fn(g, DecayClass::Rapid, |x| amp * library::indicator(x, a, a + w)).unwrap()
        }
        2 => library::boundary("dpole", g).unwrap().scale(c),
        3 => library::boundary("poisson1", g).unwrap().scale(c),
        _ => gaussian_pair(g, seed).unwrap().scale(c),
    }
}

fn luxemburg() -> Outcome {
    let g = rig();
    let chi = library::boundary("indicator", g).unwrap();
    let unit = luxemburg_norm(&chi, MusielakWeight::Theta).unwrap().value;
    ensure((unit - 1.0).abs() <= 1e-6, || format!("unit indicator norm {unit}"))?;
    let mut inputs: Vec<SampledFunction> = (0..20).map(|s| random_input(g, s)).collect();
    inputs.push(chi);
    let results: Vec<(f64, f64, f64)> = inputs
        .par_iter()
        .map(|f| {
            let lam = luxemburg_norm(f, MusielakWeight::Theta).unwrap().value;
            let integral = luxemburg_integral(f, MusielakWeight::Theta, lam).unwrap();
            let scan = luxemburg_scan(f, MusielakWeight::Theta).unwrap();
            (lam, integral, (lam - scan).abs() / scan)
        })
        .collect();
    for (k, (lam, integral, rel)) in results.iter().enumerate() {
        ensure((integral - 1.0).abs() <= 1e-6, || format!("input {k}: integral {integral} at {lam}"))?;
        ensure(*rel <= 1e-5, || format!("input {k}: scan disagreement {rel:e}"))?;
    }
    let worst = results.iter().map(|r| r.2).fold(0.0, f64::max);
    pass(format!("unit indicator {unit:.9}, worst scan disagreement {worst:.2e}"))
}

/// Midpoint convexity of `t ↦ θ₀(x, t)`. The weight is convex on `t ≤ 1`
/// and on `t ≥ 1`, but `log₊` puts a concave kink at `t = 1`: the slope drops
/// from `2/a` to `2/a − 1/a²` with `a = 1 + log₊|x|`. Pairs straddling the
/// kink therefore violate the inequality; any other violation is a failure.
fn theta0_convexity() -> Outcome {
    let xs: Vec<f64> = (0..100).map(|i| -64.0 + 128.0 * i as f64 / 99.0).collect();
    let ts: Vec<f64> = (0..100).map(|i| 1e-6 * 1e12f64.powf(i as f64 / 99.0)).collect();
    let w = MusielakWeight::Theta0;
    let (mut straddling, mut other, mut pairs) = (0usize, 0usize, 0usize);
    let mut worst: f64 = 0.0;
    for &x in &xs {
        for (i, &t1) in ts.iter().enumerate() {
            for &t2 in &ts[i..] {
                let mid = w.eval(x, 0.5 * (t1 + t2));
                let chord = 0.5 * (w.eval(x, t1) + w.eval(x, t2));
                pairs += 1;
                if mid > chord + 1e-12 * chord.max(1.0) {
                    worst = worst.max((mid - chord) / chord);
                    if t1 < 1.0 && t2 > 1.0 {
                        straddling += 1;
                    } else {
                        other += 1;
                    }
                }
            }
        }
    }
    ensure(other == 0, || format!("{other} violations away from t = 1"))?;
    if straddling == 0 {
        return pass(format!("{pairs} midpoint pairs, no violations"));
    }
    Ok((
        format!(
            "{straddling} of {pairs} pairs violate midpoint convexity (worst relative excess {worst:.2e}), \
             all straddling the log+ kink at t = 1; convex on either side"
        ),
        true,
    ))
}

fn maximal_norms() -> Outcome {
    let r = suite("thm21")?;
    let easy = r.checks.iter().filter(|c| c.name.starts_with("slice_norm_minus")).all(|c| c.ok);
    ensure(easy, || format!("slice norm exceeds maximal norm: {}", failed_checks(&r)))?;
    ensure(r.max_ratio <= 10.0 && r.max_ratio.is_finite(), || format!("C = {}", r.max_ratio))?;
    pass(format!("C = {:.4}", r.max_ratio))
}

fn maximal_majorant() -> Outcome {
    let r = suite("thm21")?;
    let cs: Vec<f64> = r.checks.iter().filter(|c| c.name.starts_with("majorant")).map(|c| c.value).collect();
    ensure(!cs.is_empty(), || "no majorant checks".into())?;
    let c = cs.iter().cloned().fold(0.0, f64::max);
    ensure(c <= 10.0, || format!("C = {c}"))?;
    pass(format!("C = {c:.4}"))
}

fn poisson_growth() -> Outcome {
    let r = suite("lemma31")?;
    ensure(r.rows.len() == 4 * 7, || format!("{} rows", r.rows.len()))?;
    ensure(r.pass, || format!("max ratio {:e}; {}", r.max_ratio, failed_checks(&r)))?;
    let growth = r.checks.iter().map(|c| c.value).fold(0.0, f64::max);
    pass(format!("C = {:.4}, worst growth 1000/10 = {growth:.4}", r.max_ratio))
}

fn product_bound() -> Outcome {
    let r = suite("prop31")?;
    ensure(r.rows.len() == 25, || format!("{} rows", r.rows.len()))?;
    ensure(r.max_ratio.is_finite() && r.max_ratio <= 50.0, || format!("C = {}", r.max_ratio))?;
    pass(format!("C = {:.4}", r.max_ratio))
}

fn factorization() -> Outcome {
    let r = suite("thm11")?;
    ensure(r.pass, || format!("max residual ratio {:e}; {}", r.max_ratio, failed_checks(&r)))?;
    let worst = r.rows.iter().map(|row| row.lhs).fold(0.0, f64::max);
    let doubling = r
        .checks
        .iter()
        .filter(|c| c.name.starts_with("l1_doubling"))
        .map(|c| c.value)
        .fold(0.0, f64::max);
    pass(format!("max residual {worst:.2e}, max L1 change under doubling {doubling:.2e}"))
}

fn symbol_bound() -> Outcome {
    let r = suite("cr")?;
    ensure(r.pass, || format!("C = {:e}; {}", r.max_ratio, failed_checks(&r)))?;
    ensure(r.rows.iter().any(|row| row.case.ends_with("x1e-3")), || "small scales missing".into())?;
    ensure(r.rows.iter().any(|row| row.case.ends_with("x1e3")), || "large scales missing".into())?;
    pass(format!("C = {:.4} over {} inputs", r.max_ratio, r.rows.len()))
}

fn hankel() -> Outcome {
    let r = suite("hankel")?;
    ensure(r.pass, || failed_checks(&r))?;
    ensure(r.rows.len() == 50, || format!("{} trials", r.rows.len()))?;
    ensure(r.notes.iter().any(|n| n.contains("degenerate")), || "constant symbol not flagged".into())?;
    let anti = r.checks.iter().find(|c| c.name.starts_with("antilinearity")).map(|c| c.value).unwrap_or(f64::NAN);
    pass(format!("antilinearity error {anti:.2e}, C = {:.4}", r.max_ratio))
}

fn run_verify(suite: &str, out: &Path) -> Result<(), String> {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_hardylog"));
    for (k, _) in std::env::vars() {
        if k.starts_with("HARDYLOG_") {
            cmd.env_remove(k);
        }
    }
    let status = cmd
        .args(["verify", suite, "--seed", "7", "--out"])
        .arg(out)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!("{suite} exited with {}: {}", status.status, String::from_utf8_lossy(&status.stderr))
    })
}

fn determinism() -> Outcome {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let mut files = 0;
    for s in ["cr", "hankel"] {
        run_verify(s, a.path())?;
        run_verify(s, b.path())?;
        for ext in ["csv", "json"] {
            let name = format!("{s}.{ext}");
            let x = std::fs::read(a.path().join(&name)).map_err(|e| e.to_string())?;
            let y = std::fs::read(b.path().join(&name)).map_err(|e| e.to_string())?;
            ensure(x == y, || format!("{name} differs between runs"))?;
            files += 1;
        }
    }
    pass(format!("{files} report files byte-identical"))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 12] = [
        ("fast transforms match direct quadrature", operator_oracles),
        ("Poisson semigroup", poisson_semigroup),
        ("Luxemburg norm root and scan agreement", luxemburg),
        ("convexity of the squared weight", theta0_convexity),
        ("nontangential maximal norm against slice norms", maximal_norms),
        ("pointwise majorant of the nontangential maximal function", maximal_majorant),
        ("logarithmic growth of Poisson averages in BMO+", poisson_growth),
        ("product of H1 and BMOA lands in H^log", product_bound),
        ("factorization h = f g", factorization),
        ("BMO+ bound of the log-maximal symbol", symbol_bound),
        ("Hankel antilinearity and form sweep", hankel),
        ("byte-identical verify reports", determinism),
    ];
    let (mut failed, mut known) = (0, 0);
    for (k, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok((detail, false)) => println!("PASS criterion {:>2} ({name}): {detail} [{secs:.1}s]", k + 1),
            Ok((detail, true)) => {
                known += 1;
                println!("FAIL criterion {:>2} ({name}): {detail} [{secs:.1}s] (known counterexample)", k + 1);
            }
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({name}): {detail} [{secs:.1}s]", k + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed, {known} known counterexample(s), {failed} unexpected failure(s)",
        criteria.len() - failed - known,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
