//! Property tests on small grids.

use num_complex::Complex64;
use proptest::prelude::*;

use hardylog::config::RunConfig;
use hardylog::hankel::hankel_apply;
use hardylog::maximal::{hl_maximal, nontangential_max};
use hardylog::spaces::{bmoa_log_seminorm, hp_norm, luxemburg_norm, MusielakWeight};
use hardylog::transforms::{holomorphic_extend, poisson_extend, szego_project};
use hardylog::{make_grid, DecayClass, Grid1D, HeightLadder, SampledFunction};

fn grid() -> Grid1D {
    make_grid(16.0, 512).unwrap()
}

fn ladder() -> HeightLadder {
    HeightLadder::log_spaced(1e-2, 1e2, 12).unwrap()
}

/// `(amplitude re, amplitude im, center, width)` of one Gaussian bump.
type Bump = (f64, f64, f64, f64);

fn bumps() -> impl Strategy<Value = Vec<Bump>> {
    prop::collection::vec((-2.0..2.0f64, -2.0..2.0f64, -5.0..5.0f64, 0.4..2.0f64), 1..4)
}

fn sample(bs: &[Bump]) -> SampledFunction {
    SampledFunction::from_fn(grid(), DecayClass::Rapid, |x| {
        bs.iter()
            .map(|&(re, im, c, s)| Complex64::new(re, im) * (-((x - c) / s).powi(2)).exp())
            .sum()
    })
    .unwrap()
}

fn complex() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0f64, -3.0..3.0f64).prop_map(|(a, b)| Complex64::new(a, b))
}

fn max_diff(a: &SampledFunction, b: &SampledFunction) -> f64 {
    a.values().iter().zip(b.values()).map(|(u, v)| (u - v).norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn integration_is_linear(f in bumps(), g in bumps(), a in complex(), b in complex()) {
        let (f, g) = (sample(&f), sample(&g));
        let lhs = f.linear_combination(a, &g, b).unwrap().integrate().unwrap();
        let rhs = a * f.integrate().unwrap() + b * g.integrate().unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
    }

    #[test]
    fn maximal_function_dominates_and_is_sublinear(f in bumps(), g in bumps()) {
        let (f, g) = (sample(&f), sample(&g));
        let one = Complex64::new(1.0, 0.0);
        let mf = hl_maximal(&f).unwrap();
        let mg = hl_maximal(&g).unwrap();
        let msum = hl_maximal(&f.linear_combination(one, &g, one).unwrap()).unwrap();
        for j in 0..f.len() {
            let (a, b, s) = (mf.values()[j].re, mg.values()[j].re, msum.values()[j].re);
            prop_assert!(a >= f.values()[j].norm() * (1.0 - 1e-12));
            prop_assert!(s <= (a + b) * (1.0 + 1e-12) + 1e-15);
        }
    }

    #[test]
    fn squared_weight_is_convex_on_each_side_of_one(
        x in -100.0..100.0f64,
        below in (1e-6..1.0f64, 1e-6..1.0f64),
        above in (1.0..1e6f64, 1.0..1e6f64),
    ) {
        let w = MusielakWeight::Theta0;
        for (t1, t2) in [below, above] {
            let mid = w.eval(x, 0.5 * (t1 + t2));
            let chord = 0.5 * (w.eval(x, t1) + w.eval(x, t2));
            prop_assert!(mid <= chord * (1.0 + 1e-12) + 1e-300, "x={x} t=({t1}, {t2})");
        }
    }

    #[test]
    fn szego_projection_is_idempotent(f in bumps()) {
        let once = szego_project(&sample(&f)).unwrap();
        let twice = szego_project(&once).unwrap();
        prop_assert!(max_diff(&once, &twice) <= 1e-12 * (1.0 + once.max_abs()));
    }

    #[test]
    fn hankel_operator_is_antilinear(b in bumps(), f in bumps(), g in bumps(), a in complex(), c in complex()) {
        let (b, f, g) = (sample(&b), sample(&f), sample(&g));
        let lhs = hankel_apply(&b, &f.linear_combination(a, &g, c).unwrap()).unwrap();
        let rhs = hankel_apply(&b, &f)
            .unwrap()
            .linear_combination(a.conj(), &hankel_apply(&b, &g).unwrap(), c.conj())
            .unwrap();
        let scale = b.max_abs() * (f.max_abs() + g.max_abs()) * (a.norm() + c.norm() + 1.0);
        prop_assert!(max_diff(&lhs, &rhs) <= 1e-12 * scale);
    }

    #[test]
    fn h1_norm_is_homogeneous(f in bumps(), c in complex()) {
        prop_assume!(c.norm() > 1e-3);
        let field = poisson_extend(&sample(&f), &ladder()).unwrap();
        let base = hp_norm(&field, 1.0).unwrap().value;
        let scaled = hp_norm(&field.scale(c), 1.0).unwrap().value;
        prop_assert!((scaled - c.norm() * base).abs() <= 1e-9 * c.norm() * base);
    }

    #[test]
    fn luxemburg_norm_is_homogeneous(f in bumps(), c in 1e-2..1e2f64) {
        let f = sample(&f);
        let base = luxemburg_norm(&f, MusielakWeight::Theta).unwrap().value;
        let scaled = luxemburg_norm(&f.scale(Complex64::new(c, 0.0)), MusielakWeight::Theta).unwrap().value;
        prop_assert!((scaled - c * base).abs() <= 1e-8 * c * base);
    }

    #[test]
    fn log_seminorm_scales_quadratically(f in bumps(), c in complex()) {
        prop_assume!(c.norm() > 1e-2);
        let b = holomorphic_extend(&szego_project(&sample(&f)).unwrap(), &ladder()).unwrap();
        let base = bmoa_log_seminorm(&b).unwrap().value;
        let scaled = bmoa_log_seminorm(&b.scale(c)).unwrap().value;
        let want = c.norm_sqr() * base;
        prop_assert!((scaled - want).abs() <= 1e-9 * want + 1e-300);
    }

    #[test]
    fn nontangential_max_grows_with_cone_height(f in bumps(), k in 1usize..11) {
        let field = poisson_extend(&sample(&f), &ladder()).unwrap();
        let levels = field.ladder().levels();
        let low = nontangential_max(&field, levels[k - 1]).unwrap();
        let high = nontangential_max(&field, levels[k]).unwrap();
        for (a, b) in low.values().iter().zip(high.values()) {
            prop_assert!(a.re <= b.re);
        }
    }

    #[test]
    fn config_survives_its_canonical_text(
        grid_l in 1.0..200.0f64,
        grid_n in 256usize..8192,
        seed in any::<u64>(),
        trials in 1usize..500,
        tol in 1e-16..1e-2f64,
        families in prop::sample::subsequence(vec!["one", "expiz", "cpole", "logratio"], 0..4),
    ) {
        let mut c = RunConfig::default();
        c.grid_l = grid_l;
        c.grid_n = grid_n;
        c.seed = seed;
        c.trials = trials;
        c.residual_tol = tol;
        c.g_family = families.iter().map(|s| s.to_string()).collect();
        let mut back = RunConfig::default();
        back.apply_file_text(&c.canonical()).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(back.hash(), c.hash());
    }
}
