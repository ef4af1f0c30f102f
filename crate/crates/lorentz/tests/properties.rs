//! Property tests over random step functions, weights and measures.

use approx::assert_relative_eq;
use proptest::prelude::*;

use lorentz_lab::kfun::{k_explicit, k_oracle};
use lorentz_lab::lorentz::{kolmogorov_ratio, lambda_norm, lambda_norm_layered};
use lorentz_lab::maximal::{maximal_level_set, maximal_value};
use lorentz_lab::operators::{discrete_hardy, hardy};
use lorentz_lab::piecewise::{distribution, double_star, rearrange, Lebesgue, LineMeasure, StepFn, Weight};
use lorentz_lab::quad::Quad;
use lorentz_lab::reduction::{layer_cake_bound, KernelOp};
use lorentz_lab::seq::Seq;
use lorentz_lab::weights::{check_bp, BpMode, GridSpec};

fn step() -> impl Strategy<Value = StepFn<f64>> {
    (-3.0..3.0f64, prop::collection::vec((0.05..2.0f64, 0.0..5.0f64), 1..8)).prop_map(|(x0, ps)| {
        let mut breaks = vec![x0];
        let mut vals = Vec::new();
        for (w, v) in ps {
            breaks.push(breaks.last().unwrap() + w);
            vals.push(v);
        }
        StepFn::new(breaks, vals).unwrap()
    })
}

fn nonneg_step() -> impl Strategy<Value = StepFn<f64>> {
    step().prop_map(|f| {
        let b = f.breaks();
        let shift = b[0];
        StepFn::new(b.iter().map(|x| x - shift).collect(), f.values().to_vec()).unwrap()
    })
}

fn measure() -> impl Strategy<Value = LineMeasure<f64>> {
    prop_oneof![
        Just(LineMeasure::lebesgue()),
        Just(LineMeasure::exp_abs()),
        Just(LineMeasure::one_plus_abs()),
        (0.0..2.0f64).prop_map(|a| LineMeasure::power_abs(a).unwrap()),
        prop::collection::vec(0.1..4.0f64, 1..5).prop_map(|d| {
            let breaks = (0..d.len()).map(|i| -4.0 + 2.5 * i as f64).collect();
            LineMeasure::step(breaks, d).unwrap()
        }),
    ]
}

fn weight() -> impl Strategy<Value = Weight<f64>> {
    prop_oneof![
        Just(Weight::one()),
        (-0.8..2.0f64).prop_map(|a| Weight::power(a).unwrap()),
        (0.2..5.0f64).prop_map(|b| Weight::chi(b).unwrap()),
        Just(Weight::one_plus_log()),
        Just(Weight::inv_shift()),
        prop::collection::vec(0.05..3.0f64, 2..5).prop_map(|d| {
            let breaks = (0..d.len()).map(|i| i as f64 * 0.7).collect();
            Weight::step(breaks, d).unwrap()
        }),
    ]
}

fn exponent() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.5), Just(1.0), Just(2.0), 0.3..4.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn equimeasurable(f in step(), mu in measure()) {
        let fs = rearrange(&f, &mu).unwrap();
        prop_assert_eq!(distribution(&fs, &Lebesgue), distribution(&f, &mu));
        for p in [1.0, 2.0, 3.0] {
            let a = f.integral_pow(p, &mu);
            let b = fs.integral_pow(p, &Lebesgue);
            if a.is_finite() {
                assert_relative_eq!(a.get(), b.get(), max_relative = 1e-12);
            } else {
                prop_assert!(b.is_infinite());
            }
        }
    }

    #[test]
    fn rearrangement_is_monotone(f in step(), mu in measure(), t in 0.01..20.0f64, s in 0.01..20.0f64) {
        let fs = rearrange(&f, &mu).unwrap();
        let (lo, hi) = if t < s { (t, s) } else { (s, t) };
        prop_assert!(fs.eval(lo) >= fs.eval(hi));
        // equal (up to rounding) while both points sit on the first piece
        prop_assert!(double_star(&fs, lo).get() >= double_star(&fs, hi).get() * (1.0 - 1e-14));
        prop_assert!(double_star(&fs, t).get() >= fs.eval(t) * (1.0 - 1e-14));
        // the Hardy average of a nonincreasing function is its f**
        assert_relative_eq!(hardy(&fs, t), double_star(&fs, t).get(), max_relative = 1e-14);
    }

    #[test]
    fn lorentz_monotone_and_homogeneous(f in step(), mu in measure(), w in weight(), p in exponent(), q in exponent(), c in 0.1..10.0f64) {
        let n = lambda_norm(&f, &mu, p, q, &w);
        let big = f.add(&f.truncate(1.0));
        prop_assert!(lambda_norm(&big, &mu, p, q, &w).get() >= n.get() * (1.0 - 1e-12));
        let scaled = lambda_norm(&f.scale(c), &mu, p, q, &w);
        if n.is_finite() {
            assert_relative_eq!(scaled.get(), c * n.get(), max_relative = 1e-12);
            assert_relative_eq!(lambda_norm_layered(&f, &mu, p, q, &w).get(), n.get(), max_relative = 1e-9);
        }
    }

    #[test]
    fn kolmogorov_sandwich(f in step(), mu in measure(), w in weight(), p in 1.0..4.0f64, r in 0.1..0.9f64) {
        let q = p * r;
        let (weak, km) = kolmogorov_ratio(&f, &mu, p, q, &w).unwrap();
        if weak.is_finite() && km.is_finite() {
            let c = (p / (p - q)).powf(1.0 / q);
            prop_assert!(km.get() <= weak.get() * (1.0 + 1e-9) * c);
            prop_assert!(weak.get() <= km.get() * (1.0 + 1e-9) + 1e-300);
        }
    }

    #[test]
    fn kfun_feasible_monotone(f in nonneg_step(), w in weight(), p in prop_oneof![Just(0.5), Just(1.0), Just(2.0)], t in 0.05..10.0f64) {
        let mu = LineMeasure::lebesgue();
        let hs: Vec<f64> = (0..=32).map(|i| i as f64 * 5.0 / 32.0).collect();
        let e = k_explicit(&f, &mu, t, p, &w);
        let o = k_oracle(&f, &mu, t, p, &w, &hs);
        prop_assert!(e.value.get() >= o * (1.0 - 1e-12));
        prop_assert!(k_oracle(&f, &mu, 1.5 * t, p, &w, &hs) >= o * (1.0 - 1e-12));
        // (v - a) + a is exact up to rounding
        let sum = e.f0.add(&e.f1);
        for x in f.breaks().iter().chain(sum.breaks()) {
            assert_relative_eq!(sum.eval(*x), f.eval(*x), max_relative = 1e-15);
        }
    }

    #[test]
    fn maximal_dominates(f in step(), x in -5.0..12.0f64, s in 0.05..5.0f64) {
        let m = maximal_value(&f, x);
        prop_assert!(m >= f.eval(x) * (1.0 - 1e-12));
        // level sets agree with pointwise values
        let inside = maximal_level_set(&f, s).iter().any(|(a, b)| *a < x && x < *b);
        if (m - s).abs() > 1e-9 * s {
            prop_assert_eq!(inside, m > s);
        }
    }

    #[test]
    fn layer_cake_is_exact_for_linear_kernels(f in nonneg_step()) {
        let ys: Vec<f64> = (1..=12).map(|i| i as f64 * 0.75).collect();
        for op in [KernelOp::Hardy, KernelOp::Conjugate] {
            let (l, r) = layer_cake_bound(&op, &f, &ys);
            for (a, b) in l.iter().zip(&r) {
                assert_relative_eq!(a.get(), b.get(), max_relative = 1e-12, epsilon = 1e-14);
            }
        }
        let op = KernelOp::max(KernelOp::Hardy, KernelOp::Conjugate);
        let (l, r) = layer_cake_bound(&op, &f, &ys);
        for (a, b) in l.iter().zip(&r) {
            prop_assert!(b.get() >= a.get() * (1.0 - 1e-12));
        }
    }

    #[test]
    fn discrete_hardy_keeps_decreasing(mut xs in prop::collection::vec(0.0..5.0f64, 1..12)) {
        xs.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let h = discrete_hardy(&Seq::new(xs).unwrap(), 8);
        prop_assert!(h.terms().windows(2).all(|w| w[0] >= w[1] * (1.0 - 1e-15)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn bp_monotone_in_p(a in -0.9..2.5f64) {
        let w = Weight::power(a).unwrap();
        let grid = GridSpec::default();
        let quad = Quad::default();
        let mut seen = false;
        for p in [0.5, 1.0, 1.5, 2.0, 3.0, 4.0] {
            let h = check_bp(&w, p, BpMode::Iii, &grid, &quad).unwrap().holds;
            prop_assert!(!seen || h, "B_p lost at p = {} for alpha = {}", p, a);
            seen |= h;
        }
    }
}
