//! The generic core in f32, checked against the f64 results through the aliases.

use lorentz_lab::lorentz::lambda_norm;
use lorentz_lab::maximal::maximal_value;
use lorentz_lab::piecewise::{rearrange, Lebesgue};
use lorentz_lab::{Measure1D, Measure1DF32, StepFunction, StepFunctionF32, WeightFn, WeightFnF32};

#[test]
fn f32_tracks_f64() {
    let f = StepFunction::new(vec![-1.0, 0.5, 2.0, 3.0], vec![1.0, 4.0, 2.0]).unwrap();
    let g = StepFunctionF32::new(vec![-1.0, 0.5, 2.0, 3.0], vec![1.0, 4.0, 2.0]).unwrap();
    let (u, v) = (Measure1D::exp_abs(), Measure1DF32::exp_abs());
    let (w, w32) = (WeightFn::power(0.5).unwrap(), WeightFnF32::power(0.5).unwrap());
    for (p, q) in [(1.0, 1.0), (2.0, 0.5), (0.5, f64::INFINITY)] {
        let a = lambda_norm(&f, &u, p, q, &w).get();
        let b = lambda_norm(&g, &v, p as f32, q as f32, &w32).get();
        assert!(((b as f64) - a).abs() <= 1e-5 * a, "p={p} q={q}: {a} vs {b}");
    }
    let fs = rearrange(&g, &Lebesgue).unwrap();
    assert_eq!(fs.values(), &[4.0f32, 2.0, 1.0]);
    assert!((maximal_value(&g, 0.0) as f64 - maximal_value(&f, 0.0)).abs() < 1e-5);
}
