//! Hardy operator, its conjugate, and the discrete Hardy operator.

use crate::ext::ExtReal;
use crate::piecewise::StepFn;
use crate::real::Real;
use crate::seq::Seq;

pub const DEFAULT_HORIZON: usize = 256;

/// `Af(t) = t^{-1} ∫_0^t f`.
pub fn hardy<T: Real>(f: &StepFn<T>, t: T) -> T {
    assert!(t > T::zero(), "hardy needs t > 0");
    (f.primitive(t) - f.primitive(T::zero())) / t
}

/// `Qf(r) = ∫_r^∞ f(t) dt / t`, exact via `log(b/a)` on each piece.
pub fn conjugate_hardy<T: Real>(f: &StepFn<T>, r: T) -> ExtReal<T> {
    assert!(r > T::zero(), "conjugate_hardy needs r > 0");
    let mut acc = T::zero();
    for (a, b, v) in f.pieces() {
        let lo = a.max(r);
        if b > lo && v > T::zero() {
            acc = acc + v * (b / lo).ln();
        }
    }
    ExtReal::clamp(acc)
}

/// `A_d f(n) = (n+1)^{-1} Σ_{k<=n} f(k)` up to the last nonzero term plus `horizon`.
pub fn discrete_hardy<T: Real>(f: &Seq<T>, horizon: usize) -> Seq<T> {
    let n = f.support_len() + horizon;
    let mut acc = T::zero();
    let out = (0..n)
        .map(|k| {
            acc = acc + f.get(k);
            acc / T::of_usize(k + 1)
        })
        .collect();
    Seq::new(out).expect("averages of nonnegative terms")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hardy_examples() {
        let chi = StepFn::indicator(0.0, 1.0, 1.0).unwrap();
        assert_eq!(hardy(&chi, 0.5), 1.0);
        assert_eq!(hardy(&chi, 4.0), 0.25);
        assert_eq!(hardy(&StepFn::zero(), 2.0), 0.0);
    }

    #[test]
    fn conjugate_examples() {
        let e = std::f64::consts::E;
        let f = StepFn::indicator(1.0, e, 1.0).unwrap();
        assert!((conjugate_hardy(&f, 1.0).get() - 1.0).abs() < 1e-15);
        assert_eq!(conjugate_hardy(&f, e).get(), 0.0);
        let g = StepFn::indicator(2.0, 5.0, 3.0).unwrap();
        assert!((conjugate_hardy(&g, 0.5).get() - 3.0 * 2.5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn discrete_examples() {
        let s = discrete_hardy(&Seq::new(vec![1.0, 1.0, 1.0]).unwrap(), 2);
        assert_eq!(s.terms(), &[1.0, 1.0, 1.0, 0.75, 0.6]);
        let s = discrete_hardy(&Seq::new(vec![4.0, 2.0]).unwrap(), 2);
        assert_eq!(s.terms(), &[4.0, 3.0, 2.0, 1.5]);
    }
}
