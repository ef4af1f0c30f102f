//! K-functional of the pair `(Λ^p(w), L^∞)`: the truncation decomposition at
//! height `(f*)_w^*(t^p)` and an exact minimiser over truncation heights.

use serde::Serialize;

use crate::error::Result;
use crate::ext::ExtReal;
use crate::maximal::maximal_rearranged_at;
use crate::piecewise::{distribution, rearrange, LineMeasure, Measure, StepFn, Weight};
use crate::quad::golden_min;
use crate::real::Real;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct KDecomposition<T> {
    /// Cut height `a`.
    pub a: T,
    #[serde(skip)]
    pub f0: StepFn<T>,
    #[serde(skip)]
    pub f1: StepFn<T>,
    /// `‖f0‖_{Λ^p(w)} + t ‖f1‖_∞`.
    pub value: ExtReal<T>,
}

/// Level profile of `f` seen through `w`: `(v_j, W(μ{f >= v_j}))` with `v_j` decreasing.
struct Profile<T> {
    levels: Vec<T>,
    wmass: Vec<ExtReal<T>>,
}

impl<T: Real> Profile<T> {
    fn new<M: Measure<T>>(f: &StepFn<T>, mu: &M, w: &Weight<T>) -> Self {
        let d = distribution(f, mu);
        let wmass = d
            .masses
            .iter()
            .map(|m| if m.is_infinite() { w.total() } else { ExtReal::new(w.primitive(m.get())) })
            .collect();
        Profile { levels: d.levels, wmass }
    }

    /// `(f*)_w^*(s)`: the smallest level whose `w`-mass is at most `s`.
    fn rearranged(&self, s: T) -> T {
        let s = ExtReal::new(s);
        for (j, m) in self.wmass.iter().enumerate() {
            if *m > s {
                return self.levels[j];
            }
        }
        T::zero()
    }

    /// `‖(f - h)^+‖_{Λ^p(w)} = (Σ_j (v_j - h)_+^p ΔW_j)^{1/p}`.
    fn excess_norm(&self, h: T, p: T) -> ExtReal<T> {
        let mut acc = ExtReal::zero();
        let mut prev = ExtReal::zero();
        for (v, m) in self.levels.iter().zip(&self.wmass) {
            if *v > h {
                let dw = if m.is_infinite() { ExtReal::infinity() } else { ExtReal::new(m.get() - prev.get()) };
                acc = acc + dw * (*v - h).powf(p);
            }
            prev = *m;
        }
        acc.powf(p.recip())
    }

    fn sup(&self) -> T {
        self.levels.first().copied().unwrap_or(T::zero())
    }
}

/// Decomposition `f0 = (f - a)^+`, `f1 = min(f, a)` with `a = (f*)_w^*(t^p)`.
pub fn k_explicit<T: Real>(f: &StepFn<T>, mu: &LineMeasure<T>, t: T, p: T, w: &Weight<T>) -> KDecomposition<T> {
    assert!(t > T::zero(), "t must be positive");
    let prof = Profile::new(f, mu, w);
    let a = prof.rearranged(t.powf(p));
    let value = prof.excess_norm(a, p) + ExtReal::new(t * a);
    KDecomposition { a, f0: f.excess(a), f1: f.truncate(a), value }
}

/// `min_h ‖(f - h)^+‖_{Λ^p(w)} + t h` over `heights`, all levels of `f` and 0.
///
/// On each band between consecutive levels the objective is convex in `h` for
/// `p >= 1` (refined by golden section) and concave for `p < 1` (minimum at a
/// level), so the result is the exact truncation minimum.
pub fn k_oracle<T: Real>(f: &StepFn<T>, mu: &LineMeasure<T>, t: T, p: T, w: &Weight<T>, heights: &[T]) -> T {
    let prof = Profile::new(f, mu, w);
    if prof.levels.is_empty() {
        return T::zero();
    }
    let obj = |h: T| (prof.excess_norm(h, p) + ExtReal::new(t * h)).get();
    let top = prof.sup();
    let mut hs: Vec<T> = heights.iter().copied().filter(|h| *h >= T::zero() && *h <= top).collect();
    hs.extend(prof.levels.iter().copied());
    hs.push(T::zero());
    hs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    hs.dedup();
    let mut best = hs.iter().map(|h| obj(*h)).fold(T::infinity(), T::min);
    if p >= T::one() {
        let mut bands: Vec<T> = prof.levels.clone();
        bands.push(T::zero());
        bands.sort_by(|a, b| a.partial_cmp(b).unwrap());
        bands.dedup();
        for b in bands.windows(2) {
            let (_, y) = golden_min(&obj, b[0], b[1], T::tol(1e-13) * top);
            best = best.min(y);
        }
    }
    best
}

/// `((Mf)_u^*(t), (W(t)^{-1} ∫_0^t (f_u^*)^p w)^{1/p})`.
pub fn check_mw_bound<T: Real>(f: &StepFn<T>, u: &LineMeasure<T>, t: T, p: T, w: &Weight<T>) -> Result<(ExtReal<T>, T)> {
    if f.is_zero() {
        return Ok((ExtReal::zero(), T::zero()));
    }
    let lhs = maximal_rearranged_at(f, u, t)?;
    let fs = rearrange(f, u)?;
    let mut acc = T::zero();
    for (a, b, v) in fs.pieces() {
        if a >= t {
            break;
        }
        acc = acc + w.mass(a, b.min(t)).get() * v.powf(p);
    }
    let wt = w.primitive(t);
    let rhs = if wt > T::zero() { (acc / wt).powf(p.recip()) } else { T::zero() };
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn leb() -> LineMeasure<f64> {
        LineMeasure::lebesgue()
    }

    #[test]
    fn explicit_examples() {
        let f = StepFn::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap();
        let k = k_explicit(&f, &leb(), 1.0, 1.0, &Weight::one());
        assert_eq!(k.a, 1.0);
        assert_eq!(k.f0, StepFn::indicator(0.0, 1.0, 1.0).unwrap());
        assert!((k.value.get() - 2.0).abs() < 1e-14);
        assert_eq!(k.f0.add(&k.f1), f);
        assert!(k.f1.sup() <= k.a);

        // χ_E, |E| = 3: value is min(W(3)^{1/p}, t)
        let chi = StepFn::indicator(0.0, 3.0, 1.0).unwrap();
        for &(t, want) in &[(0.5, 0.5), (2.0, 3f64.sqrt()), (10.0, 3f64.sqrt())] {
            let k = k_explicit(&chi, &leb(), t, 2.0, &Weight::one());
            assert!((k.value.get() - want).abs() < 1e-12, "t={t}");
        }
        let k = k_explicit(&f, &leb(), 1e-9, 1.0, &Weight::one());
        assert!(k.value.get() < 1e-8);
        assert_eq!(k.f0, f.excess(2.0));
    }

    #[test]
    fn oracle_examples() {
        let chi = StepFn::indicator(0.0, 3.0, 1.0).unwrap();
        let hs: Vec<f64> = (0..=16).map(|i| i as f64 / 16.0).collect();
        for &t in &[0.5, 1.0, 2.0, 5.0] {
            let k = k_oracle(&chi, &leb(), t, 2.0, &Weight::one(), &hs);
            assert!((k - t.min(3f64.sqrt())).abs() < 1e-12);
        }
        assert_eq!(k_oracle(&StepFn::zero(), &leb(), 1.0, 2.0, &Weight::one(), &hs), 0.0);
        let f = StepFn::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap();
        assert!(k_oracle(&f, &leb(), 1.0, 1.0, &Weight::one(), &hs) <= 2.0 + 1e-12);
    }

    #[test]
    fn oracle_is_exact_for_p1_lebesgue() {
        // K(f, t, L^1, L^∞) = ∫_0^t f*
        let f = StepFn::new(vec![0.0, 0.5, 2.0, 3.0], vec![1.0, 4.0, 2.0]).unwrap();
        let fs = rearrange(&f, &leb()).unwrap();
        for &t in &[0.25, 1.0, 1.7, 2.5, 4.0] {
            let k = k_oracle(&f, &leb(), t, 1.0, &Weight::one(), &[]);
            assert!((k - fs.primitive(t)).abs() < 1e-12, "t={t}");
        }
    }

    #[test]
    fn mw_pair_for_indicator() {
        let chi = StepFn::indicator(0.0, 1.0, 1.0).unwrap();
        let (l, r) = check_mw_bound(&chi, &leb(), 2.0, 1.0, &Weight::one()).unwrap();
        assert!((l.get() - 2.0 / 3.0).abs() < 1e-9);
        assert!((r - 0.5).abs() < 1e-14);
        let (l, r) = check_mw_bound(&StepFn::zero(), &leb(), 2.0, 1.0, &Weight::one()).unwrap();
        assert!(l.is_zero() && r == 0.0);
    }
}
