//! Exact engine for step functions, weights and their primitives.

pub mod curve;
pub mod measure;
pub mod parse;
pub mod step;
pub mod weight;

pub use curve::{Monotone, PiecewiseCurve, Segment};
pub use measure::{Lebesgue, LineMeasure, Measure, MeasureFamily, Radial};
pub use step::{distribution, double_star, double_star_curve, rearrange, Distribution, StepFn};
pub use weight::{Asym, Weight, WeightFamily};

use crate::error::Result;
use crate::ext::ExtReal;
use crate::quad::Quad;
use crate::real::Real;

/// `W(t)`.
pub fn primitive<T: Real>(w: &Weight<T>, t: T) -> T {
    w.primitive(t)
}

/// `∫_a^b g w` for `0 <= a <= b <= inf`.
///
/// Constant segments are exact; `a + b/t` segments use the closed-form
/// `∫ w/t` tail when the weight has one; everything else goes to quadrature.
/// An unbounded tail against a weight that is not integrable returns `+inf`.
pub fn integrate<T: Real>(g: &PiecewiseCurve<T>, w: &Weight<T>, a: T, b: T, quad: &Quad) -> Result<ExtReal<T>> {
    let mut acc = ExtReal::zero();
    for (lo, hi, seg) in g.pieces() {
        let lo = lo.max(a);
        let hi = hi.min(b);
        if !(hi > lo) {
            continue;
        }
        acc = acc + integrate_segment(&seg, w, lo, hi, quad)?;
        if acc.is_infinite() {
            return Ok(acc);
        }
    }
    // below the curve's first node the curve is taken as its first segment
    let start = g.domain_start();
    if a < start {
        let seg = g.segments()[0];
        acc = acc + integrate_segment(&seg, w, a, start.min(b), quad)?;
    }
    Ok(acc)
}

fn integrate_segment<T: Real>(seg: &Segment<T>, w: &Weight<T>, lo: T, hi: T, quad: &Quad) -> Result<ExtReal<T>> {
    let (c0, c1, recip) = match *seg {
        Segment::Affine { a, b } => (a, b, false),
        Segment::Recip { a, b } => (a, b, true),
    };
    let mut acc = ExtReal::zero();
    if c0 != T::zero() {
        acc = acc + w.mass(lo, hi) * c0.abs();
        if c0 < T::zero() {
            // signed parts only arise from interpolation round-off; fall back to quadrature
            return integrate_numeric(seg, w, lo, hi, quad);
        }
    }
    if c1 == T::zero() {
        return Ok(acc);
    }
    if c1 < T::zero() {
        return integrate_numeric(seg, w, lo, hi, quad);
    }
    if recip {
        // c1 ∫ w/t
        if lo == T::zero() {
            let prof = w.exp0();
            if prof.map_or(false, |a| !a.shift(-T::one()).integrable_at_zero()) {
                return Ok(ExtReal::infinity());
            }
        }
        if lo > T::zero() {
            if let (Some(x), Some(y)) = (w.moment_tail_closed(T::one(), lo), w.moment_tail_closed(T::one(), hi.min(T::max_value()))) {
                if x.is_finite() {
                    let hi_tail = if hi.is_infinite() { T::zero() } else { y.get() };
                    return Ok(acc + ExtReal::clamp(x.get() - hi_tail) * c1);
                }
                if hi.is_infinite() {
                    return Ok(ExtReal::infinity());
                }
            }
        }
        let part = weighted(|t: T| T::one() / t, w, lo, hi, quad, T::one())?;
        Ok(acc + part * c1)
    } else {
        if hi.is_infinite() {
            return Ok(if w.exp_inf().is_none() { acc + weighted(|t| t, w, lo, hi, quad, -T::one())? * c1 } else { ExtReal::infinity() });
        }
        let part = weighted(|t| t, w, lo, hi, quad, -T::one())?;
        Ok(acc + part * c1)
    }
}

/// `∫_lo^hi h(t) w(t) dt` where `h(t) ~ t^-k` at both ends (used for divergence checks).
fn weighted<T: Real>(h: impl Fn(T) -> T, w: &Weight<T>, lo: T, hi: T, quad: &Quad, k: T) -> Result<ExtReal<T>> {
    let f = |t: T| h(t) * w.density(t);
    let mut cuts = w.breakpoints();
    cuts.retain(|c| *c > lo && *c < hi);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    if hi.is_infinite() {
        match w.exp_inf() {
            None => {
                let end = cuts.last().copied().unwrap_or(lo);
                return Ok(ExtReal::clamp(quad.split(f, lo, end, &cuts)?));
            }
            Some(a) => {
                if !a.shift(-k).integrable_at_infinity() {
                    return Ok(ExtReal::infinity());
                }
                let end = cuts.last().copied().unwrap_or(lo).max(lo);
                let head = quad.split(&f, lo, end, &cuts)?;
                let tail = quad.semi_infinite(&f, end)?;
                return Ok(ExtReal::clamp(head + tail));
            }
        }
    }
    Ok(ExtReal::clamp(quad.split(f, lo, hi, &cuts)?))
}

fn integrate_numeric<T: Real>(seg: &Segment<T>, w: &Weight<T>, lo: T, hi: T, quad: &Quad) -> Result<ExtReal<T>> {
    let s = *seg;
    weighted(move |t| s.eval(t).max(T::zero()), w, lo, hi, quad, T::zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integrate_examples() {
        let q = Quad::default();
        let one = PiecewiseCurve::step(vec![0.0], vec![1.0], None);
        let v = integrate(&one, &Weight::one(), 0.0, 3.0, &q).unwrap();
        assert_eq!(v.get(), 3.0);
        let chi = PiecewiseCurve::step(vec![0.0, 2.0], vec![1.0, 0.0], None);
        let v = integrate(&chi, &Weight::power(1.0).unwrap(), 0.0, 3.0, &q).unwrap();
        assert_eq!(v.get(), 2.0);
        let v = integrate(&one, &Weight::<f64>::power(-0.5).unwrap(), 0.0, 1.0, &q).unwrap();
        assert!((v.get() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn divergent_tails_are_infinite() {
        let q = Quad::default();
        let one = PiecewiseCurve::step(vec![0.0], vec![1.0], None);
        assert!(integrate(&one, &Weight::one(), 0.0, f64::INFINITY, &q).unwrap().is_infinite());
        let recip = PiecewiseCurve::new(vec![1.0], vec![Segment::Recip { a: 0.0, b: 1.0 }], None);
        assert!(integrate(&recip, &Weight::one(), 1.0, f64::INFINITY, &q).unwrap().is_infinite());
        let v = integrate(&recip, &Weight::inv_shift(), 1.0, f64::INFINITY, &q).unwrap();
        assert!((v.get() - 2f64.ln()).abs() < 1e-10);
    }

    #[test]
    fn step_primitive_agrees_with_integrate() {
        let q = Quad::default();
        let w = Weight::<f64>::step(vec![0.0, 0.7, 1.9, 3.0], vec![1.5, 0.25, 4.0, 0.0]).unwrap();
        let one = PiecewiseCurve::step(vec![0.0], vec![1.0], None);
        for &t in &[0.3, 1.0, 2.5, 7.0] {
            let v = integrate(&one, &w, 0.0, t, &q).unwrap().get();
            assert!((v - w.primitive(t)).abs() <= 1e-12 * w.primitive(t));
        }
    }
}
