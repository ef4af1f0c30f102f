//! Is the Lorentz functional a norm, and is the space normable?

use serde::Serialize;

use crate::error::Result;
use crate::ext::ExtReal;
use crate::piecewise::Weight;
use crate::quad::Quad;
use crate::real::Real;
use crate::seq::DiscreteWeight;
use crate::weights::{check_bp, check_bp_weak, check_delta2, check_discrete_bp, seq_verdict, BpMode, GridSpec, Verdict};

#[derive(Clone, Debug)]
pub enum Space<T> {
    /// `Λ^p(w)`
    Lambda { w: Weight<T>, p: T },
    /// `Λ^{p,∞}(w)`
    WeakLambda { w: Weight<T>, p: T },
    /// `d(Ω, p)`
    D { omega: DiscreteWeight<T>, p: T },
    /// `d^∞(Ω, p)`
    DWeak { omega: DiscreteWeight<T>, p: T },
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct NormVerdict<T> {
    pub is_norm: bool,
    pub is_normable: bool,
    pub reason: String,
    /// Which criterion decided normability.
    pub branch: String,
    pub test: Option<Verdict<T>>,
}

fn verdict<T>(is_norm: bool, is_normable: bool, reason: String, branch: &str, test: Option<Verdict<T>>) -> NormVerdict<T> {
    NormVerdict { is_norm, is_normable, reason, branch: branch.to_string(), test }
}

pub fn normability<T: Real>(space: &Space<T>, grid: &GridSpec, horizon: usize, quad: &Quad) -> Result<NormVerdict<T>> {
    match space {
        Space::Lambda { w, p } => {
            let p = *p;
            let d2 = check_delta2(w, grid)?;
            if !d2.holds {
                return Ok(verdict(false, false, "W fails Δ₂: the functional is not a quasi-norm".into(), "delta2", Some(d2)));
            }
            let norm = p >= T::one() && w.is_nonincreasing();
            if norm {
                return Ok(verdict(true, true, "p >= 1 and w nonincreasing".into(), "norm", None));
            }
            if p < T::one() {
                return Ok(verdict(false, false, "p < 1".into(), "p<1", None));
            }
            let t = check_bp_weak(w, w, p, p, grid, quad)?;
            let ok = t.holds;
            let reason = if ok { "w ∈ B_{p,∞}" } else { "w ∉ B_{p,∞}" };
            Ok(verdict(false, ok, format!("w not nonincreasing; {reason}"), "bp-infinity", Some(t)))
        }
        Space::WeakLambda { w, p } => {
            let trivial = w.total().is_zero();
            let t = check_bp(w, *p, BpMode::Ii, grid, quad)?;
            let ok = trivial || t.holds;
            let reason = if ok { "w ∈ B_p" } else { "w ∉ B_p" };
            Ok(verdict(trivial, ok, format!("weak functional is not a norm; {reason}"), "bp", Some(t)))
        }
        Space::D { omega, p } => {
            let p = *p;
            if p < T::one() {
                let norm = omega.is_single_atom(horizon);
                let ok = omega.total().is_finite();
                let reason = if ok { "Ω ∈ ℓ¹, the space is ℓ^∞" } else { "Ω ∉ ℓ¹" };
                return Ok(verdict(norm, ok, reason.into(), "l1", None));
            }
            let norm = omega.is_nonincreasing(horizon);
            if p == T::one() {
                let w = omega.partials(horizon);
                let mut low = T::infinity();
                let vals: Vec<ExtReal<T>> = w
                    .iter()
                    .enumerate()
                    .map(|(n, wn)| {
                        let r = *wn / T::of_usize(n + 1);
                        low = low.min(r);
                        ExtReal::new(r) / ExtReal::new(low)
                    })
                    .collect();
                let t = seq_verdict("quasi-concave", &vals);
                let ok = norm || t.holds;
                let reason = if ok { "W_n/(n+1) quasi-decreasing" } else { "W_n/(n+1) not quasi-decreasing" };
                return Ok(verdict(norm, ok, reason.into(), "quasi-concave", Some(t)));
            }
            let t = check_discrete_bp(omega, p, horizon);
            let ok = norm || t.holds;
            let reason = if ok { "discrete B_p holds" } else { "discrete B_p fails" };
            Ok(verdict(norm, ok, reason.into(), "discrete-bp", Some(t)))
        }
        Space::DWeak { omega, p } => {
            let norm = omega.is_single_atom(horizon);
            let t = check_discrete_bp(omega, *p, horizon);
            let ok = norm || t.holds;
            let reason = if ok { "discrete B_p holds" } else { "discrete B_p fails" };
            Ok(verdict(norm, ok, reason.into(), "discrete-bp", Some(t)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let g = GridSpec::default();
        let q = Quad::default();
        let v = normability(&Space::Lambda { w: Weight::<f64>::one(), p: 2.0 }, &g, 256, &q).unwrap();
        assert!(v.is_norm && v.is_normable);
        let v = normability(&Space::D { omega: DiscreteWeight::<f64>::ones(), p: 1.0 }, &g, 256, &q).unwrap();
        assert!(v.is_normable);
        assert!((v.test.unwrap().constant.get() - 1.0).abs() < 1e-12);
        let om = DiscreteWeight::Geometric { c0: 1.0, r: 2.0 };
        let v = normability(&Space::D { omega: om, p: 1.0 }, &g, 256, &q).unwrap();
        assert!(!v.is_normable && !v.is_norm);
    }

    #[test]
    fn weighted_cases() {
        let g = GridSpec::default();
        let q = Quad::default();
        // t^{-1/2}: decreasing, so a norm for p >= 1; quasi-norm only for p < 1
        let w = Weight::<f64>::power(-0.5).unwrap();
        let v = normability(&Space::Lambda { w: w.clone(), p: 0.5 }, &g, 256, &q).unwrap();
        assert!(!v.is_norm && !v.is_normable);
        // t: not decreasing; B_{2,∞} fails since W ~ t^2
        let w = Weight::<f64>::power(1.0).unwrap();
        let v = normability(&Space::Lambda { w: w.clone(), p: 2.0 }, &g, 256, &q).unwrap();
        assert!(!v.is_norm && !v.is_normable);
        // ... but holds for p = 3
        let v = normability(&Space::Lambda { w, p: 3.0 }, &g, 256, &q).unwrap();
        assert!(!v.is_norm && v.is_normable, "{v:?}");
        let v = normability(&Space::WeakLambda { w: Weight::<f64>::one(), p: 2.0 }, &g, 256, &q).unwrap();
        assert!(!v.is_norm && v.is_normable);
        let v = normability(&Space::WeakLambda { w: Weight::<f64>::one(), p: 1.0 }, &g, 256, &q).unwrap();
        assert!(!v.is_normable);
    }
}
