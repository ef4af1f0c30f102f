//! Supremum of `∫ f v / ‖f‖_{L^p(w)}` over nonincreasing `f`.

use crate::error::Result;
use crate::ext::ExtReal;
use crate::piecewise::{Asym, Weight};
use crate::quad::Quad;
use crate::real::{conjugate, Real};
use crate::seq::{DiscreteWeight, Seq};

use super::oracle::{cone_sup, piece_mids, OracleConfig, OracleResult, PowerRatio, PowerSum};
use super::{half_line, Equivalent};

/// Profile of `W1/W0` at 0; `Err(())` when `W0` vanishes near 0 but `W1` does not.
fn ratio_prof0<T: Real>(w0: &Weight<T>, w1: &Weight<T>) -> std::result::Result<Option<Asym<T>>, ()> {
    match (w1.prim_exp0(), w0.prim_exp0()) {
        (None, _) => Ok(None),
        (Some(_), None) => Err(()),
        (Some(a), Some(b)) => Ok(Some(a.mul(b.pow(-T::one())))),
    }
}

fn ratio_prof_inf<T: Real>(w0: &Weight<T>, w1: &Weight<T>) -> Asym<T> {
    w1.prim_exp_inf().mul(w0.prim_exp_inf().pow(-T::one()))
}

fn ratio<T: Real>(w0: &Weight<T>, w1: &Weight<T>, t: T) -> T {
    let a = w1.primitive(t);
    if a == T::zero() {
        return T::zero();
    }
    a / w0.primitive(t)
}

/// Both closed expressions for `p > 1`:
/// `(∫(W1/W0)^{p'-1} w1)^{1/p'}` and `(∫(W1/W0)^{p'} w0)^{1/p'} + W1(∞)/W0(∞)^{1/p}`.
pub fn sawyer_sup_closed<T: Real>(w0: &Weight<T>, w1: &Weight<T>, p: T, quad: &Quad) -> Result<Equivalent<T>> {
    assert!(p > T::one(), "closed form needs p > 1");
    if w1.total().is_zero() {
        return Ok(Equivalent::pair(ExtReal::zero(), ExtReal::zero()));
    }
    let pp = conjugate(p);
    let mut cuts = w0.breakpoints();
    cuts.extend(w1.breakpoints());
    let Ok(r0) = ratio_prof0(w0, w1) else {
        return Ok(Equivalent::pair(ExtReal::infinity(), ExtReal::infinity()));
    };
    let rinf = ratio_prof_inf(w0, w1);

    let e = pp - T::one();
    let first = half_line(
        |t| {
            let d = w1.density(t);
            if d == T::zero() {
                T::zero()
            } else {
                ratio(w0, w1, t).powf(e) * d
            }
        },
        &cuts,
        r0.and_then(|r| w1.exp0().map(|a| a.mul(r.pow(e)))),
        w1.exp_inf().map(|a| a.mul(rinf.pow(e))),
        quad,
    )?
    .powf(pp.recip());

    let second_int = half_line(
        |t| {
            let d = w0.density(t);
            if d == T::zero() {
                T::zero()
            } else {
                ratio(w0, w1, t).powf(pp) * d
            }
        },
        &cuts,
        r0.and_then(|r| w0.exp0().map(|a| a.mul(r.pow(pp)))),
        w0.exp_inf().map(|a| a.mul(rinf.pow(pp))),
        quad,
    )?
    .powf(pp.recip());
    let end = w1.total() / w0.total().powf(p.recip());
    Ok(Equivalent::pair(first, second_int + end))
}

/// Discrete version: `p <= 1` gives `sup_n V(n)/W(n)^{1/p}` over `n < horizon`;
/// `p > 1` applies [`sawyer_sup_closed`] to the step extensions of `v` and of
/// the first `horizon` terms of `w` (the last term extended when `W(∞) = ∞`).
pub fn sawyer_sup_discrete<T: Real>(
    v: &Seq<T>,
    w: &DiscreteWeight<T>,
    p: T,
    horizon: usize,
    quad: &Quad,
) -> Result<Equivalent<T>> {
    let h = horizon.max(v.terms().len()).max(1);
    if p <= T::one() {
        let ws = w.partials(h);
        let mut acc = T::zero();
        let mut best = ExtReal::zero();
        for (n, wn) in ws.iter().enumerate() {
            acc = acc + v.get(n);
            best = best.max(ExtReal::new(acc) / ExtReal::new(wn.powf(p.recip())));
        }
        return Ok(Equivalent::single(best));
    }
    let breaks: Vec<T> = (0..=h).map(T::of_usize).collect();
    let mut dv: Vec<T> = (0..h).map(|n| v.get(n)).collect();
    dv.push(T::zero());
    let mut dw: Vec<T> = (0..h).map(|n| w.term(n)).collect();
    dw.push(if w.total().is_infinite() { w.term(h - 1) } else { T::zero() });
    let sv = Weight::step(breaks.clone(), dv)?;
    let sw = Weight::step(breaks, dw)?;
    sawyer_sup_closed(&sw, &sv, p, quad)
}

/// Oracle for `sup ∫ f v / (∫ f^p w)^{1/p}` over nonincreasing steps with the
/// given right endpoints `x_1 < … < x_N` (`x_0 = 0`).
pub fn cone_sup_oracle<T: Real>(v: &Weight<T>, w: &Weight<T>, p: T, nodes: &[T], cfg: &OracleConfig) -> OracleResult<T> {
    let mut prev = T::zero();
    let mut a = Vec::with_capacity(nodes.len());
    let mut b = Vec::with_capacity(nodes.len());
    for &x in nodes {
        a.push(v.mass(prev, x).get());
        b.push(w.mass(prev, x).get());
        prev = x;
    }
    let obj = PowerRatio { num: PowerSum::new(a, T::one()), den: PowerSum::new(b, p) };
    cone_sup(&obj, Some(&piece_mids(nodes)), cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::duality::oracle::geometric_nodes;

    #[test]
    fn closed_examples() {
        let q = Quad::default();
        let chi = Weight::<f64>::chi(1.0).unwrap();
        let e = sawyer_sup_closed(&chi, &chi, 2.0, &q).unwrap();
        assert!((e.value.get() - 1.0).abs() < 1e-10);
        let e = sawyer_sup_closed(&Weight::one(), &chi, 2.0, &q).unwrap();
        assert!((e.value.get() - 1.0).abs() < 1e-10);
        // ∫_0^1 1 + ∫_1^∞ t^{-2} = 2
        assert!((e.alt.unwrap().get() - 2f64.sqrt()).abs() < 1e-10);
        let zero = Weight::<f64>::constant(0.0).unwrap();
        assert!(sawyer_sup_closed(&Weight::one(), &zero, 2.0, &q).unwrap().value.is_zero());
    }

    #[test]
    fn discrete_examples() {
        let q = Quad::default();
        let ones = DiscreteWeight::<f64>::ones();
        let v = Seq::new(vec![1.0; 32]).unwrap();
        assert!((sawyer_sup_discrete(&v, &ones, 1.0, 32, &q).unwrap().value.get() - 1.0).abs() < 1e-12);
        let v = Seq::new(vec![2.0]).unwrap();
        assert_eq!(sawyer_sup_discrete(&v, &ones, 0.5, 16, &q).unwrap().value.get(), 2.0);
        let om = DiscreteWeight::Terms { head: vec![3.0, 1.0, 2.0], tail: 1.0 };
        let v = Seq::new((0..20).map(|n| om.term(n)).collect()).unwrap();
        let r = sawyer_sup_discrete(&v, &om, 0.5, 20, &q).unwrap().value.get();
        assert!((r - 3f64.powf(-1.0)).abs() < 1e-12);
    }

    #[test]
    fn oracle_matches_closed_form_for_chi() {
        let chi = Weight::<f64>::chi(1.0).unwrap();
        let nodes = geometric_nodes(1.0 / 64.0, 4.0, 17);
        let r = cone_sup_oracle(&chi, &chi, 2.0, &nodes, &OracleConfig::default());
        assert!((r.value - 1.0).abs() < 1e-6);
        let r = cone_sup_oracle(&chi, &chi, 1.0, &nodes, &OracleConfig::default());
        assert!((r.value - 1.0).abs() < 1e-12);
    }
}
