//! Associate norms of `Λ^p(w)`, `Λ^{p,∞}(w)`, `d(Ω,p)`, `d^∞(Ω,p)` and the
//! concave minorant / majorant constructions behind them.

use serde::Serialize;

use crate::error::Result;
use crate::ext::ExtReal;
use crate::piecewise::{rearrange, Asym, Lebesgue, Monotone, PiecewiseCurve, StepFn, Weight};
use crate::quad::{golden_max, golden_min, Quad};
use crate::real::{conjugate, Real};
use crate::seq::{DiscreteWeight, Seq};
use crate::weights::{seq_verdict, Verdict};

use super::Equivalent;

/// `W_p(t) = inf_{s>0} max(1, t/s) W^{1/p}(s)`, the greatest concave (in the
/// quasi-concave sense) minorant of `W^{1/p}`, evaluated through a finite
/// table of candidate `s`.
///
/// On table points the result is exactly an infimum of nondecreasing
/// functions with nonincreasing quotient by `t`, so both monotonicity
/// properties hold without round-off.
#[derive(Clone, Debug)]
pub struct Minorant<T> {
    w: Weight<T>,
    p: T,
    zero: bool,
    ss: Vec<T>,
    run_min: Vec<T>,
}

impl<T: Real> Minorant<T> {
    pub fn new(w: &Weight<T>, p: T) -> Self {
        Self::with_points(w, p, &[])
    }

    /// Also puts `extra` into the candidate table.
    pub fn with_points(w: &Weight<T>, p: T, extra: &[T]) -> Self {
        let zero = match w.prim_exp0() {
            None => true,
            Some(a) => {
                let e = a.power / p;
                e > T::one() || (e == T::one() && a.log < T::zero())
            }
        };
        let mut m = Minorant { w: w.clone(), p, zero, ss: Vec::new(), run_min: Vec::new() };
        if zero {
            return m;
        }
        let mut ss: Vec<T> = (-480..=480).map(|k| T::lit(2f64.powf(k as f64 / 8.0))).collect();
        ss.extend(w.breakpoints());
        ss.extend(extra.iter().copied().filter(|t| *t > T::zero() && t.is_finite()));
        ss.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ss.dedup();
        let hs: Vec<T> = ss.iter().map(|s| m.h(*s)).collect();
        let mut refined = Vec::new();
        for j in 1..ss.len().saturating_sub(1) {
            if hs[j] <= hs[j - 1] && hs[j] <= hs[j + 1] && (hs[j] < hs[j - 1] || hs[j] < hs[j + 1]) {
                for (a, b) in [(ss[j - 1], ss[j]), (ss[j], ss[j + 1])] {
                    let (x, _) = golden_min(|u: T| m.h(u.exp()), a.ln(), b.ln(), T::tol(1e-12));
                    refined.push(x.exp());
                }
            }
        }
        ss.extend(refined);
        ss.sort_by(|a, b| a.partial_cmp(b).unwrap());
        ss.dedup();
        let mut cur = T::infinity();
        m.run_min = ss
            .iter()
            .map(|s| {
                cur = cur.min(m.h(*s));
                cur
            })
            .collect();
        m.ss = ss;
        m
    }

    fn h(&self, s: T) -> T {
        self.w.primitive(s).powf(self.p.recip()) / s
    }

    /// True when `W_p ≡ 0` (`W^{1/p}(s)/s → 0` as `s → 0`).
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    pub fn eval(&self, t: T) -> T {
        if self.zero || t <= T::zero() {
            return T::zero();
        }
        let k = self.ss.partition_point(|s| *s <= t);
        let mut m = self.h(t);
        if k > 0 {
            m = m.min(self.run_min[k - 1]);
        }
        (t * m).min(self.w.primitive(t).powf(self.p.recip()))
    }

    /// Candidate table (useful as a grid).
    pub fn table(&self) -> &[T] {
        &self.ss
    }
}

/// `W_p` sampled on `ts` and joined linearly.
pub fn greatest_concave_minorant<T: Real>(w: &Weight<T>, p: T, ts: &[T]) -> PiecewiseCurve<T> {
    assert!(p > T::zero() && p <= T::one(), "minorant needs 0 < p <= 1");
    let m = Minorant::with_points(w, p, ts);
    let mut xs = vec![T::zero()];
    xs.extend(ts.iter().copied().filter(|t| *t > T::zero()));
    xs.dedup();
    let ys = xs.iter().map(|t| m.eval(*t)).collect();
    PiecewiseCurve::linear(xs, ys, Some(Monotone::Nondecreasing))
}

/// Associate norm of `f` in the dual of `Λ^p(w)` (`weak = false`) or of
/// `Λ^{p,∞}(w)` (`weak = true`).
///
/// `p <= 1`: `sup_t ∫_0^t f^* / W^{1/p}(t)` (equal to the `W_p` form).
/// `p > 1`: both expressions
/// `(∫ (F/W)^{p'} w)^{1/p'} + F(∞)/W^{1/p}(∞)` and `(∫ (F/W)^{p'-1} f^*)^{1/p'}`, `F = ∫_0^t f^*`.
/// weak: `∫ f^* W^{-1/p}`.
pub fn associate_norm<T: Real>(f: &StepFn<T>, p: T, w: &Weight<T>, weak: bool, quad: &Quad) -> Result<Equivalent<T>> {
    let fs = rearrange(f, &Lebesgue)?;
    if fs.is_zero() {
        return Ok(if weak || p <= T::one() {
            Equivalent::single(ExtReal::zero())
        } else {
            Equivalent::pair(ExtReal::zero(), ExtReal::zero())
        });
    }
    let inf = ExtReal::infinity();
    let cuts = w.breakpoints();
    let Some(wp0) = w.prim_exp0() else {
        return Ok(if weak || p <= T::one() { Equivalent::single(inf) } else { Equivalent::pair(inf, inf) });
    };
    if weak {
        if !wp0.pow(-p.recip()).integrable_at_zero() {
            return Ok(Equivalent::single(inf));
        }
        let mut acc = T::zero();
        for (a, b, v) in fs.pieces() {
            acc = acc + v * quad.split(|t: T| w.primitive(t).powf(-p.recip()), a, b, &cuts)?;
        }
        return Ok(Equivalent::single(ExtReal::clamp(acc)));
    }
    if p <= T::one() {
        let e = wp0.power / p;
        if e > T::one() || (e == T::one() && wp0.log < T::zero()) {
            return Ok(Equivalent::single(inf));
        }
        let ratio = |t: T| {
            let wt = w.primitive(t).powf(p.recip());
            let ft = fs.primitive(t);
            if ft == T::zero() {
                T::zero()
            } else {
                ft / wt
            }
        };
        let mut best = T::zero();
        for (a, b, _) in fs.pieces() {
            let mut pts = vec![if a == T::zero() { b * T::lit(2f64.powi(-40)) } else { a }];
            pts.extend(cuts.iter().copied().filter(|c| *c > a && *c < b));
            pts.push(b);
            for s in pts.windows(2) {
                let (_, y) = golden_max(|u: T| ratio(u.exp()), s[0].ln(), s[1].ln(), T::tol(1e-12));
                best = best.max(y);
            }
        }
        return Ok(Equivalent::single(ExtReal::clamp(best)));
    }
    let pp = conjugate(p);
    let q0 = Asym::new(T::one(), T::zero()).mul(wp0.pow(-T::one()));
    let e1_dead = w.exp0().map_or(false, |a| !a.mul(q0.pow(pp)).integrable_at_zero());
    let e2_dead = !q0.pow(pp - T::one()).integrable_at_zero();
    let fw = |t: T| {
        let ft = fs.primitive(t);
        if ft == T::zero() {
            T::zero()
        } else {
            ft / w.primitive(t)
        }
    };
    let total_f = fs.integral();
    let sm = *fs.breaks().last().unwrap();
    let e1 = if e1_dead {
        inf
    } else {
        let mut acc = ExtReal::zero();
        for (a, b, _) in fs.pieces() {
            let v = quad.split(
                |t: T| {
                    let d = w.density(t);
                    if d == T::zero() {
                        T::zero()
                    } else {
                        fw(t).powf(pp) * d
                    }
                },
                a,
                b,
                &cuts,
            )?;
            acc = acc + ExtReal::clamp(v);
        }
        let wsm = w.primitive(sm);
        let winf_term = w.total().powf(T::one() - pp);
        let tail = if wsm == T::zero() {
            inf
        } else {
            ExtReal::clamp(total_f.powf(pp) * (wsm.powf(T::one() - pp) - winf_term.get()) / (pp - T::one()))
        };
        (acc + tail).powf(pp.recip()) + ExtReal::new(total_f) / w.total().powf(p.recip())
    };
    let e2 = if e2_dead {
        inf
    } else {
        let mut acc = T::zero();
        for (a, b, v) in fs.pieces() {
            acc = acc + v * quad.split(|t: T| fw(t).powf(pp - T::one()), a, b, &cuts)?;
        }
        ExtReal::clamp(acc).powf(pp.recip())
    };
    Ok(Equivalent::pair(e1, e2))
}

/// `sup_t ∫_0^t f^* / W_p(t)` sampled on the minorant's table; a lower bound
/// for the `p <= 1` associate norm, used to cross-check the `W^{1/p}` form.
pub fn associate_norm_minorant<T: Real>(f: &StepFn<T>, p: T, w: &Weight<T>) -> Result<ExtReal<T>> {
    let fs = rearrange(f, &Lebesgue)?;
    if fs.is_zero() {
        return Ok(ExtReal::zero());
    }
    let m = Minorant::with_points(w, p, fs.breaks());
    if m.is_zero() {
        return Ok(ExtReal::infinity());
    }
    let mut best = ExtReal::zero();
    for &t in m.table() {
        best = best.max(ExtReal::new(fs.primitive(t)) / ExtReal::new(m.eval(t)));
    }
    Ok(best)
}

/// Associate norm in the dual of `d(Ω,p)` (`weak = false`) or `d^∞(Ω,p)`.
pub fn d_associate_norm<T: Real>(f: &Seq<T>, omega: &DiscreteWeight<T>, p: T, weak: bool) -> ExtReal<T> {
    let fs = f.rearranged();
    let m = fs.len();
    if m == 0 {
        return ExtReal::zero();
    }
    let w = omega.partials(m);
    if weak {
        return fs.iter().zip(&w).map(|(x, wn)| ExtReal::new(*x) / ExtReal::new(wn.powf(p.recip()))).sum();
    }
    let mut s = T::zero();
    if p <= T::one() {
        let mut best = ExtReal::zero();
        for (x, wn) in fs.iter().zip(&w) {
            s = s + *x;
            best = best.max(ExtReal::new(s) / ExtReal::new(wn.powf(p.recip())));
        }
        return best;
    }
    let pp = conjugate(p);
    let e = T::one() - pp;
    if w[0] == T::zero() {
        return ExtReal::infinity();
    }
    let mut acc = T::zero();
    for n in 0..m {
        s = s + fs[n];
        let a = s / T::of_usize(n + 1);
        let om = if n == 0 {
            w[0].powf(e)
        } else {
            T::of_usize(n + 1).powf(pp) * (w[n - 1].powf(e) - w[n].powf(e))
        };
        acc = acc + a.powf(pp) * om;
    }
    // n >= m: A_d f^*(n) = S/(n+1), so the remaining sum telescopes
    let winf = omega.total().powf(e).get();
    acc = acc + s.powf(pp) * (w[m - 1].powf(e) - winf);
    ExtReal::clamp(acc).powf(pp.recip())
}

/// `Σ_{k<=n} Ω_k^{1-p'} <= C Σ_{k<=n} (A_dΩ(k))^{1-p'}`, `A_dΩ(k) = W_k/(k+1)`.
pub fn check_d_assoc_conjugate<T: Real>(omega: &DiscreteWeight<T>, p: T, horizon: usize) -> Verdict<T> {
    let e = T::one() - conjugate(p);
    let w = omega.partials(horizon);
    let (mut l, mut r) = (T::zero(), T::zero());
    let vals: Vec<ExtReal<T>> = (0..horizon)
        .map(|n| {
            l = l + omega.term(n).powf(e);
            r = r + (w[n] / T::of_usize(n + 1)).powf(e);
            ExtReal::new(l) / ExtReal::new(r)
        })
        .collect();
    seq_verdict("d-assoc-conjugate", &vals)
}

/// `W_n >= C (n+1)^p`; the constant reported is `min_n W_n/(n+1)^p`.
pub fn check_d_assoc_linfty<T: Real>(omega: &DiscreteWeight<T>, p: T, horizon: usize) -> Verdict<T> {
    let w = omega.partials(horizon);
    let vals: Vec<ExtReal<T>> =
        w.iter().enumerate().map(|(n, wn)| ExtReal::new(T::of_usize(n + 1).powf(p)) / ExtReal::new(*wn)).collect();
    let mut v = seq_verdict("d-assoc-linfty", &vals);
    v.constant = if v.constant.is_infinite() { ExtReal::zero() } else { ExtReal::new(v.constant.get().recip()) };
    v.holds = v.holds && v.constant > ExtReal::zero();
    v
}

/// Upper concave hull of points sorted by abscissa.
pub fn upper_hull<T: Real>(pts: &[(T, T)]) -> Vec<(T, T)> {
    let mut h: Vec<(T, T)> = Vec::with_capacity(pts.len());
    for &p in pts {
        while h.len() >= 2 {
            let (a, b) = (h[h.len() - 2], h[h.len() - 1]);
            // drop b when it lies on or below the chord a -> p
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross >= T::zero() {
                h.pop();
            } else {
                break;
            }
        }
        h.push(p);
    }
    h
}

fn hull_eval<T: Real>(h: &[(T, T)], x: T) -> T {
    let k = h.partition_point(|q| q.0 <= x);
    if k == 0 {
        return h[0].1;
    }
    if k == h.len() {
        return h[k - 1].1;
    }
    let (a, b) = (h[k - 1], h[k]);
    a.1 + (b.1 - a.1) * (x - a.0) / (b.0 - a.0)
}

/// Minorant samples and their least concave majorant.
#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct Biassociate<T> {
    pub ts: Vec<T>,
    pub minorant: Vec<T>,
    pub majorant: Vec<T>,
    /// `majorant/2 <= minorant <= majorant` at every sample.
    pub sandwich: bool,
}

impl<T: Real> Biassociate<T> {
    fn build(ts: Vec<T>, minorant: Vec<T>) -> Self {
        let mut pts = vec![(T::zero(), T::zero())];
        pts.extend(ts.iter().copied().zip(minorant.iter().copied()));
        let hull = upper_hull(&pts);
        let majorant: Vec<T> = ts.iter().map(|t| hull_eval(&hull, *t)).collect();
        let slack = T::one() + T::lit(1e-12);
        let sandwich =
            minorant.iter().zip(&majorant).all(|(m, w)| *w * T::half() <= *m * slack && *m <= *w * slack);
        Biassociate { ts, minorant, majorant, sandwich }
    }

    /// The majorant as a curve through the origin.
    pub fn curve(&self) -> PiecewiseCurve<T> {
        let mut xs = vec![T::zero()];
        let mut ys = vec![T::zero()];
        xs.extend(self.ts.iter().copied());
        ys.extend(self.majorant.iter().copied());
        PiecewiseCurve::linear(xs, ys, Some(Monotone::Nondecreasing))
    }

    /// Increments of the majorant (the decreasing weight sequence in the discrete case).
    pub fn increments(&self) -> Vec<T> {
        let mut prev = T::zero();
        self.majorant
            .iter()
            .map(|x| {
                let d = *x - prev;
                prev = *x;
                d
            })
            .collect()
    }
}

/// Continuous biassociate weight: concave majorant of `W_p` on `ts`.
pub fn biassociate_weight<T: Real>(w: &Weight<T>, p: T, ts: &[T]) -> Biassociate<T> {
    let m = Minorant::with_points(w, p, ts);
    let ts: Vec<T> = ts.iter().copied().filter(|t| *t > T::zero()).collect();
    let vals = ts.iter().map(|t| m.eval(*t)).collect();
    Biassociate::build(ts, vals)
}

/// Discrete biassociate weight: `P_n = inf_m max(1, (n+1)/(m+1)) W_m^{1/p}`
/// at abscissas `n+1`, then its concave majorant; `increments()` is `Ω̃`.
pub fn biassociate_seq<T: Real>(omega: &DiscreteWeight<T>, p: T, horizon: usize) -> Biassociate<T> {
    let w = omega.partials(horizon);
    let mut best = T::infinity();
    let mut ts = Vec::with_capacity(horizon);
    let mut vals = Vec::with_capacity(horizon);
    for (n, wn) in w.iter().enumerate() {
        let n1 = T::of_usize(n + 1);
        let r = wn.powf(p.recip());
        vals.push(r.min(n1 * best));
        best = best.min(r / n1);
        ts.push(n1);
    }
    Biassociate::build(ts, vals)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minorant_examples() {
        let ts = [0.25, 0.5, 1.0, 2.0, 8.0];
        let one = Weight::<f64>::one();
        let c = greatest_concave_minorant(&one, 1.0, &ts);
        for t in ts {
            assert!((c.eval(t) - t).abs() < 1e-12);
        }
        let c = greatest_concave_minorant(&Weight::<f64>::power(1.0).unwrap(), 1.0, &ts);
        assert!(ts.iter().all(|t| c.eval(*t) == 0.0));
        let c = greatest_concave_minorant(&Weight::<f64>::chi(1.0).unwrap(), 1.0, &ts);
        for t in ts {
            assert!((c.eval(t) - t.min(1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn associate_examples() {
        let q = Quad::default();
        let f = StepFn::from_pieces(&[(0.0, 1.0, 3.0), (1.0, 2.5, 1.0)]).unwrap();
        let one = Weight::<f64>::one();
        let v = associate_norm(&f, 1.0, &one, false, &q).unwrap().value.get();
        assert!((v - 3.0).abs() < 1e-9, "{v}");
        let chi = StepFn::indicator(0.0, 1.0, 1.0).unwrap();
        let v = associate_norm(&chi, 2.0, &one, true, &q).unwrap().value.get();
        assert!((v - 2.0).abs() < 1e-9);
        assert!(associate_norm(&f, 1.0, &Weight::power(1.0).unwrap(), false, &q).unwrap().value.is_infinite());
        let m = associate_norm_minorant(&f, 1.0, &one).unwrap().get();
        assert!((m - 3.0).abs() < 1e-9);
    }

    #[test]
    fn associate_lp_duality() {
        // w = one, p = 2: the dual of L^{2} restricted to the cone; both forms are
        // within the equivalence constants of ‖f‖_2
        let q = Quad::default();
        let f = StepFn::from_pieces(&[(0.0, 1.0, 2.0), (1.0, 3.0, 1.0)]).unwrap();
        let e = associate_norm(&f, 2.0, &Weight::one(), false, &q).unwrap();
        let l2 = (4.0f64 + 2.0).sqrt();
        assert!(e.value.get() >= l2 / 8.0 && e.value.get() <= 8.0 * l2);
        assert!(e.spread() < 8.0);
    }

    #[test]
    fn d_associate_examples() {
        let ones = DiscreteWeight::<f64>::ones();
        let f = Seq::new(vec![1.0]).unwrap();
        assert_eq!(d_associate_norm(&f, &ones, 1.0, true).get(), 1.0);
        let f2 = Seq::new(vec![1.0, 1.0]).unwrap();
        assert_eq!(d_associate_norm(&f2, &ones, 1.0, false).get(), 1.0);
        let v = d_associate_norm(&f, &ones, 2.0, false).get();
        assert!((v - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn d_assoc_conditions() {
        let ones = DiscreteWeight::<f64>::ones();
        let v = check_d_assoc_conjugate(&ones, 2.0, 64);
        assert!(v.holds && (v.constant.get() - 1.0).abs() < 1e-12);
        let inc = DiscreteWeight::Power { c: 1.0, a: 0.5 };
        assert!(check_d_assoc_conjugate(&inc, 2.0, 64).holds);
        let geo = DiscreteWeight::Geometric { c0: 1.0, r: 0.5 };
        assert!(!check_d_assoc_conjugate(&geo, 2.0, 64).holds);

        let pd = DiscreteWeight::<f64>::PowerDiff(0.5);
        let v = check_d_assoc_linfty(&pd, 0.5, 256);
        assert!(v.holds && (v.constant.get() - 1.0).abs() < 1e-12);
        assert!(check_d_assoc_linfty(&ones, 1.0, 256).holds);
        for p in [0.1, 0.5, 1.0] {
            assert!(!check_d_assoc_linfty(&geo, p, 256).holds, "p = {p}");
        }
    }

    #[test]
    fn biassociate_examples() {
        let ts: Vec<f64> = (-8..=8).map(|k| 2f64.powi(k)).collect();
        let b = biassociate_weight(&Weight::one(), 1.0, &ts);
        assert!(b.sandwich);
        assert!(b.majorant.iter().zip(&ts).all(|(m, t)| (m - t).abs() < 1e-12));
        let b = biassociate_weight(&Weight::chi(1.0).unwrap(), 1.0, &ts);
        assert!(b.majorant.iter().zip(&ts).all(|(m, t)| (m - t.min(1.0)).abs() < 1e-12));
        let b = biassociate_seq(&DiscreteWeight::<f64>::ones(), 1.0, 32);
        assert!(b.sandwich && b.increments().iter().all(|x| (x - 1.0).abs() < 1e-12));
        let b = biassociate_seq(&DiscreteWeight::Power { c: 1.0, a: 1.0 }, 0.5, 32);
        assert!(b.sandwich);
    }
}
