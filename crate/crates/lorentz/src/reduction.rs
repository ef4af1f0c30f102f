//! Level-set reduction: operator bounds on decreasing functions versus the
//! same bounds tested on characteristic functions `χ_(0,r)`.

use serde::Serialize;

use crate::duality::oracle::{cone_sup, geometric_nodes, piece_mids, FnObjective, OracleConfig, PowerRatio, PowerSum};
use crate::duality::half_line;
use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::lorentz::lambda_norm;
use crate::operators::{conjugate_hardy, hardy};
use crate::piecewise::{Asym, StepFn, Weight};
use crate::quad::{golden_max, Quad};
use crate::real::{conjugate, Real};
use crate::weights::Verdict;

/// `Tf(y) = ∫ k(y, t) f(t) dt` for a nonnegative kernel, or the pointwise
/// maximum of two such operators.
#[derive(Clone, Debug, PartialEq)]
pub enum KernelOp<T> {
    /// `Tf = f`
    Identity,
    /// `k(y, t) = χ_{t<y}/y`
    Hardy,
    /// `k(y, t) = χ_{t>y}/t`
    Conjugate,
    /// `k(y, t) = k[i][j]` for `y ∈ [rows_i, rows_{i+1})`, `t ∈ [cols_j, cols_{j+1})`.
    Step { rows: Vec<T>, cols: Vec<T>, k: Vec<Vec<T>> },
    /// `max(T_a f, T_b f)`, sublinear.
    Max(Box<KernelOp<T>>, Box<KernelOp<T>>),
}

impl<T: Real> KernelOp<T> {
    pub fn step(rows: Vec<T>, cols: Vec<T>, k: Vec<Vec<T>>) -> Result<Self> {
        let ok = rows.windows(2).all(|w| w[0] < w[1])
            && cols.windows(2).all(|w| w[0] < w[1])
            && rows.len() >= 2
            && cols.len() >= 2
            && k.len() == rows.len() - 1
            && k.iter().all(|r| r.len() == cols.len() - 1 && r.iter().all(|x| *x >= T::zero() && x.is_finite()));
        if !ok {
            return Err(Error::Invalid("step kernel needs increasing grids and a nonnegative matrix".into()));
        }
        Ok(KernelOp::Step { rows, cols, k })
    }

    pub fn max(a: Self, b: Self) -> Self {
        KernelOp::Max(Box::new(a), Box::new(b))
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, KernelOp::Max(..))
    }

    pub fn name(&self) -> String {
        match self {
            KernelOp::Identity => "identity".into(),
            KernelOp::Hardy => "hardy".into(),
            KernelOp::Conjugate => "conjugate".into(),
            KernelOp::Step { .. } => "step".into(),
            KernelOp::Max(a, b) => format!("max({},{})", a.name(), b.name()),
        }
    }

    /// `Tf(y)` for `y > 0`.
    pub fn apply(&self, f: &StepFn<T>, y: T) -> ExtReal<T> {
        match self {
            KernelOp::Identity => ExtReal::new(f.eval(y)),
            KernelOp::Hardy => ExtReal::clamp(hardy(f, y)),
            KernelOp::Conjugate => conjugate_hardy(f, y),
            KernelOp::Step { rows, cols, k } => {
                if y < rows[0] || y >= *rows.last().unwrap() {
                    return ExtReal::zero();
                }
                let i = rows.partition_point(|r| *r <= y) - 1;
                let acc: T = cols
                    .windows(2)
                    .zip(&k[i])
                    .map(|(c, kij)| *kij * (f.primitive(c[1]) - f.primitive(c[0])))
                    .sum();
                ExtReal::clamp(acc)
            }
            KernelOp::Max(a, b) => a.apply(f, y).max(b.apply(f, y)),
        }
    }

    fn contains(&self, pred: &dyn Fn(&KernelOp<T>) -> bool) -> bool {
        match self {
            KernelOp::Max(a, b) => a.contains(pred) || b.contains(pred),
            k => pred(k),
        }
    }

    /// Image of `f` as a step function, when the operator maps steps to steps.
    fn step_image(&self, f: &StepFn<T>) -> Option<StepFn<T>> {
        match self {
            KernelOp::Identity => Some(f.clone()),
            KernelOp::Step { rows, .. } => {
                let pieces: Vec<(T, T, T)> =
                    rows.windows(2).map(|r| (r[0], r[1], self.apply(f, r[0]).get())).collect();
                StepFn::from_pieces(&pieces).ok()
            }
            _ => None,
        }
    }
}

/// `(|Tf(y)|, Σ_n a_n |Tχ_{B_n}(y)|)` on `ys`, with `f = Σ a_n χ_{B_n}` the
/// layer decomposition over the nested level sets `B_n = {f >= v_n}`.
pub fn layer_cake_bound<T: Real>(op: &KernelOp<T>, f: &StepFn<T>, ys: &[T]) -> (Vec<ExtReal<T>>, Vec<ExtReal<T>>) {
    let mut levels: Vec<T> = f.values().iter().copied().filter(|v| *v > T::zero()).collect();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup();
    let layers: Vec<(T, StepFn<T>)> = levels
        .iter()
        .enumerate()
        .map(|(n, v)| {
            let next = levels.get(n + 1).copied().unwrap_or(T::zero());
            let pieces: Vec<(T, T, T)> =
                f.pieces().map(|(a, b, x)| (a, b, if x >= *v { T::one() } else { T::zero() })).collect();
            (*v - next, StepFn::from_pieces(&pieces).expect("level set of a step function"))
        })
        .collect();
    let lhs = ys.iter().map(|y| op.apply(f, *y)).collect();
    let rhs = ys
        .iter()
        .map(|y| layers.iter().map(|(a, b)| op.apply(b, *y) * *a).sum())
        .collect();
    (lhs, rhs)
}

/// Exponents of the source `L^{p0,q0}(w0)` and target `L^{p1,q1}(w1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Indices<T> {
    pub p0: T,
    pub q0: T,
    pub p1: T,
    pub q1: T,
}

impl<T: Real> Indices<T> {
    /// `L^{p0} -> L^{p1}`.
    pub fn strong(p0: T, p1: T) -> Self {
        Indices { p0, q0: p0, p1, q1: p1 }
    }

    fn err(&self) -> Error {
        Error::IndexRegimeError { p0: self.p0.f(), q0: self.q0.f(), p1: self.p1.f(), q1: self.q1.f() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub enum Regime<T> {
    /// Suprema coincide.
    Equality,
    /// Full supremum at most `factor` times the characteristic one.
    Bounded { factor: T },
    /// No comparison available.
    Outside,
}

impl<T: Real> Regime<T> {
    pub fn factor(&self) -> ExtReal<T> {
        match self {
            Regime::Equality => ExtReal::new(T::one()),
            Regime::Bounded { factor } => ExtReal::new(*factor),
            Regime::Outside => ExtReal::infinity(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Regime::Equality => "equality",
            Regime::Bounded { .. } => "bounded",
            Regime::Outside => "outside",
        }
    }
}

/// Regime for a single operator `L^{p0,q0} -> L^{p1,q1}`.
pub fn regime<T: Real>(idx: &Indices<T>) -> Regime<T> {
    let Indices { p0, q0, p1, q1 } = *idx;
    if !(q0 > T::zero() && q0 <= T::one() && p0 > T::zero() && p0.is_finite()) {
        return Regime::Outside;
    }
    if q0 <= q1 && q1 <= p1 && p1.is_finite() {
        return Regime::Equality;
    }
    if q0 < p1 && p1 < q1 {
        return Regime::Bounded { factor: (p1 / (p1 - q0)).powf(q0.recip()) };
    }
    Regime::Outside
}

/// Regime for the two-operator comparison `‖T1 f‖_{L^{p1}} / ‖T0 f‖_{L^{p0}}`
/// with `T0` positive linear and `T1` sublinear.
pub fn regime_pair<T: Real>(t0: &KernelOp<T>, t1: &KernelOp<T>, p0: T, p1: T) -> Regime<T> {
    let one = T::one();
    if !(p0 > T::zero() && p1.is_finite() && t0.is_linear()) {
        return Regime::Outside;
    }
    let a = p0 <= one && one <= p1;
    let b = *t1 == KernelOp::Identity && one <= p1 && p0 <= p1;
    let c = *t0 == KernelOp::Identity && p0 <= one && p0 <= p1;
    let d = t0 == t1 && p0 <= p1;
    if a || b || c || d {
        Regime::Equality
    } else {
        Regime::Outside
    }
}

/// `‖g‖_{L^{p,q}(w)}` for `g = T f`.
///
/// Exact when the image is a step function; otherwise `f` must be
/// nonincreasing (so is `Tf` for the built-in kernels) and
/// `(∫ (Tf)^q W^{q/p-1} w)^{1/q}` is integrated piecewise.
pub fn image_norm<T: Real>(op: &KernelOp<T>, f: &StepFn<T>, w: &Weight<T>, p: T, q: T, quad: &Quad) -> Result<ExtReal<T>> {
    if f.is_zero() {
        return Ok(ExtReal::zero());
    }
    if let Some(g) = op.step_image(f) {
        return Ok(lambda_norm(&g, w, p, q, &Weight::one()));
    }
    if op.contains(&|k| matches!(k, KernelOp::Step { .. })) || !f.is_decreasing_profile() || f.breaks()[0] != T::zero() {
        return Err(Error::Invalid("quadrature image norms need a nonincreasing f starting at 0".into()));
    }
    let has_hardy = op.contains(&|k| *k == KernelOp::Hardy);
    let has_conj = op.contains(&|k| *k == KernelOp::Conjugate);
    let g = |t: T| op.apply(f, t).get();
    let mut cuts = f.breaks().to_vec();
    cuts.extend(w.breakpoints());
    let sm = *f.breaks().last().unwrap();
    let Some(wp0) = w.prim_exp0() else {
        // w vanishes near 0: shift nothing, the integrand is zero there
        return image_norm_profiled(op, f, w, p, q, quad, &cuts, None, has_hardy, sm, g);
    };
    let log0 = if has_conj { Asym::new(T::zero(), T::one()) } else { Asym::new(T::zero(), T::zero()) };
    image_norm_profiled(op, f, w, p, q, quad, &cuts, Some((wp0, log0)), has_hardy, sm, g)
}

#[allow(clippy::too_many_arguments)]
fn image_norm_profiled<T: Real>(
    _op: &KernelOp<T>,
    f: &StepFn<T>,
    w: &Weight<T>,
    p: T,
    q: T,
    quad: &Quad,
    cuts: &[T],
    at0: Option<(Asym<T>, Asym<T>)>,
    has_hardy: bool,
    sm: T,
    g: impl Fn(T) -> T,
) -> Result<ExtReal<T>> {
    let wpinf = w.prim_exp_inf();
    if q.is_infinite() {
        // sup_t g(t) W^{1/p}(t)
        if has_hardy && w.exp_inf().is_some() {
            let e = wpinf.pow(p.recip()).shift(-T::one());
            if e.power > T::zero() || (e.power == T::zero() && e.log > T::zero()) {
                return Ok(ExtReal::infinity());
            }
        }
        if let Some((wp0, log0)) = at0 {
            let e = wp0.pow(p.recip()).mul(log0);
            if e.power < T::zero() || (e.power == T::zero() && e.log > T::zero()) {
                return Ok(ExtReal::infinity());
            }
        }
        let h = |t: T| {
            let gt = g(t);
            if gt == T::zero() {
                T::zero()
            } else {
                gt * w.primitive(t).powf(p.recip())
            }
        };
        let mut pts: Vec<T> = cuts.iter().copied().filter(|c| *c > T::zero()).collect();
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        pts.insert(0, pts[0] * T::lit(2f64.powi(-40)));
        if has_hardy {
            let last = *pts.last().unwrap();
            pts.push(last * T::lit(2f64.powi(40)));
        }
        let mut best = T::zero();
        for s in pts.windows(2) {
            let (_, y) = golden_max(|u: T| h(u.exp()), s[0].ln(), s[1].ln(), T::tol(1e-12));
            best = best.max(y);
        }
        return Ok(ExtReal::clamp(best));
    }
    let e = q / p - T::one();
    let integrand = |t: T| {
        let d = w.density(t);
        let gt = g(t);
        if d == T::zero() || gt == T::zero() {
            T::zero()
        } else {
            gt.powf(q) * w.primitive(t).powf(e) * d
        }
    };
    let prof0 = at0.and_then(|(wp0, log0)| w.exp0().map(|a| a.mul(wp0.pow(e)).mul(log0.pow(q))));
    let prof_inf = if has_hardy { w.exp_inf().map(|a| a.mul(wpinf.pow(e)).shift(-q)) } else { None };
    let mut cuts = cuts.to_vec();
    cuts.push(sm);
    let v = half_line(integrand, &cuts, prof0, prof_inf, quad)?;
    let _ = f;
    Ok(v.powf(q.recip()))
}

/// `‖χ_(0,r)‖_{L^{p,q}(w)} = (p/q)^{1/q} W(r)^{1/p}` (`W(r)^{1/p}` for `q = inf`).
pub fn char_norm<T: Real>(w: &Weight<T>, p: T, q: T, r: T) -> ExtReal<T> {
    let wr = ExtReal::new(w.primitive(r).powf(p.recip()));
    if q.is_infinite() {
        wr
    } else {
        wr * (p / q).powf(q.recip())
    }
}

/// `sup_r ‖T χ_(0,r)‖_{L^{p1,q1}(w1)} / ‖χ_(0,r)‖_{L^{p0,q0}(w0)}` over `rs`.
///
/// Fails with `IndexRegimeError` outside both regimes unless `force`.
pub fn char_sup<T: Real>(
    op: &KernelOp<T>,
    w0: &Weight<T>,
    w1: &Weight<T>,
    idx: &Indices<T>,
    rs: &[T],
    force: bool,
    quad: &Quad,
) -> Result<Verdict<T>> {
    if !force && regime(idx) == Regime::Outside {
        return Err(idx.err());
    }
    let mut vals = Vec::with_capacity(rs.len());
    for &r in rs {
        let chi = StepFn::indicator(T::zero(), r, T::one())?;
        let top = image_norm(op, &chi, w1, idx.p1, idx.q1, quad)?;
        vals.push(top / char_norm(w0, idx.p0, idx.q0, r));
    }
    Ok(Verdict::from_samples("char-sup", rs, &vals, None))
}

/// Two-operator characteristic supremum `sup_r ‖T1 χ_(0,r)‖_{L^{p1}(w1)} / ‖T0 χ_(0,r)‖_{L^{p0}(w0)}`.
#[allow(clippy::too_many_arguments)]
pub fn char_sup_pair<T: Real>(
    t0: &KernelOp<T>,
    t1: &KernelOp<T>,
    w0: &Weight<T>,
    w1: &Weight<T>,
    p0: T,
    p1: T,
    rs: &[T],
    quad: &Quad,
) -> Result<Verdict<T>> {
    let mut vals = Vec::with_capacity(rs.len());
    for &r in rs {
        let chi = StepFn::indicator(T::zero(), r, T::one())?;
        let top = image_norm(t1, &chi, w1, p1, p1, quad)?;
        let bot = image_norm(t0, &chi, w0, p0, p0, quad)?;
        vals.push(top / bot);
    }
    Ok(Verdict::from_samples("char-sup-pair", rs, &vals, None))
}

/// Everything `verify_reduction` needs besides the grid.
#[derive(Clone, Debug)]
pub struct ReductionSetup<T> {
    /// Denominator operator (identity for the one-operator form).
    pub t0: KernelOp<T>,
    pub t1: KernelOp<T>,
    pub w0: Weight<T>,
    pub w1: Weight<T>,
    pub idx: Indices<T>,
}

impl<T: Real> ReductionSetup<T> {
    pub fn single(t: KernelOp<T>, w0: Weight<T>, w1: Weight<T>, idx: Indices<T>) -> Self {
        ReductionSetup { t0: KernelOp::Identity, t1: t, w0, w1, idx }
    }

    pub fn regime(&self) -> Regime<T> {
        if self.t0 == KernelOp::Identity {
            let r = regime(&self.idx);
            if r != Regime::Outside {
                return r;
            }
        }
        let strong = self.idx.q0 == self.idx.p0 && self.idx.q1 == self.idx.p1;
        if strong {
            regime_pair(&self.t0, &self.t1, self.idx.p0, self.idx.p1)
        } else {
            Regime::Outside
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct ReductionReport<T> {
    pub regime: String,
    pub factor: ExtReal<T>,
    /// Characteristic supremum over the oracle's breakpoints.
    pub s_c: ExtReal<T>,
    pub s_c_witness: Option<T>,
    /// Oracle lower bound for the full supremum.
    pub s_o: ExtReal<T>,
    pub pieces: usize,
    /// `None` outside the theorem regimes.
    pub pass: Option<bool>,
}

/// Characteristic supremum vs the cone oracle on the pieces ending at `nodes`.
pub fn verify_reduction<T: Real>(
    setup: &ReductionSetup<T>,
    nodes: &[T],
    cfg: &OracleConfig,
    quad: &Quad,
) -> Result<ReductionReport<T>> {
    let ReductionSetup { t0, t1, w0, w1, idx } = setup;
    let reg = setup.regime();
    let sc = if *t0 == KernelOp::Identity {
        char_sup(t1, w0, w1, idx, nodes, true, quad)?
    } else {
        char_sup_pair(t0, t1, w0, w1, idx.p0, idx.p1, nodes, quad)?
    };
    let mids = piece_mids(nodes);
    let so = if *t0 == KernelOp::Identity && *t1 == KernelOp::Identity {
        let obj = PowerRatio { num: lorentz_sum(w1, idx.p1, idx.q1, nodes), den: lorentz_sum(w0, idx.p0, idx.q0, nodes) };
        cone_sup(&obj, Some(&mids), cfg).value
    } else {
        let value = |c: &[T]| -> T {
            let Ok(f) = step_on(nodes, c) else { return T::zero() };
            let top = image_norm(t1, &f, w1, idx.p1, idx.q1, quad);
            let bot = if *t0 == KernelOp::Identity {
                Ok(lambda_norm(&f, w0, idx.p0, idx.q0, &Weight::one()))
            } else {
                image_norm(t0, &f, w0, idx.p0, idx.q0, quad)
            };
            match (top, bot) {
                (Ok(a), Ok(b)) => (a / b).get(),
                _ => T::zero(),
            }
        };
        let metric: Vec<T> = nodes_widths(nodes);
        let obj = FnObjective { dim: nodes.len(), f: value, metric };
        cone_sup(&obj, Some(&mids), cfg).value
    };
    let so = ExtReal::clamp(so);
    let factor = reg.factor();
    let pass = match reg {
        Regime::Outside => None,
        Regime::Equality => Some(
            sc.constant.is_infinite()
                || (so.get() <= sc.constant.get() * T::lit(1.0 + 1e-6) && so.get() >= sc.constant.get() * T::lit(1.0 - 1e-3)),
        ),
        Regime::Bounded { factor } => {
            Some(sc.constant.is_infinite() || so.get() <= sc.constant.get() * factor * T::lit(1.0 + 1e-6))
        }
    };
    Ok(ReductionReport {
        regime: reg.label().to_string(),
        factor,
        s_c: sc.constant,
        s_c_witness: sc.witness.first().copied(),
        s_o: so,
        pieces: nodes.len(),
        pass,
    })
}

fn nodes_widths<T: Real>(nodes: &[T]) -> Vec<T> {
    let mut prev = T::zero();
    nodes
        .iter()
        .map(|x| {
            let d = *x - prev;
            prev = *x;
            d
        })
        .collect()
}

/// Decreasing step with value `c_i` on `(x_{i-1}, x_i)`, `x_0 = 0`.
pub fn step_on<T: Real>(nodes: &[T], c: &[T]) -> Result<StepFn<T>> {
    let mut breaks = vec![T::zero()];
    breaks.extend_from_slice(nodes);
    let mut vals = c.to_vec();
    while vals.last() == Some(&T::zero()) {
        vals.pop();
        breaks.pop();
    }
    if vals.is_empty() {
        return Ok(StepFn::zero());
    }
    StepFn::new(breaks, vals)
}

/// For nonincreasing steps on `nodes`, `‖f‖_{L^{p,q}(w)}` as a power sum of the values:
/// `Σ c_i^q (p/q)(W(x_i)^{q/p} - W(x_{i-1})^{q/p})`, or `max c_i W(x_i)^{1/p}` for `q = inf`.
pub fn lorentz_sum<T: Real>(w: &Weight<T>, p: T, q: T, nodes: &[T]) -> PowerSum<T> {
    if q.is_infinite() {
        return PowerSum::new(nodes.iter().map(|x| w.primitive(*x).powf(p.recip())).collect(), q);
    }
    let mut prev = T::zero();
    let coef = nodes
        .iter()
        .map(|x| {
            let cur = w.primitive(*x).powf(q / p);
            let d = (cur - prev).max(T::zero()) * p / q;
            prev = cur;
            d
        })
        .collect();
    PowerSum::new(coef, q)
}

/// `sup_{f↓} (∫_0^1 f)^p / ∫_0^1 f^p t^{p-1}` over steps with `n` log-spaced pieces on `(0, 1]`.
pub fn cone_average_sup<T: Real>(p: T, n: usize, cfg: &OracleConfig) -> T {
    assert!(p > T::zero() && p <= T::one() && n >= 2);
    let nodes = geometric_nodes(T::lit(1e-4), T::one(), n);
    let mut prev = T::zero();
    let mut a = Vec::with_capacity(n);
    let mut b = Vec::with_capacity(n);
    for &x in &nodes {
        a.push(x - prev);
        b.push((x.powf(p) - prev.powf(p)) / p);
        prev = x;
    }
    let obj = PowerRatio { num: PowerSum::new(a, T::one()), den: PowerSum::new(b, p) };
    cone_sup(&obj, Some(&piece_mids(&nodes)), cfg).value.powf(p)
}

/// `(∫_r^∞ w1/t^{p1})^{1/p1} (∫_0^r (W0/t)^{-p0'} w0)^{1/p0'}`, the second
/// condition of the two-weight Hardy characterisation on decreasing functions
/// (`p0 > 1`), sampled over `rs`.
pub fn hardy_two_weight_factor<T: Real>(
    w0: &Weight<T>,
    w1: &Weight<T>,
    p0: T,
    p1: T,
    rs: &[T],
    quad: &Quad,
) -> Result<Verdict<T>> {
    assert!(p0 > T::one());
    let pp = conjugate(p0);
    let cuts = w0.breakpoints();
    let head_dead = match (w0.exp0(), w0.prim_exp0()) {
        (Some(a), Some(b)) => !a.mul(b.shift(-T::one()).pow(-pp)).integrable_at_zero(),
        _ => false,
    };
    let mut vals = Vec::with_capacity(rs.len());
    for &r in rs {
        let tail = w1.moment_tail(p1, r, quad)?.powf(p1.recip());
        let head = if head_dead {
            ExtReal::infinity()
        } else {
            let v = quad.split(
                |t: T| {
                    let d = w0.density(t);
                    if d == T::zero() {
                        T::zero()
                    } else {
                        (w0.primitive(t) / t).powf(-pp) * d
                    }
                },
                T::zero(),
                r,
                &cuts,
            )?;
            ExtReal::clamp(v)
        };
        vals.push(tail * head.powf(pp.recip()));
    }
    let mut v = Verdict::from_samples("hardy-two-weight", rs, &vals, None);
    if head_dead {
        v = v.with_note("(W0/t)^{-p0'} w0 is not integrable at 0");
        v.growth_flag = true;
        v.holds = false;
    }
    Ok(v)
}

/// Setup and grid of a counterexample preset.
#[derive(Clone, Debug)]
pub struct Preset<T> {
    pub name: &'static str,
    pub setup: ReductionSetup<T>,
    pub nodes: Vec<T>,
}

/// Hardy operator with `p0 = p1 = 2`, `w0 = t`, `w1 = t χ_(1,2)` (16-step
/// midpoint approximation); grid `r ∈ [2^-10, 2^10]`.
pub fn preset_hardy_p0_above_one<T: Real>(n: usize) -> Result<Preset<T>> {
    let k = 16;
    let breaks: Vec<T> = (0..=k).map(|i| T::one() + T::of_usize(i) / T::of_usize(k)).collect();
    let mut dens: Vec<T> = breaks.windows(2).map(|b| (b[0] + b[1]) * T::half()).collect();
    dens.push(T::zero());
    let w1 = Weight::step(breaks, dens)?;
    let two = T::two();
    Ok(Preset {
        name: "hardy-p0-above-one",
        setup: ReductionSetup::single(KernelOp::Hardy, Weight::power(T::one())?, w1, Indices::strong(two, two)),
        nodes: geometric_nodes(T::lit(2f64.powi(-10)), T::lit(2f64.powi(10)), n),
    })
}

/// Identity with `p0 = 1 > p1 = 0.2`, `w0 = 1`, `w1 = t^{-0.8}`
/// (`(1+α1)/p1 = (1+α0)/p0`); nodes `2^{k - n/2}`, `k = 1..n` (ratio 2).
pub fn preset_identity_p1_below_p0<T: Real>(n: usize) -> Result<Preset<T>> {
    let nodes = (1..=n).map(|k| T::two().powi(k as i32 - (n / 2) as i32)).collect();
    Ok(Preset {
        name: "identity-p1-below-p0",
        setup: ReductionSetup::single(
            KernelOp::Identity,
            Weight::power(T::zero())?,
            Weight::power(T::lit(-0.8))?,
            Indices::strong(T::one(), T::lit(0.2)),
        ),
        nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Quad {
        Quad::default()
    }

    #[test]
    fn layer_cake_examples() {
        let ys: Vec<f64> = (1..40).map(|i| i as f64 * 0.1).collect();
        let f = StepFn::from_pieces(&[(0.0, 1.0, 2.0), (1.0, 2.0, 1.0)]).unwrap();
        for op in [KernelOp::Hardy, KernelOp::Identity, KernelOp::Conjugate] {
            let (l, r) = layer_cake_bound(&op, &f, &ys);
            for (a, b) in l.iter().zip(&r) {
                assert!((a.get() - b.get()).abs() <= 1e-12 * a.get().max(1.0));
            }
        }
        let m = KernelOp::max(KernelOp::Hardy, KernelOp::Conjugate);
        let (l, r) = layer_cake_bound(&m, &f, &ys);
        assert!(l.iter().zip(&r).all(|(a, b)| a.get() <= b.get() * (1.0 + 1e-12)));
        assert!(l.iter().zip(&r).any(|(a, b)| a.get() < b.get() * (1.0 - 1e-6)));
    }

    #[test]
    fn char_sup_examples() {
        let rs: Vec<f64> = geometric_nodes(0.01, 100.0, 9);
        let one = Weight::<f64>::one();
        let v = char_sup(&KernelOp::Hardy, &one, &one, &Indices::strong(1.0, 1.0), &rs, false, &q()).unwrap();
        assert!(v.constant.is_infinite());
        let w = Weight::power(0.5).unwrap();
        let v = char_sup(&KernelOp::Identity, &w, &w, &Indices::strong(0.5, 0.5), &rs, false, &q()).unwrap();
        assert!((v.constant.get() - 1.0).abs() < 1e-12);
        // w = t^{p-1}: W = t^p/p, ∫_r^∞ t^{-p} w = ∞ so the Hardy image has infinite norm
        let p = 0.5;
        let w = Weight::power(p - 1.0).unwrap();
        let v = char_sup(&KernelOp::Hardy, &w, &w, &Indices::strong(p, p), &rs, false, &q()).unwrap();
        assert!(v.constant.is_infinite());
        let bad = Indices { p0: 2.0, q0: 2.0, p1: 2.0, q1: 2.0 };
        assert!(matches!(char_sup(&KernelOp::Hardy, &one, &one, &bad, &rs, false, &q()), Err(Error::IndexRegimeError { .. })));
    }

    #[test]
    fn hardy_image_matches_closed_form() {
        // ‖Aχ_(0,r)‖_{L^2(w)}^2 = W(r) + r^2 ∫_r^∞ w/t^2 with w = χ_(0,3)
        let w = Weight::<f64>::chi(3.0).unwrap();
        let chi = StepFn::indicator(0.0, 1.0, 1.0).unwrap();
        let v = image_norm(&KernelOp::Hardy, &chi, &w, 2.0, 2.0, &q()).unwrap().get();
        let exact = (1.0f64 + (1.0 - 1.0 / 3.0)).sqrt();
        assert!((v - exact).abs() < 1e-10, "{v} {exact}");
        let v = image_norm(&KernelOp::Hardy, &chi, &w, 2.0, f64::INFINITY, &q()).unwrap().get();
        // sup_t min(1, 1/t) W(t)^{1/2} = 1 at t = 1
        assert!((v - 1.0).abs() < 1e-9);
    }

    #[test]
    fn cone_average_value() {
        let cfg = OracleConfig::default();
        for p in [0.3, 0.5, 1.0] {
            let v: f64 = cone_average_sup(p, 16, &cfg);
            assert!(v <= p + 1e-9 && v >= p - 5e-3, "{p} {v}");
        }
    }

    #[test]
    fn identity_equality_regime() {
        let w0 = Weight::<f64>::step(vec![0.0, 0.5, 2.0], vec![1.0, 3.0, 0.5]).unwrap();
        let w1 = Weight::<f64>::step(vec![0.0, 1.0, 4.0], vec![2.0, 0.2, 1.0]).unwrap();
        let setup = ReductionSetup::single(KernelOp::Identity, w0, w1, Indices::strong(0.5, 1.0));
        let nodes = geometric_nodes(0.05, 20.0, 16);
        let r = verify_reduction(&setup, &nodes, &OracleConfig::default(), &q()).unwrap();
        assert_eq!(r.regime, "equality");
        assert_eq!(r.pass, Some(true), "{r:?}");
    }

    #[test]
    fn presets() {
        let cfg = OracleConfig::default();
        let p = preset_hardy_p0_above_one::<f64>(41).unwrap();
        let s = &p.setup;
        let c = char_sup(&s.t1, &s.w0, &s.w1, &s.idx, &p.nodes, true, &q()).unwrap();
        assert!(c.holds && c.constant.get() < 2.0, "{c:?}");
        let f = hardy_two_weight_factor(&s.w0, &s.w1, 2.0, 2.0, &p.nodes, &q()).unwrap();
        assert!(f.constant.is_infinite() && !f.holds);

        let a = preset_identity_p1_below_p0::<f64>(64).unwrap();
        let b = preset_identity_p1_below_p0::<f64>(128).unwrap();
        let ra = verify_reduction(&a.setup, &a.nodes, &cfg, &q()).unwrap();
        let rb = verify_reduction(&b.setup, &b.nodes, &cfg, &q()).unwrap();
        assert_eq!(ra.pass, None);
        assert!((ra.s_c.get() - 3125.0).abs() < 1e-6 && (rb.s_c.get() - 3125.0).abs() < 1e-6);
        assert!(rb.s_o.get() >= 10.0 * ra.s_o.get(), "{ra:?} {rb:?}");
    }
}
