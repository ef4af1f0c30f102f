//! Uncentered Hardy–Littlewood maximal operator on the line, evaluated exactly
//! on step functions, together with the cube functions `φ_Q`, their envelope
//! `Φ_u` and the weighted condition searches built on them.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::piecewise::{rearrange, LineMeasure, Measure, MeasureFamily, Monotone, PiecewiseCurve, Radial, StepFn, Weight};
use crate::quad::{golden_max, Quad};
use crate::real::{conjugate, Real};
use crate::weights::{argmax, check_ap, growth_flag, GridSpec, Verdict};

/// `Mf(x) = sup_{I ∋ x} |I|^{-1} ∫_I f`.
///
/// The primitive is piecewise linear, so a chord slope is maximised with both
/// endpoints among the breakpoints of `f` and `x` itself.
pub fn maximal_value<T: Real>(f: &StepFn<T>, x: T) -> T {
    let br = f.breaks();
    let mut left: Vec<T> = br.iter().copied().filter(|b| *b <= x).collect();
    left.push(x);
    let mut right: Vec<T> = br.iter().copied().filter(|b| *b >= x).collect();
    right.push(x);
    let mut best = T::zero();
    for &a in &left {
        let fa = f.primitive(a);
        for &b in &right {
            if b > a {
                best = best.max((f.primitive(b) - fa) / (b - a));
            }
        }
    }
    best
}

/// Region `(c, d)` of constant value `v` with `F(x) = alpha + v x` there.
struct Region<T> {
    c: T,
    d: T,
    v: T,
    alpha: T,
}

fn regions<T: Real>(f: &StepFn<T>) -> Vec<Region<T>> {
    let br = f.breaks();
    let mut out = vec![Region { c: T::neg_infinity(), d: br[0], v: T::zero(), alpha: T::zero() }];
    for (a, b, v) in f.pieces() {
        out.push(Region { c: a, d: b, v, alpha: f.primitive(a) - v * a });
    }
    out.push(Region { c: br[br.len() - 1], d: T::infinity(), v: T::zero(), alpha: f.integral() });
    out
}

/// `{Mf > s}` as disjoint open intervals, exact.
///
/// Inside a region of constant value each candidate average is a linear
/// fractional function of `x`, so `avg > s` is a linear inequality.
pub fn maximal_level_set<T: Real>(f: &StepFn<T>, s: T) -> Vec<(T, T)> {
    assert!(s > T::zero(), "level must be positive");
    if f.is_zero() || s >= f.sup() {
        return vec![];
    }
    let br = f.breaks();
    let prim: Vec<T> = br.iter().map(|b| f.primitive(*b)).collect();
    let mut found: Vec<(T, T)> = Vec::new();
    for r in regions(f) {
        // lo-touching sets (c, hi_end), hi-touching sets (lo_end, d)
        let mut whole = r.v > s;
        let mut hi_end = r.c;
        let mut lo_end = r.d;
        let mut linear = |a0: T, b0: T| {
            // a0 + b0 x > 0 on (c, d)
            if b0 == T::zero() {
                whole |= a0 > T::zero();
            } else if b0 > T::zero() {
                lo_end = lo_end.min(-a0 / b0);
            } else {
                hi_end = hi_end.max(-a0 / b0);
            }
        };
        for (k, &bk) in br.iter().enumerate() {
            if bk >= r.d {
                // a = x, b = B_k
                linear(prim[k] - r.alpha - s * bk, s - r.v);
            }
            if bk <= r.c {
                // a = B_k, b = x
                linear(r.alpha - prim[k] + s * bk, r.v - s);
            }
        }
        if whole || hi_end >= lo_end {
            found.push((r.c, r.d));
            continue;
        }
        if hi_end > r.c {
            found.push((r.c, hi_end.min(r.d)));
        }
        if lo_end < r.d {
            found.push((lo_end.max(r.c), r.d));
        }
    }
    merge(found)
}

fn merge<T: Real>(mut iv: Vec<(T, T)>) -> Vec<(T, T)> {
    iv.retain(|(a, b)| b > a);
    iv.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let mut out: Vec<(T, T)> = Vec::new();
    for (a, b) in iv {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    out
}

fn union_mass<T: Real>(u: &LineMeasure<T>, iv: Vec<(T, T)>) -> ExtReal<T> {
    merge(iv).into_iter().map(|(a, b)| u.mass(a, b)).sum()
}

/// `λ(s) = u({Mf > s})`.
pub fn maximal_distribution<T: Real>(f: &StepFn<T>, u: &LineMeasure<T>, s: T) -> ExtReal<T> {
    union_mass(u, maximal_level_set(f, s))
}

/// `(Mf)_u^*(t) = inf{s : λ(s) <= t}`, by bisection on `s` to relative `1e-13`.
pub fn maximal_rearranged_at<T: Real>(f: &StepFn<T>, u: &LineMeasure<T>, t: T) -> Result<ExtReal<T>> {
    if f.is_zero() {
        return Ok(ExtReal::zero());
    }
    let tt = ExtReal::new(t);
    let mut hi = f.sup();
    let mut lo = hi;
    loop {
        lo = lo * T::half();
        let m = maximal_distribution(f, u, lo);
        if m.is_infinite() {
            return Err(Error::NonConvergent(format!("u-mass of {{Mf > {lo}}} is infinite")));
        }
        if m > tt {
            break;
        }
        hi = lo;
        if lo < T::min_positive_value() * T::lit(1e10) {
            return Ok(ExtReal::zero());
        }
    }
    let rel = T::tol(1e-13);
    while hi - lo > rel * hi {
        let mid = (lo + hi) * T::half();
        if maximal_distribution(f, u, mid) > tt {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(ExtReal::new(hi))
}

/// `(Mf)_u^*` on an increasing grid, interpolated linearly between nodes.
pub fn maximal_rearranged<T: Real>(f: &StepFn<T>, u: &LineMeasure<T>, ts: &[T]) -> Result<PiecewiseCurve<T>> {
    if f.is_zero() || ts.is_empty() {
        return Ok(PiecewiseCurve::zero());
    }
    let vals = ts.iter().map(|t| maximal_rearranged_at(f, u, *t).map(|v| v.get())).collect::<Result<Vec<T>>>()?;
    Ok(PiecewiseCurve::linear(ts.to_vec(), vals, Some(Monotone::Nonincreasing)))
}

/// Finite family of intervals `Q_j` with subsets `E_j ⊂ Q_j` (finite unions of subintervals).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CubeFamily<T> {
    pub pairs: Vec<((T, T), Vec<(T, T)>)>,
}

impl<T: Real> CubeFamily<T> {
    pub fn new(pairs: Vec<((T, T), Vec<(T, T)>)>) -> Result<Self> {
        for ((a, b), es) in &pairs {
            if !(a < b) {
                return Err(Error::Invalid("cube must have positive length".into()));
            }
            if es.iter().any(|(c, d)| !(c < d) || c < a || d > b) {
                return Err(Error::Invalid("E_j must be nonempty subintervals of Q_j".into()));
            }
            if es.is_empty() {
                return Err(Error::Invalid("E_j must have positive measure".into()));
            }
        }
        Ok(CubeFamily { pairs })
    }

    fn e_union(&self) -> Vec<(T, T)> {
        self.pairs.iter().flat_map(|(_, es)| es.iter().copied()).collect()
    }

    /// Whether the `E_j` are pairwise disjoint.
    pub fn disjoint_sets(&self) -> bool {
        let mut all = self.e_union();
        all.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        all.windows(2).all(|w| w[0].1 <= w[1].0)
    }

    /// `W(u(∪Q_j)) / W(u(∪E_j)) / max_j (|Q_j|/|E_j|)^q`.
    pub fn ratio(&self, u: &LineMeasure<T>, w: &Weight<T>, q: T) -> ExtReal<T> {
        let wq = w_at(w, union_mass(u, self.pairs.iter().map(|p| p.0).collect()));
        let we = w_at(w, union_mass(u, self.e_union()));
        let m = self
            .pairs
            .iter()
            .map(|((a, b), es)| {
                let le: T = merge(es.clone()).iter().map(|(c, d)| *d - *c).sum();
                (*b - *a) / le
            })
            .fold(T::zero(), T::max);
        wq / we / ExtReal::new(m.powf(q))
    }
}

fn w_at<T: Real>(w: &Weight<T>, m: ExtReal<T>) -> ExtReal<T> {
    if m.is_infinite() {
        w.total()
    } else {
        ExtReal::new(w.primitive(m.get()))
    }
}

/// `u(2Q)/u(Q)` with `2Q` the concentric interval of twice the length.
pub fn doubling_ratio<T: Real>(u: &LineMeasure<T>, a: T, b: T) -> ExtReal<T> {
    let h = (b - a) * T::half();
    u.mass(a - h, b + h) / u.mass(a, b)
}

/// `(φ_Q(t), φ'_Q(t))` for `Q = (a, b)`:
/// `φ_Q(t) = u(Q)/|Q| · max{|E| : E ⊂ Q, u(E) = t}`, right derivative `u(Q)/|Q| · 1/u` at the cut.
pub fn phi_q<T: Real>(u: &LineMeasure<T>, q: (T, T), t: T) -> Result<(T, T)> {
    let (a, b) = q;
    let len = b - a;
    let uq = u.mass(a, b).get();
    if !(uq > T::zero()) {
        return Err(Error::DegenerateMeasure(format!("u vanishes on ({a}, {b})")));
    }
    let avg = uq / len;
    if t >= uq {
        return Ok((uq, T::zero()));
    }
    let t = t.max(T::zero());
    if let MeasureFamily::Step { breaks, densities } = u.family() {
        // sort the pieces of Q by density
        let mut pieces: Vec<(T, T)> = Vec::new();
        if a < breaks[0] {
            return Err(Error::DegenerateMeasure(format!("u vanishes on ({a}, {})", breaks[0].min(b))));
        }
        for i in 0..breaks.len() {
            let lo = breaks[i].max(a);
            let hi = breaks.get(i + 1).copied().unwrap_or(T::infinity()).min(b);
            if hi > lo {
                let d = densities[i] * u.scale();
                if d == T::zero() {
                    return Err(Error::DegenerateMeasure(format!("u vanishes on ({lo}, {hi})")));
                }
                pieces.push((d, hi - lo));
            }
        }
        pieces.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        let (mut m, mut l) = (T::zero(), T::zero());
        for (d, w) in pieces {
            if m + d * w > t {
                return Ok((avg * (l + (t - m) / d), avg / d));
            }
            m = m + d * w;
            l = l + w;
        }
        return Ok((uq, T::zero()));
    }
    let r_near = if a <= T::zero() && b >= T::zero() { T::zero() } else { a.abs().min(b.abs()) };
    let r_far = a.abs().max(b.abs());
    let core = |r: T| -> (T, T) {
        let lo = a.max(-r);
        let hi = b.min(r);
        if hi > lo {
            (u.mass(lo, hi).get(), hi - lo)
        } else {
            (T::zero(), T::zero())
        }
    };
    match u.radial() {
        Radial::Constant => Ok((t, T::one())),
        Radial::NotRadial => unreachable!("step measures are handled above"),
        radial => {
            let increasing = radial == Radial::Increasing;
            // mass of the low-density part of Q cut at |x| = r
            let low = |r: T| if increasing { core(r).0 } else { uq - core(r).0 };
            let (mut lo, mut hi) = (r_near, r_far);
            for _ in 0..200 {
                let mid = (lo + hi) * T::half();
                if mid <= lo || mid >= hi {
                    break;
                }
                if (low(mid) <= t) == increasing {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let r = if increasing { lo } else { hi };
            let length = if increasing { core(r).1 } else { len - core(r).1 };
            Ok((avg * length, avg / u.density(r)))
        }
    }
}

/// Intervals `(0, 2^k)`, `(-2^k, 2^k)`, `(2^k, 2^{k+1})`, `(-2^{k+1}, -2^k)` for `k ∈ [kmin, kmax]`.
pub fn cube_grid<T: Real>(kmin: i32, kmax: i32) -> Vec<(T, T)> {
    let s = |k: i32| T::lit(2f64.powi(k));
    let mut out = Vec::new();
    for k in kmin..=kmax {
        out.extend([(T::zero(), s(k)), (-s(k), s(k)), (s(k), s(k + 1)), (-s(k + 1), -s(k))]);
    }
    out
}

/// `Φ_u(t) = sup_Q φ'_Q(u(Q) t)` over the declared intervals; 0 for `t >= 1`.
pub fn phi_u_global<T: Real>(u: &LineMeasure<T>, qs: &[(T, T)], t: T) -> T {
    if t >= T::one() {
        return T::zero();
    }
    qs.iter()
        .filter_map(|q| {
            let uq = u.mass(q.0, q.1).get();
            phi_q(u, *q, uq * t).ok().map(|v| v.1)
        })
        .fold(T::zero(), T::max)
}

/// `Φ_u` sampled on a log grid of `(0, 1)` with its primitive `Ψ(x) = ∫_0^x Φ_u`.
#[derive(Clone, Debug)]
pub struct PhiProfile<T> {
    pub xs: Vec<T>,
    pub phi: Vec<T>,
    pub psi: Vec<T>,
    /// `Φ_u(x) ~ x^{-beta}` below the grid.
    pub beta: T,
}

impl<T: Real> PhiProfile<T> {
    /// Grid `10^{-decades} .. 1` with `per_decade` log-steps per decade; 5-point
    /// Gauss–Legendre in `x` on each step, power-law head below the grid.
    pub fn new(u: &LineMeasure<T>, qs: &[(T, T)], decades: u32, per_decade: usize) -> Self {
        const GL: [(f64, f64); 5] = [
            (0.0, 0.568_888_888_888_888_9),
            (-0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (0.538_469_310_105_683_1, 0.478_628_670_499_366_5),
            (-0.906_179_845_938_664, 0.236_926_885_056_189_1),
            (0.906_179_845_938_664, 0.236_926_885_056_189_1),
        ];
        let per = per_decade.max(1);
        let n = decades as usize * per;
        let h = T::lit(10f64.ln()) / T::of_usize(per);
        let lx0 = -T::of_usize(decades as usize) * T::lit(10f64.ln());
        let xs: Vec<T> = (0..=n).map(|i| (lx0 + h * T::of_usize(i)).exp()).collect();
        let top = T::one() - T::epsilon();
        let phi: Vec<T> = xs.iter().map(|x| phi_u_global(u, qs, x.min(top))).collect();
        let beta = -((phi[1] / phi[0]).ln() / h);
        let beta = beta.max(T::zero()).min(T::lit(1.0 - 1e-9));
        let mut psi = vec![xs[0] * phi[0] / (T::one() - beta)];
        for i in 1..=n {
            let (a, b) = (xs[i - 1], xs[i]);
            let (mid, rad) = ((a + b) * T::half(), (b - a) * T::half());
            let seg: T = GL.iter().map(|(z, wt)| T::lit(*wt) * phi_u_global(u, qs, mid + rad * T::lit(*z))).sum();
            psi.push(psi[i - 1] + seg * rad);
        }
        PhiProfile { xs, phi, psi, beta }
    }

    /// `Ψ(x)`, log-log interpolated, constant for `x >= 1`.
    pub fn psi(&self, x: T) -> T {
        if x <= T::zero() {
            return T::zero();
        }
        let n = self.xs.len() - 1;
        if x >= self.xs[n] {
            return self.psi[n];
        }
        if x <= self.xs[0] {
            return self.psi[0] * (x / self.xs[0]).powf(T::one() - self.beta);
        }
        let i = self.xs.partition_point(|v| *v <= x) - 1;
        let s = (x / self.xs[i]).ln() / (self.xs[i + 1] / self.xs[i]).ln();
        (self.psi[i].ln() * (T::one() - s) + self.psi[i + 1].ln() * s).exp()
    }
}

/// `((Mf)_u^*(t), ∫_0^∞ Φ_u(s) f_u^*(st) ds)`; the integral is
/// `Σ_j v_j (Ψ(m_j/t) - Ψ(m_{j-1}/t))` over the pieces of `f_u^*`.
pub fn ln_bound<T: Real>(f: &StepFn<T>, u: &LineMeasure<T>, t: T, prof: &PhiProfile<T>) -> Result<(ExtReal<T>, T)> {
    if f.is_zero() {
        return Ok((ExtReal::zero(), T::zero()));
    }
    let lhs = maximal_rearranged_at(f, u, t)?;
    let fs = rearrange(f, u)?;
    let rhs = fs.pieces().map(|(a, b, v)| v * (prof.psi(b / t) - prof.psi(a / t))).sum();
    Ok((lhs, rhs))
}

/// `sup_{E ⊂ Q} W(u(Q))/W(u(E)) · (|E|/|Q|)^q`, via the extremal sets of [`phi_q`]:
/// `sup_τ W(u(Q))/W(τ) · (φ_Q(τ)/u(Q))^q`.
pub fn single_cube_constant<T: Real>(u: &LineMeasure<T>, w: &Weight<T>, q: T, cube: (T, T)) -> Result<ExtReal<T>> {
    single_cube_with(u, |m| w.primitive(m), q, cube)
}

fn single_cube_with<T: Real>(u: &LineMeasure<T>, wf: impl Fn(T) -> T, q: T, cube: (T, T)) -> Result<ExtReal<T>> {
    let uq = u.mass(cube.0, cube.1).get();
    let wq = wf(uq);
    if wq == T::zero() {
        return Ok(ExtReal::zero());
    }
    let ratio = |tau: T| -> Result<ExtReal<T>> {
        let (ph, _) = phi_q(u, cube, tau)?;
        Ok(ExtReal::new(wq) / ExtReal::new(wf(tau)) * ExtReal::new((ph / uq).powf(q)))
    };
    let n = 97;
    let mut best = (T::zero(), ExtReal::zero());
    let mut vals = Vec::with_capacity(n);
    for i in 0..n {
        let tau = uq * T::lit(10f64.powf(-12.0 * (n - 1 - i) as f64 / (n - 1) as f64));
        let v = ratio(tau)?;
        if v.is_infinite() {
            return Ok(v);
        }
        vals.push((tau, v));
        if v > best.1 {
            best = (tau, v);
        }
    }
    let i = vals.iter().position(|p| p.0 == best.0).unwrap();
    if i > 0 && i + 1 < n {
        let (_, y) = golden_max(|tau| ratio(tau).map(|v| v.get()).unwrap_or(T::zero()), vals[i - 1].0, vals[i + 1].0, T::tol(1e-12) * best.0);
        best.1 = best.1.max(ExtReal::new(y));
    }
    Ok(best.1)
}

/// Search budget for the cube-family condition.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SearchBudget {
    pub kmin: i32,
    pub kmax: i32,
    /// Slice fractions `2^{-1} .. 2^{-fractions}`.
    pub fractions: u32,
    /// Largest number of disjoint cubes in a structured family.
    pub family_size: usize,
    pub random: usize,
    pub seed: u64,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget { kmin: -8, kmax: 8, fractions: 12, family_size: 8, random: 400, seed: 7 }
    }
}

/// End slices of `(a, b)` of relative size `fr`: left end, right end, and
/// around the point of `Q` closest to the origin.
fn slices<T: Real>(a: T, b: T, fr: T) -> Vec<(T, T)> {
    let l = (b - a) * fr;
    let c = T::zero().max(a).min(b);
    let lo = (c - l * T::half()).max(a).min(b - l);
    vec![(a, a + l), (b - l, b), (lo, lo + l)]
}

/// Largest ratio `W(u(∪Q_j))/W(u(∪E_j)) / max_j (|Q_j|/|E_j|)^q` over single
/// cubes (exact in `E`), disjoint dyadic families with equal slice fractions,
/// mixed-scale pairs and seeded random families with disjoint `E_j`.
pub fn search_cube_condition<T: Real>(u: &LineMeasure<T>, w: &Weight<T>, q: T, budget: &SearchBudget) -> Result<Verdict<T>> {
    let name = "cube-family";
    let two = |k: i32| T::lit(2f64.powi(k));
    let mut best = (ExtReal::zero(), Vec::new());
    let consider = |v: ExtReal<T>, wit: Vec<T>, best: &mut (ExtReal<T>, Vec<T>)| {
        if v > best.0 {
            *best = (v, wit);
        }
    };

    // single cubes along the four scale families
    let mut growth = false;
    let ks: Vec<i32> = (budget.kmin..=budget.kmax).collect();
    let scales: Vec<T> = ks.iter().map(|&k| two(k)).collect();
    for fam in 0..4 {
        let mut series = Vec::with_capacity(ks.len());
        for &k in &ks {
            let cube = cube_grid::<T>(k, k)[fam];
            let v = single_cube_constant(u, w, q, cube)?;
            series.push(v);
            consider(v, vec![cube.0, cube.1], &mut best);
        }
        if let Some(fin) = series.iter().map(|v| v.finite()).collect::<Option<Vec<T>>>() {
            growth |= growth_flag(&scales, &fin);
        }
    }

    // disjoint dyadic families
    let fracs: Vec<T> = (1..=budget.fractions).map(|i| two(-(i as i32))).collect();
    for &k in &ks {
        for m in 2..=budget.family_size.max(2) {
            for side in 0..3 {
                for &fr in &fracs {
                    let mut pairs = Vec::with_capacity(m);
                    for j in 0..m {
                        let a = two(k) * T::of_usize(j);
                        let (a, b) = if side == 2 { (-a - two(k), -a) } else { (a, a + two(k)) };
                        pairs.push(((a, b), vec![slices(a, b, fr)[side.min(1)]]));
                    }
                    let fam = CubeFamily { pairs };
                    consider(fam.ratio(u, w, q), vec![two(k), T::of_usize(m), fr], &mut best);
                }
            }
        }
    }

    // mixed scales: a small cube at the origin with a thin slice, a large one far out
    for &k in &ks {
        for &kf in &ks {
            if kf <= k {
                continue;
            }
            for &fr in &fracs {
                let near = (T::zero(), two(k));
                let far = (two(kf), two(kf + 1));
                let fam = CubeFamily {
                    pairs: vec![(near, vec![(T::zero(), two(k) * fr)]), (far, vec![(far.0, far.0 + (far.1 - far.0) * fr)])],
                };
                consider(fam.ratio(u, w, q), vec![two(k), two(kf), fr], &mut best);
            }
        }
    }

    // random families
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let span = budget.kmax - budget.kmin;
    let mut done = 0;
    while done < budget.random {
        let m = rng.gen_range(1..=3usize);
        let mut pairs = Vec::with_capacity(m);
        for _ in 0..m {
            let len = two(budget.kmin + rng.gen_range(0..=span));
            let c = two(budget.kmin + rng.gen_range(0..=span)) * if rng.gen_bool(0.5) { T::one() } else { -T::one() };
            let (a, b) = (c - len * T::half(), c + len * T::half());
            let fr = T::lit(rng.gen_range(1e-4..1.0f64));
            let el = len * fr;
            let off = T::lit(rng.gen::<f64>()) * (len - el);
            pairs.push(((a, b), vec![(a + off, a + off + el)]));
        }
        let fam = CubeFamily { pairs };
        if !fam.disjoint_sets() {
            continue;
        }
        done += 1;
        consider(fam.ratio(u, w, q), fam.pairs.iter().flat_map(|p| [p.0 .0, p.0 .1]).collect(), &mut best);
    }

    Ok(Verdict {
        condition: name.into(),
        holds: best.0.is_finite() && !growth,
        constant: best.0,
        witness: best.1,
        growth_flag: growth,
        grid: None,
        note: Some(format!("scales 2^{}..2^{}, {} random families", budget.kmin, budget.kmax, budget.random)),
    })
}

/// Sufficient condition for `M : Λ_u^{p0}(w0) -> Λ_u^{p1,∞}(w1)` through `Ψ = ∫Φ_u`:
/// for `p0 > 1` the pair
/// `(∫_0^r Ψ(t/r)^{p0'} W0^{-p0'} w0)^{1/p0'} W1^{1/p1}(r) <= C`, `W1^{1/p1} <= C W0^{1/p0}`;
/// for `p0 <= 1`, `Ψ(t/r) <= C W0^{1/p0}(t)/W1^{1/p1}(r)` for `t < r`.
pub fn check_weak_sufficient<T: Real>(
    prof: &PhiProfile<T>,
    w0: &Weight<T>,
    w1: &Weight<T>,
    p0: T,
    p1: T,
    grid: &GridSpec,
    quad: &Quad,
) -> Result<Verdict<T>> {
    let rs = grid.points::<T>();
    if w1.total().is_zero() {
        return Ok(Verdict::from_samples("weak-sufficient", &rs, &vec![ExtReal::zero(); rs.len()], Some(*grid)));
    }
    let a1: Vec<T> = rs.iter().map(|r| w1.primitive(*r).powf(p1.recip())).collect();
    if p0 <= T::one() {
        let name = "weak-sufficient-b";
        let a0: Vec<ExtReal<T>> = rs.iter().map(|t| ExtReal::new(w0.primitive(*t).powf(p0.recip()))).collect();
        let mut vals = Vec::with_capacity(rs.len());
        let mut wit = Vec::with_capacity(rs.len());
        for (i, &r) in rs.iter().enumerate() {
            let row: Vec<ExtReal<T>> = (0..=i).map(|j| ExtReal::new(prof.psi(rs[j] / r) * a1[i]) / a0[j]).collect();
            let (j, v) = argmax(&row);
            vals.push(v);
            wit.push(rs[j]);
        }
        let mut v = Verdict::from_samples(name, &rs, &vals, Some(*grid));
        if let Some(&r) = v.witness.first() {
            let i = rs.iter().position(|x| *x == r).unwrap();
            v.witness = vec![wit[i], r];
        }
        return Ok(v);
    }
    let name = "weak-sufficient-a";
    let pp = conjugate(p0);
    let (Some(d0), Some(m0)) = (w0.exp0(), w0.prim_exp0()) else {
        return Ok(Verdict::divergent(name, "W0 vanishes near 0", Some(*grid)));
    };
    let head = d0.mul(m0.pow(-pp)).mul(crate::piecewise::Asym::new((T::one() - prof.beta) * pp, T::zero()));
    if !head.integrable_at_zero() {
        return Ok(Verdict::divergent(name, "Ψ(t/r)^{p0'} W0^{-p0'} w0 not integrable at 0", Some(*grid)));
    }
    let mut cuts_base: Vec<T> = prof.xs.iter().step_by(4).copied().collect();
    cuts_base.extend(w0.breakpoints());
    let mut vals = Vec::with_capacity(rs.len());
    for (i, &r) in rs.iter().enumerate() {
        let mut cuts: Vec<T> = prof.xs.iter().step_by(4).map(|x| *x * r).collect();
        cuts.extend(w0.breakpoints().into_iter().filter(|b| *b < r));
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let h = |t: T| {
            let d = w0.density(t);
            if d == T::zero() {
                T::zero()
            } else {
                (prof.psi(t / r) / w0.primitive(t)).powf(pp) * d
            }
        };
        let int = quad.split(h, T::zero(), r, &cuts)?;
        let first = ExtReal::new(int.powf(pp.recip()) * a1[i]);
        let second = ExtReal::new(a1[i]) / ExtReal::new(w0.primitive(r).powf(p0.recip()));
        vals.push(first.max(second));
    }
    Ok(Verdict::from_samples(name, &rs, &vals, Some(*grid)))
}

/// `w̄(t) = w(t^{(n+α)/n}) t^{α/n}`, primitive `n/(n+α) · W(t^{(n+α)/n})`.
pub fn power_transform<T: Real>(w: &Weight<T>, alpha: T, n: u32) -> Result<Weight<T>> {
    if !(alpha > T::zero()) {
        return Err(Error::Invalid(format!("power transform needs alpha > 0, got {alpha}")));
    }
    let nn = T::of_usize(n as usize);
    Weight::transformed(w.clone(), (nn + alpha) / nn)
}

/// Which weights `u` give `M : L^{p,q}(u) -> L^{r,s}(u)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LpqClass {
    Impossible { reason: String },
    /// `u ∈ A_1`.
    A1,
    /// `u(Q)/|Q|^p <= C u(E)/|E|^p`, `E ⊂ Q`.
    RestrictedWeak { p: f64 },
    /// `u ∈ A_p`.
    Ap { p: f64 },
}

impl LpqClass {
    pub fn label(&self) -> String {
        match self {
            LpqClass::Impossible { .. } => "impossible".into(),
            LpqClass::A1 => "A_1".into(),
            LpqClass::RestrictedWeak { p } => format!("u(Q)/|Q|^{p} <= C u(E)/|E|^{p}"),
            LpqClass::Ap { p } => format!("A_{p}"),
        }
    }
}

/// Branch table for `M : L^{p,q}(u) -> L^{r,s}(u)`, `p, r ∈ (0, ∞)`, `q, s ∈ (0, ∞]`.
pub fn classify_lpq(p: f64, q: f64, r: f64, s: f64) -> LpqClass {
    assert!(p > 0.0 && q > 0.0 && r > 0.0 && s > 0.0, "indices must be positive");
    let imp = |reason: &str| LpqClass::Impossible { reason: reason.into() };
    if p < 1.0 {
        return imp("p < 1");
    }
    if p != r {
        return imp("p != r");
    }
    if s < q {
        return imp("s < q");
    }
    if p == 1.0 {
        if q <= 1.0 && s.is_infinite() {
            return LpqClass::A1;
        }
        return imp(if s.is_finite() { "p = 1 needs s = inf" } else { "p = 1 needs q <= 1" });
    }
    if q <= 1.0 && s.is_infinite() {
        LpqClass::RestrictedWeak { p }
    } else {
        LpqClass::Ap { p }
    }
}

/// Test a branch of [`classify_lpq`] on `u` over the interval families; `None` for impossible cells.
pub fn check_lpq<T: Real>(class: &LpqClass, u: &LineMeasure<T>, families: &[Vec<(T, T)>]) -> Result<Option<Verdict<T>>> {
    Ok(match class {
        LpqClass::Impossible { .. } => None,
        LpqClass::A1 => Some(check_ap(u, T::one(), families)),
        LpqClass::Ap { p } => Some(check_ap(u, T::lit(*p), families)),
        LpqClass::RestrictedWeak { p } => {
            let p = T::lit(*p);
            let mut best: Option<Verdict<T>> = None;
            let mut growth = false;
            for fam in families {
                let xs: Vec<T> = fam.iter().map(|(a, b)| *b - *a).collect();
                let vals = fam.iter().map(|c| single_cube_with(u, |m| m, p, *c)).collect::<Result<Vec<_>>>()?;
                let mut v = Verdict::from_samples("restricted-weak", &xs, &vals, None);
                growth |= v.growth_flag;
                let (i, _) = argmax(&vals);
                if !fam.is_empty() {
                    v.witness = vec![fam[i].0, fam[i].1];
                }
                if best.as_ref().map_or(true, |b| v.constant > b.constant) {
                    best = Some(v);
                }
            }
            best.map(|mut v| {
                v.growth_flag = growth;
                v.holds = v.constant.is_finite() && !growth;
                v
            })
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chi() -> StepFn<f64> {
        StepFn::indicator(0.0, 1.0, 1.0).unwrap()
    }

    #[test]
    fn value_examples() {
        assert!((maximal_value(&chi(), 2.0) - 0.5).abs() < 1e-15);
        assert_eq!(maximal_value(&chi(), 0.5), 1.0);
        assert_eq!(maximal_value(&StepFn::zero(), 0.5), 0.0);
        assert!((maximal_value(&chi(), -3.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn level_set_examples() {
        let ls = maximal_level_set(&chi(), 0.5);
        assert_eq!(ls.len(), 1);
        assert!((ls[0].0 + 1.0).abs() < 1e-14 && (ls[0].1 - 2.0).abs() < 1e-14);
        assert!(maximal_level_set(&chi(), 1.0).is_empty());
        let s = 1e-3;
        let ls = maximal_level_set(&chi(), s);
        let len: f64 = ls.iter().map(|(a, b)| b - a).sum();
        assert!((len - (2.0 / s - 1.0)).abs() < 1e-9);
    }

    #[test]
    fn level_sets_agree_with_pointwise_values() {
        let f = StepFn::new(vec![0.0, 1.0, 3.0, 4.0, 6.0], vec![1.0, 0.0, 3.0, 0.5]).unwrap();
        for &s in &[0.1, 0.4, 0.7, 1.1, 2.0] {
            let ls = maximal_level_set(&f, s);
            for i in 0..400 {
                let x = -8.0 + i as f64 * 0.0503;
                let inside = ls.iter().any(|(a, b)| *a < x && x < *b);
                let m = maximal_value(&f, x);
                if (m - s).abs() > 1e-9 {
                    assert_eq!(inside, m > s, "x={x} s={s} Mf={m}");
                }
            }
        }
    }

    #[test]
    fn rearranged_indicator() {
        let u = LineMeasure::lebesgue();
        for &t in &[1.0, 2.0, 5.0] {
            let v = maximal_rearranged_at(&chi(), &u, t).unwrap().get();
            assert!((v - 2.0 / (t + 1.0)).abs() < 1e-12, "t={t}");
        }
        assert!((maximal_rearranged_at(&chi(), &u, 0.5).unwrap().get() - 1.0).abs() < 1e-12);
        assert!(maximal_rearranged_at(&StepFn::zero(), &u, 0.5).unwrap().is_zero());
    }

    #[test]
    fn phi_examples() {
        let one = LineMeasure::<f64>::lebesgue();
        assert_eq!(phi_q(&one, (2.0, 5.0), 1.0).unwrap(), (1.0, 1.0));
        assert_eq!(phi_q(&one, (2.0, 5.0), 4.0).unwrap(), (3.0, 0.0));
        let e = LineMeasure::<f64>::exp_abs();
        for &t in &[0.1, 0.5, 1.0, 1.7] {
            let (ph, d) = phi_q(&e, (0.0, 1.0), t).unwrap();
            let em1 = std::f64::consts::E - 1.0;
            assert!((ph - em1 * (1.0 + t).ln()).abs() < 1e-12);
            assert!((d - em1 / (1.0 + t)).abs() < 1e-9);
        }
        let uq = e.mass(-1.0, 2.0).get();
        assert!((phi_q(&e, (-1.0, 2.0), uq).unwrap().0 - uq).abs() < 1e-12);
        let s = LineMeasure::<f64>::step(vec![0.0, 1.0, 2.0], vec![3.0, 1.0, 2.0]).unwrap();
        // sorted densities 1 (length 1), 2, 3
        let (ph, d) = phi_q(&s, (0.0, 3.0), 2.0).unwrap();
        assert!((ph - 2.0 * 1.5).abs() < 1e-14 && (d - 1.0).abs() < 1e-14);
        assert!(matches!(phi_q(&s, (-1.0, 1.0), 0.5), Err(Error::DegenerateMeasure(_))));
    }

    #[test]
    fn phi_is_concave_and_above_diagonal() {
        let us = [LineMeasure::<f64>::exp_abs(), LineMeasure::power_abs(1.0).unwrap(), LineMeasure::power_abs(-0.5).unwrap(), LineMeasure::one_plus_abs()];
        for u in &us {
            for q in [(-1.0, 3.0), (0.5, 2.0), (-4.0, -1.0)] {
                let uq = u.mass(q.0, q.1).get();
                let ts: Vec<f64> = (0..=64).map(|i| uq * i as f64 / 64.0).collect();
                let ph: Vec<f64> = ts.iter().map(|t| phi_q(u, q, *t).unwrap().0).collect();
                for i in 1..ts.len() {
                    assert!(ph[i] >= ts[i] * (1.0 - 1e-9));
                    assert!(ph[i] >= ph[i - 1]);
                }
                for i in 1..ts.len() - 1 {
                    assert!(ph[i + 1] - 2.0 * ph[i] + ph[i - 1] <= 1e-9 * uq);
                }
                assert!((ph[64] - uq).abs() <= 1e-12 * uq);
            }
        }
    }

    #[test]
    fn global_phi() {
        let one = LineMeasure::<f64>::lebesgue();
        let qs = cube_grid::<f64>(-4, 4);
        assert_eq!(phi_u_global(&one, &qs, 0.3), 1.0);
        assert_eq!(phi_u_global(&one, &qs, 1.0), 0.0);
        let prof = PhiProfile::new(&one, &qs, 6, 8);
        assert!((prof.psi(0.25) - 0.25).abs() < 1e-12);
        assert!((prof.psi(3.0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn ln_bound_reduces_to_double_star() {
        let one = LineMeasure::<f64>::lebesgue();
        let prof = PhiProfile::new(&one, &cube_grid(-4, 4), 8, 8);
        let f = StepFn::new(vec![0.0, 1.0, 2.0], vec![2.0, 1.0]).unwrap();
        for &t in &[0.5, 1.5, 4.0] {
            let (l, r) = ln_bound(&f, &one, t, &prof).unwrap();
            let fss = crate::piecewise::double_star(&f, t).get();
            assert!((r - fss).abs() < 1e-10);
            assert!(l.get() <= 2.0 * r + 1e-12);
        }
    }

    #[test]
    fn cube_search_examples() {
        let b = SearchBudget { random: 100, ..Default::default() };
        let one = LineMeasure::<f64>::lebesgue();
        let v = search_cube_condition(&one, &Weight::one(), 1.0, &b).unwrap();
        assert!(v.holds && (v.constant.get() - 1.0).abs() < 1e-9, "{v:?}");
        let chi1 = Weight::chi(1.0).unwrap();
        let v = search_cube_condition(&LineMeasure::exp_abs(), &chi1, 1.0, &b).unwrap();
        assert!(v.holds, "{v:?}");
        let v = search_cube_condition(&LineMeasure::one_plus_abs(), &chi1, 1.0, &b).unwrap();
        assert!(v.holds, "{v:?}");
        let v = search_cube_condition(&LineMeasure::exp_abs(), &Weight::one(), 1.0, &b).unwrap();
        assert!(!v.holds, "{v:?}");
    }

    #[test]
    fn exp_single_cube_bound() {
        let u = LineMeasure::<f64>::exp_abs();
        let w = Weight::chi(1.0).unwrap();
        let bound = 2.0 * std::f64::consts::E;
        for &(a, b) in &[(0.0, 1e-6), (0.0, 1.0), (3.0, 3.5), (-2.0, 5.0), (-20.0, 20.0), (10.0, 10.000_001)] {
            let c = single_cube_constant(&u, &w, 1.0, (a, b)).unwrap().get();
            assert!(c <= bound + 1e-9, "({a},{b}) -> {c}");
        }
        assert!(doubling_ratio(&u, 10.0, 20.0).get() > 100.0);
    }

    #[test]
    fn power_transform_examples() {
        let w = power_transform(&Weight::<f64>::one(), 1.0, 1).unwrap();
        assert!((w.density(3.0) - 3.0).abs() < 1e-14);
        assert!((w.primitive(3.0) - 4.5).abs() < 1e-14);
        let w = power_transform(&Weight::<f64>::chi(1.0).unwrap(), 1.0, 1).unwrap();
        assert!((w.density(0.5) - 0.5).abs() < 1e-14);
        assert_eq!(w.density(1.5), 0.0);
        let w = power_transform(&Weight::<f64>::power(0.5).unwrap(), 1e-12, 1).unwrap();
        assert!((w.density(2.0) - 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn lpq_table() {
        assert!(matches!(classify_lpq(0.5, 0.5, 0.5, f64::INFINITY), LpqClass::Impossible { .. }));
        assert_eq!(classify_lpq(2.0, 1.0, 2.0, f64::INFINITY), LpqClass::RestrictedWeak { p: 2.0 });
        assert_eq!(classify_lpq(2.0, 2.0, 2.0, 2.0), LpqClass::Ap { p: 2.0 });
        assert_eq!(classify_lpq(1.0, 0.5, 1.0, f64::INFINITY), LpqClass::A1);
        assert!(matches!(classify_lpq(1.0, 2.0, 1.0, f64::INFINITY), LpqClass::Impossible { .. }));
        let fams = crate::weights::ap_interval_families::<f64>(-6, 6);
        let one = LineMeasure::lebesgue();
        let v = check_lpq(&classify_lpq(2.0, 1.0, 2.0, f64::INFINITY), &one, &fams).unwrap().unwrap();
        assert!(v.holds && (v.constant.get() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn weak_sufficient_reduces_for_lebesgue() {
        let one = LineMeasure::<f64>::lebesgue();
        let prof = PhiProfile::new(&one, &cube_grid(-4, 4), 8, 8);
        let grid = GridSpec::new(1e-3, 1e3, 25).unwrap();
        let q = Quad::default();
        for &(al, p) in &[(0.0, 0.5), (-0.5, 0.5), (-0.5, 1.0), (0.0, 2.0), (1.0, 1.5), (1.0, 3.0)] {
            let w = Weight::power(al).unwrap();
            let a = check_weak_sufficient(&prof, &w, &w, p, p, &grid, &q).unwrap();
            let b = crate::weights::check_bp_weak(&w, &w, p, p, &grid, &q).unwrap();
            assert_eq!(a.holds, b.holds, "alpha={al} p={p}: {a:?} vs {b:?}");
            if b.constant.is_finite() {
                assert!((a.constant.get() - b.constant.get()).abs() < 1e-6 * b.constant.get());
            }
        }
        let zero = Weight::constant(0.0).unwrap();
        let v = check_weak_sufficient(&prof, &Weight::one(), &zero, 1.0, 1.0, &grid, &q).unwrap();
        assert!(v.holds && v.constant.is_zero());
    }
}
