//! Brute-force lower bounds for suprema over the cone of nonnegative
//! nonincreasing step functions.
//!
//! A candidate is the vector `c` of values on fixed pieces. Every objective
//! here is 0-homogeneous, so iterates are renormalised to `max c = 1`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::real::Real;

/// A 0-homogeneous functional of the piece values.
pub trait Objective<T: Real> {
    fn dim(&self) -> usize;

    /// Ratio value (may be `+inf`).
    fn value(&self, c: &[T]) -> T;

    /// Gradient of `log value`; `None` falls back to finite differences.
    fn log_grad(&self, _c: &[T]) -> Option<Vec<T>> {
        None
    }

    /// Positive per-piece weights used both to precondition the gradient and
    /// as PAVA weights.
    fn metric(&self) -> Vec<T> {
        vec![T::one(); self.dim()]
    }
}

/// `(Σ coef_i c_i^q)^{1/q}`, or `max_i coef_i c_i` when `q = inf`.
#[derive(Clone, Debug)]
pub struct PowerSum<T> {
    pub coef: Vec<T>,
    pub q: T,
}

impl<T: Real> PowerSum<T> {
    pub fn new(coef: Vec<T>, q: T) -> Self {
        PowerSum { coef, q }
    }

    fn inner(&self, c: &[T]) -> T {
        if self.q.is_infinite() {
            return self.coef.iter().zip(c).map(|(a, x)| *a * *x).fold(T::zero(), T::max);
        }
        self.coef
            .iter()
            .zip(c)
            .filter(|(a, x)| **a > T::zero() && **x > T::zero())
            .map(|(a, x)| *a * x.powf(self.q))
            .sum()
    }

    pub fn eval(&self, c: &[T]) -> T {
        let s = self.inner(c);
        if self.q.is_infinite() {
            s
        } else {
            s.powf(self.q.recip())
        }
    }

    /// `∂ log(sum)/∂c_i`, non-finite entries reported as `None`.
    fn log_grad(&self, c: &[T]) -> Vec<Option<T>> {
        let s = self.inner(c);
        if self.q.is_infinite() {
            let mut best = (0, T::neg_infinity());
            for (i, (a, x)) in self.coef.iter().zip(c).enumerate() {
                if *a * *x > best.1 {
                    best = (i, *a * *x);
                }
            }
            return (0..c.len()).map(|i| Some(if i == best.0 { c[i].recip() } else { T::zero() })).collect();
        }
        self.coef
            .iter()
            .zip(c)
            .map(|(a, x)| {
                if *a == T::zero() {
                    return Some(T::zero());
                }
                let g = *a * x.powf(self.q - T::one()) / s;
                g.is_finite().then_some(g)
            })
            .collect()
    }
}

/// `num(c) / den(c)`.
#[derive(Clone, Debug)]
pub struct PowerRatio<T> {
    pub num: PowerSum<T>,
    pub den: PowerSum<T>,
}

impl<T: Real> Objective<T> for PowerRatio<T> {
    fn dim(&self) -> usize {
        self.num.coef.len()
    }

    fn value(&self, c: &[T]) -> T {
        let n = self.num.eval(c);
        let d = self.den.eval(c);
        if n == T::zero() {
            T::zero()
        } else {
            n / d
        }
    }

    fn log_grad(&self, c: &[T]) -> Option<Vec<T>> {
        let gn = self.num.log_grad(c);
        let gd = self.den.log_grad(c);
        Some(
            gn.into_iter()
                .zip(gd)
                .map(|(a, b)| match (a, b) {
                    (Some(a), Some(b)) => a - b,
                    _ => T::zero(),
                })
                .collect(),
        )
    }

    fn metric(&self) -> Vec<T> {
        let m = if self.den.q.is_finite() { self.den.coef.clone() } else { vec![T::one(); self.dim()] };
        floor_metric(m)
    }
}

fn floor_metric<T: Real>(mut m: Vec<T>) -> Vec<T> {
    let top = m.iter().copied().fold(T::zero(), T::max);
    let floor = if top > T::zero() { top * T::lit(1e-12) } else { T::one() };
    for x in &mut m {
        *x = x.max(floor);
    }
    m
}

/// Objective given by a closure; gradients by finite differences.
pub struct FnObjective<T, F> {
    pub dim: usize,
    pub f: F,
    pub metric: Vec<T>,
}

impl<T: Real, F: Fn(&[T]) -> T> Objective<T> for FnObjective<T, F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn value(&self, c: &[T]) -> T {
        (self.f)(c)
    }

    fn metric(&self) -> Vec<T> {
        floor_metric(self.metric.clone())
    }
}

/// Weighted least-squares projection onto `{y_1 >= y_2 >= … >= 0}`.
pub fn pava<T: Real>(y: &[T], w: &[T]) -> Vec<T> {
    // blocks of (mean, weight, length)
    let mut blocks: Vec<(T, T, usize)> = Vec::with_capacity(y.len());
    for (&v, &wt) in y.iter().zip(w) {
        blocks.push((v, wt, 1));
        while blocks.len() > 1 {
            let n = blocks.len();
            if blocks[n - 2].0 >= blocks[n - 1].0 {
                break;
            }
            let (m1, w1, l1) = blocks[n - 2];
            let (m2, w2, l2) = blocks[n - 1];
            let wt = w1 + w2;
            blocks.truncate(n - 2);
            blocks.push(((m1 * w1 + m2 * w2) / wt, wt, l1 + l2));
        }
    }
    let mut out = Vec::with_capacity(y.len());
    for (m, _, l) in blocks {
        out.extend(std::iter::repeat(m.max(T::zero())).take(l));
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct OracleConfig {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { restarts: 8, iters: 200, seed: 0x5eed }
    }
}

#[derive(Clone, Debug)]
pub struct OracleResult<T> {
    pub value: T,
    pub argmax: Vec<T>,
    /// Best value among the characteristic starts alone.
    pub char_value: T,
}

fn normalize<T: Real>(c: &mut [T]) -> bool {
    let m = c.iter().copied().fold(T::zero(), T::max);
    if !(m > T::zero()) || !m.is_finite() {
        return false;
    }
    for x in c.iter_mut() {
        *x = *x / m;
    }
    true
}

fn numeric_log_grad<T: Real, O: Objective<T> + ?Sized>(obj: &O, c: &[T], v: T) -> Vec<T> {
    let lv = v.ln();
    let mut g = vec![T::zero(); c.len()];
    let mut x = c.to_vec();
    for i in 0..c.len() {
        let h = T::lit(1e-6) * c[i].max(T::lit(1e-6));
        x[i] = c[i] + h;
        let up = obj.value(&x);
        let gi = if c[i] > h {
            x[i] = c[i] - h;
            (up.ln() - obj.value(&x).ln()) / (h + h)
        } else {
            (up.ln() - lv) / h
        };
        x[i] = c[i];
        g[i] = if gi.is_finite() { gi } else { T::zero() };
    }
    g
}

/// Projected gradient ascent from one start; returns the final point and value.
pub fn ascend<T: Real, O: Objective<T> + ?Sized>(obj: &O, start: &[T], iters: usize) -> (Vec<T>, T) {
    let metric = obj.metric();
    let mut x = pava(start, &metric);
    if !normalize(&mut x) {
        return (x, T::zero());
    }
    let mut v = obj.value(&x);
    if !v.is_finite() {
        return (x, v);
    }
    let mut eta = T::nan();
    let mut stall = 0;
    for _ in 0..iters {
        let g = obj.log_grad(&x).unwrap_or_else(|| numeric_log_grad(obj, &x, v));
        let d: Vec<T> = g.iter().zip(&metric).map(|(g, m)| if g.is_finite() { *g / *m } else { T::zero() }).collect();
        let dmax = d.iter().fold(T::zero(), |a, b| a.max(b.abs()));
        if dmax == T::zero() {
            break;
        }
        if eta.is_nan() {
            eta = T::half() / dmax;
        }
        let mut accepted = None;
        for _ in 0..48 {
            let z: Vec<T> = x.iter().zip(&d).map(|(a, b)| *a + eta * *b).collect();
            let mut z = pava(&z, &metric);
            if normalize(&mut z) {
                let vz = obj.value(&z);
                if vz > v {
                    accepted = Some((z, vz));
                    break;
                }
            }
            eta = eta * T::half();
        }
        let Some((z, vz)) = accepted else { break };
        let gain = (vz - v) / v;
        x = z;
        v = vz;
        if !v.is_finite() {
            break;
        }
        eta = eta * T::two();
        if gain < T::lit(1e-13) {
            stall += 1;
            if stall >= 5 {
                break;
            }
        } else {
            stall = 0;
        }
    }
    (x, v)
}

/// Power-profile exponents used as deterministic starts.
pub const PROFILE_EXPONENTS: [f64; 5] = [0.25, 0.5, 0.75, 1.0, 1.5];

/// Supremum of `obj` over nonincreasing nonnegative vectors.
///
/// Starts: every prefix characteristic, `mid_i^{-γ}` power profiles (when
/// piece midpoints are given), and `cfg.restarts` random decreasing profiles.
pub fn cone_sup<T: Real, O: Objective<T> + ?Sized>(obj: &O, mids: Option<&[T]>, cfg: &OracleConfig) -> OracleResult<T> {
    let n = obj.dim();
    let mut best = OracleResult { value: T::zero(), argmax: vec![T::zero(); n], char_value: T::zero() };
    let consider = |x: Vec<T>, v: T, best: &mut OracleResult<T>| {
        if v > best.value {
            best.value = v;
            best.argmax = x;
        }
    };
    // characteristics are evaluated as is: they are where the extremal values sit
    for k in 1..=n {
        let c: Vec<T> = (0..n).map(|i| if i < k { T::one() } else { T::zero() }).collect();
        let v = obj.value(&c);
        if v > best.char_value {
            best.char_value = v;
        }
        consider(c, v, &mut best);
    }
    if best.value.is_infinite() {
        return best;
    }
    let mut starts: Vec<Vec<T>> = Vec::new();
    starts.push(best.argmax.clone());
    if let Some(m) = mids {
        for g in PROFILE_EXPONENTS {
            starts.push(m.iter().map(|t| t.powf(-T::lit(g))).collect());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.restarts {
        let cut = rng.gen_range(1..=n);
        let mut level = 1.0f64;
        let c: Vec<T> = (0..n)
            .map(|i| {
                if i >= cut {
                    return T::zero();
                }
                if rng.gen_bool(0.5) {
                    level *= rng.gen_range(0.2..1.0);
                }
                T::lit(level)
            })
            .collect();
        starts.push(c);
    }
    for s in starts {
        let (x, v) = ascend(obj, &s, cfg.iters);
        consider(x, v, &mut best);
        if best.value.is_infinite() {
            break;
        }
    }
    best
}

/// `x_1 < … < x_n`, log-spaced on `[a, b]`.
pub fn geometric_nodes<T: Real>(a: T, b: T, n: usize) -> Vec<T> {
    assert!(n >= 1 && a > T::zero() && b >= a);
    if n == 1 {
        return vec![b];
    }
    let (la, lb) = (a.ln(), b.ln());
    (0..n).map(|i| (la + (lb - la) * T::of_usize(i) / T::of_usize(n - 1)).exp()).collect()
}

/// Geometric midpoints of the pieces `(0, x_1), (x_1, x_2), …`; the first uses `x_1/2`.
pub fn piece_mids<T: Real>(nodes: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(nodes.len());
    let mut prev = T::zero();
    for &x in nodes {
        out.push(if prev == T::zero() { x * T::half() } else { (prev * x).sqrt() });
        prev = x;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pava_projects() {
        let y = [1.0, 3.0, 2.0, -1.0];
        let w = [1.0, 1.0, 1.0, 1.0];
        assert_eq!(pava(&y, &w), vec![2.0, 2.0, 2.0, 0.0]);
        let w = [3.0, 1.0, 1.0, 1.0];
        assert_eq!(pava(&[1.0, 5.0, 0.5, 0.2], &w), vec![2.0, 2.0, 0.5, 0.2]);
    }

    #[test]
    fn cauchy_schwarz_at_constants() {
        // ∫_0^1 f / (∫_0^1 f^2)^{1/2} on 4 equal pieces
        let a = vec![0.25f64; 4];
        let obj = PowerRatio { num: PowerSum::new(a.clone(), 1.0), den: PowerSum::new(a, 2.0) };
        let r = cone_sup(&obj, None, &OracleConfig::default());
        assert!((r.value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn ascent_finds_interior_optimum() {
        // sup Σ a c / (Σ b c^2)^{1/2} over the cone; unconstrained optimum c ∝ a/b is decreasing here
        let a = vec![3.0, 2.0, 1.0];
        let b = vec![1.0, 1.0, 1.0];
        let obj = PowerRatio { num: PowerSum::new(a, 1.0), den: PowerSum::new(b, 2.0) };
        let r = cone_sup(&obj, None, &OracleConfig::default());
        assert!((r.value - 14f64.sqrt()).abs() < 1e-8, "{}", r.value);
        assert!(r.char_value < r.value);
    }
}
