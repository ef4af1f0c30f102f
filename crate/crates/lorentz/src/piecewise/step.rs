//! Finite nonnegative step functions, their distribution functions and rearrangements.

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::piecewise::curve::{Monotone, PiecewiseCurve, Segment};
use crate::piecewise::measure::{Lebesgue, Measure};
use crate::real::Real;

/// `values[i]` on `[breaks[i], breaks[i+1])`, zero outside `[breaks[0], breaks[n])`.
///
/// Always canonical: adjacent values differ, no zero-valued end pieces.
/// The zero function has no breaks.
#[derive(Clone, Debug, PartialEq)]
pub struct StepFn<T> {
    breaks: Vec<T>,
    values: Vec<T>,
}

impl<T: Real> StepFn<T> {
    pub fn new(breaks: Vec<T>, values: Vec<T>) -> Result<Self> {
        if breaks.is_empty() && values.is_empty() {
            return Ok(Self::zero());
        }
        if breaks.len() != values.len() + 1 {
            return Err(Error::Invalid(format!(
                "step function needs n+1 breaks for n values, got {} and {}",
                breaks.len(),
                values.len()
            )));
        }
        if breaks.iter().any(|b| !b.is_finite()) || breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Invalid("step function breaks must be finite and strictly increasing".into()));
        }
        if values.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(Error::Invalid("step function values must be finite and >= 0".into()));
        }
        Ok(Self::canonical(breaks, values))
    }

    /// Merge equal neighbours and drop zero-width or zero-valued end pieces.
    /// `breaks` must be nondecreasing with `values.len() + 1` entries.
    fn canonical(breaks: Vec<T>, values: Vec<T>) -> Self {
        let mut bo: Vec<T> = Vec::with_capacity(breaks.len());
        let mut vo: Vec<T> = Vec::with_capacity(values.len());
        for (i, v) in values.iter().enumerate() {
            let (a, b) = (breaks[i], breaks[i + 1]);
            if b <= a {
                continue;
            }
            if vo.is_empty() {
                if *v == T::zero() {
                    continue;
                }
                bo.push(a);
            }
            if vo.last() == Some(v) {
                *bo.last_mut().unwrap() = b;
            } else {
                vo.push(*v);
                bo.push(b);
            }
        }
        while vo.last() == Some(&T::zero()) {
            vo.pop();
            bo.pop();
        }
        if vo.is_empty() {
            return Self::zero();
        }
        StepFn { breaks: bo, values: vo }
    }

    pub fn zero() -> Self {
        StepFn { breaks: Vec::new(), values: Vec::new() }
    }

    /// `c χ_[a, b)`.
    pub fn indicator(a: T, b: T, c: T) -> Result<Self> {
        Self::new(vec![a, b], vec![c])
    }

    /// Pieces `(a, b, v)`; they need not be adjacent but must be sorted and disjoint.
    pub fn from_pieces(pieces: &[(T, T, T)]) -> Result<Self> {
        let mut breaks = Vec::new();
        let mut values = Vec::new();
        for &(a, b, v) in pieces {
            match breaks.last().copied() {
                None => breaks.push(a),
                Some(end) if end == a => {}
                Some(end) if end < a => {
                    values.push(T::zero());
                    breaks.push(a);
                }
                Some(_) => return Err(Error::Invalid("pieces overlap or are unsorted".into())),
            }
            values.push(v);
            breaks.push(b);
        }
        Self::new(breaks, values)
    }

    pub fn breaks(&self) -> &[T] {
        &self.breaks
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn pieces(&self) -> impl Iterator<Item = (T, T, T)> + '_ {
        self.values.iter().enumerate().map(move |(i, v)| (self.breaks[i], self.breaks[i + 1], *v))
    }

    pub fn eval(&self, x: T) -> T {
        if self.is_zero() || x < self.breaks[0] || x >= *self.breaks.last().unwrap() {
            return T::zero();
        }
        let i = self.breaks.partition_point(|b| *b <= x) - 1;
        self.values[i]
    }

    pub fn sup(&self) -> T {
        self.values.iter().copied().fold(T::zero(), T::max)
    }

    pub fn support(&self) -> Option<(T, T)> {
        (!self.is_zero()).then(|| (self.breaks[0], *self.breaks.last().unwrap()))
    }

    /// `c f`.
    pub fn scale(&self, c: T) -> Self {
        Self::canonical(self.breaks.clone(), self.values.iter().map(|v| *v * c).collect())
    }

    /// `∫_{-∞}^x f`.
    pub fn primitive(&self, x: T) -> T {
        let mut acc = T::zero();
        for (a, b, v) in self.pieces() {
            if x <= a {
                break;
            }
            acc = acc + v * (b.min(x) - a);
        }
        acc
    }

    pub fn integral(&self) -> T {
        self.pieces().map(|(a, b, v)| v * (b - a)).sum()
    }

    /// `∫ f^p dμ`.
    pub fn integral_pow<M: Measure<T>>(&self, p: T, mu: &M) -> ExtReal<T> {
        self.pieces()
            .filter(|(_, _, v)| *v > T::zero())
            .map(|(a, b, v)| mu.mass(a, b) * v.powf(p))
            .sum()
    }

    /// Nonincreasing on `[0, ∞)` with support starting at 0.
    pub fn is_decreasing_profile(&self) -> bool {
        self.is_zero() || (self.breaks[0] == T::zero() && self.values.windows(2).all(|w| w[1] <= w[0]))
    }

    /// `(f - h)^+`.
    pub fn excess(&self, h: T) -> Self {
        Self::canonical(self.breaks.clone(), self.values.iter().map(|v| (*v - h).max(T::zero())).collect())
    }

    /// `min(f, h)`.
    pub fn truncate(&self, h: T) -> Self {
        Self::canonical(self.breaks.clone(), self.values.iter().map(|v| v.min(h)).collect())
    }

    /// Pointwise sum.
    pub fn add(&self, other: &Self) -> Self {
        let mut xs: Vec<T> = self.breaks.iter().chain(other.breaks.iter()).copied().collect();
        xs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        xs.dedup();
        if xs.len() < 2 {
            return Self::zero();
        }
        let vals = xs.windows(2).map(|w| self.eval(w[0]) + other.eval(w[0])).collect();
        Self::canonical(xs, vals)
    }
}

/// Distribution function `λ(t) = μ{f > t}` of a step function, stored by levels.
///
/// `levels` strictly decrease; `masses[j] = μ{f >= levels[j]}` strictly increase.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<T> {
    pub levels: Vec<T>,
    pub masses: Vec<ExtReal<T>>,
}

impl<T: Real> Distribution<T> {
    pub fn at(&self, t: T) -> ExtReal<T> {
        // λ(t) = masses[j] for levels[j+1] <= t < levels[j]
        let mut out = ExtReal::zero();
        for (v, m) in self.levels.iter().zip(self.masses.iter()) {
            if t < *v {
                out = *m;
            } else {
                break;
            }
        }
        out
    }

    pub fn curve(&self) -> PiecewiseCurve<T> {
        if self.levels.is_empty() {
            return PiecewiseCurve::zero();
        }
        let mut nodes = vec![T::zero()];
        let mut vals = Vec::new();
        for j in (0..self.levels.len()).rev() {
            vals.push(self.masses[j].get());
            nodes.push(self.levels[j]);
        }
        vals.push(T::zero());
        if nodes[1] == T::zero() {
            nodes.remove(0);
            vals.remove(0);
        }
        PiecewiseCurve::step(nodes, vals, Some(Monotone::Nonincreasing))
    }
}

/// `λ_f^μ`, exact: each level set is a union of maximal runs of pieces.
pub fn distribution<T: Real, M: Measure<T>>(f: &StepFn<T>, mu: &M) -> Distribution<T> {
    let mut levels: Vec<T> = f.values.iter().copied().filter(|v| *v > T::zero()).collect();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup();
    let mut out_l = Vec::new();
    let mut out_m: Vec<ExtReal<T>> = Vec::new();
    for v in levels {
        let mut m = ExtReal::zero();
        let mut run: Option<(T, T)> = None;
        for (a, b, x) in f.pieces() {
            if x >= v {
                run = Some(match run {
                    Some((ra, _)) => (ra, b),
                    None => (a, b),
                });
            } else if let Some((ra, rb)) = run.take() {
                m = m + mu.mass(ra, rb);
            }
        }
        if let Some((ra, rb)) = run {
            m = m + mu.mass(ra, rb);
        }
        let prev = out_m.last().copied().unwrap_or(ExtReal::zero());
        // a level adding no mass merges into the plateau above it
        if m > prev {
            out_l.push(v);
            out_m.push(m);
        }
    }
    Distribution { levels: out_l, masses: out_m }
}

/// Nonincreasing rearrangement with respect to `μ`, a step function on `[0, μ(supp f))`.
pub fn rearrange<T: Real, M: Measure<T>>(f: &StepFn<T>, mu: &M) -> Result<StepFn<T>> {
    let d = distribution(f, mu);
    if d.masses.iter().any(|m| m.is_infinite()) {
        return Err(Error::InfiniteMass);
    }
    if d.levels.is_empty() {
        return Ok(StepFn::zero());
    }
    let mut breaks = vec![T::zero()];
    breaks.extend(d.masses.iter().map(|m| m.get()));
    Ok(StepFn { breaks, values: d.levels })
}

/// `f^{**}(t) = t^{-1} ∫_0^t f^*` with `f^*` the Lebesgue rearrangement.
pub fn double_star<T: Real>(f: &StepFn<T>, t: T) -> ExtReal<T> {
    assert!(t > T::zero(), "double_star needs t > 0");
    let fs = rearrange(f, &Lebesgue).expect("Lebesgue level sets of a step function are finite");
    ExtReal::clamp(fs.primitive(t) / t)
}

/// `f^{**}` as a curve: `v_j + (F_{j-1} - v_j s_{j-1})/t` on each piece, `F/t` after the support.
pub fn double_star_curve<T: Real>(fstar: &StepFn<T>) -> PiecewiseCurve<T> {
    if fstar.is_zero() {
        return PiecewiseCurve::zero();
    }
    debug_assert!(fstar.is_decreasing_profile());
    let mut nodes = Vec::new();
    let mut segs = Vec::new();
    let mut acc = T::zero();
    for (a, b, v) in fstar.pieces() {
        nodes.push(a);
        segs.push(Segment::Recip { a: v, b: acc - v * a });
        acc = acc + v * (b - a);
    }
    nodes.push(*fstar.breaks().last().unwrap());
    segs.push(Segment::Recip { a: T::zero(), b: acc });
    PiecewiseCurve::new(nodes, segs, Some(Monotone::Nonincreasing))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::piecewise::measure::LineMeasure;

    fn sf(b: &[f64], v: &[f64]) -> StepFn<f64> {
        StepFn::new(b.to_vec(), v.to_vec()).unwrap()
    }

    #[test]
    fn canonical_form() {
        let f = sf(&[0.0, 1.0, 2.0, 3.0, 4.0], &[0.0, 2.0, 2.0, 0.0]);
        assert_eq!(f.breaks(), &[1.0, 3.0]);
        assert_eq!(f.values(), &[2.0]);
        assert!(sf(&[0.0, 1.0], &[0.0]).is_zero());
        let g = sf(&[0.0, 1.0, 2.0, 3.0], &[1.0, 0.0, 1.0]);
        assert_eq!(g.values(), &[1.0, 0.0, 1.0]);
    }

    #[test]
    fn spec_distribution_example() {
        let f = sf(&[0.0, 2.0, 3.0], &[1.0, 5.0]);
        let d = distribution(&f, &Lebesgue);
        assert_eq!(d.at(0.5).get(), 3.0);
        assert_eq!(d.at(1.0).get(), 1.0);
        assert_eq!(d.at(4.9).get(), 1.0);
        assert_eq!(d.at(5.0).get(), 0.0);
        let r = rearrange(&f, &Lebesgue).unwrap();
        assert_eq!(r, sf(&[0.0, 1.0, 3.0], &[5.0, 1.0]));
    }

    #[test]
    fn exp_abs_rearrangement() {
        let f = sf(&[0.0, 1.0], &[1.0]);
        let r = rearrange(&f, &LineMeasure::exp_abs()).unwrap();
        let e1 = std::f64::consts::E - 1.0;
        assert!((r.breaks()[1] - e1).abs() < 1e-15);
        assert_eq!(distribution(&f, &LineMeasure::exp_abs()).at(0.0).get(), r.breaks()[1]);
    }

    #[test]
    fn double_star_values() {
        assert_eq!(double_star(&sf(&[0.0, 1.0], &[1.0]), 2.0).get(), 0.5);
        assert_eq!(double_star(&sf(&[0.0, 1.0, 3.0], &[5.0, 1.0]), 2.0).get(), 3.0);
        assert_eq!(double_star(&StepFn::<f64>::zero(), 1.0).get(), 0.0);
        let c = double_star_curve(&sf(&[0.0, 1.0, 3.0], &[5.0, 1.0]));
        assert_eq!(c.eval(2.0), 3.0);
        assert_eq!(c.eval(7.0), 1.0);
    }

    #[test]
    fn infinite_level_set_is_an_error() {
        let f = sf(&[0.0, 1.0], &[1.0]);
        let u = LineMeasure::step(vec![0.0, 0.5], vec![1.0, 0.0]).unwrap();
        assert!(rearrange(&f, &u).is_ok());
        let w = crate::piecewise::weight::Weight::<f64>::one();
        assert!(rearrange(&f, &w).is_ok());
    }
}
