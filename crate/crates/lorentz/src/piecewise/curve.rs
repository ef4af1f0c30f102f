//! Piecewise-analytic curves on `[x_0, ∞)`.

use serde::Serialize;

use crate::real::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum Segment<T> {
    /// `a + b t`
    Affine { a: T, b: T },
    /// `a + b / t`
    Recip { a: T, b: T },
}

impl<T: Real> Segment<T> {
    pub fn constant(v: T) -> Self {
        Segment::Affine { a: v, b: T::zero() }
    }

    pub fn eval(&self, t: T) -> T {
        match *self {
            Segment::Affine { a, b } => {
                if b == T::zero() {
                    a
                } else {
                    a + b * t
                }
            }
            Segment::Recip { a, b } => {
                if b == T::zero() {
                    a
                } else {
                    a + b / t
                }
            }
        }
    }

    pub fn is_constant(&self) -> bool {
        matches!(*self, Segment::Affine { b, .. } | Segment::Recip { b, .. } if b == T::zero())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Monotone {
    Nonincreasing,
    Nondecreasing,
}

/// `segments[i]` lives on `[nodes[i], nodes[i+1])`; `segments[n]` (the tail) on `[nodes[n], ∞)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PiecewiseCurve<T> {
    nodes: Vec<T>,
    segments: Vec<Segment<T>>,
    monotone: Option<Monotone>,
}

impl<T: Real> PiecewiseCurve<T> {
    /// `segments.len()` must equal `nodes.len()` (one tail).
    pub fn new(nodes: Vec<T>, segments: Vec<Segment<T>>, monotone: Option<Monotone>) -> Self {
        assert!(!nodes.is_empty() && nodes.len() == segments.len(), "curve needs one segment per node");
        assert!(nodes.windows(2).all(|w| w[0] < w[1]), "curve nodes must increase");
        PiecewiseCurve { nodes, segments, monotone }
    }

    /// Right-continuous step curve: `values[i]` on `[nodes[i], nodes[i+1])`, last to infinity.
    pub fn step(nodes: Vec<T>, values: Vec<T>, monotone: Option<Monotone>) -> Self {
        let segments = values.into_iter().map(Segment::constant).collect();
        Self::new(nodes, segments, monotone)
    }

    /// Linear interpolation through `(xs, ys)`, constant after the last node.
    pub fn linear(xs: Vec<T>, ys: Vec<T>, monotone: Option<Monotone>) -> Self {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut segs = Vec::with_capacity(n);
        for i in 0..n {
            if i + 1 < n {
                let b = (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i]);
                segs.push(Segment::Affine { a: ys[i] - b * xs[i], b });
            } else {
                segs.push(Segment::constant(ys[i]));
            }
        }
        Self::new(xs, segs, monotone)
    }

    pub fn zero() -> Self {
        Self::step(vec![T::zero()], vec![T::zero()], Some(Monotone::Nonincreasing))
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn segments(&self) -> &[Segment<T>] {
        &self.segments
    }

    pub fn monotone(&self) -> Option<Monotone> {
        self.monotone
    }

    pub fn domain_start(&self) -> T {
        self.nodes[0]
    }

    /// Segment index containing `t` (clamped to the first segment below the domain).
    pub fn index(&self, t: T) -> usize {
        self.nodes.partition_point(|x| *x <= t).saturating_sub(1)
    }

    pub fn eval(&self, t: T) -> T {
        self.segments[self.index(t)].eval(t)
    }

    /// `(lo, hi, segment)` triples, the tail with `hi = inf`.
    pub fn pieces(&self) -> impl Iterator<Item = (T, T, Segment<T>)> + '_ {
        (0..self.nodes.len()).map(move |i| {
            let hi = self.nodes.get(i + 1).copied().unwrap_or(T::infinity());
            (self.nodes[i], hi, self.segments[i])
        })
    }

    /// Exact comparison of two step curves after merging equal neighbours.
    pub fn same_steps(&self, other: &Self) -> bool {
        fn canon<T: Real>(c: &PiecewiseCurve<T>) -> Vec<(T, T)> {
            let mut out: Vec<(T, T)> = Vec::new();
            for (lo, _, s) in c.pieces() {
                let v = s.eval(lo);
                if out.last().map_or(true, |(_, pv)| *pv != v) {
                    out.push((lo, v));
                }
            }
            out
        }
        canon(self) == canon(other)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eval_and_tail() {
        let c = PiecewiseCurve::new(
            vec![0.0, 1.0],
            vec![Segment::constant(1.0), Segment::Recip { a: 0.0, b: 1.0 }],
            Some(Monotone::Nonincreasing),
        );
        assert_eq!(c.eval(0.5), 1.0);
        assert_eq!(c.eval(4.0), 0.25);
        let l = PiecewiseCurve::linear(vec![0.0, 2.0], vec![0.0, 4.0], None);
        assert_eq!(l.eval(1.0), 2.0);
        assert_eq!(l.eval(9.0), 4.0);
    }
}
