//! Weights on the real line with closed-form interval masses.

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::piecewise::weight::{locate, Weight};
use crate::real::Real;

/// Anything that assigns a mass to intervals.
pub trait Measure<T: Real> {
    /// `μ((a, b))`, `a <= b`, infinite endpoints allowed.
    fn mass(&self, a: T, b: T) -> ExtReal<T>;
}

#[derive(Clone, Debug, PartialEq)]
pub enum MeasureFamily<T> {
    One,
    PowerAbs(T),
    ExpAbs,
    OnePlusAbs,
    Step { breaks: Vec<T>, densities: Vec<T> },
}

/// How the density depends on `|x|`, used for rearranging `1/u`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radial {
    Constant,
    Increasing,
    Decreasing,
    NotRadial,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LineMeasure<T> {
    family: MeasureFamily<T>,
    scale: T,
}

impl<T: Real> LineMeasure<T> {
    fn of(family: MeasureFamily<T>) -> Self {
        LineMeasure { family, scale: T::one() }
    }

    pub fn lebesgue() -> Self {
        Self::of(MeasureFamily::One)
    }

    pub fn power_abs(alpha: T) -> Result<Self> {
        if !(alpha > -T::one()) || !alpha.is_finite() {
            return Err(Error::Invalid(format!("powerabs needs alpha > -1, got {alpha}")));
        }
        Ok(Self::of(MeasureFamily::PowerAbs(alpha)))
    }

    pub fn exp_abs() -> Self {
        Self::of(MeasureFamily::ExpAbs)
    }

    pub fn one_plus_abs() -> Self {
        Self::of(MeasureFamily::OnePlusAbs)
    }

    /// Density `densities[i]` on `[breaks[i], breaks[i+1])`, last one to +inf, zero before `breaks[0]`.
    pub fn step(breaks: Vec<T>, densities: Vec<T>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != densities.len() {
            return Err(Error::Invalid("step measure needs matching, nonempty breaks and densities".into()));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::Invalid("step measure breaks must be finite and strictly increasing".into()));
        }
        if densities.iter().any(|d| !(*d >= T::zero()) || !d.is_finite()) {
            return Err(Error::Invalid("step measure densities must be finite and >= 0".into()));
        }
        Ok(Self::of(MeasureFamily::Step { breaks, densities }))
    }

    pub fn scaled(mut self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Invalid(format!("scale must be > 0, got {c}")));
        }
        self.scale = self.scale * c;
        Ok(self)
    }

    pub fn family(&self) -> &MeasureFamily<T> {
        &self.family
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn density(&self, x: T) -> T {
        let ax = x.abs();
        let raw = match &self.family {
            MeasureFamily::One => T::one(),
            MeasureFamily::PowerAbs(a) => {
                if ax == T::zero() {
                    if *a < T::zero() {
                        T::infinity()
                    } else if *a == T::zero() {
                        T::one()
                    } else {
                        T::zero()
                    }
                } else {
                    ax.powf(*a)
                }
            }
            MeasureFamily::ExpAbs => ax.exp(),
            MeasureFamily::OnePlusAbs => T::one() + ax,
            MeasureFamily::Step { breaks, densities } => locate(breaks, x).map_or(T::zero(), |i| densities[i]),
        };
        raw * self.scale
    }

    pub fn radial(&self) -> Radial {
        match &self.family {
            MeasureFamily::One => Radial::Constant,
            MeasureFamily::PowerAbs(a) if *a == T::zero() => Radial::Constant,
            MeasureFamily::PowerAbs(a) if *a > T::zero() => Radial::Increasing,
            MeasureFamily::PowerAbs(_) => Radial::Decreasing,
            MeasureFamily::ExpAbs | MeasureFamily::OnePlusAbs => Radial::Increasing,
            MeasureFamily::Step { .. } => Radial::NotRadial,
        }
    }

    pub fn breakpoints(&self) -> Vec<T> {
        match &self.family {
            MeasureFamily::One => vec![],
            MeasureFamily::Step { breaks, .. } => breaks.clone(),
            _ => vec![T::zero()],
        }
    }

    /// `∫_a^b u^g dx` for finite `a <= b` (closed form per family).
    pub fn power_integral(&self, a: T, b: T, g: T) -> ExtReal<T> {
        if !(b > a) {
            return ExtReal::zero();
        }
        let one = T::one();
        if g == T::zero() {
            return ExtReal::new(b - a);
        }
        let sc = self.scale.powf(g);
        let raw: ExtReal<T> = match &self.family {
            MeasureFamily::One => ExtReal::new(b - a),
            MeasureFamily::PowerAbs(al) => {
                let e = *al * g;
                if e <= -one && a <= T::zero() && b >= T::zero() {
                    ExtReal::infinity()
                } else {
                    // odd antiderivative of |x|^e
                    let u = |x: T| x.signum() * x.abs().powf(e + one) / (e + one);
                    if e == -one {
                        // interval avoids 0 here
                        ExtReal::new((b.abs().ln() - a.abs().ln()).abs())
                    } else {
                        ExtReal::clamp(u(b) - u(a))
                    }
                }
            }
            MeasureFamily::ExpAbs => {
                // ∫ e^{g|x|}: split at 0, each side g^-1 (e^{g hi} - e^{g lo}) on |x|
                let side = |lo: T, hi: T| -> T {
                    // 0 <= lo <= hi in |x|
                    (g * lo).exp() * (g * (hi - lo)).exp_m1() / g
                };
                ExtReal::clamp(radial_split(a, b, side))
            }
            MeasureFamily::OnePlusAbs => {
                let side = |lo: T, hi: T| -> T {
                    if g == -one {
                        ((one + hi) / (one + lo)).ln()
                    } else {
                        ((one + hi).powf(g + one) - (one + lo).powf(g + one)) / (g + one)
                    }
                };
                ExtReal::clamp(radial_split(a, b, side))
            }
            MeasureFamily::Step { breaks, densities } => step_integral(breaks, densities, a, b, |v| {
                if v == T::zero() {
                    if g > T::zero() {
                        ExtReal::zero()
                    } else {
                        ExtReal::infinity()
                    }
                } else {
                    ExtReal::new(v.powf(g))
                }
            }),
        };
        raw * sc
    }

    /// Essential infimum of the density on `(a, b)`.
    pub fn ess_inf(&self, a: T, b: T) -> T {
        let dist = if a <= T::zero() && b >= T::zero() { T::zero() } else { a.abs().min(b.abs()) };
        let far = a.abs().max(b.abs());
        let raw = match &self.family {
            MeasureFamily::One => T::one(),
            MeasureFamily::PowerAbs(al) => {
                if *al >= T::zero() {
                    if dist == T::zero() && *al > T::zero() {
                        T::zero()
                    } else {
                        dist.powf(*al)
                    }
                } else {
                    far.powf(*al)
                }
            }
            MeasureFamily::ExpAbs => dist.exp(),
            MeasureFamily::OnePlusAbs => T::one() + dist,
            MeasureFamily::Step { breaks, densities } => {
                let mut m = T::infinity();
                if a < breaks[0] {
                    m = T::zero();
                }
                for i in 0..breaks.len() {
                    let lo = breaks[i];
                    let hi = breaks.get(i + 1).copied().unwrap_or(T::infinity());
                    if hi > a && lo < b {
                        m = m.min(densities[i]);
                    }
                }
                m
            }
        };
        raw * self.scale
    }

    /// Odd primitive for the radial families.
    fn radial_mass(&self, a: T, b: T) -> ExtReal<T> {
        let one = T::one();
        let raw = match &self.family {
            MeasureFamily::One => ExtReal::new(b - a),
            MeasureFamily::PowerAbs(al) => {
                let side = |lo: T, hi: T| (hi.powf(*al + one) - lo.powf(*al + one)) / (*al + one);
                ExtReal::clamp(radial_split(a, b, side))
            }
            MeasureFamily::ExpAbs => {
                let side = |lo: T, hi: T| lo.exp() * (hi - lo).exp_m1();
                ExtReal::clamp(radial_split(a, b, side))
            }
            MeasureFamily::OnePlusAbs => {
                let side = |lo: T, hi: T| (hi - lo) * (one + (hi + lo) / T::two());
                ExtReal::clamp(radial_split(a, b, side))
            }
            MeasureFamily::Step { .. } => unreachable!(),
        };
        raw * self.scale
    }
}

/// Apply `side(lo, hi)` (an integral over `lo <= |x| <= hi`) to the parts of
/// `(a, b)` on each side of the origin.
fn radial_split<T: Real>(a: T, b: T, side: impl Fn(T, T) -> T) -> T {
    let z = T::zero();
    if a >= z {
        side(a, b)
    } else if b <= z {
        side(-b, -a)
    } else {
        side(z, -a) + side(z, b)
    }
}

fn step_integral<T: Real>(breaks: &[T], densities: &[T], a: T, b: T, f: impl Fn(T) -> ExtReal<T>) -> ExtReal<T> {
    let mut acc = ExtReal::zero();
    for i in 0..breaks.len() {
        let lo = breaks[i].max(a);
        let hi = breaks.get(i + 1).copied().unwrap_or(T::infinity()).min(b);
        if hi > lo {
            acc = acc + f(densities[i]) * ExtReal::new(hi - lo);
        }
    }
    if a < breaks[0] {
        acc = acc + f(T::zero()) * ExtReal::new(breaks[0].min(b) - a);
    }
    acc
}

impl<T: Real> Measure<T> for LineMeasure<T> {
    fn mass(&self, a: T, b: T) -> ExtReal<T> {
        if !(b > a) {
            return ExtReal::zero();
        }
        match &self.family {
            MeasureFamily::Step { breaks, densities } => {
                let mut acc = ExtReal::zero();
                for i in 0..breaks.len() {
                    let lo = breaks[i].max(a);
                    let hi = breaks.get(i + 1).copied().unwrap_or(T::infinity()).min(b);
                    if hi > lo && densities[i] > T::zero() {
                        if hi.is_infinite() {
                            return ExtReal::infinity();
                        }
                        acc = acc + ExtReal::new(densities[i] * (hi - lo));
                    }
                }
                acc * self.scale
            }
            _ => {
                if a.is_infinite() || b.is_infinite() {
                    return ExtReal::infinity();
                }
                let m = self.radial_mass(a, b);
                if m.is_infinite() {
                    ExtReal::infinity()
                } else {
                    m
                }
            }
        }
    }
}

/// A half-line weight as a measure on the line (zero on the negative axis).
impl<T: Real> Measure<T> for Weight<T> {
    fn mass(&self, a: T, b: T) -> ExtReal<T> {
        if !(b > a) {
            return ExtReal::zero();
        }
        Weight::mass(self, a.max(T::zero()), b.max(T::zero()))
    }
}

/// Lebesgue measure, without going through a family enum.
#[derive(Clone, Copy, Debug, Default)]
pub struct Lebesgue;

impl<T: Real> Measure<T> for Lebesgue {
    fn mass(&self, a: T, b: T) -> ExtReal<T> {
        if !(b > a) {
            return ExtReal::zero();
        }
        ExtReal::new(b - a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Quad;

    fn corpus() -> Vec<LineMeasure<f64>> {
        vec![
            LineMeasure::lebesgue(),
            LineMeasure::power_abs(1.0).unwrap(),
            LineMeasure::power_abs(-0.5).unwrap(),
            LineMeasure::exp_abs(),
            LineMeasure::one_plus_abs().scaled(2.0).unwrap(),
            LineMeasure::step(vec![-1.0, 0.5, 2.0], vec![1.0, 3.0, 0.0]).unwrap(),
        ]
    }

    #[test]
    fn masses_match_quadrature() {
        let q = Quad::with_tol(1e-12, 1e-12);
        let ivs = [(-2.0, -0.5), (-1.5, 2.5), (0.0, 1.0), (0.3, 4.0)];
        for u in corpus() {
            for &(a, b) in &ivs {
                let mut cuts = u.breakpoints();
                cuts.retain(|c| *c > a && *c < b);
                let num = q.split(|x| u.density(x), a, b, &cuts).unwrap();
                let m = u.mass(a, b).get();
                assert!((num - m).abs() < 1e-9 * m.max(1.0), "{u:?} ({a},{b}): {num} vs {m}");
                let pm = u.power_integral(a, b, 1.0).get();
                assert!((pm - m).abs() < 1e-9 * m.max(1.0));
            }
        }
    }

    #[test]
    fn exp_abs_unit_interval() {
        let m: f64 = LineMeasure::exp_abs().mass(0.0, 1.0).get();
        assert!((m - (std::f64::consts::E - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn additivity() {
        for u in corpus() {
            let whole = u.mass(-1.3, 2.7).get();
            let parts = u.mass(-1.3, 0.2).get() + u.mass(0.2, 2.7).get();
            assert!((whole - parts).abs() < 1e-12 * whole.max(1.0));
        }
    }

    #[test]
    fn negative_power_integrals() {
        let u = LineMeasure::power_abs(1.0).unwrap();
        assert!(u.power_integral(-1.0, 1.0, -1.0).is_infinite());
        let v: f64 = u.power_integral(-1.0, 1.0, -0.5).get();
        assert!((v - 4.0).abs() < 1e-12);
        let e = LineMeasure::<f64>::exp_abs().power_integral(0.0, 2.0, -1.0).get();
        assert!((e - (1.0 - (-2.0f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn ess_inf_by_family() {
        assert_eq!(LineMeasure::<f64>::exp_abs().ess_inf(1.0, 3.0), 1f64.exp());
        assert_eq!(LineMeasure::power_abs(2.0).unwrap().ess_inf(-1.0, 3.0), 0.0);
        assert_eq!(LineMeasure::power_abs(-0.5).unwrap().ess_inf(1.0, 4.0), 0.5);
        let s = LineMeasure::step(vec![0.0, 1.0], vec![2.0, 5.0]).unwrap();
        assert_eq!(s.ess_inf(0.5, 3.0), 2.0);
        assert_eq!(s.ess_inf(-1.0, 3.0), 0.0);
    }
}
