//! Weights on the half-line with exact primitives `W(t) = ∫_0^t w`.

use statrs::function::gamma::{gamma, gamma_ui};

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::quad::Quad;
use crate::real::Real;

/// Local power-log profile: `w(t) ≈ C t^power (log 1/t)^log` near 0,
/// or `C t^power (log t)^log` near infinity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Asym<T> {
    pub power: T,
    pub log: T,
}

impl<T: Real> Asym<T> {
    pub fn new(power: T, log: T) -> Self {
        Asym { power, log }
    }

    /// `∫_0 t^power log^log dt` finite.
    pub fn integrable_at_zero(self) -> bool {
        self.power > -T::one() || (self.power == -T::one() && self.log < -T::one())
    }

    /// `∫^∞ t^power log^log dt` finite.
    pub fn integrable_at_infinity(self) -> bool {
        self.power < -T::one() || (self.power == -T::one() && self.log < -T::one())
    }

    /// Profile of `t^k * self`.
    pub fn shift(self, k: T) -> Self {
        Asym { power: self.power + k, log: self.log }
    }

    /// Profile of `self^e`.
    pub fn pow(self, e: T) -> Self {
        Asym { power: self.power * e, log: self.log * e }
    }

    pub fn mul(self, o: Self) -> Self {
        Asym { power: self.power + o.power, log: self.log + o.log }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightFamily<T> {
    Const(T),
    Power(T),
    Chi(T),
    LogPlus(T),
    OnePlusLog,
    InvShift,
    /// Density `densities[i]` on `[breaks[i], breaks[i+1])`; the last one
    /// extends to infinity, zero before `breaks[0]`.
    Step { breaks: Vec<T>, densities: Vec<T>, cum: Vec<T> },
    /// `w(t^beta) t^(beta-1)`.
    Transformed { inner: Box<Weight<T>>, beta: T },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Weight<T> {
    family: WeightFamily<T>,
    scale: T,
}

impl<T: Real> Weight<T> {
    fn of(family: WeightFamily<T>) -> Self {
        Weight { family, scale: T::one() }
    }

    pub fn one() -> Self {
        Self::of(WeightFamily::Const(T::one()))
    }

    pub fn constant(c: T) -> Result<Self> {
        if !(c >= T::zero()) || !c.is_finite() {
            return Err(Error::Invalid(format!("constant weight needs c >= 0, got {c}")));
        }
        Ok(Self::of(WeightFamily::Const(c)))
    }

    pub fn power(alpha: T) -> Result<Self> {
        if !(alpha > -T::one()) || !alpha.is_finite() {
            return Err(Error::Invalid(format!("power weight needs alpha > -1, got {alpha}")));
        }
        Ok(Self::of(WeightFamily::Power(alpha)))
    }

    pub fn chi(b: T) -> Result<Self> {
        if !(b > T::zero()) || !b.is_finite() {
            return Err(Error::Invalid(format!("chi weight needs b > 0, got {b}")));
        }
        Ok(Self::of(WeightFamily::Chi(b)))
    }

    /// `(log⁺(1/t))^alpha`; only `alpha >= 0` keeps the density finite on (1, ∞).
    pub fn log_plus(alpha: T) -> Result<Self> {
        if !(alpha >= T::zero()) || !alpha.is_finite() {
            return Err(Error::Invalid(format!("logplus weight needs alpha >= 0, got {alpha}")));
        }
        Ok(Self::of(WeightFamily::LogPlus(alpha)))
    }

    pub fn one_plus_log() -> Self {
        Self::of(WeightFamily::OnePlusLog)
    }

    pub fn inv_shift() -> Self {
        Self::of(WeightFamily::InvShift)
    }

    pub fn step(breaks: Vec<T>, densities: Vec<T>) -> Result<Self> {
        if breaks.is_empty() || breaks.len() != densities.len() {
            return Err(Error::Invalid("step weight needs matching, nonempty breaks and densities".into()));
        }
        if breaks[0] < T::zero() || breaks.iter().any(|b| !b.is_finite()) {
            return Err(Error::Invalid("step weight breaks must be finite and >= 0".into()));
        }
        if breaks.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Invalid("step weight breaks must be strictly increasing".into()));
        }
        if densities.iter().any(|d| !(*d >= T::zero()) || !d.is_finite()) {
            return Err(Error::Invalid("step weight densities must be finite and >= 0".into()));
        }
        let mut cum = Vec::with_capacity(breaks.len());
        let mut acc = T::zero();
        cum.push(acc);
        for i in 1..breaks.len() {
            acc = acc + densities[i - 1] * (breaks[i] - breaks[i - 1]);
            cum.push(acc);
        }
        Ok(Self::of(WeightFamily::Step { breaks, densities, cum }))
    }

    /// `w(t^beta) t^(beta-1)`, primitive `W(t^beta)/beta`.
    pub fn transformed(inner: Weight<T>, beta: T) -> Result<Self> {
        if !(beta > T::zero()) {
            return Err(Error::Invalid(format!("transform exponent must be > 0, got {beta}")));
        }
        Ok(Self::of(WeightFamily::Transformed { inner: Box::new(inner), beta }))
    }

    pub fn scaled(mut self, c: T) -> Result<Self> {
        if !(c > T::zero()) || !c.is_finite() {
            return Err(Error::Invalid(format!("scale must be > 0, got {c}")));
        }
        self.scale = self.scale * c;
        Ok(self)
    }

    pub fn family(&self) -> &WeightFamily<T> {
        &self.family
    }

    pub fn scale(&self) -> T {
        self.scale
    }

    pub fn density(&self, t: T) -> T {
        if t < T::zero() {
            return T::zero();
        }
        let raw = match &self.family {
            WeightFamily::Const(c) => *c,
            WeightFamily::Power(a) => {
                if t == T::zero() {
                    if *a < T::zero() {
                        T::infinity()
                    } else if *a == T::zero() {
                        T::one()
                    } else {
                        T::zero()
                    }
                } else {
                    t.powf(*a)
                }
            }
            WeightFamily::Chi(b) => {
                if t < *b {
                    T::one()
                } else {
                    T::zero()
                }
            }
            WeightFamily::LogPlus(a) => {
                if t >= T::one() {
                    T::zero()
                } else if *a == T::zero() {
                    T::one()
                } else {
                    (-t.ln()).powf(*a)
                }
            }
            WeightFamily::OnePlusLog => {
                if t >= T::one() {
                    T::one()
                } else {
                    T::one() - t.ln()
                }
            }
            WeightFamily::InvShift => T::one() / (T::one() + t),
            WeightFamily::Step { breaks, densities, .. } => match locate(breaks, t) {
                None => T::zero(),
                Some(i) => densities[i],
            },
            WeightFamily::Transformed { inner, beta } => {
                if t == T::zero() {
                    let a = inner.exp0();
                    return match a {
                        None => T::zero(),
                        Some(a) => {
                            let e = *beta * (a.power + T::one()) - T::one();
                            if e < T::zero() {
                                T::infinity()
                            } else if e == T::zero() {
                                inner.density(T::zero()) * self.scale
                            } else {
                                T::zero()
                            }
                        }
                    };
                }
                inner.density(t.powf(*beta)) * t.powf(*beta - T::one())
            }
        };
        raw * self.scale
    }

    /// `W(t)`; `t = +inf` gives `W(∞)` (possibly infinite).
    pub fn primitive(&self, t: T) -> T {
        if t <= T::zero() {
            return T::zero();
        }
        if t.is_infinite() {
            return self.total().get();
        }
        let raw = match &self.family {
            WeightFamily::Const(c) => *c * t,
            WeightFamily::Power(a) => t.powf(*a + T::one()) / (*a + T::one()),
            WeightFamily::Chi(b) => t.min(*b),
            WeightFamily::LogPlus(a) => {
                if *a == T::zero() {
                    t.min(T::one())
                } else if t >= T::one() {
                    T::lit(gamma(a.f() + 1.0))
                } else {
                    T::lit(gamma_ui(a.f() + 1.0, -(t.f().ln())))
                }
            }
            WeightFamily::OnePlusLog => {
                if t <= T::one() {
                    t * (T::two() - t.ln())
                } else {
                    t + T::one()
                }
            }
            WeightFamily::InvShift => t.ln_1p(),
            WeightFamily::Step { breaks, densities, cum } => match locate(breaks, t) {
                None => T::zero(),
                Some(i) => cum[i] + densities[i] * (t - breaks[i]),
            },
            WeightFamily::Transformed { inner, beta } => inner.primitive(t.powf(*beta)) / *beta,
        };
        raw * self.scale
    }

    /// `W(∞)`.
    pub fn total(&self) -> ExtReal<T> {
        let raw = match &self.family {
            WeightFamily::Const(c) => {
                if *c == T::zero() {
                    ExtReal::zero()
                } else {
                    ExtReal::infinity()
                }
            }
            WeightFamily::Power(_) | WeightFamily::OnePlusLog | WeightFamily::InvShift => ExtReal::infinity(),
            WeightFamily::Chi(b) => ExtReal::new(*b),
            WeightFamily::LogPlus(a) => {
                if *a == T::zero() {
                    ExtReal::new(T::one())
                } else {
                    ExtReal::new(T::lit(gamma(a.f() + 1.0)))
                }
            }
            WeightFamily::Step { densities, cum, .. } => {
                if *densities.last().unwrap() > T::zero() {
                    ExtReal::infinity()
                } else {
                    ExtReal::new(*cum.last().unwrap())
                }
            }
            WeightFamily::Transformed { inner, beta } => inner.total() / *beta,
        };
        raw * self.scale
    }

    /// `W(b) - W(a)` for `0 <= a <= b`, with `b = inf` allowed.
    pub fn mass(&self, a: T, b: T) -> ExtReal<T> {
        let hi = if b.is_infinite() { self.total() } else { ExtReal::new(self.primitive(b)) };
        if hi.is_infinite() {
            return hi;
        }
        ExtReal::clamp(hi.get() - self.primitive(a))
    }

    /// Points where the density is not smooth.
    pub fn breakpoints(&self) -> Vec<T> {
        match &self.family {
            WeightFamily::Chi(b) => vec![*b],
            WeightFamily::LogPlus(_) | WeightFamily::OnePlusLog => vec![T::one()],
            WeightFamily::Step { breaks, .. } => breaks.iter().copied().filter(|b| *b > T::zero()).collect(),
            WeightFamily::Transformed { inner, beta } => {
                inner.breakpoints().into_iter().map(|b| b.powf(T::one() / *beta)).collect()
            }
            _ => Vec::new(),
        }
    }

    /// Local profile of `w` at 0; `None` when `w` vanishes on a neighbourhood of 0.
    pub fn exp0(&self) -> Option<Asym<T>> {
        match &self.family {
            WeightFamily::Const(c) => (*c > T::zero()).then(|| Asym::new(T::zero(), T::zero())),
            WeightFamily::Power(a) => Some(Asym::new(*a, T::zero())),
            WeightFamily::Chi(_) | WeightFamily::InvShift => Some(Asym::new(T::zero(), T::zero())),
            WeightFamily::LogPlus(a) => Some(Asym::new(T::zero(), *a)),
            WeightFamily::OnePlusLog => Some(Asym::new(T::zero(), T::one())),
            WeightFamily::Step { breaks, densities, .. } => {
                (breaks[0] == T::zero() && densities[0] > T::zero()).then(|| Asym::new(T::zero(), T::zero()))
            }
            WeightFamily::Transformed { inner, beta } => inner
                .exp0()
                .map(|a| Asym::new(*beta * (a.power + T::one()) - T::one(), a.log)),
        }
    }

    /// Local profile of `w` at infinity; `None` when `w` has bounded support.
    pub fn exp_inf(&self) -> Option<Asym<T>> {
        match &self.family {
            WeightFamily::Const(c) => (*c > T::zero()).then(|| Asym::new(T::zero(), T::zero())),
            WeightFamily::Power(a) => Some(Asym::new(*a, T::zero())),
            WeightFamily::Chi(_) | WeightFamily::LogPlus(_) => None,
            WeightFamily::OnePlusLog => Some(Asym::new(T::zero(), T::zero())),
            WeightFamily::InvShift => Some(Asym::new(-T::one(), T::zero())),
            WeightFamily::Step { densities, .. } => {
                (*densities.last().unwrap() > T::zero()).then(|| Asym::new(T::zero(), T::zero()))
            }
            WeightFamily::Transformed { inner, beta } => inner
                .exp_inf()
                .map(|a| Asym::new(*beta * (a.power + T::one()) - T::one(), a.log)),
        }
    }

    /// Profile of `W` at 0; `None` when `W` vanishes near 0.
    pub fn prim_exp0(&self) -> Option<Asym<T>> {
        self.exp0().map(|a| Asym::new(a.power + T::one(), a.log))
    }

    /// Profile of `W` at infinity (`power = log = 0` when `W` is bounded).
    pub fn prim_exp_inf(&self) -> Asym<T> {
        match self.exp_inf() {
            None => Asym::new(T::zero(), T::zero()),
            Some(a) if a.power > -T::one() => Asym::new(a.power + T::one(), a.log),
            Some(a) if a.power == -T::one() && a.log > -T::one() => Asym::new(T::zero(), a.log + T::one()),
            Some(_) => Asym::new(T::zero(), T::zero()),
        }
    }

    /// True when `W(t) = 0` for some `t > 0`.
    pub fn vanishes_near_zero(&self) -> bool {
        self.exp0().is_none()
    }

    /// Whether the density is (a.e. equal to) a nonincreasing function.
    pub fn is_nonincreasing(&self) -> bool {
        match &self.family {
            WeightFamily::Const(_) | WeightFamily::Chi(_) | WeightFamily::LogPlus(_) => true,
            WeightFamily::OnePlusLog | WeightFamily::InvShift => true,
            WeightFamily::Power(a) => *a <= T::zero(),
            WeightFamily::Step { breaks, densities, .. } => {
                let lead_ok = breaks[0] == T::zero() || densities.iter().all(|d| *d == T::zero());
                lead_ok && densities.windows(2).all(|w| w[1] <= w[0])
            }
            WeightFamily::Transformed { inner, beta } => {
                if *beta <= T::one() && inner.is_nonincreasing() {
                    return true;
                }
                let mut prev = T::infinity();
                for k in -160..=160 {
                    let t = T::lit(2f64.powf(k as f64 / 8.0));
                    let d = self.density(t);
                    if d > prev * (T::one() + T::lit(1e-12)) {
                        return false;
                    }
                    prev = d;
                }
                true
            }
        }
    }

    /// Closed-form `∫_r^∞ t^-p w(t) dt` where one is known.
    pub fn moment_tail_closed(&self, p: T, r: T) -> Option<ExtReal<T>> {
        let one = T::one();
        let pow_tail = |e: T, r: T| -> ExtReal<T> {
            // ∫_r^∞ t^e
            if e < -one {
                ExtReal::new(r.powf(e + one) / (-(e + one)))
            } else {
                ExtReal::infinity()
            }
        };
        let seg = |e: T, a: T, b: T| -> T {
            // ∫_a^b t^e, 0 < a <= b < ∞
            if e == -one {
                (b / a).ln()
            } else {
                (b.powf(e + one) - a.powf(e + one)) / (e + one)
            }
        };
        let raw = match &self.family {
            WeightFamily::Const(c) => {
                if *c == T::zero() {
                    ExtReal::zero()
                } else {
                    pow_tail(-p, r) * *c
                }
            }
            WeightFamily::Power(a) => pow_tail(*a - p, r),
            WeightFamily::Chi(b) => {
                if r >= *b {
                    ExtReal::zero()
                } else {
                    ExtReal::clamp(seg(-p, r, *b))
                }
            }
            WeightFamily::OnePlusLog => {
                let tail1 = pow_tail(-p, r.max(one));
                if tail1.is_infinite() || r >= one {
                    tail1
                } else {
                    // ∫ t^-p (-ln t) = t^(1-p)(-ln t)/(1-p) + t^(1-p)/(1-p)^2
                    let q = one - p;
                    let f = |t: T| t.powf(q) * (-t.ln()) / q + t.powf(q) / (q * q);
                    ExtReal::clamp(seg(-p, r, one) + f(one) - f(r)) + tail1
                }
            }
            WeightFamily::Step { breaks, densities, .. } => {
                let n = breaks.len();
                let mut acc = ExtReal::zero();
                for i in 0..n {
                    let lo = breaks[i].max(r);
                    let v = densities[i];
                    if v == T::zero() {
                        continue;
                    }
                    if i + 1 < n {
                        let hi = breaks[i + 1];
                        if hi > lo {
                            acc = acc + ExtReal::clamp(v * seg(-p, lo, hi));
                        }
                    } else {
                        acc = acc + pow_tail(-p, lo) * v;
                    }
                }
                acc
            }
            WeightFamily::Transformed { inner, beta } => {
                return inner.moment_tail_closed(p / *beta, r.powf(*beta)).map(|v| v / *beta * self.scale);
            }
            WeightFamily::LogPlus(a) if *a == T::zero() => {
                if r >= one {
                    ExtReal::zero()
                } else {
                    ExtReal::clamp(seg(-p, r, one))
                }
            }
            WeightFamily::LogPlus(_) | WeightFamily::InvShift => return None,
        };
        Some(raw * self.scale)
    }

    /// `∫_r^∞ t^-p w(t) dt` for `r > 0`: closed form when available, otherwise
    /// divergence decided from the profile at infinity and the rest by quadrature.
    pub fn moment_tail(&self, p: T, r: T, quad: &Quad) -> Result<ExtReal<T>> {
        if let Some(v) = self.moment_tail_closed(p, r) {
            return Ok(v);
        }
        if let Some(a) = self.exp_inf() {
            if !a.shift(-p).integrable_at_infinity() {
                return Ok(ExtReal::infinity());
            }
        }
        let f = |t: T| t.powf(-p) * self.density(t);
        let mut cuts: Vec<T> = self.breakpoints().into_iter().filter(|b| *b > r).collect();
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let last = cuts.last().copied().unwrap_or(r);
        let head = quad.split(f, r, last, &cuts)?;
        let tail = if self.exp_inf().is_none() { T::zero() } else { quad.semi_infinite(f, last)? };
        Ok(ExtReal::clamp(head + tail))
    }
}

/// Index `i` with `breaks[i] <= t < breaks[i+1]` (last piece open-ended);
/// `None` before the first break.
pub(crate) fn locate<T: Real>(breaks: &[T], t: T) -> Option<usize> {
    if breaks.is_empty() || t < breaks[0] {
        return None;
    }
    let i = breaks.partition_point(|b| *b <= t);
    Some(i - 1)
}
