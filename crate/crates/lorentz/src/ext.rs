//! Nonnegative extended reals `[0, +inf]`.
//!
//! Indeterminate forms are resolved to zero: `0*inf = inf/inf = 0/0 = 0`.
//! Division of a positive number by zero is `+inf`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul};

use serde::{Serialize, Serializer};

use crate::real::Real;

#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd)]
pub struct ExtReal<T>(T);

impl<T: Real> ExtReal<T> {
    /// Panics on negative or NaN input; those are bugs, not data.
    pub fn new(x: T) -> Self {
        assert!(x >= T::zero(), "ExtReal must be nonnegative, got {x}");
        ExtReal(x)
    }

    /// Clamps tiny negative rounding residue to zero.
    pub fn clamp(x: T) -> Self {
        assert!(!x.is_nan(), "ExtReal from NaN");
        ExtReal(x.max(T::zero()))
    }

    pub fn zero() -> Self {
        ExtReal(T::zero())
    }

    pub fn infinity() -> Self {
        ExtReal(T::infinity())
    }

    pub fn is_infinite(self) -> bool {
        self.0.is_infinite()
    }

    pub fn is_finite(self) -> bool {
        self.0.is_finite()
    }

    pub fn is_zero(self) -> bool {
        self.0 == T::zero()
    }

    /// Raw value, `T::infinity()` when infinite.
    pub fn get(self) -> T {
        self.0
    }

    pub fn finite(self) -> Option<T> {
        self.is_finite().then_some(self.0)
    }

    /// `x^e`, with `inf^e = inf` (e > 0), `0` (e < 0), `0^e = inf` for e < 0.
    pub fn powf(self, e: T) -> Self {
        if e == T::zero() {
            return ExtReal(T::one());
        }
        if self.is_infinite() {
            return if e > T::zero() { Self::infinity() } else { Self::zero() };
        }
        if self.0 == T::zero() {
            return if e > T::zero() { Self::zero() } else { Self::infinity() };
        }
        ExtReal(self.0.powf(e))
    }

    pub fn max(self, o: Self) -> Self {
        if self >= o {
            self
        } else {
            o
        }
    }

    pub fn min(self, o: Self) -> Self {
        if self <= o {
            self
        } else {
            o
        }
    }

    pub fn total_cmp(&self, o: &Self) -> Ordering {
        self.partial_cmp(o).unwrap_or(Ordering::Equal)
    }

    pub fn to_f64(self) -> ExtReal<f64> {
        ExtReal(self.0.f())
    }
}

impl<T: Real> From<T> for ExtReal<T> {
    fn from(x: T) -> Self {
        ExtReal::new(x)
    }
}

impl<T: Real> Add for ExtReal<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        ExtReal(self.0 + o.0)
    }
}

impl<T: Real> Mul for ExtReal<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        if self.0 == T::zero() || o.0 == T::zero() {
            Self::zero()
        } else {
            ExtReal(self.0 * o.0)
        }
    }
}

impl<T: Real> Mul<T> for ExtReal<T> {
    type Output = Self;
    fn mul(self, o: T) -> Self {
        self * ExtReal::new(o)
    }
}

impl<T: Real> Div for ExtReal<T> {
    type Output = Self;
    fn div(self, o: Self) -> Self {
        match (self.is_infinite(), o.is_infinite()) {
            (true, true) => Self::zero(),
            (false, true) => Self::zero(),
            _ if self.0 == T::zero() => Self::zero(),
            _ if o.0 == T::zero() => Self::infinity(),
            _ => ExtReal(self.0 / o.0),
        }
    }
}

impl<T: Real> Div<T> for ExtReal<T> {
    type Output = Self;
    fn div(self, o: T) -> Self {
        self / ExtReal::new(o)
    }
}

impl<T: Real> std::iter::Sum for ExtReal<T> {
    fn sum<I: Iterator<Item = Self>>(it: I) -> Self {
        it.fold(Self::zero(), |a, b| a + b)
    }
}

impl<T: Real> fmt::Display for ExtReal<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinite() {
            write!(f, "inf")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl<T: Real> Serialize for ExtReal<T> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        if self.is_infinite() {
            s.serialize_str("inf")
        } else {
            s.serialize_f64(self.0.f())
        }
    }
}
