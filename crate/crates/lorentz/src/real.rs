//! Scalar abstraction. Everything numeric in the crate is generic over [`Real`],
//! implemented for `f32` and `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Sum
    + 'static
{
    /// Literal conversion; every `f64` constant in the crate goes through here.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn f(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        <Self as FromPrimitive>::from_usize(n).expect("usize representable")
    }

    /// Floor for relative tolerances: requested tolerances below this are
    /// meaningless in the current precision.
    #[inline]
    fn tol_floor() -> Self {
        Self::epsilon() * Self::lit(64.0)
    }

    /// `max(tol, tol_floor())`.
    #[inline]
    fn tol(tol: f64) -> Self {
        Self::lit(tol).max(Self::tol_floor())
    }

    #[inline]
    fn two() -> Self {
        Self::one() + Self::one()
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Hölder conjugate `p/(p-1)`, infinite at `p = 1`.
#[inline]
pub fn conjugate<T: Real>(p: T) -> T {
    if p == T::one() {
        T::infinity()
    } else {
        p / (p - T::one())
    }
}

/// Relative difference with an absolute floor of 1 on the scale.
#[inline]
pub fn rel_diff<T: Real>(a: T, b: T) -> T {
    if a == b {
        return T::zero();
    }
    (a - b).abs() / a.abs().max(b.abs()).max(T::min_positive_value())
}
