//! Sawyer's duality formulas, associate norms, biassociate weights and
//! normability deciders.

pub mod assoc;
pub mod normability;
pub mod oracle;
pub mod sawyer;

pub use assoc::{
    associate_norm, associate_norm_minorant, biassociate_seq, biassociate_weight, check_d_assoc_conjugate,
    check_d_assoc_linfty, d_associate_norm, greatest_concave_minorant, upper_hull, Biassociate, Minorant,
};
pub use normability::{normability, NormVerdict, Space};
pub use oracle::{cone_sup, geometric_nodes, pava, piece_mids, Objective, OracleConfig, OracleResult, PowerRatio, PowerSum};
pub use sawyer::{cone_sup_oracle, sawyer_sup_closed, sawyer_sup_discrete};

use serde::Serialize;

use crate::error::Result;
use crate::ext::ExtReal;
use crate::piecewise::Asym;
use crate::quad::Quad;
use crate::real::Real;

/// One value, or two expressions the theory only guarantees to be equivalent.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real + Serialize")]
pub struct Equivalent<T> {
    pub value: ExtReal<T>,
    pub alt: Option<ExtReal<T>>,
}

impl<T: Real> Equivalent<T> {
    pub fn single(value: ExtReal<T>) -> Self {
        Equivalent { value, alt: None }
    }

    pub fn pair(value: ExtReal<T>, alt: ExtReal<T>) -> Self {
        Equivalent { value, alt: Some(alt) }
    }

    /// `max/min` of the two expressions (1 for a single value).
    pub fn spread(&self) -> T {
        match self.alt {
            None => T::one(),
            Some(b) => {
                let (x, y) = (self.value.get(), b.get());
                if x == y {
                    T::one()
                } else {
                    x.max(y) / x.min(y)
                }
            }
        }
    }
}

/// `∫_0^∞ h` for a nonnegative `h` smooth between `cuts`.
///
/// `at0`/`at_inf` are the local profiles of `h` (`None` when `h` vanishes
/// near that end); a non-integrable profile gives `+inf` without quadrature.
pub(crate) fn half_line<T: Real>(
    h: impl Fn(T) -> T,
    cuts: &[T],
    at0: Option<Asym<T>>,
    at_inf: Option<Asym<T>>,
    quad: &Quad,
) -> Result<ExtReal<T>> {
    if at0.map_or(false, |a| !a.integrable_at_zero()) || at_inf.map_or(false, |a| !a.integrable_at_infinity()) {
        return Ok(ExtReal::infinity());
    }
    let mut cuts: Vec<T> = cuts.iter().copied().filter(|c| *c > T::zero() && c.is_finite()).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let end = cuts.last().copied().unwrap_or(T::one());
    let head = quad.split(&h, T::zero(), end, &cuts)?;
    let tail = if at_inf.is_some() { quad.semi_infinite(&h, end)? } else { T::zero() };
    Ok(ExtReal::clamp(head + tail))
}

/// `∫_a^b h` for `0 <= a < b < inf`, split at `cuts`.
#[allow(dead_code)]
pub(crate) fn segment<T: Real>(h: impl Fn(T) -> T, a: T, b: T, cuts: &[T], quad: &Quad) -> Result<T> {
    quad.split(h, a, b, cuts)
}
