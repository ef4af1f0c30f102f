//! Exact and certified numerics for weighted Lorentz spaces on step-function data.

pub mod duality;
pub mod error;
pub mod ext;
pub mod kfun;
pub mod lorentz;
pub mod maximal;
pub mod operators;
pub mod piecewise;
pub mod quad;
pub mod real;
pub mod reduction;
pub mod seq;
pub mod suite;
pub mod weights;

pub use error::{Error, Result};
pub use ext::ExtReal;
pub use real::Real;

pub type StepFunction = piecewise::StepFn<f64>;
pub type WeightFn = piecewise::Weight<f64>;
pub type Measure1D = piecewise::LineMeasure<f64>;
pub type Sequence = seq::Seq<f64>;
pub type SequenceWeight = seq::DiscreteWeight<f64>;
pub type WeightVerdict = weights::Verdict<f64>;
pub type Curve = piecewise::PiecewiseCurve<f64>;

pub type StepFunctionF32 = piecewise::StepFn<f32>;
pub type WeightFnF32 = piecewise::Weight<f32>;
pub type Measure1DF32 = piecewise::LineMeasure<f32>;
pub type SequenceF32 = seq::Seq<f32>;
pub type SequenceWeightF32 = seq::DiscreteWeight<f32>;
pub type WeightVerdictF32 = weights::Verdict<f32>;
pub type CurveF32 = piecewise::PiecewiseCurve<f32>;
