//! Mini-language for weights, measures and step functions.
//!
//! `one`, `power:a=<α>`, `chi:b=<b>`, `logplus:a=<α>`, `onepluslog`, `invshift`,
//! `const:c=<c>`, `step:<t0>,<v0>;<t1>,<v1>;…` for weights; `one`, `expabs`,
//! `oneplusabs`, `powerabs:a=<α>`, `step:…` for line measures. Any of them
//! takes a `*<c>` scale suffix. Case-insensitive, no whitespace.

use crate::error::{Error, Result};
use crate::piecewise::measure::LineMeasure;
use crate::piecewise::step::StepFn;
use crate::piecewise::weight::Weight;
use crate::real::Real;

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub(crate) fn num<T: Real>(s: &str) -> Result<T> {
    let v: f64 = match s {
        "inf" | "+inf" => f64::INFINITY,
        _ => s.parse().map_err(|_| perr(format!("not a number: {s:?}")))?,
    };
    Ok(T::lit(v))
}

/// Splits `name:args*scale` into parts.
pub(crate) fn split_spec(spec: &str) -> Result<(String, String, Option<String>)> {
    let s = spec.trim().to_ascii_lowercase();
    if s.is_empty() || s.chars().any(char::is_whitespace) {
        return Err(perr(format!("bad spec {spec:?}")));
    }
    let (body, scale) = match s.rfind('*') {
        Some(i) => (s[..i].to_string(), Some(s[i + 1..].to_string())),
        None => (s.clone(), None),
    };
    let (name, args) = match body.find(':') {
        Some(i) => (body[..i].to_string(), body[i + 1..].to_string()),
        None => (body, String::new()),
    };
    Ok((name, args, scale))
}

/// `key=value` argument.
pub(crate) fn keyed<T: Real>(args: &str, key: &str) -> Result<T> {
    let (k, v) = args.split_once('=').ok_or_else(|| perr(format!("expected {key}=<value>, got {args:?}")))?;
    if k != key {
        return Err(perr(format!("expected key {key:?}, got {k:?}")));
    }
    num(v)
}

fn pairs<T: Real>(args: &str) -> Result<(Vec<T>, Vec<T>)> {
    let mut xs = Vec::new();
    let mut vs = Vec::new();
    for item in args.split(';').filter(|s| !s.is_empty()) {
        let (x, v) = item.split_once(',').ok_or_else(|| perr(format!("expected <t>,<v>, got {item:?}")))?;
        xs.push(num(x)?);
        vs.push(num(v)?);
    }
    if xs.is_empty() {
        return Err(perr("step needs at least one <t>,<v> pair"));
    }
    Ok((xs, vs))
}

pub fn parse_weight<T: Real>(spec: &str) -> Result<Weight<T>> {
    let (name, args, scale) = split_spec(spec)?;
    let w = match name.as_str() {
        "one" => Weight::one(),
        "const" => Weight::constant(keyed(&args, "c")?)?,
        "power" => Weight::power(keyed(&args, "a")?)?,
        "chi" => Weight::chi(keyed(&args, "b")?)?,
        "logplus" => Weight::log_plus(keyed(&args, "a")?)?,
        "onepluslog" => Weight::one_plus_log(),
        "invshift" => Weight::inv_shift(),
        "step" => {
            let (xs, vs) = pairs(&args)?;
            Weight::step(xs, vs)?
        }
        other => return Err(perr(format!("unknown weight family {other:?}"))),
    };
    match scale {
        Some(c) => w.scaled(num(&c)?),
        None => Ok(w),
    }
}

pub fn parse_measure<T: Real>(spec: &str) -> Result<LineMeasure<T>> {
    let (name, args, scale) = split_spec(spec)?;
    let u = match name.as_str() {
        "one" | "lebesgue" => LineMeasure::lebesgue(),
        "expabs" => LineMeasure::exp_abs(),
        "oneplusabs" => LineMeasure::one_plus_abs(),
        "powerabs" => LineMeasure::power_abs(keyed(&args, "a")?)?,
        "step" => {
            let (xs, vs) = pairs(&args)?;
            LineMeasure::step(xs, vs)?
        }
        other => return Err(perr(format!("unknown measure family {other:?}"))),
    };
    match scale {
        Some(c) => u.scaled(num(&c)?),
        None => Ok(u),
    }
}

/// `step:<x0>,<v0>;…;<xn>,0` (the final value closes the support) or `zero`.
pub fn parse_step<T: Real>(spec: &str) -> Result<StepFn<T>> {
    let (name, args, scale) = split_spec(spec)?;
    let f = match name.as_str() {
        "zero" => StepFn::zero(),
        "step" => {
            let (xs, mut vs) = pairs::<T>(&args)?;
            if vs.pop() != Some(T::zero()) {
                return Err(perr("step function must end with a zero value"));
            }
            StepFn::new(xs, vs)?
        }
        other => return Err(perr(format!("unknown function {other:?}"))),
    };
    match scale {
        Some(c) => Ok(f.scale(num(&c)?)),
        None => Ok(f),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights() {
        let w: Weight<f64> = parse_weight("Power:a=0.5*2").unwrap();
        assert!((w.primitive(1.0) - 2.0 / 1.5).abs() < 1e-15);
        let s: Weight<f64> = parse_weight("step:0,1;2,0").unwrap();
        assert_eq!(s.primitive(5.0), 2.0);
        assert!(parse_weight::<f64>("power:a=-1").is_err());
        assert!(parse_weight::<f64>("power: a=1").is_err());
        assert!(parse_weight::<f64>("nope").is_err());
    }

    #[test]
    fn measures_and_functions() {
        let u: LineMeasure<f64> = parse_measure("powerabs:a=1").unwrap();
        assert_eq!(crate::piecewise::Measure::mass(&u, -1.0, 1.0).get(), 1.0);
        let f: StepFn<f64> = parse_step("step:0,1;1,0").unwrap();
        assert_eq!(f.integral(), 1.0);
        assert!(parse_step::<f64>("step:0,1;1,2").is_err());
    }
}
