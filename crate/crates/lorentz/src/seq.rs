//! Sequences with an implicit zero tail, and weight sequences on ℕ.

use crate::error::{Error, Result};
use crate::ext::ExtReal;
use crate::piecewise::parse::{keyed, num, split_spec};
use crate::real::Real;

/// Finite nonnegative sequence; terms past the end are zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Seq<T> {
    terms: Vec<T>,
}

impl<T: Real> Seq<T> {
    pub fn new(terms: Vec<T>) -> Result<Self> {
        if terms.iter().any(|t| !(*t >= T::zero()) || !t.is_finite()) {
            return Err(Error::Invalid("sequence terms must be finite and >= 0".into()));
        }
        Ok(Seq { terms })
    }

    pub fn terms(&self) -> &[T] {
        &self.terms
    }

    pub fn get(&self, n: usize) -> T {
        self.terms.get(n).copied().unwrap_or(T::zero())
    }

    /// One past the last nonzero term.
    pub fn support_len(&self) -> usize {
        self.terms.iter().rposition(|t| *t > T::zero()).map_or(0, |i| i + 1)
    }

    /// Nonincreasing rearrangement (support only).
    pub fn rearranged(&self) -> Vec<T> {
        let mut v: Vec<T> = self.terms.iter().copied().filter(|t| *t > T::zero()).collect();
        v.sort_by(|a, b| b.partial_cmp(a).unwrap());
        v
    }
}

/// Weight sequence `Ω = (Ω_n)_{n >= 0}` with partial sums `W_n = Σ_{k<=n} Ω_k`.
#[derive(Clone, Debug, PartialEq)]
pub enum DiscreteWeight<T> {
    Const(T),
    /// `c0 r^n`
    Geometric { c0: T, r: T },
    /// `c (n+1)^a`
    Power { c: T, a: T },
    /// `(n+1)^a - n^a`, so `W_n = (n+1)^a`
    PowerDiff(T),
    /// explicit head, then a constant tail
    Terms { head: Vec<T>, tail: T },
}

impl<T: Real> DiscreteWeight<T> {
    pub fn ones() -> Self {
        DiscreteWeight::Const(T::one())
    }

    pub fn from_seq(s: &Seq<T>) -> Self {
        DiscreteWeight::Terms { head: s.terms().to_vec(), tail: T::zero() }
    }

    pub fn term(&self, n: usize) -> T {
        let nn = T::of_usize(n);
        match self {
            DiscreteWeight::Const(c) => *c,
            DiscreteWeight::Geometric { c0, r } => *c0 * r.powi(n as i32),
            DiscreteWeight::Power { c, a } => *c * (nn + T::one()).powf(*a),
            DiscreteWeight::PowerDiff(a) => (nn + T::one()).powf(*a) - nn.powf(*a),
            DiscreteWeight::Terms { head, tail } => head.get(n).copied().unwrap_or(*tail),
        }
    }

    /// `[W_0, …, W_{n-1}]`.
    pub fn partials(&self, n: usize) -> Vec<T> {
        match self {
            DiscreteWeight::PowerDiff(a) => (0..n).map(|k| (T::of_usize(k) + T::one()).powf(*a)).collect(),
            DiscreteWeight::Const(c) => (0..n).map(|k| *c * T::of_usize(k + 1)).collect(),
            _ => {
                let mut acc = T::zero();
                (0..n)
                    .map(|k| {
                        acc = acc + self.term(k);
                        acc
                    })
                    .collect()
            }
        }
    }

    /// `W_∞`.
    pub fn total(&self) -> ExtReal<T> {
        match self {
            DiscreteWeight::Const(c) => {
                if *c > T::zero() {
                    ExtReal::infinity()
                } else {
                    ExtReal::zero()
                }
            }
            DiscreteWeight::Geometric { c0, r } => {
                if *r < T::one() {
                    ExtReal::new(*c0 / (T::one() - *r))
                } else {
                    ExtReal::infinity()
                }
            }
            DiscreteWeight::Power { c, a } => {
                if *a >= -T::one() {
                    ExtReal::infinity()
                } else {
                    // Σ_{m>=1} m^a: exact head plus Euler–Maclaurin tail
                    let n = 1000usize;
                    let head: T = (1..=n).map(|m| T::of_usize(m).powf(*a)).sum();
                    let nn = T::of_usize(n);
                    let tail = nn.powf(*a + T::one()) / (-(*a + T::one())) - nn.powf(*a) / T::two()
                        - *a * nn.powf(*a - T::one()) / T::lit(12.0);
                    ExtReal::new(*c * (head + tail))
                }
            }
            DiscreteWeight::PowerDiff(a) => {
                if *a > T::zero() {
                    ExtReal::infinity()
                } else {
                    ExtReal::new(T::one())
                }
            }
            DiscreteWeight::Terms { head, tail } => {
                if *tail > T::zero() {
                    ExtReal::infinity()
                } else {
                    ExtReal::new(head.iter().copied().sum())
                }
            }
        }
    }

    /// Nonincreasing on the first `n` terms.
    pub fn is_nonincreasing(&self, n: usize) -> bool {
        (1..n).all(|k| self.term(k) <= self.term(k - 1))
    }

    /// Nondecreasing on the first `n` terms.
    pub fn is_nondecreasing(&self, n: usize) -> bool {
        (1..n).all(|k| self.term(k) >= self.term(k - 1))
    }

    /// `Ω = (Ω_0, 0, 0, …)`.
    pub fn is_single_atom(&self, n: usize) -> bool {
        (1..n).all(|k| self.term(k) == T::zero())
    }
}

/// `const:c=<c>`, `geom:r=<r>` (optionally `geom:r=<r>*<c0>`), `power:a=<a>`,
/// `powerdiff:a=<a>`, `seq:<x0>,<x1>,…[;tail=<c>]`, and `one`.
pub fn parse_discrete<T: Real>(spec: &str) -> Result<DiscreteWeight<T>> {
    let (name, args, scale) = split_spec(spec)?;
    let c: T = match &scale {
        Some(s) => num(s)?,
        None => T::one(),
    };
    let w = match name.as_str() {
        "one" => DiscreteWeight::Const(c),
        "const" => DiscreteWeight::Const(keyed::<T>(&args, "c")? * c),
        "geom" => DiscreteWeight::Geometric { c0: c, r: keyed(&args, "r")? },
        "power" => DiscreteWeight::Power { c, a: keyed(&args, "a")? },
        "powerdiff" => {
            if scale.is_some() {
                return Err(Error::Parse("powerdiff takes no scale".into()));
            }
            DiscreteWeight::PowerDiff(keyed(&args, "a")?)
        }
        "seq" => {
            let (list, tail) = match args.split_once(";tail=") {
                Some((l, t)) => (l.to_string(), num::<T>(t)?),
                None => (args.clone(), T::zero()),
            };
            let head = list.split(',').filter(|s| !s.is_empty()).map(|s| num::<T>(s).map(|x| x * c)).collect::<Result<Vec<T>>>()?;
            DiscreteWeight::Terms { head, tail: tail * c }
        }
        other => return Err(Error::Parse(format!("unknown sequence family {other:?}"))),
    };
    if (0..64).any(|n| !(w.term(n) >= T::zero())) {
        return Err(Error::Invalid("weight sequence must be nonnegative".into()));
    }
    Ok(w)
}

/// `seq:<x0>,<x1>,…` as a finitely supported sequence.
pub fn parse_seq<T: Real>(spec: &str) -> Result<Seq<T>> {
    match parse_discrete::<T>(spec)? {
        DiscreteWeight::Terms { head, tail } if tail == T::zero() => Seq::new(head),
        _ => Err(Error::Parse(format!("expected seq:<x0>,<x1>,… got {spec:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_sums() {
        let w = DiscreteWeight::<f64>::PowerDiff(0.5);
        let p = w.partials(4);
        assert!((p[3] - 2.0).abs() < 1e-15);
        let g = DiscreteWeight::Geometric { c0: 1.0, r: 0.5 };
        assert_eq!(g.total().get(), 2.0);
        let z = DiscreteWeight::Power { c: 1.0, a: -2.0 };
        assert!((z.total().get() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn parsing() {
        let w: DiscreteWeight<f64> = parse_discrete("geom:r=2").unwrap();
        assert_eq!(w.term(3), 8.0);
        let s: Seq<f64> = parse_seq("seq:1,2,0").unwrap();
        assert_eq!(s.support_len(), 2);
        let t: DiscreteWeight<f64> = parse_discrete("seq:1,3;tail=1").unwrap();
        assert_eq!(t.partials(4), vec![1.0, 4.0, 5.0, 6.0]);
    }
}
