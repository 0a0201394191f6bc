//! Parametric rate families for birth, death and drug response.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::grid::Grid;

/// A rate as a function of the trait, in events per unit time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum RateSpec {
    /// `amplitude / (1 + steepness x^2)`
    RationalDecay {
        amplitude: f64,
        steepness: f64,
    },
    /// `numerator / (offset^2 + x^2)`
    InverseQuadratic {
        numerator: f64,
        offset: f64,
    },
    /// `base (1 - slope x)`
    Affine {
        base: f64,
        slope: f64,
    },
    Constant {
        value: f64,
    },
}

impl RateSpec {
    pub const fn constant(value: f64) -> Self {
        RateSpec::Constant { value }
    }

    pub const fn rational_decay(amplitude: f64, steepness: f64) -> Self {
        RateSpec::RationalDecay {
            amplitude,
            steepness,
        }
    }

    pub const fn inverse_quadratic(numerator: f64, offset: f64) -> Self {
        RateSpec::InverseQuadratic { numerator, offset }
    }

    pub const fn affine(base: f64, slope: f64) -> Self {
        RateSpec::Affine { base, slope }
    }

    #[inline]
    pub fn eval(&self, x: f64) -> f64 {
        match *self {
            RateSpec::RationalDecay {
                amplitude,
                steepness,
            } => amplitude / (1.0 + steepness * x * x),
            RateSpec::InverseQuadratic { numerator, offset } => {
                numerator / (offset * offset + x * x)
            }
            RateSpec::Affine { base, slope } => base * (1.0 - slope * x),
            RateSpec::Constant { value } => value,
        }
    }

    pub fn sample(&self, grid: &Grid) -> Vec<f64> {
        grid.sample(|x| self.eval(x))
    }

    /// Checks that the rate is finite and nonnegative at every node.
    pub fn check_on(&self, grid: &Grid) -> Result<(), String> {
        for (i, v) in self.sample(grid).into_iter().enumerate() {
            if !v.is_finite() || v < 0.0 {
                return Err(format!(
                    "rate {self} evaluates to {v} at x = {}",
                    grid.node(i)
                ));
            }
        }
        Ok(())
    }

    fn coefficients(&self) -> (&'static str, Vec<f64>) {
        match *self {
            RateSpec::RationalDecay {
                amplitude,
                steepness,
            } => ("rational-decay", vec![amplitude, steepness]),
            RateSpec::InverseQuadratic { numerator, offset } => {
                ("inverse-quadratic", vec![numerator, offset])
            }
            RateSpec::Affine { base, slope } => ("affine", vec![base, slope]),
            RateSpec::Constant { value } => ("constant", vec![value]),
        }
    }
}

impl fmt::Display for RateSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, coefs) = self.coefficients();
        write!(f, "{name}(")?;
        for (i, c) in coefs.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for RateSpec {
    type Err = String;

    /// Parses `family(c1, c2, ...)`, e.g. `rational-decay(2, 5)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let open = s
            .find('(')
            .ok_or_else(|| format!("expected `family(coefficients)`, got `{s}`"))?;
        if !s.ends_with(')') {
            return Err(format!("missing closing parenthesis in `{s}`"));
        }
        let name = s[..open].trim();
        let args: Vec<f64> = s[open + 1..s.len() - 1]
            .split(',')
            .map(|a| {
                a.trim()
                    .parse::<f64>()
                    .map_err(|_| format!("`{}` is not a number", a.trim()))
            })
            .collect::<Result<_, _>>()?;
        let want = |n: usize| -> Result<(), String> {
            if args.len() == n {
                Ok(())
            } else {
                Err(format!(
                    "{name} takes {n} coefficient(s), got {}",
                    args.len()
                ))
            }
        };
        match name {
            "rational-decay" => {
                want(2)?;
                Ok(RateSpec::rational_decay(args[0], args[1]))
            }
            "inverse-quadratic" => {
                want(2)?;
                Ok(RateSpec::inverse_quadratic(args[0], args[1]))
            }
            "affine" => {
                want(2)?;
                Ok(RateSpec::affine(args[0], args[1]))
            }
            "constant" => {
                want(1)?;
                Ok(RateSpec::constant(args[0]))
            }
            other => Err(format!(
                "unknown rate family `{other}` (expected rational-decay, inverse-quadratic, affine or constant)"
            )),
        }
    }
}
