//! Utility functions with closed-form derivatives up to order three and
//! Kimball's prudence indices.

use crate::error::{Error, Result};
use crate::function::RealFunction;

/// A concave, increasing utility on an open interval of consumption levels.
///
/// | kind | `u(x)` | domain |
/// |------|--------|--------|
/// | CRRA(γ) | `x^{1-γ}/(1-γ)` | `x > 0` |
/// | log | `ln x` | `x > 0` |
/// | CARA(a) | `-e^{-ax}/a` | all reals |
/// | quadratic(b) | `x - b x²/2` | `x < 1/b` |
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum UtilityFunction {
    Crra { gamma: f64 },
    Log,
    Cara { a: f64 },
    Quadratic { b: f64 },
}

impl UtilityFunction {
    /// CRRA with relative risk aversion `gamma`; `gamma = 1` is rejected, use
    /// [`UtilityFunction::Log`] or [`UtilityFunction::isoelastic`].
    pub fn crra(gamma: f64) -> Result<Self> {
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::invalid(format!("CRRA needs gamma > 0, got {gamma}")));
        }
        if gamma == 1.0 {
            return Err(Error::invalid(
                "CRRA with gamma = 1 is the log utility".to_string(),
            ));
        }
        Ok(UtilityFunction::Crra { gamma })
    }

    /// The isoelastic family including its log limit at `gamma = 1`.
    pub fn isoelastic(gamma: f64) -> Result<Self> {
        if gamma == 1.0 {
            Ok(UtilityFunction::Log)
        } else {
            Self::crra(gamma)
        }
    }

    pub fn cara(a: f64) -> Result<Self> {
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::invalid(format!("CARA needs a > 0, got {a}")));
        }
        Ok(UtilityFunction::Cara { a })
    }

    pub fn quadratic(b: f64) -> Result<Self> {
        if !(b.is_finite() && b > 0.0) {
            return Err(Error::invalid(format!("quadratic utility needs b > 0, got {b}")));
        }
        Ok(UtilityFunction::Quadratic { b })
    }

    /// Open interval `(lower, upper)` on which `u' > 0` and `u'' < 0`.
    pub fn domain(&self) -> (f64, f64) {
        match *self {
            UtilityFunction::Crra { .. } | UtilityFunction::Log => (0.0, f64::INFINITY),
            UtilityFunction::Cara { .. } => (f64::NEG_INFINITY, f64::INFINITY),
            UtilityFunction::Quadratic { b } => (f64::NEG_INFINITY, 1.0 / b),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let (lo, hi) = self.domain();
        x > lo && x < hi
    }

    /// `u(x)`, `u'(x)`, `u''(x)` or `u'''(x)` for `order` 0 to 3.
    pub fn eval(&self, x: f64, order: usize) -> Result<f64> {
        if order > 3 {
            return Err(Error::Capability { order });
        }
        if !self.contains(x) {
            let (lower, upper) = self.domain();
            return Err(Error::Domain {
                what: "consumption",
                value: x,
                lower,
                upper,
            });
        }
        let y = match *self {
            UtilityFunction::Crra { gamma } => match order {
                0 => x.powf(1.0 - gamma) / (1.0 - gamma),
                1 => x.powf(-gamma),
                2 => -gamma * x.powf(-gamma - 1.0),
                _ => gamma * (gamma + 1.0) * x.powf(-gamma - 2.0),
            },
            UtilityFunction::Log => match order {
                0 => x.ln(),
                1 => 1.0 / x,
                2 => -1.0 / (x * x),
                _ => 2.0 / (x * x * x),
            },
            UtilityFunction::Cara { a } => {
                let e = (-a * x).exp();
                match order {
                    0 => -e / a,
                    1 => e,
                    2 => -a * e,
                    _ => a * a * e,
                }
            }
            UtilityFunction::Quadratic { b } => match order {
                0 => x - 0.5 * b * x * x,
                1 => 1.0 - b * x,
                2 => -b,
                _ => 0.0,
            },
        };
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Evaluation { x })
        }
    }

    /// Kimball's absolute prudence `-u'''(x)/u''(x)`.
    pub fn absolute_prudence(&self, x: f64) -> Result<f64> {
        let d2 = self.eval(x, 2)?;
        if d2 == 0.0 {
            return Err(Error::Singular { x });
        }
        Ok(-self.eval(x, 3)? / d2)
    }

    /// Relative prudence `x·P_u(x)`.
    pub fn relative_prudence(&self, x: f64) -> Result<f64> {
        Ok(x * self.absolute_prudence(x)?)
    }
}

impl RealFunction for UtilityFunction {
    fn value(&self, x: f64) -> Result<f64> {
        self.eval(x, 0)
    }

    fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        self.eval(x, order)
    }
}
