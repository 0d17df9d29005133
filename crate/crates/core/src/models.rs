//! Two-period saving problems under a certain, a random, or a fuzzy return.
//!
//! With income `y₀`, utility `u` and saving `s`, second-period consumption is
//! `s·x` for a gross return `x`. Writing `v(s, x) = u(s·x)`:
//!
//! ```text
//! U(s) = u(y₀ - s) + u(sR)            certain
//! V(s) = u(y₀ - s) + M[v(s, R̃)]       probabilistic
//! W(s) = u(y₀ - s) + E_f[v(s, A)]     possibilistic
//! ```
//!
//! All three share one evaluation path: the expectation operator of the risk
//! applied to `v`, `∂v/∂s = x·u'(sx)` or `∂²v/∂s² = x²·u''(sx)`.

use crate::error::{Error, Result};
use crate::fuzzy::{level_average, possibilistic_mean, possibilistic_variance, FuzzyNumber, WeightingFunction};
use crate::quadrature::QuadratureRule;
use crate::stochastic::RandomReturn;
use crate::utility::UtilityFunction;

/// Relative margin by which the feasible saving interval is shrunk away from
/// its theoretical boundaries.
pub const DOMAIN_MARGIN: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Risk {
    Certain { gross_return: f64 },
    Probabilistic(RandomReturn),
    Possibilistic { weighting: WeightingFunction, fuzzy: FuzzyNumber },
}

impl Risk {
    /// Smallest and largest gross return the model can realise.
    pub fn support(&self) -> (f64, f64) {
        match self {
            Risk::Certain { gross_return } => (*gross_return, *gross_return),
            Risk::Probabilistic(x) => x.support(),
            Risk::Possibilistic { fuzzy, .. } => fuzzy.support(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Risk::Certain { .. } => "certain",
            Risk::Probabilistic(_) => "probabilistic",
            Risk::Possibilistic { .. } => "possibilistic",
        }
    }
}

/// Which partial derivative of `v(s, x) = u(sx)` in `s` to average.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum KernelOrder {
    Value,
    First,
    Second,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SavingProblem {
    income: f64,
    utility: UtilityFunction,
    risk: Risk,
    quadrature: QuadratureRule,
    feasible: (f64, f64),
}

impl SavingProblem {
    pub fn new(income: f64, utility: UtilityFunction, risk: Risk) -> Result<Self> {
        Self::with_quadrature(income, utility, risk, QuadratureRule::standard().clone())
    }

    pub fn with_quadrature(
        income: f64,
        utility: UtilityFunction,
        risk: Risk,
        quadrature: QuadratureRule,
    ) -> Result<Self> {
        if !(income.is_finite() && income > 0.0) {
            return Err(Error::invalid(format!("income must be > 0, got {income}")));
        }
        if let Risk::Certain { gross_return } = risk {
            if !(gross_return.is_finite() && gross_return > 0.0) {
                return Err(Error::invalid(format!(
                    "gross return must be > 0, got {gross_return}"
                )));
            }
        }
        let (x_lo, x_hi) = risk.support();
        if x_lo <= 0.0 {
            return Err(Error::invalid(format!(
                "{} return support must lie in (0, inf), lower end is {x_lo}",
                risk.label()
            )));
        }
        let (lo, hi) = feasible_interval(income, &utility, x_lo, x_hi)?;
        let margin = DOMAIN_MARGIN * (hi - lo);
        Ok(SavingProblem {
            income,
            utility,
            risk,
            quadrature,
            feasible: (lo + margin, hi - margin),
        })
    }

    pub fn income(&self) -> f64 {
        self.income
    }

    pub fn utility(&self) -> &UtilityFunction {
        &self.utility
    }

    pub fn risk(&self) -> &Risk {
        &self.risk
    }

    pub fn quadrature(&self) -> &QuadratureRule {
        &self.quadrature
    }

    /// The working saving interval, already shrunk by [`DOMAIN_MARGIN`].
    pub fn feasible_interval(&self) -> (f64, f64) {
        self.feasible
    }

    /// Mean gross return of the risk: `R`, `M(R̃)` or `E_f(A)`.
    pub fn mean_return(&self) -> Result<f64> {
        match &self.risk {
            Risk::Certain { gross_return } => Ok(*gross_return),
            Risk::Probabilistic(x) => Ok(x.mean()),
            Risk::Possibilistic { weighting, fuzzy } => {
                possibilistic_mean(weighting, fuzzy, &self.quadrature)
            }
        }
    }

    /// Variance of the risk: 0, `D²(R̃)` or `Var_f(A)`.
    pub fn return_variance(&self) -> Result<f64> {
        match &self.risk {
            Risk::Certain { .. } => Ok(0.0),
            Risk::Probabilistic(x) => Ok(x.variance()),
            Risk::Possibilistic { weighting, fuzzy } => {
                possibilistic_variance(weighting, fuzzy, &self.quadrature)
            }
        }
    }

    fn check(&self, s: f64) -> Result<()> {
        let (lower, upper) = self.feasible;
        if s.is_nan() || s < lower || s > upper {
            return Err(Error::Domain { what: "saving", value: s, lower, upper });
        }
        Ok(())
    }

    fn expected_kernel(&self, s: f64, order: KernelOrder) -> Result<f64> {
        let u = &self.utility;
        let kernel = |x: f64| -> Result<f64> {
            let c = s * x;
            match order {
                KernelOrder::Value => u.eval(c, 0),
                KernelOrder::First => Ok(x * u.eval(c, 1)?),
                KernelOrder::Second => Ok(x * x * u.eval(c, 2)?),
            }
        };
        match &self.risk {
            Risk::Certain { gross_return } => kernel(*gross_return),
            Risk::Probabilistic(x) => x.expect_by(&self.quadrature, kernel),
            Risk::Possibilistic { weighting, fuzzy } => {
                level_average(weighting, fuzzy, &self.quadrature, kernel)
            }
        }
    }

    /// `U(s)`, `V(s)` or `W(s)`.
    pub fn total_utility(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.utility.eval(self.income - s, 0)? + self.expected_kernel(s, KernelOrder::Value)?)
    }

    /// First derivative of the total utility in `s`.
    pub fn foc(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(-self.utility.eval(self.income - s, 1)? + self.expected_kernel(s, KernelOrder::First)?)
    }

    /// Second derivative of the total utility in `s`; negative everywhere on
    /// the feasible interval.
    pub fn foc_derivative(&self, s: f64) -> Result<f64> {
        self.check(s)?;
        Ok(self.utility.eval(self.income - s, 2)? + self.expected_kernel(s, KernelOrder::Second)?)
    }
}

/// Open interval of savings for which first- and second-period consumption
/// stay inside the utility's domain for every return in `[x_lo, x_hi]`.
fn feasible_interval(
    income: f64,
    utility: &UtilityFunction,
    x_lo: f64,
    x_hi: f64,
) -> Result<(f64, f64)> {
    let (d_lo, d_hi) = utility.domain();
    let mut lo = 0.0f64;
    let mut hi = income;
    // first period: d_lo < y₀ - s < d_hi
    hi = hi.min(income - d_lo);
    lo = lo.max(income - d_hi);
    // second period: d_lo < s·x < d_hi for x in [x_lo, x_hi], x > 0
    if d_lo > 0.0 {
        lo = lo.max(d_lo / x_lo);
    }
    if d_hi.is_finite() {
        hi = hi.min(d_hi / x_hi);
    }
    if lo.is_nan() || hi.is_nan() || lo >= hi {
        return Err(Error::invalid(format!(
            "no feasible saving level: income {income} and returns [{x_lo}, {x_hi}] leave an empty interval"
        )));
    }
    Ok((lo, hi))
}
