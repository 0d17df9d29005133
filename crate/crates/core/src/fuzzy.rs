//! Weighting functions, fuzzy numbers given by their level sets, and the
//! possibilistic indicators built on them.
//!
//! For a weighting function `f`, a fuzzy number `A` with level sets
//! `[a₁(γ), a₂(γ)]` and a function `u`, the possibilistic expected utility is
//!
//! ```text
//! E_f(u(A)) = ½ ∫₀¹ [u(a₁(γ)) + u(a₂(γ))] f(γ) dγ
//! ```
//!
//! The possibilistic mean is `E_f(A)` (u = identity) and the possibilistic
//! variance is `E_f((A - E_f(A))²)`.

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::quadrature::QuadratureRule;

/// Monotonicity slack allowed in sampled level-set tables.
pub const SAMPLED_MONOTONE_TOLERANCE: f64 = 1e-9;

/// Non-negative, non-decreasing density on `[0, 1]` with unit mass.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum WeightingFunction {
    /// `f(t) = 1`.
    Uniform,
    /// `f(t) = (p + 1)·t^p`; `p = 1` gives `f(t) = 2t`.
    Power { exponent: f64 },
}

impl WeightingFunction {
    pub fn power(exponent: f64) -> Result<Self> {
        if !(exponent.is_finite() && exponent >= 0.0) {
            return Err(Error::invalid(format!(
                "weighting exponent must be finite and >= 0, got {exponent}"
            )));
        }
        Ok(WeightingFunction::Power { exponent })
    }

    /// `f(t) = 2t`.
    pub fn linear() -> Self {
        WeightingFunction::Power { exponent: 1.0 }
    }

    pub fn density(&self, t: f64) -> f64 {
        match *self {
            WeightingFunction::Uniform => 1.0,
            WeightingFunction::Power { exponent } => (exponent + 1.0) * t.powf(exponent),
        }
    }
}

impl Default for WeightingFunction {
    fn default() -> Self {
        WeightingFunction::linear()
    }
}

/// One row of a sampled level-set table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelSample {
    pub level: f64,
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FuzzyShape {
    CrispPoint { value: f64 },
    CrispInterval { lower: f64, upper: f64 },
    Triangular { peak: f64, left: f64, right: f64 },
    Trapezoidal { core_lower: f64, core_upper: f64, left: f64, right: f64 },
    /// Endpoints interpolated linearly in γ between rows; the first row must
    /// sit at γ = 0 and the last at γ = 1.
    Sampled(Vec<LevelSample>),
}

/// A fuzzy number represented by its family of γ-level intervals.
///
/// Construction validates the shape: `a₁` is non-decreasing, `a₂` is
/// non-increasing and `a₁ ≤ a₂` at every level.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzyNumber {
    shape: FuzzyShape,
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} must be finite, got {v}")))
    }
}

fn spread(name: &str, v: f64) -> Result<()> {
    finite(name, v)?;
    if v < 0.0 {
        return Err(Error::invalid(format!("{name} must be >= 0, got {v}")));
    }
    Ok(())
}

impl FuzzyNumber {
    pub fn new(shape: FuzzyShape) -> Result<Self> {
        match &shape {
            FuzzyShape::CrispPoint { value } => finite("value", *value)?,
            FuzzyShape::CrispInterval { lower, upper } => {
                finite("lower", *lower)?;
                finite("upper", *upper)?;
                if lower >= upper {
                    return Err(Error::invalid(format!(
                        "crisp interval needs lower < upper, got [{lower}, {upper}]"
                    )));
                }
            }
            FuzzyShape::Triangular { peak, left, right } => {
                finite("peak", *peak)?;
                spread("left spread", *left)?;
                spread("right spread", *right)?;
            }
            FuzzyShape::Trapezoidal { core_lower, core_upper, left, right } => {
                finite("core lower", *core_lower)?;
                finite("core upper", *core_upper)?;
                spread("left spread", *left)?;
                spread("right spread", *right)?;
                if core_lower > core_upper {
                    return Err(Error::invalid(format!(
                        "trapezoid core [{core_lower}, {core_upper}] is reversed"
                    )));
                }
            }
            FuzzyShape::Sampled(rows) => validate_samples(rows)?,
        }
        Ok(FuzzyNumber { shape })
    }

    pub fn crisp_point(value: f64) -> Result<Self> {
        Self::new(FuzzyShape::CrispPoint { value })
    }

    pub fn crisp_interval(lower: f64, upper: f64) -> Result<Self> {
        Self::new(FuzzyShape::CrispInterval { lower, upper })
    }

    pub fn triangular(peak: f64, left: f64, right: f64) -> Result<Self> {
        Self::new(FuzzyShape::Triangular { peak, left, right })
    }

    pub fn trapezoidal(core_lower: f64, core_upper: f64, left: f64, right: f64) -> Result<Self> {
        Self::new(FuzzyShape::Trapezoidal { core_lower, core_upper, left, right })
    }

    pub fn sampled(rows: Vec<LevelSample>) -> Result<Self> {
        Self::new(FuzzyShape::Sampled(rows))
    }

    pub fn shape(&self) -> &FuzzyShape {
        &self.shape
    }

    /// True when the level sets do not depend on γ.
    pub fn is_level_invariant(&self) -> bool {
        matches!(
            self.shape,
            FuzzyShape::CrispPoint { .. } | FuzzyShape::CrispInterval { .. }
        )
    }

    pub fn is_crisp_point(&self) -> bool {
        matches!(self.shape, FuzzyShape::CrispPoint { .. })
    }

    /// `[a₁(γ), a₂(γ)]`.
    pub fn level_set(&self, level: f64) -> Result<(f64, f64)> {
        if !(0.0..=1.0).contains(&level) {
            return Err(Error::Domain {
                what: "level",
                value: level,
                lower: 0.0,
                upper: 1.0,
            });
        }
        Ok(self.level_set_unchecked(level))
    }

    fn level_set_unchecked(&self, level: f64) -> (f64, f64) {
        let below = 1.0 - level;
        match &self.shape {
            FuzzyShape::CrispPoint { value } => (*value, *value),
            FuzzyShape::CrispInterval { lower, upper } => (*lower, *upper),
            FuzzyShape::Triangular { peak, left, right } => {
                (peak - below * left, peak + below * right)
            }
            FuzzyShape::Trapezoidal { core_lower, core_upper, left, right } => {
                (core_lower - below * left, core_upper + below * right)
            }
            FuzzyShape::Sampled(rows) => {
                let i = rows
                    .partition_point(|r| r.level <= level)
                    .clamp(1, rows.len() - 1);
                let (r0, r1) = (&rows[i - 1], &rows[i]);
                let w = (level - r0.level) / (r1.level - r0.level);
                (
                    r0.lower + w * (r1.lower - r0.lower),
                    r0.upper + w * (r1.upper - r0.upper),
                )
            }
        }
    }

    /// The closure of the support, `[a₁(0), a₂(0)]`.
    pub fn support(&self) -> (f64, f64) {
        self.level_set_unchecked(0.0)
    }

    /// `A + t`: every level set translated by `t`.
    pub fn shifted(&self, t: f64) -> Result<Self> {
        let shape = match &self.shape {
            FuzzyShape::CrispPoint { value } => FuzzyShape::CrispPoint { value: value + t },
            FuzzyShape::CrispInterval { lower, upper } => FuzzyShape::CrispInterval {
                lower: lower + t,
                upper: upper + t,
            },
            FuzzyShape::Triangular { peak, left, right } => FuzzyShape::Triangular {
                peak: peak + t,
                left: *left,
                right: *right,
            },
            FuzzyShape::Trapezoidal { core_lower, core_upper, left, right } => {
                FuzzyShape::Trapezoidal {
                    core_lower: core_lower + t,
                    core_upper: core_upper + t,
                    left: *left,
                    right: *right,
                }
            }
            FuzzyShape::Sampled(rows) => FuzzyShape::Sampled(
                rows.iter()
                    .map(|r| LevelSample {
                        level: r.level,
                        lower: r.lower + t,
                        upper: r.upper + t,
                    })
                    .collect(),
            ),
        };
        FuzzyNumber::new(shape)
    }
}

fn validate_samples(rows: &[LevelSample]) -> Result<()> {
    if rows.len() < 2 {
        return Err(Error::invalid("sampled fuzzy number needs at least two levels"));
    }
    for r in rows {
        finite("level", r.level)?;
        finite("lower endpoint", r.lower)?;
        finite("upper endpoint", r.upper)?;
        if r.lower > r.upper + SAMPLED_MONOTONE_TOLERANCE {
            return Err(Error::invalid(format!(
                "level {}: lower endpoint {} exceeds upper endpoint {}",
                r.level, r.lower, r.upper
            )));
        }
    }
    if rows[0].level != 0.0 || rows[rows.len() - 1].level != 1.0 {
        return Err(Error::invalid("sampled levels must start at 0 and end at 1"));
    }
    for pair in rows.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.level <= a.level {
            return Err(Error::invalid("sampled levels must be strictly increasing"));
        }
        if b.lower < a.lower - SAMPLED_MONOTONE_TOLERANCE {
            return Err(Error::invalid(format!(
                "lower endpoint decreases between levels {} and {}",
                a.level, b.level
            )));
        }
        if b.upper > a.upper + SAMPLED_MONOTONE_TOLERANCE {
            return Err(Error::invalid(format!(
                "upper endpoint increases between levels {} and {}",
                a.level, b.level
            )));
        }
    }
    Ok(())
}

/// `½ ∫₀¹ [g(a₁(γ)) + g(a₂(γ))] f(γ) dγ` for a fallible `g`.
///
/// Level-invariant shapes skip the quadrature: their integrand is constant
/// in γ and `∫f = 1`.
pub(crate) fn level_average(
    weighting: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    rule: &QuadratureRule,
    g: impl Fn(f64) -> Result<f64>,
) -> Result<f64> {
    match fuzzy.shape {
        FuzzyShape::CrispPoint { value } => g(value),
        FuzzyShape::CrispInterval { lower, upper } => Ok(0.5 * (g(lower)? + g(upper)?)),
        _ => rule.try_integrate(|t| {
            let (lo, hi) = fuzzy.level_set_unchecked(t);
            Ok(0.5 * (g(lo)? + g(hi)?) * weighting.density(t))
        }),
    }
}

/// `E_f(u(A))`.
pub fn possibilistic_expected_utility<U: RealFunction + ?Sized>(
    weighting: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    u: &U,
    rule: &QuadratureRule,
) -> Result<f64> {
    level_average(weighting, fuzzy, rule, |x| u.value(x))
}

/// `E_f(A)`.
pub fn possibilistic_mean(
    weighting: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    rule: &QuadratureRule,
) -> Result<f64> {
    possibilistic_expected_utility(weighting, fuzzy, &|x: f64| x, rule)
}

/// `Var_f(A) = E_f((A - E_f(A))²)`.
pub fn possibilistic_variance(
    weighting: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    rule: &QuadratureRule,
) -> Result<f64> {
    let mean = possibilistic_mean(weighting, fuzzy, rule)?;
    possibilistic_variance_about(weighting, fuzzy, rule, mean)
}

/// Variance about an already computed mean.
pub fn possibilistic_variance_about(
    weighting: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    rule: &QuadratureRule,
    mean: f64,
) -> Result<f64> {
    if fuzzy.is_crisp_point() {
        return Ok(0.0);
    }
    level_average(weighting, fuzzy, rule, |x| Ok((x - mean) * (x - mean)))
}

/// Second-order approximation `u(E_f(A)) + ½·u''(E_f(A))·Var_f(A)`.
pub fn approx_expected_utility<U: RealFunction + ?Sized>(
    weighting: &WeightingFunction,
    fuzzy: &FuzzyNumber,
    u: &U,
    rule: &QuadratureRule,
) -> Result<f64> {
    let mean = possibilistic_mean(weighting, fuzzy, rule)?;
    let var = possibilistic_variance_about(weighting, fuzzy, rule, mean)?;
    let curvature = u.derivative(2, mean)?;
    Ok(u.value(mean)? + 0.5 * curvature * var)
}
