//! Precautionary saving across the three models and the sign conditions
//! that characterise it.
//!
//! * `s₁* - s*` and `s** - s*` are non-negative exactly when the relative
//!   prudence at `R·s*` is at least 2.
//! * `s** - s₁*` is non-negative exactly when
//!   `[2u''(s₁*R) + Rs₁*·u'''(s₁*R)]·[Var_f(A) - D²(R̃)] ≥ 0`.
//!
//! Both statements come from second-order expansions, so they are decided
//! here with tie bands and reported as three-valued outcomes.

use crate::error::{Error, Result};
use crate::fuzzy::{possibilistic_mean, possibilistic_variance_about, FuzzyNumber, WeightingFunction};
use crate::models::{Risk, SavingProblem};
use crate::quadrature::QuadratureRule;
use crate::solver::{solve_optimum, SolveResult, SolverSettings};
use crate::stochastic::RandomReturn;
use crate::utility::UtilityFunction;

/// Threshold on relative prudence separating more from less saving.
pub const PRUDENCE_THRESHOLD: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// `|RP - 2|` at or below this is a boundary case.
    pub prudence_band: f64,
    /// `|product|` at or below this is a boundary case for the cross-model condition.
    pub product_band: f64,
    /// `|Var_f(A) - D²(R̃)|` at or below this counts as equal variances.
    pub variance_band: f64,
    /// `|Δs|` at or below this has no decidable sign.
    pub saving_band: f64,
    /// Allowed disagreement between `R`, `E_f(A)` and `M(R̃)`.
    pub mean_band: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            prudence_band: 1e-9,
            product_band: 1e-12,
            variance_band: 1e-12,
            saving_band: 1e-9,
            mean_band: 1e-9,
        }
    }
}

/// Outcome of a weak inequality evaluated with a tie band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails,
    Boundary,
}

impl Outcome {
    fn of(diff: f64, band: f64) -> Self {
        if diff.abs() <= band {
            Outcome::Boundary
        } else if diff > 0.0 {
            Outcome::Holds
        } else {
            Outcome::Fails
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
            Outcome::Boundary => "boundary",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    ExtraSaving,
    NoExtraSaving,
    Indeterminate,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::ExtraSaving => "extra_saving",
            Classification::NoExtraSaving => "no_extra_saving",
            Classification::Indeterminate => "indeterminate",
        }
    }
}

/// Sign of a saving difference, undecided inside the tie band.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Positive,
    Negative,
    Indeterminate,
}

impl Sign {
    pub fn of(value: f64, band: f64) -> Self {
        if value.abs() <= band {
            Sign::Indeterminate
        } else if value > 0.0 {
            Sign::Positive
        } else {
            Sign::Negative
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Sign::Positive => "positive",
            Sign::Negative => "negative",
            Sign::Indeterminate => "indeterminate",
        }
    }

    /// Whether the sign is consistent with a predicate that says the
    /// difference is non-negative (`Some(true)`) or negative (`Some(false)`).
    /// Undecided either way counts as consistent.
    pub fn agrees_with(&self, predicted_nonnegative: Option<bool>) -> bool {
        match (self, predicted_nonnegative) {
            (Sign::Indeterminate, _) | (_, None) => true,
            (Sign::Positive, Some(p)) => p,
            (Sign::Negative, Some(p)) => !p,
        }
    }
}

/// A predicate outcome together with the two sides it compared.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PredicateEval<T> {
    pub outcome: T,
    pub lhs: f64,
    pub rhs: f64,
}

impl PredicateEval<Outcome> {
    pub fn predicts_nonnegative(&self) -> Option<bool> {
        match self.outcome {
            Outcome::Holds => Some(true),
            Outcome::Fails => Some(false),
            Outcome::Boundary => None,
        }
    }
}

impl PredicateEval<Classification> {
    pub fn predicts_nonnegative(&self) -> Option<bool> {
        match self.outcome {
            Classification::ExtraSaving => Some(true),
            Classification::NoExtraSaving => Some(false),
            Classification::Indeterminate => None,
        }
    }
}

/// `2u''(sR) + Rs·u'''(sR)`, the curvature of the marginal return `x·u'(sx)`
/// at `x = R` divided by `s`.
fn marginal_curvature(u: &UtilityFunction, gross_return: f64, s: f64) -> Result<f64> {
    let c = gross_return * s;
    Ok(2.0 * u.eval(c, 2)? + c * u.eval(c, 3)?)
}

/// Relative prudence at `R·s` against 2: holds when `RP(Rs) ≥ 2`.
pub fn relative_prudence_condition(
    u: &UtilityFunction,
    gross_return: f64,
    s: f64,
    band: f64,
) -> Result<PredicateEval<Outcome>> {
    let rp = u.relative_prudence(gross_return * s)?;
    Ok(PredicateEval {
        outcome: Outcome::of(rp - PRUDENCE_THRESHOLD, band),
        lhs: rp,
        rhs: PRUDENCE_THRESHOLD,
    })
}

/// `[2u''(s₁R) + Rs₁·u'''(s₁R)]·[Var_f(A) - D²(R̃)] ≥ 0`, which holds exactly
/// when moving from the random to the fuzzy return raises saving.
pub fn cross_saving_condition(
    u: &UtilityFunction,
    gross_return: f64,
    s1: f64,
    var_poss: f64,
    var_prob: f64,
    band: f64,
) -> Result<PredicateEval<Outcome>> {
    if !(s1.is_finite() && var_poss.is_finite() && var_prob.is_finite()) {
        return Err(Error::invalid("cross-saving condition needs finite inputs"));
    }
    let product = marginal_curvature(u, gross_return, s1)? * (var_poss - var_prob);
    Ok(PredicateEval {
        outcome: Outcome::of(product, band),
        lhs: product,
        rhs: 0.0,
    })
}

/// Strict form of the cross-model condition as a disjunction: extra saving
/// when `RP(Rs₁) > 2` with `Var_f(A) > D²(R̃)`, or `RP(Rs₁) < 2` with
/// `Var_f(A) < D²(R̃)`. The reported `lhs` is `(RP - 2)·(Var_f(A) - D²(R̃))`.
pub fn classify_cross_saving(
    u: &UtilityFunction,
    gross_return: f64,
    s1: f64,
    var_poss: f64,
    var_prob: f64,
    tol: &Tolerances,
) -> Result<PredicateEval<Classification>> {
    if !(s1.is_finite() && var_poss.is_finite() && var_prob.is_finite()) {
        return Err(Error::invalid("cross-saving classification needs finite inputs"));
    }
    let rp_gap = u.relative_prudence(gross_return * s1)? - PRUDENCE_THRESHOLD;
    let var_gap = var_poss - var_prob;
    let outcome = if rp_gap.abs() <= tol.prudence_band || var_gap.abs() <= tol.variance_band {
        Classification::Indeterminate
    } else if (rp_gap > 0.0) == (var_gap > 0.0) {
        Classification::ExtraSaving
    } else {
        Classification::NoExtraSaving
    };
    Ok(PredicateEval { outcome, lhs: rp_gap * var_gap, rhs: 0.0 })
}

/// Second-order estimate of the possibilistic FOC at `s`:
/// `(variance/2)·s·[2u''(sR) + Rs·u'''(sR)]`.
///
/// With `variance = Var_f(A)` and `s = s*` this estimates `W'(s*)`; with
/// `variance = Var_f(A) - D²(R̃)` and `s = s₁*` it estimates `W'(s₁*)`.
pub fn approx_foc_at(u: &UtilityFunction, gross_return: f64, s: f64, variance: f64) -> Result<f64> {
    if s.is_nan() || s <= 0.0 {
        return Err(Error::invalid(format!("saving must be > 0, got {s}")));
    }
    if variance == 0.0 {
        return Ok(0.0);
    }
    Ok(0.5 * variance * s * marginal_curvature(u, gross_return, s)?)
}

/// Everything needed to compare the three saving models on one consumer.
#[derive(Debug, Clone)]
pub struct ComparisonSetup {
    pub income: f64,
    pub utility: UtilityFunction,
    pub gross_return: f64,
    pub random_return: RandomReturn,
    pub weighting: WeightingFunction,
    pub fuzzy_return: FuzzyNumber,
    pub quadrature: QuadratureRule,
    pub solver: SolverSettings,
    pub tolerances: Tolerances,
}

impl ComparisonSetup {
    pub fn certain_problem(&self) -> Result<SavingProblem> {
        SavingProblem::with_quadrature(
            self.income,
            self.utility,
            Risk::Certain { gross_return: self.gross_return },
            self.quadrature.clone(),
        )
    }

    pub fn probabilistic_problem(&self) -> Result<SavingProblem> {
        SavingProblem::with_quadrature(
            self.income,
            self.utility,
            Risk::Probabilistic(self.random_return.clone()),
            self.quadrature.clone(),
        )
    }

    pub fn possibilistic_problem(&self) -> Result<SavingProblem> {
        SavingProblem::with_quadrature(
            self.income,
            self.utility,
            Risk::Possibilistic {
                weighting: self.weighting,
                fuzzy: self.fuzzy_return.clone(),
            },
            self.quadrature.clone(),
        )
    }

    /// `E_f(A)` and `M(R̃)`, failing with [`Error::MeanMismatch`] when either
    /// strays from `R` by more than the mean band.
    pub fn checked_means(&self) -> Result<(f64, f64)> {
        let poss = possibilistic_mean(&self.weighting, &self.fuzzy_return, &self.quadrature)?;
        let prob = self.random_return.mean();
        let r = self.gross_return;
        let band = self.tolerances.mean_band;
        if !r.is_finite() || (poss - r).abs() > band || (prob - r).abs() > band {
            return Err(Error::MeanMismatch { target: r, possibilistic: poss, probabilistic: prob });
        }
        Ok((poss, prob))
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub gross_return: f64,
    pub certain: SolveResult,
    pub probabilistic: SolveResult,
    pub possibilistic: SolveResult,
    pub s_star: f64,
    pub s1_star: f64,
    pub s_dstar: f64,
    /// `s₁* - s*`.
    pub prec_prob: f64,
    /// `s** - s*`.
    pub prec_poss: f64,
    /// `s** - s₁*`.
    pub prec_cross: f64,
    pub sign_prob: Sign,
    pub sign_poss: Sign,
    pub sign_cross: Sign,
    pub rp_at_rs_star: f64,
    pub rp_at_rs1_star: f64,
    pub var_poss: f64,
    pub var_prob: f64,
    pub prudence_condition: PredicateEval<Outcome>,
    pub cross_condition: PredicateEval<Outcome>,
    pub cross_classification: PredicateEval<Classification>,
    /// Second-order estimate of `W'(s*)` next to its exact value.
    pub approx_foc_at_s_star: f64,
    pub exact_foc_at_s_star: f64,
    /// Second-order estimate of `W'(s₁*)` next to its exact value.
    pub approx_foc_at_s1_star: f64,
    pub exact_foc_at_s1_star: f64,
}

impl ComparisonReport {
    /// Direct signs of `s₁* - s*` and `s** - s*` agree with the prudence
    /// condition at `R·s*`.
    pub fn prudence_consistent(&self) -> bool {
        let p = self.prudence_condition.predicts_nonnegative();
        self.sign_prob.agrees_with(p) && self.sign_poss.agrees_with(p)
    }

    /// Direct sign of `s** - s₁*` agrees with both cross-model predicates.
    pub fn cross_consistent(&self) -> bool {
        self.sign_cross.agrees_with(self.cross_condition.predicts_nonnegative())
            && self.sign_cross.agrees_with(self.cross_classification.predicts_nonnegative())
    }
}

fn require_converged(r: SolveResult) -> Result<SolveResult> {
    if r.converged {
        Ok(r)
    } else {
        Err(Error::NotConverged { iterations: r.iterations, lower: r.bracket.0, upper: r.bracket.1 })
    }
}

/// Solve the certain, probabilistic and possibilistic models and evaluate
/// every sign condition on the results.
pub fn build_report(setup: &ComparisonSetup) -> Result<ComparisonReport> {
    let (poss_mean, _) = setup.checked_means()?;
    let certain = setup.certain_problem()?;
    let prob = setup.probabilistic_problem()?;
    let poss = setup.possibilistic_problem()?;

    let c = require_converged(solve_optimum(&certain, &setup.solver)?)?;
    let p = require_converged(solve_optimum(&prob, &setup.solver)?)?;
    let q = require_converged(solve_optimum(&poss, &setup.solver)?)?;

    let u = &setup.utility;
    let r = setup.gross_return;
    let tol = &setup.tolerances;
    let var_poss =
        possibilistic_variance_about(&setup.weighting, &setup.fuzzy_return, &setup.quadrature, poss_mean)?;
    let var_prob = setup.random_return.variance();

    let (s_star, s1_star, s_dstar) = (c.s_opt, p.s_opt, q.s_opt);
    let prec_prob = s1_star - s_star;
    let prec_poss = s_dstar - s_star;
    let prec_cross = s_dstar - s1_star;

    Ok(ComparisonReport {
        gross_return: r,
        certain: c,
        probabilistic: p,
        possibilistic: q,
        s_star,
        s1_star,
        s_dstar,
        prec_prob,
        prec_poss,
        prec_cross,
        sign_prob: Sign::of(prec_prob, tol.saving_band),
        sign_poss: Sign::of(prec_poss, tol.saving_band),
        sign_cross: Sign::of(prec_cross, tol.saving_band),
        rp_at_rs_star: u.relative_prudence(r * s_star)?,
        rp_at_rs1_star: u.relative_prudence(r * s1_star)?,
        var_poss,
        var_prob,
        prudence_condition: relative_prudence_condition(u, r, s_star, tol.prudence_band)?,
        cross_condition: cross_saving_condition(u, r, s1_star, var_poss, var_prob, tol.product_band)?,
        cross_classification: classify_cross_saving(u, r, s1_star, var_poss, var_prob, tol)?,
        approx_foc_at_s_star: approx_foc_at(u, r, s_star, var_poss)?,
        exact_foc_at_s_star: poss.foc(s_star)?,
        approx_foc_at_s1_star: approx_foc_at(u, r, s1_star, var_poss - var_prob)?,
        exact_foc_at_s1_star: poss.foc(s1_star)?,
    })
}
