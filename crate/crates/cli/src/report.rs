//! Serialized report shapes. Field order here is the key order in the JSON.

use fuzzy_saving::{ComparisonReport, PredicateEval, SolveResult};
use serde::Serialize;

use crate::config::RunConfig;

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub config_effective: RunConfig,
    pub model: &'static str,
    pub s_opt: f64,
    pub foc_residual: f64,
    pub total_utility: f64,
    pub iterations: usize,
    pub bracket: [f64; 2],
    pub converged: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub config_effective: RunConfig,
    pub solutions: Solutions,
    pub precautionary: Triple,
    /// Direct signs of the three precautionary differences, side by side with
    /// the predicate outcomes.
    pub signs: Signs,
    pub indicators: Indicators,
    pub predicates: Predicates,
    pub consistency: Consistency,
    pub diagnostics: Diagnostics,
    pub solver: SolverRuns,
}

#[derive(Debug, Clone, Serialize)]
pub struct Solutions {
    pub s_star: f64,
    pub s1_star: f64,
    pub s_dstar: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Triple {
    pub prob: f64,
    pub poss: f64,
    pub cross: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Signs {
    pub prob: &'static str,
    pub poss: &'static str,
    pub cross: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct Indicators {
    #[serde(rename = "R")]
    pub mean_return: f64,
    pub var_poss: f64,
    pub var_prob: f64,
    #[serde(rename = "rp_at_Rs_star")]
    pub rp_at_rs_star: f64,
    #[serde(rename = "rp_at_Rs1_star")]
    pub rp_at_rs1_star: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct PredicateJson {
    pub outcome: &'static str,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Predicates {
    pub rs_condition: PredicateJson,
    pub prop45: PredicateJson,
    pub corollary47: PredicateJson,
}

#[derive(Debug, Clone, Serialize)]
pub struct Consistency {
    /// Signs of `s₁*-s*` and `s**-s*` agree with the relative-prudence condition.
    pub prudence_vs_direct: bool,
    /// Sign of `s**-s₁*` agrees with both cross-model predicates.
    pub cross_vs_direct: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostics {
    pub approx_wprime_at_s_star: f64,
    pub exact_wprime_at_s_star: f64,
    pub approx_wprime_at_s1_star: f64,
    pub exact_wprime_at_s1_star: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveSummary {
    pub s_opt: f64,
    pub foc_residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

impl From<&SolveResult> for SolveSummary {
    fn from(r: &SolveResult) -> Self {
        SolveSummary {
            s_opt: r.s_opt,
            foc_residual: r.foc_residual,
            iterations: r.iterations,
            converged: r.converged,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolverRuns {
    pub certain: SolveSummary,
    pub probabilistic: SolveSummary,
    pub possibilistic: SolveSummary,
}

fn predicate<T>(p: &PredicateEval<T>, outcome: &'static str) -> PredicateJson {
    PredicateJson { outcome, lhs: p.lhs, rhs: p.rhs }
}

impl CompareReport {
    pub fn new(config_effective: RunConfig, r: &ComparisonReport) -> Self {
        CompareReport {
            config_effective,
            solutions: Solutions { s_star: r.s_star, s1_star: r.s1_star, s_dstar: r.s_dstar },
            precautionary: Triple { prob: r.prec_prob, poss: r.prec_poss, cross: r.prec_cross },
            signs: Signs {
                prob: r.sign_prob.as_str(),
                poss: r.sign_poss.as_str(),
                cross: r.sign_cross.as_str(),
            },
            indicators: Indicators {
                mean_return: r.gross_return,
                var_poss: r.var_poss,
                var_prob: r.var_prob,
                rp_at_rs_star: r.rp_at_rs_star,
                rp_at_rs1_star: r.rp_at_rs1_star,
            },
            predicates: Predicates {
                rs_condition: predicate(&r.prudence_condition, r.prudence_condition.outcome.as_str()),
                prop45: predicate(&r.cross_condition, r.cross_condition.outcome.as_str()),
                corollary47: predicate(&r.cross_classification, r.cross_classification.outcome.as_str()),
            },
            consistency: Consistency {
                prudence_vs_direct: r.prudence_consistent(),
                cross_vs_direct: r.cross_consistent(),
            },
            diagnostics: Diagnostics {
                approx_wprime_at_s_star: r.approx_foc_at_s_star,
                exact_wprime_at_s_star: r.exact_foc_at_s_star,
                approx_wprime_at_s1_star: r.approx_foc_at_s1_star,
                exact_wprime_at_s1_star: r.exact_foc_at_s1_star,
            },
            solver: SolverRuns {
                certain: (&r.certain).into(),
                probabilistic: (&r.probabilistic).into(),
                possibilistic: (&r.possibilistic).into(),
            },
        }
    }
}

/// Column order of the sweep CSV.
pub const SWEEP_HEADER: [&str; 19] = [
    "variable",
    "value",
    "s_star",
    "s1_star",
    "s_dstar",
    "prec_prob",
    "prec_poss",
    "prec_cross",
    "sign_prob",
    "sign_poss",
    "sign_cross",
    "R",
    "var_poss",
    "var_prob",
    "rp_at_Rs_star",
    "rp_at_Rs1_star",
    "rs_condition",
    "prop45",
    "corollary47",
];

pub fn sweep_row(variable: &str, value: f64, r: &CompareReport) -> Vec<String> {
    let f = |v: f64| v.to_string();
    vec![
        variable.to_string(),
        f(value),
        f(r.solutions.s_star),
        f(r.solutions.s1_star),
        f(r.solutions.s_dstar),
        f(r.precautionary.prob),
        f(r.precautionary.poss),
        f(r.precautionary.cross),
        r.signs.prob.to_string(),
        r.signs.poss.to_string(),
        r.signs.cross.to_string(),
        f(r.indicators.mean_return),
        f(r.indicators.var_poss),
        f(r.indicators.var_prob),
        f(r.indicators.rp_at_rs_star),
        f(r.indicators.rp_at_rs1_star),
        r.predicates.rs_condition.outcome.to_string(),
        r.predicates.prop45.outcome.to_string(),
        r.predicates.corollary47.outcome.to_string(),
    ]
}
