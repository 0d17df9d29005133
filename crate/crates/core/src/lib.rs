//! Possibilistic expected utility over fuzzy numbers, and two-period
//! optimal saving when the return on saving is certain, random or fuzzy.
//!
//! The building blocks are:
//!
//! * [`fuzzy`]: weighting functions, fuzzy numbers as level-set families,
//!   `E_f(u(A))`, `E_f(A)`, `Var_f(A)` and their second-order approximation;
//! * [`utility`]: CRRA, log, CARA and quadratic utilities with derivatives
//!   to order three and prudence indices;
//! * [`stochastic`]: uniform and finite random returns;
//! * [`models`]: the total utilities `U`, `V`, `W` and their derivatives;
//! * [`solver`]: the bracketed Newton root finder for the optimum;
//! * [`analysis`]: precautionary saving and its sign conditions.

pub mod analysis;
pub mod error;
pub mod function;
pub mod fuzzy;
pub mod models;
pub mod quadrature;
pub mod solver;
pub mod stochastic;
pub mod utility;

pub use analysis::{
    approx_foc_at, build_report, classify_cross_saving, cross_saving_condition,
    relative_prudence_condition, Classification, ComparisonReport, ComparisonSetup, Outcome,
    PredicateEval, Sign, Tolerances,
};
pub use error::{BoundaryDirection, Error, Result};
pub use function::{MarginalReturn, Polynomial, RealFunction};
pub use fuzzy::{
    approx_expected_utility, possibilistic_expected_utility, possibilistic_mean,
    possibilistic_variance, FuzzyNumber, FuzzyShape, LevelSample, WeightingFunction,
};
pub use models::{Risk, SavingProblem};
pub use quadrature::QuadratureRule;
pub use solver::{solve_optimum, solve_optimum_in, SolveResult, SolverSettings};
pub use stochastic::{Atom, RandomReturn, ReturnKind};
pub use utility::UtilityFunction;
