//! Optimal saving by root-finding on the strictly decreasing FOC.
//!
//! The root is bracketed on the feasible interval and refined by bisection
//! with Newton acceleration: a Newton step from the current iterate is taken
//! only when it lands strictly inside the bracket and shrinks the residual
//! fast enough, otherwise the bracket is halved.

use crate::error::{BoundaryDirection, Error, Result};
use crate::models::SavingProblem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverSettings {
    /// Bracket width at which iteration stops.
    pub tol_s: f64,
    /// Residual at which iteration stops.
    pub tol_f: f64,
    pub max_iter: usize,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings { tol_s: 1e-12, tol_f: 1e-10, max_iter: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveResult {
    pub s_opt: f64,
    pub foc_residual: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
    pub converged: bool,
}

/// Unique maximizer of the problem's total utility over its feasible interval.
pub fn solve_optimum(problem: &SavingProblem, settings: &SolverSettings) -> Result<SolveResult> {
    let (lo, hi) = problem.feasible_interval();
    solve_optimum_in(problem, lo, hi, settings)
}

/// As [`solve_optimum`] but starting from the bracket `[lower, upper]`, which
/// must lie inside the feasible interval.
pub fn solve_optimum_in(
    problem: &SavingProblem,
    lower: f64,
    upper: f64,
    settings: &SolverSettings,
) -> Result<SolveResult> {
    find_decreasing_root(|s| problem.foc(s), |s| problem.foc_derivative(s), lower, upper, settings)
}

/// Root of a strictly decreasing `f` on `[lower, upper]`, with derivative `df`.
pub fn find_decreasing_root(
    f: impl Fn(f64) -> Result<f64>,
    df: impl Fn(f64) -> Result<f64>,
    lower: f64,
    upper: f64,
    settings: &SolverSettings,
) -> Result<SolveResult> {
    if lower.is_nan() || upper.is_nan() || lower >= upper {
        return Err(Error::invalid(format!("empty bracket [{lower}, {upper}]")));
    }
    let f_lo = f(lower)?;
    let f_hi = f(upper)?;
    let done = |s: f64, r: f64, it: usize, a: f64, b: f64| SolveResult {
        s_opt: s,
        foc_residual: r,
        iterations: it,
        bracket: (a, b),
        converged: r.abs() <= settings.tol_f,
    };
    if f_lo == 0.0 {
        return Ok(done(lower, 0.0, 0, lower, upper));
    }
    if f_hi == 0.0 {
        return Ok(done(upper, 0.0, 0, lower, upper));
    }
    if f_lo < 0.0 || f_hi > 0.0 {
        let direction = if f_lo < 0.0 {
            BoundaryDirection::Lower
        } else {
            BoundaryDirection::Upper
        };
        return Err(Error::NoInteriorOptimum {
            direction,
            lower,
            upper,
            foc_lower: f_lo,
            foc_upper: f_hi,
        });
    }

    // invariant: f(a) > 0 > f(b)
    let (mut a, mut b) = (lower, upper);
    let mut best = if f_lo.abs() < f_hi.abs() { (lower, f_lo) } else { (upper, f_hi) };
    let mut step_old = b - a;
    let mut x = 0.5 * (a + b);
    for iter in 1..=settings.max_iter {
        let fx = f(x)?;
        if fx.abs() < best.1.abs() {
            best = (x, fx);
        }
        if fx == 0.0 || fx.abs() <= settings.tol_f {
            return Ok(done(x, fx, iter, a, b));
        }
        if fx > 0.0 {
            a = x;
        } else {
            b = x;
        }
        if b - a <= settings.tol_s {
            return Ok(done(best.0, best.1, iter, a, b));
        }
        let slope = df(x)?;
        let newton = if slope < 0.0 { x - fx / slope } else { f64::NAN };
        let in_bracket = newton > a && newton < b;
        let fast_enough = (2.0 * fx).abs() <= (step_old * slope).abs();
        if in_bracket && fast_enough {
            step_old = (newton - x).abs();
            x = newton;
        } else {
            step_old = 0.5 * (b - a);
            x = a + step_old;
        }
    }
    Err(Error::NotConverged { iterations: settings.max_iter, lower: a, upper: b })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{FuzzyNumber, WeightingFunction};
    use crate::models::Risk;
    use crate::stochastic::RandomReturn;
    use crate::utility::UtilityFunction;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn certain(u: UtilityFunction, y0: f64, r: f64) -> SavingProblem {
        SavingProblem::new(y0, u, Risk::Certain { gross_return: r }).unwrap()
    }

    #[test]
    fn crra_closed_form() {
        let s = SolverSettings::default();
        for gamma in [0.5, 2.0, 3.0, 7.0] {
            for r in [0.95, 1.1, 1.5] {
                let p = certain(UtilityFunction::crra(gamma).unwrap(), 1.0, r);
                let res = solve_optimum(&p, &s).unwrap();
                let want = 1.0 / (1.0 + r.powf((gamma - 1.0) / gamma));
                assert!(res.converged);
                assert!((res.s_opt - want).abs() < 1e-10, "gamma={gamma} R={r}");
            }
        }
        let p = certain(UtilityFunction::crra(2.0).unwrap(), 1.0, 1.1);
        let res = solve_optimum(&p, &s).unwrap();
        assert!((res.s_opt - 0.488_088_481_701_515_5).abs() < 1e-10);
    }

    #[test]
    fn log_utility_saves_half() {
        for r in [0.8, 1.1, 2.0] {
            for y0 in [1.0, 3.0] {
                let p = certain(UtilityFunction::Log, y0, r);
                let res = solve_optimum(&p, &SolverSettings::default()).unwrap();
                assert!((res.s_opt - y0 / 2.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_fuzzy_return_matches_certain_optimum() {
        let u = UtilityFunction::crra(3.0).unwrap();
        let c = solve_optimum(&certain(u, 1.0, 1.1), &SolverSettings::default()).unwrap();
        let p = SavingProblem::new(
            1.0,
            u,
            Risk::Possibilistic {
                weighting: WeightingFunction::linear(),
                fuzzy: FuzzyNumber::crisp_point(1.1).unwrap(),
            },
        )
        .unwrap();
        let r = solve_optimum(&p, &SolverSettings::default()).unwrap();
        assert!((r.s_opt - c.s_opt).abs() < 1e-10);
    }

    #[test]
    fn residual_contract_and_optimality() {
        let problems = [
            certain(UtilityFunction::cara(2.0).unwrap(), 1.0, 1.1),
            certain(UtilityFunction::quadratic(0.2).unwrap(), 1.0, 1.1),
            SavingProblem::new(
                1.0,
                UtilityFunction::crra(5.0).unwrap(),
                Risk::Probabilistic(RandomReturn::uniform(0.9, 1.3).unwrap()),
            )
            .unwrap(),
        ];
        let settings = SolverSettings::default();
        for p in &problems {
            let r = solve_optimum(p, &settings).unwrap();
            assert!(r.converged);
            assert!(r.foc_residual.abs() <= settings.tol_f);
            assert!((p.foc(r.s_opt).unwrap() - r.foc_residual).abs() == 0.0);
            let best = p.total_utility(r.s_opt).unwrap();
            for d in [1e-6, 1e-4] {
                assert!(best >= p.total_utility(r.s_opt + d).unwrap());
                assert!(best >= p.total_utility(r.s_opt - d).unwrap());
            }
        }
    }

    #[test]
    fn restarts_from_random_brackets_agree() {
        let p = SavingProblem::new(
            1.0,
            UtilityFunction::crra(2.0).unwrap(),
            Risk::Possibilistic {
                weighting: WeightingFunction::linear(),
                fuzzy: FuzzyNumber::triangular(1.1, 0.1, 0.05).unwrap(),
            },
        )
        .unwrap();
        let settings = SolverSettings::default();
        let base = solve_optimum(&p, &settings).unwrap().s_opt;
        let (lo, hi) = p.feasible_interval();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10 {
            let a = rng.gen_range(lo..base);
            let b = rng.gen_range(base..hi);
            let r = solve_optimum_in(&p, a, b, &settings).unwrap();
            assert!((r.s_opt - base).abs() <= 1e-11, "{} vs {base}", r.s_opt);
        }
    }

    #[test]
    fn constant_sign_foc_reports_direction() {
        // a tiny return makes saving unattractive everywhere for CARA
        let p = certain(UtilityFunction::cara(1.0).unwrap(), 1.0, 0.01);
        match solve_optimum(&p, &SolverSettings::default()) {
            Err(Error::NoInteriorOptimum { direction, .. }) => {
                assert_eq!(direction, BoundaryDirection::Lower)
            }
            other => panic!("unexpected {other:?}"),
        }
        let up = find_decreasing_root(|x| Ok(5.0 - x), |_| Ok(-1.0), 0.0, 1.0, &SolverSettings::default());
        assert!(matches!(
            up,
            Err(Error::NoInteriorOptimum { direction: BoundaryDirection::Upper, .. })
        ));
    }

    #[test]
    fn iteration_cap_reports_bracket() {
        let settings = SolverSettings { tol_s: 0.0, tol_f: 0.0, max_iter: 3 };
        // derivative lies, so Newton never helps and bisection runs out
        let r = find_decreasing_root(|x| Ok(0.3 - x), |_| Ok(1.0), 0.0, 1.0, &settings);
        match r {
            Err(Error::NotConverged { iterations, lower, upper }) => {
                assert_eq!(iterations, 3);
                assert!(lower <= 0.3 && 0.3 <= upper);
                assert!(upper - lower <= 0.125 + 1e-15);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn bisection_alone_converges() {
        let settings = SolverSettings::default();
        let r = find_decreasing_root(|x| Ok(0.3 - x * x * x), |_| Ok(1.0), 0.0, 1.0, &settings).unwrap();
        assert!((r.s_opt - 0.3f64.cbrt()).abs() < 1e-10);
    }
}
