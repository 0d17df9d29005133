use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use fuzzy_saving::{
    build_report, solve_optimum, FuzzyNumber, MarginalReturn, RandomReturn, RealFunction,
    ReturnKind, Risk, SavingProblem,
};

use crate::config::{ModelKind, Resolved, RunConfig};
use crate::error::CliError;
use crate::report::{sweep_row, CompareReport, SolveReport, SWEEP_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepFormat {
    Csv,
    Json,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    s
}

fn problem(resolved: &Resolved, model: ModelKind) -> Result<SavingProblem, CliError> {
    SavingProblem::with_quadrature(
        resolved.y0,
        resolved.utility,
        resolved.risk(model)?,
        resolved.quadrature.clone(),
    )
    .map_err(CliError::from_setup)
}

pub fn solve(config: &RunConfig) -> Result<String, CliError> {
    let model = config
        .model
        .ok_or_else(|| CliError::config("solve needs `model`: certain, probabilistic or possibilistic"))?;
    let resolved = config.resolve()?;
    let p = problem(&resolved, model)?;
    let r = solve_optimum(&p, &resolved.solver).map_err(CliError::from_solve)?;
    if !r.converged {
        return Err(CliError::solver(format!(
            "residual {:e} above tolerance after {} iterations",
            r.foc_residual, r.iterations
        )));
    }
    let total_utility = p.total_utility(r.s_opt).map_err(CliError::from_solve)?;
    Ok(to_json(&SolveReport {
        config_effective: config.effective(&resolved),
        model: p.risk().label(),
        s_opt: r.s_opt,
        foc_residual: r.foc_residual,
        total_utility,
        iterations: r.iterations,
        bracket: [r.bracket.0, r.bracket.1],
        converged: r.converged,
    }))
}

pub fn compare_report(config: &RunConfig) -> Result<CompareReport, CliError> {
    let resolved = config.resolve()?;
    let setup = resolved.comparison()?;
    let report = build_report(&setup).map_err(CliError::from_solve)?;
    Ok(CompareReport::new(config.effective(&resolved), &report))
}

pub fn compare(config: &RunConfig) -> Result<String, CliError> {
    Ok(to_json(&compare_report(config)?))
}

pub fn sweep(config: &RunConfig, format: SweepFormat) -> Result<String, CliError> {
    let (plan, grid) = config.sweep_grid()?;
    let points: Vec<RunConfig> = grid
        .iter()
        .map(|&v| config.at_sweep_point(plan.variable, v))
        .collect::<Result<_, _>>()?;
    let reports: Vec<CompareReport> = points
        .par_iter()
        .map(compare_report)
        .collect::<Result<_, _>>()?;
    match format {
        SweepFormat::Json => Ok(to_json(&reports)),
        SweepFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| CliError::config(format!("csv output: {e}"));
            w.write_record(SWEEP_HEADER).map_err(io)?;
            for (v, r) in grid.iter().zip(&reports) {
                w.write_record(sweep_row(plan.variable.as_str(), *v, r)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::config(format!("csv output: {e}")))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub config_effective: RunConfig,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.passed)
    }
}

fn check(name: &'static str, outcome: Result<String, String>) -> Check {
    match outcome {
        Ok(detail) => Check { name, passed: true, detail },
        Err(detail) => Check { name, passed: false, detail },
    }
}

fn interior_grid(p: &SavingProblem, n: usize, lo_frac: f64, hi_frac: f64) -> Vec<f64> {
    let (lo, hi) = p.feasible_interval();
    let (a, b) = (lo + (hi - lo) * lo_frac, lo + (hi - lo) * hi_frac);
    (0..n).map(|i| a + (b - a) * (i as f64 + 0.5) / n as f64).collect()
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-12 * b.abs().max(1.0)
}

fn degeneracy_check(resolved: &Resolved, certain: &SavingProblem) -> Result<String, String> {
    let r = resolved.gross_return;
    let collapsed = [
        Risk::Possibilistic {
            weighting: resolved.weighting,
            fuzzy: FuzzyNumber::crisp_point(r).map_err(|e| e.to_string())?,
        },
        Risk::Probabilistic(RandomReturn::certain(r).map_err(|e| e.to_string())?),
    ];
    for risk in collapsed {
        let label = risk.label();
        let p = SavingProblem::with_quadrature(resolved.y0, resolved.utility, risk, resolved.quadrature.clone())
            .map_err(|e| e.to_string())?;
        for s in interior_grid(certain, 20, 0.05, 0.95) {
            let pairs = [
                (p.total_utility(s), certain.total_utility(s)),
                (p.foc(s), certain.foc(s)),
                (p.foc_derivative(s), certain.foc_derivative(s)),
            ];
            for (a, b) in pairs {
                let (a, b) = (a.map_err(|e| e.to_string())?, b.map_err(|e| e.to_string())?);
                if !close(a, b) {
                    return Err(format!("degenerate {label} model differs from certain at s = {s}: {a} vs {b}"));
                }
            }
        }
    }
    Ok("crisp-point and one-atom returns reproduce the certain model at 20 points".into())
}

fn concavity_check(problems: &[SavingProblem]) -> Result<String, String> {
    for p in problems {
        let grid = interior_grid(p, 100, 0.0, 1.0);
        let mut prev = f64::INFINITY;
        for s in grid {
            let d2 = p.foc_derivative(s).map_err(|e| e.to_string())?;
            if d2.is_nan() || d2 >= 0.0 {
                return Err(format!("{} model: second derivative {d2} at s = {s}", p.risk().label()));
            }
            let d1 = p.foc(s).map_err(|e| e.to_string())?;
            if d1.is_nan() || d1 >= prev {
                return Err(format!("{} model: FOC not decreasing at s = {s}", p.risk().label()));
            }
            prev = d1;
        }
    }
    Ok(format!("{} models strictly concave on 100 grid points", problems.len()))
}

fn derivative_check(problems: &[SavingProblem]) -> Result<String, String> {
    let h = 1e-5;
    let eps = f64::EPSILON;
    for p in problems {
        for s in interior_grid(p, 5, 0.1, 0.9) {
            let e = |r: fuzzy_saving::Result<f64>| r.map_err(|e| e.to_string());
            let (up, um) = (e(p.total_utility(s + h))?, e(p.total_utility(s - h))?);
            let (fp, fm) = (e(p.foc(s + h))?, e(p.foc(s - h))?);
            let d1 = e(p.foc(s))?;
            let d2 = e(p.foc_derivative(s))?;
            // truncation allowance plus rounding of the differenced values
            let tol1 = 1e-6 * d1.abs().max(1.0) + 1e3 * eps * up.abs().max(um.abs()) / h;
            let tol2 = 1e-6 * d2.abs().max(1.0) + 1e3 * eps * fp.abs().max(fm.abs()) / h;
            let fd1 = (up - um) / (2.0 * h);
            let fd2 = (fp - fm) / (2.0 * h);
            if (fd1 - d1).abs() > tol1 {
                return Err(format!("{} model: FOC {d1} vs finite difference {fd1} at s = {s}", p.risk().label()));
            }
            if (fd2 - d2).abs() > tol2 {
                return Err(format!("{} model: FOC slope {d2} vs finite difference {fd2} at s = {s}", p.risk().label()));
            }
        }
    }
    Ok("analytic derivatives match central differences".into())
}

fn solve_checks(resolved: &Resolved, problems: &[SavingProblem]) -> (Check, Check) {
    let mut residuals = Vec::new();
    let mut optimality = Ok("total utility at each optimum dominates nearby points".to_string());
    for p in problems {
        let label = p.risk().label();
        match solve_optimum(p, &resolved.solver) {
            Err(e) => {
                residuals.push(Err(format!("{label}: {e}")));
                continue;
            }
            Ok(r) if !r.converged || r.foc_residual.abs() > resolved.solver.tol_f => {
                residuals.push(Err(format!("{label}: residual {:e}", r.foc_residual)));
            }
            Ok(r) => {
                residuals.push(Ok(format!("{label} {:e}", r.foc_residual)));
                let (lo, hi) = p.feasible_interval();
                let best = p.total_utility(r.s_opt).unwrap_or(f64::NAN);
                for d in [1e-6, 1e-4] {
                    for s in [r.s_opt - d, r.s_opt + d] {
                        if s < lo || s > hi {
                            continue;
                        }
                        let v = p.total_utility(s).unwrap_or(f64::NAN);
                        let slack = 4.0 * f64::EPSILON * best.abs().max(v.abs());
                        if (best.is_nan() || v.is_nan() || best < v - slack) && optimality.is_ok() {
                            optimality = Err(format!("{label}: U({s}) = {v} exceeds U(s_opt) = {best}"));
                        }
                    }
                }
            }
        }
    }
    let residual = match residuals.iter().find(|r| r.is_err()) {
        Some(Err(e)) => Err(e.clone()),
        _ => Ok(format!(
            "residuals within {:e}: {}",
            resolved.solver.tol_f,
            residuals.iter().filter_map(|r| r.as_ref().ok().cloned()).collect::<Vec<_>>().join(", ")
        )),
    };
    (check("foc_residual", residual), check("optimality", optimality))
}

fn monte_carlo_check(resolved: &Resolved, x: &RandomReturn, saving: f64) -> Result<String, String> {
    let g = MarginalReturn::new(resolved.utility, saving);
    let exact = x.expect_with(&g, &resolved.quadrature).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(resolved.seed);
    let n = resolved.mc_samples.max(2);
    let (mut sum, mut sum_sq) = (0.0, 0.0);
    for _ in 0..n {
        let draw = match x.kind() {
            ReturnKind::Uniform { lower, upper } => rng.gen_range(*lower..*upper),
            ReturnKind::Discrete(atoms) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut pick = atoms[atoms.len() - 1].value;
                for a in atoms {
                    acc += a.probability;
                    if u < acc {
                        pick = a.value;
                        break;
                    }
                }
                pick
            }
        };
        let v = g.value(draw).map_err(|e| e.to_string())?;
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n as f64;
    let se = ((sum_sq / n as f64 - mean * mean).max(0.0) / n as f64).sqrt();
    let allowed = 3.0 * se + 1e-12 * exact.abs().max(1.0);
    if (exact - mean).abs() <= allowed {
        Ok(format!("quadrature {exact} vs Monte Carlo {mean} (se {se:e}, n = {n}, seed {})", resolved.seed))
    } else {
        Err(format!("quadrature {exact} vs Monte Carlo {mean} exceeds 3 standard errors ({se:e})"))
    }
}

pub fn verify_report(config: &RunConfig) -> Result<VerifyReport, CliError> {
    let resolved = config.resolve()?;
    let certain = problem(&resolved, ModelKind::Certain)?;
    let mut problems = vec![certain.clone()];
    if resolved.distribution.is_some() {
        problems.push(problem(&resolved, ModelKind::Probabilistic)?);
    }
    if resolved.fuzzy.is_some() {
        problems.push(problem(&resolved, ModelKind::Possibilistic)?);
    }

    let mut checks = vec![
        check("degeneracy_collapse", degeneracy_check(&resolved, &certain)),
        check("concavity", concavity_check(&problems)),
        check("derivative_consistency", derivative_check(&problems)),
    ];
    let (residual, optimality) = solve_checks(&resolved, &problems);
    checks.push(residual);
    checks.push(optimality);

    if let (Some(_), Some(x)) = (&resolved.fuzzy, &resolved.distribution) {
        let setup = resolved.comparison()?;
        let outcome = build_report(&setup).map_err(|e| e.to_string()).and_then(|r| {
            let summary = format!(
                "signs prob/poss/cross = {}/{}/{}; rs_condition {}, prop45 {}, corollary47 {}",
                r.sign_prob.as_str(),
                r.sign_poss.as_str(),
                r.sign_cross.as_str(),
                r.prudence_condition.outcome.as_str(),
                r.cross_condition.outcome.as_str(),
                r.cross_classification.outcome.as_str()
            );
            if r.prudence_consistent() && r.cross_consistent() {
                Ok((summary, r.s1_star))
            } else {
                Err(format!("predicate disagrees with direct sign: {summary}"))
            }
        });
        let s1 = outcome.as_ref().ok().map(|(_, s1)| *s1);
        checks.push(check("predicate_vs_direct", outcome.map(|(s, _)| s)));
        if let Some(s1) = s1 {
            checks.push(check("monte_carlo_expectation", monte_carlo_check(&resolved, x, s1)));
        }
    } else if let Some(x) = &resolved.distribution {
        let s = solve_optimum(&problems[1], &resolved.solver).map(|r| r.s_opt);
        checks.push(check(
            "monte_carlo_expectation",
            s.map_err(|e| e.to_string()).and_then(|s| monte_carlo_check(&resolved, x, s)),
        ));
    }

    Ok(VerifyReport {
        config_effective: config.effective(&resolved),
        passed: checks.iter().all(|c| c.passed),
        checks,
    })
}

pub fn verify_json(report: &VerifyReport) -> String {
    to_json(report)
}
