//! JSON run configuration and its resolution into core problem types.
//!
//! Defaults:
//!
//! | setting | default |
//! |---------|---------|
//! | `numerics.nodes` | 64 |
//! | `numerics.tol_s` | 1e-12 |
//! | `numerics.tol_f` | 1e-10 |
//! | `numerics.max_iter` | 200 |
//! | `numerics.tie_band` | 1e-9 (prudence and saving-sign bands) |
//! | `numerics.product_band` | 1e-12 |
//! | `numerics.variance_band` | 1e-12 |
//! | `numerics.mean_band` | 1e-9 |
//! | `numerics.seed` | 1 (Monte Carlo oracle in `verify`) |
//! | `numerics.mc_samples` | 200000 |
//! | `weighting` | `{"kind": "power", "p": 1}`, i.e. f(t) = 2t |
//!
//! The effective config echoed into every report has all of these filled in,
//! plus the resolved `mean_return`.

use std::path::Path;

use fuzzy_saving::{
    possibilistic_mean, ComparisonSetup, FuzzyNumber, LevelSample, QuadratureRule, RandomReturn,
    Risk, SolverSettings, Tolerances, UtilityFunction, WeightingFunction,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, ExitKind};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// First-period income.
    pub y0: f64,
    pub utility: UtilityConfig,
    #[serde(default)]
    pub weighting: WeightingConfig,
    /// Shorthand `[c, d]` expanding to a crisp-interval fuzzy return and a
    /// uniform random return on the same interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interval: Option<IntervalConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fuzzy: Option<FuzzyConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub distribution: Option<DistributionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_return: Option<f64>,
    /// Model solved by `solve`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<ModelKind>,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum UtilityConfig {
    /// `gamma = 1` is read as log utility.
    Crra { gamma: f64 },
    Log,
    Cara { a: f64 },
    Quadratic { b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightingConfig {
    Uniform,
    Power { p: f64 },
}

impl Default for WeightingConfig {
    fn default() -> Self {
        WeightingConfig::Power { p: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntervalConfig {
    pub c: f64,
    pub d: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case", deny_unknown_fields)]
pub enum FuzzyConfig {
    CrispPoint { a: f64 },
    CrispInterval { c: f64, d: f64 },
    Triangular { peak: f64, left: f64, right: f64 },
    Trapezoidal { core_lower: f64, core_upper: f64, left: f64, right: f64 },
    /// Rows of `[level, lower, upper]`.
    Sampled { levels: Vec<[f64; 3]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DistributionConfig {
    Uniform { c: f64, d: f64 },
    /// Rows of `[value, probability]`.
    Discrete { atoms: Vec<[f64; 2]> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModelKind {
    Certain,
    Probabilistic,
    Possibilistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub nodes: usize,
    pub tol_s: f64,
    pub tol_f: f64,
    pub max_iter: usize,
    pub tie_band: f64,
    pub product_band: f64,
    pub variance_band: f64,
    pub mean_band: f64,
    pub seed: u64,
    pub mc_samples: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        let solver = SolverSettings::default();
        let tol = Tolerances::default();
        Numerics {
            nodes: QuadratureRule::DEFAULT_NODES,
            tol_s: solver.tol_s,
            tol_f: solver.tol_f,
            max_iter: solver.max_iter,
            tie_band: tol.prudence_band,
            product_band: tol.product_band,
            variance_band: tol.variance_band,
            mean_band: tol.mean_band,
            seed: 1,
            mc_samples: 200_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SweepVariable {
    #[serde(rename = "gamma")]
    Gamma,
    #[serde(rename = "spread")]
    Spread,
    #[serde(rename = "y0")]
    Y0,
    #[serde(rename = "R")]
    MeanReturn,
}

impl SweepVariable {
    pub fn as_str(&self) -> &'static str {
        match self {
            SweepVariable::Gamma => "gamma",
            SweepVariable::Spread => "spread",
            SweepVariable::Y0 => "y0",
            SweepVariable::MeanReturn => "R",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

/// A config turned into validated core objects.
#[derive(Debug, Clone)]
pub struct Resolved {
    pub y0: f64,
    pub utility: UtilityFunction,
    pub gross_return: f64,
    pub weighting: WeightingFunction,
    pub fuzzy: Option<FuzzyNumber>,
    pub distribution: Option<RandomReturn>,
    pub quadrature: QuadratureRule,
    pub solver: SolverSettings,
    pub tolerances: Tolerances,
    pub seed: u64,
    pub mc_samples: usize,
}

impl Resolved {
    pub fn comparison(&self) -> Result<ComparisonSetup, CliError> {
        let (Some(fuzzy), Some(random)) = (&self.fuzzy, &self.distribution) else {
            return Err(CliError::config(
                "comparison needs a fuzzy and a random return (or the `interval` shorthand)",
            ));
        };
        Ok(ComparisonSetup {
            income: self.y0,
            utility: self.utility,
            gross_return: self.gross_return,
            random_return: random.clone(),
            weighting: self.weighting,
            fuzzy_return: fuzzy.clone(),
            quadrature: self.quadrature.clone(),
            solver: self.solver,
            tolerances: self.tolerances,
        })
    }

    pub fn risk(&self, model: ModelKind) -> Result<Risk, CliError> {
        match model {
            ModelKind::Certain => Ok(Risk::Certain { gross_return: self.gross_return }),
            ModelKind::Probabilistic => self
                .distribution
                .clone()
                .map(Risk::Probabilistic)
                .ok_or_else(|| CliError::config("probabilistic model needs `distribution` or `interval`")),
            ModelKind::Possibilistic => self
                .fuzzy
                .clone()
                .map(|fuzzy| Risk::Possibilistic { weighting: self.weighting, fuzzy })
                .ok_or_else(|| CliError::config("possibilistic model needs `fuzzy` or `interval`")),
        }
    }
}

fn setup_err(e: fuzzy_saving::Error) -> CliError {
    CliError::from_setup(e)
}

impl UtilityConfig {
    pub fn build(&self) -> Result<UtilityFunction, CliError> {
        match *self {
            UtilityConfig::Crra { gamma } => UtilityFunction::isoelastic(gamma),
            UtilityConfig::Log => Ok(UtilityFunction::Log),
            UtilityConfig::Cara { a } => UtilityFunction::cara(a),
            UtilityConfig::Quadratic { b } => UtilityFunction::quadratic(b),
        }
        .map_err(setup_err)
    }
}

impl WeightingConfig {
    pub fn build(&self) -> Result<WeightingFunction, CliError> {
        match *self {
            WeightingConfig::Uniform => Ok(WeightingFunction::Uniform),
            WeightingConfig::Power { p } => WeightingFunction::power(p).map_err(setup_err),
        }
    }
}

impl FuzzyConfig {
    pub fn build(&self) -> Result<FuzzyNumber, CliError> {
        match self {
            FuzzyConfig::CrispPoint { a } => FuzzyNumber::crisp_point(*a),
            FuzzyConfig::CrispInterval { c, d } => FuzzyNumber::crisp_interval(*c, *d),
            FuzzyConfig::Triangular { peak, left, right } => FuzzyNumber::triangular(*peak, *left, *right),
            FuzzyConfig::Trapezoidal { core_lower, core_upper, left, right } => {
                FuzzyNumber::trapezoidal(*core_lower, *core_upper, *left, *right)
            }
            FuzzyConfig::Sampled { levels } => FuzzyNumber::sampled(
                levels
                    .iter()
                    .map(|&[level, lower, upper]| LevelSample { level, lower, upper })
                    .collect(),
            ),
        }
        .map_err(setup_err)
    }

    fn shifted(&self, t: f64) -> Self {
        match self {
            FuzzyConfig::CrispPoint { a } => FuzzyConfig::CrispPoint { a: a + t },
            FuzzyConfig::CrispInterval { c, d } => FuzzyConfig::CrispInterval { c: c + t, d: d + t },
            FuzzyConfig::Triangular { peak, left, right } => {
                FuzzyConfig::Triangular { peak: peak + t, left: *left, right: *right }
            }
            FuzzyConfig::Trapezoidal { core_lower, core_upper, left, right } => FuzzyConfig::Trapezoidal {
                core_lower: core_lower + t,
                core_upper: core_upper + t,
                left: *left,
                right: *right,
            },
            FuzzyConfig::Sampled { levels } => FuzzyConfig::Sampled {
                levels: levels.iter().map(|&[g, lo, hi]| [g, lo + t, hi + t]).collect(),
            },
        }
    }
}

impl DistributionConfig {
    pub fn build(&self) -> Result<RandomReturn, CliError> {
        match self {
            DistributionConfig::Uniform { c, d } => RandomReturn::uniform(*c, *d),
            DistributionConfig::Discrete { atoms } => {
                RandomReturn::discrete(atoms.iter().map(|&[v, p]| (v, p)))
            }
        }
        .map_err(setup_err)
    }

    fn shifted(&self, t: f64) -> Self {
        match self {
            DistributionConfig::Uniform { c, d } => DistributionConfig::Uniform { c: c + t, d: d + t },
            DistributionConfig::Discrete { atoms } => DistributionConfig::Discrete {
                atoms: atoms.iter().map(|&[v, p]| [v + t, p]).collect(),
            },
        }
    }
}

fn positive_finite(name: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(CliError::config(format!("{name} must be finite and > 0, got {v}")))
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    fn fuzzy_config(&self) -> Option<FuzzyConfig> {
        self.fuzzy
            .clone()
            .or_else(|| self.interval.map(|i| FuzzyConfig::CrispInterval { c: i.c, d: i.d }))
    }

    fn distribution_config(&self) -> Option<DistributionConfig> {
        self.distribution
            .clone()
            .or_else(|| self.interval.map(|i| DistributionConfig::Uniform { c: i.c, d: i.d }))
    }

    /// Validate everything and build the core objects, including the
    /// mean-matching check between `R`, `E_f(A)` and `M(R̃)`.
    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let n = &self.numerics;
        positive_finite("y0", self.y0)?;
        for (name, v) in [
            ("tol_s", n.tol_s),
            ("tol_f", n.tol_f),
            ("tie_band", n.tie_band),
            ("product_band", n.product_band),
            ("variance_band", n.variance_band),
            ("mean_band", n.mean_band),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::config(format!("numerics.{name} must be finite and >= 0, got {v}")));
            }
        }
        if n.max_iter == 0 {
            return Err(CliError::config("numerics.max_iter must be >= 1"));
        }
        if let Some(i) = self.interval {
            if !(i.c.is_finite() && i.d.is_finite() && i.c < i.d) {
                return Err(CliError::config(format!(
                    "interval needs finite c < d, got [{}, {}]",
                    i.c, i.d
                )));
            }
        }
        let utility = self.utility.build()?;
        let weighting = self.weighting.build()?;
        let quadrature = QuadratureRule::gauss_legendre(n.nodes).map_err(setup_err)?;
        let fuzzy = self.fuzzy_config().map(|f| f.build()).transpose()?;
        let distribution = self.distribution_config().map(|d| d.build()).transpose()?;

        let poss_mean = match &fuzzy {
            Some(a) => Some(possibilistic_mean(&weighting, a, &quadrature).map_err(setup_err)?),
            None => None,
        };
        let prob_mean = distribution.as_ref().map(|x| x.mean());
        let gross_return = match self.mean_return {
            Some(r) => {
                positive_finite("mean_return", r)?;
                r
            }
            None => match (self.interval, prob_mean, poss_mean) {
                (Some(i), _, _) => 0.5 * (i.c + i.d),
                (None, Some(m), _) | (None, None, Some(m)) => m,
                (None, None, None) => {
                    return Err(CliError::config(
                        "no mean return: give `mean_return`, `interval`, `distribution` or `fuzzy`",
                    ))
                }
            },
        };
        let off = |m: Option<f64>| m.is_some_and(|m| (m - gross_return).abs() > n.mean_band);
        if off(poss_mean) || off(prob_mean) {
            let show = |m: Option<f64>| m.map_or_else(|| "n/a".to_string(), |m| m.to_string());
            return Err(CliError {
                kind: ExitKind::MeanMismatch,
                message: format!(
                    "R = {gross_return}, E_f(A) = {}, M(R~) = {} differ by more than {}",
                    show(poss_mean),
                    show(prob_mean),
                    n.mean_band
                ),
            });
        }

        Ok(Resolved {
            y0: self.y0,
            utility,
            gross_return,
            weighting,
            fuzzy,
            distribution,
            quadrature,
            solver: SolverSettings { tol_s: n.tol_s, tol_f: n.tol_f, max_iter: n.max_iter },
            tolerances: Tolerances {
                prudence_band: n.tie_band,
                product_band: n.product_band,
                variance_band: n.variance_band,
                saving_band: n.tie_band,
                mean_band: n.mean_band,
            },
            seed: n.seed,
            mc_samples: n.mc_samples,
        })
    }

    /// The config as echoed in reports: defaults filled in and the resolved
    /// mean return made explicit.
    pub fn effective(&self, resolved: &Resolved) -> RunConfig {
        RunConfig { mean_return: Some(resolved.gross_return), ..self.clone() }
    }

    /// Grid of sweep values, `start` and `stop` inclusive.
    pub fn sweep_grid(&self) -> Result<(SweepConfig, Vec<f64>), CliError> {
        let sweep = self
            .sweep
            .ok_or_else(|| CliError::config("sweep needs a `sweep` section"))?;
        if sweep.steps < 2 {
            return Err(CliError::config(format!("sweep.steps must be >= 2, got {}", sweep.steps)));
        }
        let last = (sweep.steps - 1) as f64;
        let grid: Vec<f64> = (0..sweep.steps)
            .map(|i| {
                if i + 1 == sweep.steps {
                    sweep.stop
                } else {
                    sweep.start + (sweep.stop - sweep.start) * (i as f64 / last)
                }
            })
            .collect();
        if let Some(bad) = grid.iter().find(|v| !v.is_finite()) {
            return Err(CliError::config(format!("sweep grid contains non-finite value {bad}")));
        }
        Ok((sweep, grid))
    }

    /// This config with the swept variable set to `value`.
    pub fn at_sweep_point(&self, variable: SweepVariable, value: f64) -> Result<RunConfig, CliError> {
        let mut cfg = self.clone();
        cfg.sweep = None;
        match variable {
            SweepVariable::Gamma => match cfg.utility {
                UtilityConfig::Crra { .. } | UtilityConfig::Log => {
                    cfg.utility = UtilityConfig::Crra { gamma: value }
                }
                _ => return Err(CliError::config("gamma sweep needs a crra or log utility")),
            },
            SweepVariable::Y0 => cfg.y0 = value,
            SweepVariable::Spread => {
                let (Some(i), None, None) = (cfg.interval, &cfg.fuzzy, &cfg.distribution) else {
                    return Err(CliError::config(
                        "spread sweep needs the `interval` shorthand without explicit fuzzy/distribution",
                    ));
                };
                let center = 0.5 * (i.c + i.d);
                cfg.interval = Some(IntervalConfig { c: center - 0.5 * value, d: center + 0.5 * value });
                if cfg.mean_return.is_some() {
                    cfg.mean_return = Some(center);
                }
            }
            SweepVariable::MeanReturn => {
                let base = self.resolve()?.gross_return;
                let shift = value - base;
                cfg.interval = cfg.interval.map(|i| IntervalConfig { c: i.c + shift, d: i.d + shift });
                cfg.fuzzy = cfg.fuzzy.map(|f| f.shifted(shift));
                cfg.distribution = cfg.distribution.map(|d| d.shifted(shift));
                cfg.mean_return = Some(value);
            }
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SHORTHAND: &str = r#"{"y0": 1.0, "utility": {"kind": "crra", "gamma": 3.0}, "interval": {"c": 1.0, "d": 1.2}}"#;

    #[test]
    fn shorthand_expands_to_interval_and_uniform() {
        let cfg = RunConfig::from_json(SHORTHAND).unwrap();
        let r = cfg.resolve().unwrap();
        assert!((r.gross_return - 1.1).abs() < 1e-15);
        assert_eq!(r.fuzzy.unwrap(), FuzzyNumber::crisp_interval(1.0, 1.2).unwrap());
        assert_eq!(r.distribution.unwrap(), RandomReturn::uniform(1.0, 1.2).unwrap());
        assert_eq!(r.weighting, WeightingFunction::linear());
        assert_eq!(r.quadrature.len(), 64);
    }

    #[test]
    fn malformed_fields_are_config_errors() {
        for text in [
            r#"{"y0": "one", "utility": {"kind": "log"}}"#,
            r#"{"y0": 1.0, "utility": {"kind": "crra"}}"#,
            r#"{"y0": 1.0, "utility": {"kind": "log"}, "bogus": 3}"#,
            r#"{"y0": 1.0"#,
        ] {
            assert_eq!(RunConfig::from_json(text).unwrap_err().kind, ExitKind::Config, "{text}");
        }
    }

    #[test]
    fn invalid_values_are_config_errors() {
        for text in [
            r#"{"y0": -1.0, "utility": {"kind": "log"}, "mean_return": 1.1}"#,
            r#"{"y0": 1.0, "utility": {"kind": "log"}, "interval": {"c": 1.1, "d": 1.1}}"#,
            r#"{"y0": 1.0, "utility": {"kind": "log"}, "interval": {"c": 1.0, "d": 1.2}, "weighting": {"kind": "power", "p": -1.0}}"#,
            r#"{"y0": 1.0, "utility": {"kind": "cara", "a": 0.0}, "mean_return": 1.1}"#,
            r#"{"y0": 1.0, "utility": {"kind": "log"}}"#,
            r#"{"y0": 1.0, "utility": {"kind": "log"}, "mean_return": 1.1, "numerics": {"nodes": 1}}"#,
        ] {
            let cfg = RunConfig::from_json(text).unwrap();
            assert_eq!(cfg.resolve().unwrap_err().kind, ExitKind::Config, "{text}");
        }
    }

    #[test]
    fn mean_mismatch_lists_all_means() {
        let text = r#"{"y0": 1.0, "utility": {"kind": "log"}, "mean_return": 1.1,
            "fuzzy": {"shape": "triangular", "peak": 1.1, "left": 0.0, "right": 0.3},
            "distribution": {"kind": "uniform", "c": 1.0, "d": 1.2}}"#;
        let err = RunConfig::from_json(text).unwrap().resolve().unwrap_err();
        assert_eq!(err.kind, ExitKind::MeanMismatch);
        assert!(err.message.contains("R = 1.1"), "{}", err.message);
        assert!(err.message.contains("E_f(A) = 1.14"), "{}", err.message);
        assert!(err.message.contains("M(R~) = 1.1"));
    }

    #[test]
    fn gamma_one_reads_as_log() {
        let cfg = RunConfig::from_json(r#"{"y0": 1.0, "utility": {"kind": "crra", "gamma": 1.0}, "mean_return": 1.1}"#).unwrap();
        assert_eq!(cfg.resolve().unwrap().utility, UtilityFunction::Log);
    }

    #[test]
    fn effective_config_round_trips() {
        let cfg = RunConfig::from_json(SHORTHAND).unwrap();
        let eff = cfg.effective(&cfg.resolve().unwrap());
        let text = serde_json::to_string(&eff).unwrap();
        let back = RunConfig::from_json(&text).unwrap();
        assert_eq!(back, eff);
        assert_eq!(back.effective(&back.resolve().unwrap()), eff);
    }

    #[test]
    fn sweep_grid_and_points() {
        let mut cfg = RunConfig::from_json(SHORTHAND).unwrap();
        cfg.sweep = Some(SweepConfig { variable: SweepVariable::Gamma, start: 0.5, stop: 3.0, steps: 6 });
        let (_, grid) = cfg.sweep_grid().unwrap();
        assert_eq!(grid, vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0]);

        let spread = cfg.at_sweep_point(SweepVariable::Spread, 0.1).unwrap();
        let i = spread.interval.unwrap();
        assert!((i.c - 1.05).abs() < 1e-15 && (i.d - 1.15).abs() < 1e-15);

        let moved = cfg.at_sweep_point(SweepVariable::MeanReturn, 1.3).unwrap();
        let r = moved.resolve().unwrap();
        assert!((r.gross_return - 1.3).abs() < 1e-12);

        cfg.sweep = Some(SweepConfig { variable: SweepVariable::Y0, start: 1.0, stop: 2.0, steps: 1 });
        assert!(cfg.sweep_grid().is_err());
        cfg.sweep = Some(SweepConfig { variable: SweepVariable::Y0, start: -1e308, stop: 1e308, steps: 3 });
        assert!(cfg.sweep_grid().is_err());
    }
}
