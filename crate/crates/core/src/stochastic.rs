//! The probabilistic gross return `R̃ = 1 + r̃`.

use crate::error::{Error, Result};
use crate::function::RealFunction;
use crate::quadrature::QuadratureRule;

/// Probabilities of a discrete return must sum to one within this slack.
pub const PROBABILITY_SUM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom {
    pub value: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReturnKind {
    Uniform { lower: f64, upper: f64 },
    Discrete(Vec<Atom>),
}

/// A random gross return with support in `(0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomReturn {
    kind: ReturnKind,
}

impl RandomReturn {
    pub fn uniform(lower: f64, upper: f64) -> Result<Self> {
        if !(lower.is_finite() && upper.is_finite()) {
            return Err(Error::invalid("uniform bounds must be finite"));
        }
        if lower >= upper {
            return Err(Error::invalid(format!(
                "uniform return needs lower < upper, got [{lower}, {upper}]"
            )));
        }
        if lower <= 0.0 {
            return Err(Error::invalid(format!(
                "return support must lie in (0, inf), lower bound is {lower}"
            )));
        }
        Ok(RandomReturn { kind: ReturnKind::Uniform { lower, upper } })
    }

    /// A finite distribution from `(value, probability)` pairs.
    pub fn discrete(atoms: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let atoms: Vec<Atom> = atoms
            .into_iter()
            .map(|(value, probability)| Atom { value, probability })
            .collect();
        if atoms.is_empty() {
            return Err(Error::invalid("discrete return needs at least one atom"));
        }
        for a in &atoms {
            if !(a.value.is_finite() && a.value > 0.0) {
                return Err(Error::invalid(format!(
                    "return values must be finite and > 0, got {}",
                    a.value
                )));
            }
            if !(a.probability.is_finite() && a.probability >= 0.0) {
                return Err(Error::invalid(format!(
                    "probabilities must be >= 0, got {}",
                    a.probability
                )));
            }
        }
        let total: f64 = atoms.iter().map(|a| a.probability).sum();
        if (total - 1.0).abs() > PROBABILITY_SUM_TOLERANCE {
            return Err(Error::invalid(format!("probabilities sum to {total}, not 1")));
        }
        Ok(RandomReturn { kind: ReturnKind::Discrete(atoms) })
    }

    /// A degenerate return equal to `value` with probability one.
    pub fn certain(value: f64) -> Result<Self> {
        Self::discrete([(value, 1.0)])
    }

    pub fn kind(&self) -> &ReturnKind {
        &self.kind
    }

    /// Smallest and largest attainable values.
    pub fn support(&self) -> (f64, f64) {
        match &self.kind {
            ReturnKind::Uniform { lower, upper } => (*lower, *upper),
            ReturnKind::Discrete(atoms) => atoms.iter().fold(
                (f64::INFINITY, f64::NEG_INFINITY),
                |(lo, hi), a| (lo.min(a.value), hi.max(a.value)),
            ),
        }
    }

    /// `M(R̃)`.
    pub fn mean(&self) -> f64 {
        match &self.kind {
            ReturnKind::Uniform { lower, upper } => 0.5 * (lower + upper),
            ReturnKind::Discrete(atoms) => atoms.iter().map(|a| a.probability * a.value).sum(),
        }
    }

    /// `D²(R̃)`.
    pub fn variance(&self) -> f64 {
        match &self.kind {
            ReturnKind::Uniform { lower, upper } => {
                let w = upper - lower;
                w * w / 12.0
            }
            ReturnKind::Discrete(atoms) => {
                let m = self.mean();
                atoms
                    .iter()
                    .map(|a| a.probability * (a.value - m) * (a.value - m))
                    .sum()
            }
        }
    }

    /// `R̃ + t`.
    pub fn shifted(&self, t: f64) -> Result<Self> {
        match &self.kind {
            ReturnKind::Uniform { lower, upper } => Self::uniform(lower + t, upper + t),
            ReturnKind::Discrete(atoms) => {
                Self::discrete(atoms.iter().map(|a| (a.value + t, a.probability)))
            }
        }
    }

    pub(crate) fn expect_by(
        &self,
        rule: &QuadratureRule,
        g: impl Fn(f64) -> Result<f64>,
    ) -> Result<f64> {
        match &self.kind {
            ReturnKind::Uniform { lower, upper } => {
                let width = upper - lower;
                rule.try_integrate(|t| g(lower + width * t))
            }
            ReturnKind::Discrete(atoms) => {
                let mut acc = 0.0;
                for a in atoms {
                    acc += a.probability * g(a.value)?;
                }
                Ok(acc)
            }
        }
    }

    /// `M[g(R̃)]` with the default quadrature rule for uniform returns.
    pub fn expect<G: RealFunction + ?Sized>(&self, g: &G) -> Result<f64> {
        self.expect_with(g, QuadratureRule::standard())
    }

    pub fn expect_with<G: RealFunction + ?Sized>(&self, g: &G, rule: &QuadratureRule) -> Result<f64> {
        self.expect_by(rule, |x| g.value(x))
    }

    /// `g(M(R̃)) + ½·g''(M(R̃))·D²(R̃)`.
    pub fn approx_expect<G: RealFunction + ?Sized>(&self, g: &G) -> Result<f64> {
        let m = self.mean();
        Ok(g.value(m)? + 0.5 * g.derivative(2, m)? * self.variance())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::{MarginalReturn, Polynomial};
    use crate::utility::UtilityFunction;

    #[test]
    fn construction_validation() {
        assert!(RandomReturn::uniform(1.2, 1.0).is_err());
        assert!(RandomReturn::uniform(1.0, 1.0).is_err());
        assert!(RandomReturn::uniform(-0.1, 1.0).is_err());
        assert!(RandomReturn::discrete(Vec::<(f64, f64)>::new()).is_err());
        assert!(RandomReturn::discrete([(1.0, 0.5), (1.2, 0.4)]).is_err());
        assert!(RandomReturn::discrete([(1.0, -0.5), (1.2, 1.5)]).is_err());
        assert!(RandomReturn::discrete([(0.0, 1.0)]).is_err());
        assert!(RandomReturn::discrete([(1.0, 0.5), (1.2, 0.5)]).is_ok());
    }

    #[test]
    fn mean_examples() {
        assert!((RandomReturn::uniform(1.0, 1.2).unwrap().mean() - 1.1).abs() < 1e-15);
        let two = RandomReturn::discrete([(1.0, 0.5), (1.2, 0.5)]).unwrap();
        assert!((two.mean() - 1.1).abs() < 1e-15);
        let narrow = RandomReturn::uniform(1.3, 1.3 + 1e-6).unwrap();
        assert!((narrow.mean() - 1.3).abs() <= 1e-6);
    }

    #[test]
    fn variance_examples() {
        let u = RandomReturn::uniform(1.0, 1.2).unwrap();
        assert!((u.variance() - 0.04 / 12.0).abs() < 1e-12);
        assert_eq!(RandomReturn::certain(1.1).unwrap().variance(), 0.0);
        let two = RandomReturn::discrete([(1.0, 0.5), (1.2, 0.5)]).unwrap();
        assert!((two.variance() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn expectation_moments() {
        let u = RandomReturn::uniform(1.0, 1.2).unwrap();
        assert!((u.expect(&|x: f64| x).unwrap() - u.mean()).abs() < 1e-12);
        assert!((u.expect(&|x: f64| x * x).unwrap() - 1.213_333_333_333_333).abs() < 1e-12);
        let m = u.mean();
        assert!((u.expect(&|x: f64| (x - m) * (x - m)).unwrap() - u.variance()).abs() < 1e-10);
    }

    #[test]
    fn expectation_propagates_evaluation_errors() {
        let x = RandomReturn::uniform(0.5, 1.5).unwrap();
        assert!(x.expect(&|v: f64| (v - 1.0).ln()).is_err());
        let u = UtilityFunction::quadratic(1.0).unwrap();
        assert!(matches!(x.expect(&u), Err(Error::Domain { .. })));
    }

    #[test]
    fn approximation_exact_for_quadratics() {
        let x = RandomReturn::uniform(0.9, 1.4).unwrap();
        let d = RandomReturn::discrete([(0.8, 0.2), (1.1, 0.5), (1.6, 0.3)]).unwrap();
        let p = Polynomial::new(vec![0.4, -1.3, 2.2]);
        for r in [x, d] {
            assert!((r.approx_expect(&p).unwrap() - r.expect(&p).unwrap()).abs() < 1e-10);
        }
        let affine = Polynomial::new(vec![1.0, 3.0]);
        let r = RandomReturn::uniform(1.0, 1.2).unwrap();
        assert!((r.approx_expect(&affine).unwrap() - (1.0 + 3.0 * 1.1)).abs() < 1e-12);
    }

    #[test]
    fn approximation_needs_second_derivative() {
        let r = RandomReturn::uniform(1.0, 1.2).unwrap();
        assert_eq!(r.approx_expect(&|x: f64| x), Err(Error::Capability { order: 2 }));
    }

    #[test]
    fn marginal_return_approximation_matches_closed_form() {
        let u = UtilityFunction::crra(3.0).unwrap();
        let s = 0.47;
        let r = RandomReturn::uniform(1.0, 1.2).unwrap();
        let big_r = r.mean();
        let d2 = r.variance();
        let c = s * big_r;
        let closed = big_r * c.powf(-3.0)
            + 0.5 * d2 * s * (2.0 * (-3.0 * c.powf(-4.0)) + c * (12.0 * c.powf(-5.0)));
        let approx = r.approx_expect(&MarginalReturn::new(u, s)).unwrap();
        assert!((approx - closed).abs() < 1e-12 * closed.abs());
    }

    #[test]
    fn shift_moves_mean_keeps_variance() {
        let d = RandomReturn::discrete([(0.8, 0.2), (1.1, 0.5), (1.6, 0.3)]).unwrap();
        let s = d.shifted(0.3).unwrap();
        assert!((s.mean() - d.mean() - 0.3).abs() < 1e-14);
        assert!((s.variance() - d.variance()).abs() < 1e-14);
        assert!(d.shifted(-0.9).is_err());
    }
}
