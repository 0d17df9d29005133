//! Gauss–Legendre quadrature on the unit interval.
//!
//! Every integral over the level parameter γ and every expectation under a
//! uniform return goes through a [`QuadratureRule`]. Nodes are the roots of
//! the Legendre polynomial `P_N`, found by Newton iteration from the usual
//! Chebyshev-like initial guesses, then mapped from `[-1, 1]` to `[0, 1]`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// An `N`-point Gauss–Legendre rule for `∫₀¹ g(t) dt`.
///
/// Weights are positive and sum to one; the rule is exact for polynomials
/// of degree `2N - 1` or less.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    pub const DEFAULT_NODES: usize = 64;

    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!(
                "quadrature needs at least 2 nodes, got {n}"
            )));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            let mut z = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, z);
                dp = d;
                let step = p / d;
                z -= step;
                if step.abs() <= 1e-16 {
                    break;
                }
            }
            // z is the i-th largest root on [-1, 1]
            let (_, d) = legendre_with_derivative(n, z);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - z * z) * dp * dp);
            nodes[i] = 0.5 * (1.0 - z);
            nodes[n - 1 - i] = 0.5 * (1.0 + z);
            weights[i] = 0.5 * w;
            weights[n - 1 - i] = 0.5 * w;
        }
        Ok(QuadratureRule { nodes, weights })
    }

    /// The shared default rule with [`Self::DEFAULT_NODES`] nodes.
    pub fn standard() -> &'static QuadratureRule {
        static RULE: OnceLock<QuadratureRule> = OnceLock::new();
        RULE.get_or_init(|| {
            QuadratureRule::gauss_legendre(Self::DEFAULT_NODES).expect("default node count is valid")
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫₀¹ g(t) dt`.
    pub fn integrate(&self, mut g: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&t, &w)| w * g(t))
            .sum()
    }

    /// `∫₀¹ g(t) dt` for a fallible integrand; the first error aborts.
    pub fn try_integrate(&self, mut g: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
        let mut acc = 0.0;
        for (&t, &w) in self.nodes.iter().zip(&self.weights) {
            acc += w * g(t)?;
        }
        Ok(acc)
    }

    /// `∫ₐᵇ g(x) dx`.
    pub fn integrate_over(&self, a: f64, b: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
        let h = b - a;
        h * self.integrate(|t| g(a + h * t))
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        QuadratureRule::standard().clone()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for k in 2..=n {
        let kf = k as f64;
        let next = ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf;
        p_prev = p;
        p = next;
    }
    let d = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, d)
}
