//! Real functions that may or may not expose derivatives.
//!
//! Expected-utility integrals only need values; the second-order
//! approximations also need `g''`. A plain closure `Fn(f64) -> f64` is a
//! [`RealFunction`] with values only, asking it for a derivative yields
//! [`Error::Capability`].

use crate::error::{Error, Result};
use crate::utility::UtilityFunction;

pub trait RealFunction {
    fn value(&self, x: f64) -> Result<f64>;

    /// `order`-th derivative at `x`; order 0 is the value.
    fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        if order == 0 {
            self.value(x)
        } else {
            Err(Error::Capability { order })
        }
    }
}

impl<F: Fn(f64) -> f64> RealFunction for F {
    fn value(&self, x: f64) -> Result<f64> {
        let y = self(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Evaluation { x })
        }
    }
}

/// `c₀ + c₁x + c₂x² + …` with derivatives of every order.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Self {
        Polynomial { coefficients }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn degree(&self) -> usize {
        self.coefficients
            .iter()
            .rposition(|&c| c != 0.0)
            .unwrap_or(0)
    }

    fn eval_derivative(&self, order: usize, x: f64) -> f64 {
        // Horner over the differentiated coefficients
        let mut acc = 0.0;
        for k in (order..self.coefficients.len()).rev() {
            let falling: f64 = ((k - order + 1)..=k).map(|j| j as f64).product();
            acc = acc * x + self.coefficients[k] * falling;
        }
        acc
    }
}

impl RealFunction for Polynomial {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval_derivative(0, x))
    }

    fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        Ok(self.eval_derivative(order, x))
    }
}

/// The marginal return on saving `g(x) = x·u'(s·x)` for a fixed saving
/// level `s`, as a function of the gross return `x`.
///
/// `g'(x) = u'(sx) + sx·u''(sx)` and `g''(x) = s[2u''(sx) + sx·u'''(sx)]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarginalReturn {
    pub utility: UtilityFunction,
    pub saving: f64,
}

impl MarginalReturn {
    pub fn new(utility: UtilityFunction, saving: f64) -> Self {
        MarginalReturn { utility, saving }
    }
}

impl RealFunction for MarginalReturn {
    fn value(&self, x: f64) -> Result<f64> {
        Ok(x * self.utility.eval(self.saving * x, 1)?)
    }

    fn derivative(&self, order: usize, x: f64) -> Result<f64> {
        let s = self.saving;
        let c = s * x;
        match order {
            0 => self.value(x),
            1 => Ok(self.utility.eval(c, 1)? + c * self.utility.eval(c, 2)?),
            2 => Ok(s * (2.0 * self.utility.eval(c, 2)? + c * self.utility.eval(c, 3)?)),
            _ => Err(Error::Capability { order }),
        }
    }
}
