use std::fmt;

/// Side of the feasible interval the maximizer runs toward when the
/// first-order condition keeps a constant sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryDirection {
    /// The FOC is negative everywhere: utility decreases in saving.
    Lower,
    /// The FOC is positive everywhere: utility increases in saving.
    Upper,
}

impl fmt::Display for BoundaryDirection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryDirection::Lower => write!(f, "lower boundary"),
            BoundaryDirection::Upper => write!(f, "upper boundary"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{what} = {value} lies outside its domain ({lower}, {upper})")]
    Domain {
        what: &'static str,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("function evaluation at x = {x} did not produce a finite value")]
    Evaluation { x: f64 },

    #[error("derivative of order {order} is not available for this function")]
    Capability { order: usize },

    #[error("prudence index is singular at x = {x}: second derivative vanishes")]
    Singular { x: f64 },

    #[error(
        "mean returns do not match: R = {target}, E_f(A) = {possibilistic}, M(R~) = {probabilistic}"
    )]
    MeanMismatch {
        target: f64,
        possibilistic: f64,
        probabilistic: f64,
    },

    #[error(
        "no interior optimum on [{lower}, {upper}]: FOC is {foc_lower:e} at the lower end and \
         {foc_upper:e} at the upper end, optimum lies toward the {direction}"
    )]
    NoInteriorOptimum {
        direction: BoundaryDirection,
        lower: f64,
        upper: f64,
        foc_lower: f64,
        foc_upper: f64,
    },

    #[error("root finder did not converge after {iterations} iterations, best bracket [{lower}, {upper}]")]
    NotConverged {
        iterations: usize,
        lower: f64,
        upper: f64,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
