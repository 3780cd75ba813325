use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("Verblunsky parameter must lie in (-1, 1), got {0}")]
    InvalidAlpha(f64),

    #[error("recurrence overflowed at degree {degree}; use the log-scaled evaluator")]
    Overflow { degree: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("point {re}{im:+}i lies on the support arc of the orthogonality measure")]
    BranchCut { re: f64, im: f64 },

    #[error("kernel radicand {radicand:e} is negative; the basis evaluator is inconsistent")]
    DegenerateKernel { radicand: f64 },

    #[error("denominator of the ratio vanishes at {re}{im:+}i")]
    Pole { re: f64, im: f64 },

    #[error("empty envelope range [{lower}, {upper}]")]
    EmptyRange { lower: f64, upper: f64 },

    #[error("quadrature did not converge: estimate {estimate}, error {error:e} after {subdivisions} subdivisions")]
    QuadratureFailure {
        estimate: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("independent quadrature rules disagree: {first} vs {second}")]
    Nonconvergence { first: f64, second: f64 },

    #[error("least-squares design matrix is ill-conditioned (condition number {condition:e})")]
    IllConditioned { condition: f64 },

    #[error("expansion coefficient A_{order} for {parity} n is not available")]
    MissingCoefficient { order: usize, parity: &'static str },

    #[error("root solver failed: {0}")]
    RootSolver(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
