use thiserror::Error;

/// Errors raised by the quadrature library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("argument {value} outside supported domain [{lo}, {hi}]")]
    Domain { value: f64, lo: f64, hi: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("only {correct_bits:.1} correct bits for D_{n} at x = {x} (need 16); raise precision")]
    PrecisionInsufficient { n: usize, x: f64, correct_bits: f64 },

    #[error("recurrence breakdown at index {index} for delta = {delta}: beta = {beta:e}")]
    Breakdown { index: usize, delta: f64, beta: f64 },

    #[error("orthogonal polynomial of degree {n} does not exist at delta = {delta} (|D_n| has {correct_bits:.1} correct bits)")]
    Nonexistence { n: usize, delta: f64, correct_bits: f64 },

    #[error("table breakdown at (k, delta) pairs {pairs:?}; lower nmax or delta_max")]
    TableBreakdown { pairs: Vec<(usize, f64)> },

    #[error("Chebyshev tail {tail:e} exceeds tolerance for k = {k} at degree {degree}; raise the degree")]
    Resolution { k: usize, degree: usize, tail: f64 },

    #[error("delta = {delta} outside table domain [0, {delta_max}]")]
    OutOfDomain { delta: f64, delta_max: f64 },

    #[error("need {needed} recurrence coefficients, only {available} available")]
    InsufficientCoefficients { needed: usize, available: usize },

    #[error("eigenvalue iteration did not converge for order {n}")]
    EigenConvergence { n: usize },

    #[error("nodes {i} and {j} coincide (separation {separation:e})")]
    CoincidentNodes { i: usize, j: usize, separation: f64 },

    #[error("path tracking failed: {0}")]
    PathTracking(String),

    #[error("tolerance {tol:e} not met; achieved estimate {estimate:e}")]
    ToleranceNotMet { tol: f64, estimate: f64 },

    #[error("Newton iteration failed to converge at u = {re} + {im}i")]
    NewtonNonconvergence { re: f64, im: f64 },

    #[error("recursion requested up to k = {kmax} but only stable for k <= {limit}")]
    Unstable { kmax: usize, limit: usize },

    #[error("table file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
