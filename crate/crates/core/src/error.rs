use thiserror::Error;

/// Everything that can go wrong while building, solving or certifying a spectrum.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sigma must be positive (got {0})")]
    NonPositiveSigma(f64),
    #[error("sigma must differ from 1")]
    UnitSigma,
    #[error("length must be positive (got {0})")]
    NonPositiveLength(f64),
    #[error("invalid rational {0:?}")]
    InvalidRational(String),
    #[error("floor parity is ambiguous for j = {j}: j/m lies within the guard band of an integer")]
    Ambiguous { j: i64 },
    #[error("no sign change of the {parity} factor on ({lo}, {hi})")]
    NoBracket {
        lo: f64,
        hi: f64,
        parity: crate::dispersion::Parity,
    },
    #[error("winding count {found} where {expected} was expected")]
    CountMismatch { expected: i64, found: i64 },
    #[error("function nearly vanishes on the contour (min/max ratio {ratio:e})")]
    BoundaryZero { ratio: f64 },
    #[error("winding number {0} is not close to an integer")]
    NonIntegerWinding(f64),
    #[error("no convergence after {iterations} iterations (worst residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("homotopy path left its strip at beta = {beta} (Re z = {re})")]
    LeftStrip { beta: f64, re: f64 },
    #[error("spectrum carries {0} defect(s) and cannot be used for counting")]
    UncertifiedInput(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
