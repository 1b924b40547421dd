use thiserror::Error;

use zeromass_core::VerifyError;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("grid size n = {0} must be even and at least 4")]
    BadGridSize(usize),
    #[error("grid parameter `{name}` must be positive, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("representation `{name}` is not a certified Pauli algebra: {failures:?}")]
    Uncertified { name: String, failures: Vec<String> },
    #[error("dimension mismatch: {what} expects {expected} components, got {got}")]
    Dimension { what: String, expected: usize, got: usize },
    #[error("grid mismatch between fields")]
    GridMismatch,
    #[error("plane-wave mode must be nonzero")]
    ZeroMode,
    #[error("mode component {component} not representable on an n = {n} grid")]
    ModeOutOfRange { component: i64, n: usize },
    #[error("band {band} must be below n/2 = {half}")]
    BandTooLarge { band: usize, half: usize },
    #[error("off-image residual {residual:e} at grid point {point:?} exceeds tolerance {tol:e}")]
    OffImage {
        residual: f64,
        point: (usize, usize, usize),
        tol: f64,
    },
    #[error("need at least {needed} snapshots, got {got}")]
    TooFewSnapshots { needed: usize, got: usize },
    #[error("at least two formulations are required, got {0}")]
    TooFewFormulations(usize),
    #[error("bad snapshot dump: {0}")]
    BadDump(String),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
