use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{what} = {value} exceeds cap {cap}")]
    CapExceeded {
        what: &'static str,
        value: u128,
        cap: u128,
    },

    #[error("graph is disconnected; split into components first")]
    Disconnected,

    #[error("duplicate monomial at positions {0} and {1}")]
    DuplicateMonomial(usize, usize),

    #[error("Majorana index {index} out of range for {modes} modes")]
    IndexOutOfRange { index: usize, modes: usize },

    #[error("matrix entries must lie in {{0, +1, -1}}: found {0}")]
    NonConforming(i64),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("solver did not converge ({status}): primal {primal:.9}, dual {dual:.9}")]
    SolverFailure {
        status: String,
        primal: f64,
        dual: f64,
    },

    #[error("internal inconsistency: {0}")]
    Internal(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn cap_check(what: &'static str, value: u128, cap: u128) -> Result<()> {
    if value > cap {
        Err(Error::CapExceeded { what, value, cap })
    } else {
        Ok(())
    }
}
