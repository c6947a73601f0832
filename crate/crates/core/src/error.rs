use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument violates the operation's precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Parameters lie outside the contract this crate supports.
    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    /// The function has no finite value at the requested point.
    #[error("no finite value: {0}")]
    Singular(String),

    #[error(
        "{what} did not converge (achieved error estimate {achieved:e}, requested {requested:e})"
    )]
    NoConvergence {
        what: &'static str,
        achieved: f64,
        requested: f64,
    },

    #[error("root not bracketed in [{lo}, {hi}]")]
    NotBracketed { lo: f64, hi: f64 },

    #[error("non-monotone function detected: {0}")]
    NonMonotone(String),

    #[error("no classically allowed region: {0}")]
    NoTurningPoints(String),

    /// Sign changes reach the edge of the sampling window; widen it.
    #[error("sampling window too small: {0}")]
    WindowTooSmall(String),

    /// The grid does not resolve the potential's core scale.
    #[error(
        "grid too coarse: spacing {spacing:e} exceeds {required:e}; use at least {suggested_points} points"
    )]
    GridTooCoarse {
        spacing: f64,
        required: f64,
        suggested_points: usize,
    },
}

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite, got {value}"
        )))
    }
}
