//! Error taxonomy shared by every evaluation routine in the crate.

/// Everything that can go wrong while evaluating twin-basic quantities.
///
/// Each variant carries a human-readable message describing the offending
/// input; callers that only care about the class of failure can match on the
/// variant alone.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input outside the mathematical domain of the operation
    /// (zero raised to a negative power, mismatched ratio components, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A denominator factor vanished before the series terminated.
    #[error("pole error: {0}")]
    Pole(String),

    /// The series cannot converge for the given base/argument and does not
    /// terminate naturally, or an adaptive evaluation ran out of terms.
    #[error("convergence error: {0}")]
    Convergence(String),

    /// Partial sums grew without bound during adaptive summation.
    #[error("divergence error: {0}")]
    Divergence(String),

    /// Parameter lists with incompatible lengths.
    #[error("arity error: {0}")]
    Arity(String),

    /// Matrix dimensions do not agree.
    #[error("shape error: {0}")]
    Shape(String),

    /// A numerical mode restriction was violated (e.g. a real-symmetric
    /// ladder realization was requested but the occupation numbers are not
    /// positive reals).
    #[error("numerical error: {0}")]
    Numerical(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
