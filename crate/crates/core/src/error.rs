//! Error type shared by every module of the crate.

use std::fmt;

/// Library-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors surfaced by constraint-set construction, projection, sampling and
/// experiment drivers.
#[derive(Debug, Clone)]
pub enum Error {
    /// Operand dimensions do not agree.
    DimensionMismatch { expected: usize, actual: usize },
    /// Input contains NaN or infinite entries.
    NonFinite,
    /// A descriptor violates one of its invariants (non-positive radius,
    /// `k` larger than the dimension, odd node count, ...).
    InvalidParameter(String),
    /// An iterative solver ran out of its iteration budget. Carries the last
    /// iterate and the residual it stalled at so callers can inspect it.
    IterationBudget {
        what: &'static str,
        iterations: usize,
        residual: f64,
        last: Vec<f64>,
    },
    /// The anchor of a tangent-cone descriptor is not feasible for its body.
    InfeasibleAnchor { distance: f64 },
    /// A closed-form bound was evaluated outside the range it is proved for.
    BoundInapplicable(String),
    /// Exhaustive enumeration would exceed the caller-supplied limit.
    SetTooLarge { size: u128, limit: u128 },
    /// An aggregate over an empty collection was requested.
    EmptyInput,
    /// The sample-complexity search hit its cap without reaching the target.
    RiskTargetUnreachable { n_cap: usize, risk: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, actual } => {
                write!(f, "dimension mismatch: expected {expected}, got {actual}")
            }
            Error::NonFinite => write!(f, "input has non-finite entries"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
            Error::IterationBudget {
                what,
                iterations,
                residual,
                ..
            } => write!(
                f,
                "iteration budget exhausted in {what} after {iterations} iterations \
                 (residual {residual:.3e})"
            ),
            Error::InfeasibleAnchor { distance } => {
                write!(
                    f,
                    "anchor is not feasible for the body (distance {distance:.3e})"
                )
            }
            Error::BoundInapplicable(msg) => write!(f, "bound inapplicable: {msg}"),
            Error::SetTooLarge { size, limit } => {
                write!(f, "set too large: {size} elements exceed limit {limit}")
            }
            Error::EmptyInput => write!(f, "empty input"),
            Error::RiskTargetUnreachable { n_cap, risk } => write!(
                f,
                "target risk unreachable: risk {risk:.4} at sample cap {n_cap}"
            ),
        }
    }
}

impl std::error::Error for Error {}
