//! Crate-wide error type.

use thiserror::Error;

/// Everything that can go wrong across the crate.
///
/// Domain violations (bad instance data, out-of-range arguments) are kept
/// separate from verification failures (an identity that was checked and did
/// not hold) so callers can map them to different exit codes.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    /// A rational could not be parsed from its textual form.
    #[error("cannot parse rational from {input:?}: {reason}")]
    RatParse { input: String, reason: String },

    /// A shift parameter x would put a pole at a nonnegative integer,
    /// i.e. x is a negative integer.
    #[error("shift parameter {x} is a negative integer")]
    ShiftAtPole { x: String },

    /// Instance construction rejected the supplied data.
    #[error("invalid instance: {reason}")]
    InvalidInstance { reason: String },

    /// An argument was outside the documented domain of an operation.
    #[error("invalid argument to {operation}: {reason}")]
    InvalidArgument {
        operation: &'static str,
        reason: String,
    },

    /// A divisor that must be nonzero vanished (zero denominator, zero
    /// pivot structure, division of intervals containing zero, ...).
    #[error("division by zero in {operation}: {detail}")]
    DivisionByZero {
        operation: &'static str,
        detail: String,
    },

    /// A size guard was exceeded (permutation expansions, enumeration caps).
    #[error("{operation} guard exceeded: {detail}")]
    GuardExceeded {
        operation: &'static str,
        detail: String,
    },

    /// A checked identity failed; `detail` pinpoints the first violation.
    #[error("verification failed in {check}: {detail}")]
    VerificationFailed { check: &'static str, detail: String },

    /// The working precision was insufficient to decide a comparison.
    #[error("precision {bits} bits cannot decide {operation}: {detail}")]
    Undecidable {
        operation: &'static str,
        bits: u32,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
