//! Error type shared across the crate.

use std::fmt;

/// Everything that can go wrong in this crate.
///
/// Functions that cannot fail simply do not return `Result`; panics are
/// reserved for internal invariant violations, never for bad input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A set operation received an empty element list.
    EmptySet,
    /// `interval_density` was asked about an interval `[a, b)` with `b <= a`.
    EmptyInterval { a: i64, b: i64 },
    /// A set element exceeds the supported magnitude (`2^32`).
    ElementTooLarge { value: i64 },
    /// A set literal failed to parse; `position` is the byte offset of the
    /// offending token.
    ParseSet { position: usize, message: String },
    /// A rational literal was not of the form `p/q` or `p`.
    ParseRational { input: String },
    /// A greedy run was requested with horizon zero.
    ZeroHorizon,
    /// Periodicity detection gave up: more distinct window states than the
    /// caller's budget allows were visited without a recurrence.
    StateBudgetExhausted { explored: u64 },
    /// The set's diameter exceeds the automaton width cap, so the exact
    /// oracle cannot run.
    WidthCapExceeded { diameter: u64, cap: u32 },
    /// `brute_force_periodic` was called with a period limit outside `1..=20`.
    MaxPeriodOutOfRange { requested: u32, max: u32 },
    /// The closed-form upper bound is only defined for cardinality `k >= 5`.
    WeinsteinRange { k: u64 },
    /// Enumeration parameters admit no set (`k < 2` or `max_elem < k - 1`).
    InfeasibleEnumeration { k: u32, max_elem: i64 },
    /// The verification sweep needs `max_elem >= 6` so that the known
    /// minimizer is inside the search range.
    VerifyCapTooSmall { max_elem: i64 },
    /// A survey row failed an internal cross-check.
    Row { set: String, message: String },
    /// A checkpoint file could not be read, parsed, or matched to the sweep.
    Checkpoint { message: String },
    /// An I/O failure outside checkpoint handling.
    Io { message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptySet => write!(f, "empty set"),
            Error::EmptyInterval { a, b } => {
                write!(f, "empty interval [{a}, {b})")
            }
            Error::ElementTooLarge { value } => {
                write!(f, "element {value} exceeds supported magnitude 2^32")
            }
            Error::ParseSet { position, message } => {
                write!(f, "invalid set literal at byte {position}: {message}")
            }
            Error::ParseRational { input } => {
                write!(f, "invalid rational literal {input:?}")
            }
            Error::ZeroHorizon => write!(f, "horizon must be at least 1"),
            Error::StateBudgetExhausted { explored } => {
                write!(f, "state budget exhausted after exploring {explored} positions")
            }
            Error::WidthCapExceeded { diameter, cap } => {
                write!(f, "diameter {diameter} exceeds automaton width cap {cap}")
            }
            Error::MaxPeriodOutOfRange { requested, max } => {
                write!(f, "max period {requested} outside supported range 1..={max}")
            }
            Error::WeinsteinRange { k } => {
                write!(f, "bound applies for k >= 5 only (got k = {k})")
            }
            Error::InfeasibleEnumeration { k, max_elem } => {
                write!(f, "infeasible parameters: k = {k}, max_elem = {max_elem}")
            }
            Error::VerifyCapTooSmall { max_elem } => {
                write!(f, "cap below 6: {{0,1,4,6}} not in range (max_elem = {max_elem})")
            }
            Error::Row { set, message } => {
                write!(f, "survey row for {{{set}}}: {message}")
            }
            Error::Checkpoint { message } => write!(f, "checkpoint: {message}"),
            Error::Io { message } => write!(f, "i/o error: {message}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io { message: e.to_string() }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
