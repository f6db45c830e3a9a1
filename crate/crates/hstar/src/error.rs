//! Crate-wide error type.
//!
//! Every fallible operation in the crate returns [`Error`]; the CLI maps
//! variants onto its exit codes (parse failures -> 1, verification findings
//! -> 2, exhausted budgets -> 3).

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Matrix rows are linearly dependent where full row rank is required.
    #[error("matrix has linearly dependent rows (rank {rank} < {rows})")]
    RankDeficient { rank: usize, rows: usize },

    /// Vertex set does not span: the edge-vector determinant vanishes.
    #[error("degenerate vertex set: edge vectors are linearly dependent")]
    Degenerate,

    /// A computed h* coefficient came out negative; the input cannot be a
    /// valid lattice simplex (or the caller fed inconsistent counts).
    #[error("negative h* coefficient {value} at index {index}")]
    NegativeCoefficient { index: usize, value: String },

    /// Group enumeration would exceed the element cap.
    #[error("group order {order} exceeds the enumeration cap {cap}")]
    GroupTooLarge { order: u128, cap: u64 },

    /// A generator's coordinate sum is not an integer, so the group cannot
    /// arise from a lattice simplex.
    #[error("generator has non-integer coordinate sum ({num}/{den})")]
    NonIntegerHeight { num: i64, den: i64 },

    /// Canonicalization search exceeded its node budget.
    #[error("canonicalization exceeded the {budget}-node search budget")]
    CanonicalizationBudget { budget: u64 },

    /// p is not prime where a prime is required.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Parameters violate a defining equation of the requested family.
    #[error("parameters violate {relation}: {detail}")]
    NumericalConditionViolated { relation: String, detail: String },

    /// A required divisibility between parameters fails.
    #[error("divisibility violated: {0}")]
    DivisibilityViolated(String),

    /// Entries are required to be coprime to the modulus.
    #[error("gcd({value}, {modulus}) != 1")]
    NotCoprime { value: i64, modulus: i64 },

    /// A parameter lies outside its admissible range.
    #[error("{name} = {value} outside admissible range {range}")]
    RangeViolated {
        name: &'static str,
        value: i64,
        range: String,
    },

    /// Inconsistent dimensions between composed objects.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A family specification fails its parameter constraints.
    #[error("invalid family specification: {0}")]
    InvalidSpec(String),

    /// A global search budget ran out before the scan finished.
    #[error("search budget exhausted after examining {scanned} candidates")]
    BudgetExceeded { scanned: u64 },

    /// Malformed textual or JSON input.
    #[error("parse error: {0}")]
    Parse(String),

    /// The two independent h* computations disagree.
    #[error("h* mismatch: counting gave {counting}, group data gave {group}")]
    OracleMismatch { counting: String, group: String },

    /// Unrecognized kind tag in a CLI argument.
    #[error("unknown kind {0:?}")]
    UnknownKind(String),

    /// Integer value does not fit the fixed-width type used for storage.
    #[error("value {0} overflows the fixed-width coordinate type")]
    Overflow(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
