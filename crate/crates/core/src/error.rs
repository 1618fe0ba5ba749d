use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure the library can report.
///
/// Check failures carry the offending tuple so that callers (and the CLI
/// report) can reproduce the violation directly.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("triple ({x}, {y}, {z}) has {candidates} median candidates, expected exactly one")]
    MedianViolation {
        x: usize,
        y: usize,
        z: usize,
        candidates: usize,
    },

    #[error("graph is not a median graph: {reason}")]
    NotMedian { reason: String },

    #[error("graph is disconnected: vertex {vertex} is unreachable from vertex 0")]
    Disconnected { vertex: usize },

    #[error("cannot complete cube corner at vertex {vertex}: no edge dual to hyperplane {hyperplane}")]
    CornerFailure { vertex: usize, hyperplane: usize },

    #[error("greedy reduction stopped at {size} generators, rank bound is {rank}")]
    ReductionFailure { size: usize, rank: usize },

    #[error("no witness found: {what}")]
    NotFound { what: String },

    #[error("empty set where a non-empty set is required")]
    EmptySet,

    #[error("{property} violated at {witness}")]
    ConditionViolation { property: String, witness: String },

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    #[error("no coarse fit with K <= {k_max}: best H(0) {best_h0} exceeds cap {cap}")]
    NotCoarseMedian {
        k_max: String,
        best_h0: String,
        cap: String,
    },

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("budget exceeded: {what} needs {needed}, budget is {budget}")]
    BudgetExceeded {
        what: String,
        needed: usize,
        budget: usize,
    },

    #[error("vertex {vertex} out of range for {count} vertices")]
    VertexOutOfRange { vertex: usize, count: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// Short name of the property that failed; printed in machine-readable
    /// violation reports.
    pub fn property(&self) -> &str {
        match self {
            Error::MedianViolation { .. } => "unique median of every triple",
            Error::NotMedian { .. } => "median graph structure",
            Error::Disconnected { .. } => "connectivity",
            Error::CornerFailure { .. } => "pairwise-crossing hyperplanes span a cube",
            Error::ReductionFailure { .. } => "iterated median needs at most rank generators",
            Error::NotFound { .. } => "witness existence",
            Error::EmptySet => "non-empty set",
            Error::ConditionViolation { property, .. } => property,
            Error::PreconditionViolation(_) => "operation precondition",
            Error::NotCoarseMedian { .. } => "coarse median Lipschitz control",
            Error::InvalidMetric(_) => "metric axioms",
            Error::BudgetExceeded { .. } => "resource budget",
            Error::VertexOutOfRange { .. } => "vertex id range",
            Error::Parse { .. } => "input format",
            Error::Io(_) => "file access",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}
