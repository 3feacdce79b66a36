use std::fmt;

use thiserror::Error;

/// One violated invariant found while validating an instance description.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NoItems,
    NoGroups,
    EmptyGroup { group: usize },
    LengthMismatch { group: usize, agent: usize, expected: usize, found: usize },
    NegativeUtility { group: usize, agent: usize, item: usize },
}

impl fmt::Display for Violation {
    // positions are reported 1-based, like the document format
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoItems => write!(f, "EMPTY_ITEMS: m must be positive"),
            Violation::NoGroups => write!(f, "EMPTY_GROUP: instance has no groups"),
            Violation::EmptyGroup { group } => write!(f, "EMPTY_GROUP: group {} has no agents", group + 1),
            Violation::LengthMismatch { group, agent, expected, found } => write!(
                f,
                "LENGTH_MISMATCH: agent ({},{}) has {} utilities, expected {}",
                group + 1,
                agent + 1,
                found,
                expected
            ),
            Violation::NegativeUtility { group, agent, item } => write!(
                f,
                "NEGATIVE_UTILITY: agent ({},{}) item {}",
                group + 1,
                agent + 1,
                item + 1
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {}", join(.0))]
    InvalidInstance(Vec<Violation>),
    #[error("PARSE_ERROR at {context}: {message}")]
    Parse { context: String, message: String },
    #[error("LAST_AGENT: group {group} has a single agent")]
    LastAgent { group: usize },
    #[error("LAST_GROUP: cannot drop the only group")]
    LastGroup,
    #[error("index out of range: {0}")]
    OutOfRange(String),
    #[error("TOO_LARGE: {0}")]
    TooLarge(String),
    #[error("NONPOSITIVE_THRESHOLD: threshold must be positive")]
    NonpositiveThreshold,
    #[error("CAP_VIOLATION: item {item} has capped value above 1")]
    CapViolation { item: usize },
    #[error("NOT_APPLICABLE: total capped utility {total} is below 2p = {needed}")]
    NotApplicable { total: String, needed: u64 },
    #[error("EXHAUSTED: items ran out with {unserved} agents unserved")]
    Exhausted { unserved: usize },
    #[error("BETA_TOO_SMALL: beta_1 = {0} must exceed 1")]
    BetaTooSmall(f64),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("utilities do not fit the integer fast path: {0}")]
    Overflow(String),
    #[error("CONDITION_VIOLATION: {0}")]
    ConditionViolation(String),
    #[error("DESIGN_TOO_BIG: group {group} needs a design of at most {limit} blocks, got {size}")]
    DesignTooBig { group: usize, size: usize, limit: usize },
    #[error("DESIGN_INVALID: {0}")]
    DesignInvalid(String),
    #[error("HYPOTHESIS_VIOLATION: {0}")]
    HypothesisViolation(String),
    #[error("TRIVIAL_REGIME: {0}")]
    TrivialRegime(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
