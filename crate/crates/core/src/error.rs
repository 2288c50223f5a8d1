use num_bigint::BigUint;
use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("degree {degree} exceeds the supported maximum")]
    DegreeOverflow { degree: usize },

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("parameter out of range: {0}")]
    ParamOutOfRange(String),

    #[error("group order certification failed: expected {expected}, got {actual}")]
    OrderCertification { expected: BigUint, actual: BigUint },

    #[error("group is not transitive")]
    Intransitive,

    #[error("partition is not invariant under the group")]
    NotInvariant,

    #[error("group is not primitive")]
    NotPrimitive,

    #[error("excluded family: {0}")]
    ExcludedFamily(String),

    #[error("H is not a subgroup of G")]
    NotSubgroup,

    #[error("H is not normal in G")]
    NotNormal,

    #[error("group order {order} exceeds enumeration limit {limit}")]
    LimitExceeded { order: BigUint, limit: u64 },

    #[error("no class-count method applies to a group of order {order}")]
    Uncountable { order: BigUint },

    #[error("precision escalation failed: {0}")]
    Precision(String),

    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
}

impl Error {
    /// True for errors caused by an enumeration budget rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            Error::LimitExceeded { .. } | Error::Uncountable { .. }
        )
    }
}
