use thiserror::Error;

use crate::halfint::HalfInt;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("invalid group type: {0}")]
    InvalidGroupType(String),

    #[error("invalid root subset: {0}")]
    InvalidRootSubset(String),

    #[error("dimension mismatch: blocks span {found}, the dual group needs {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid block: {0}")]
    InvalidBlock(String),

    #[error("parameter is not of good parity: {0}")]
    BadParity(String),

    #[error("offset {0} is not an integer")]
    NonIntegerOffset(HalfInt),

    #[error("offsets: {0}")]
    InvalidOffsets(String),

    #[error("very-regular threshold violated: {0}")]
    ThresholdViolated(String),

    #[error("not a domination pair: {0}")]
    NotDominating(String),

    #[error("sign vector is not in the component group: {0}")]
    NotInGroup(String),

    #[error("signature infeasible: {0}")]
    SignatureInfeasible(String),

    #[error("range violation: {0}")]
    RangeViolation(String),

    #[error("packet index mismatch: {0}")]
    IndexMismatch(String),

    #[error("weight is not theta-invariant and dominant: {0}")]
    NotThetaInvariant(String),

    #[error("zero entry in torus element")]
    ZeroEntry,

    #[error("parse error: {0}")]
    Parse(String),
}
