use thiserror::Error;

use crate::topo::PointSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong inside the library.
///
/// Variants that carry sets or indices point at the offending item so the
/// CLI can print a usable diagnostic.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("space has {points} points; at most {max} are supported")]
    TooManyPoints { points: usize, max: usize },

    #[error("point {point} is out of range for a space with {points} points")]
    PointOutOfRange { point: usize, points: usize },

    #[error("set {set} mentions points outside a space with {points} points")]
    SetOutOfRange { set: PointSet, points: usize },

    #[error("open family is missing the {0} set")]
    MissingBound(&'static str),

    #[error("open family is not closed under union: {a} ∪ {b} = {result} is missing")]
    NotUnionClosed { a: PointSet, b: PointSet, result: PointSet },

    #[error("open family is not closed under intersection: {a} ∩ {b} = {result} is missing")]
    NotIntersectionClosed { a: PointSet, b: PointSet, result: PointSet },

    #[error("duplicate member {0}")]
    DuplicateMember(PointSet),

    #[error("{0} is not open")]
    NotOpen(PointSet),

    #[error("families live on different spaces")]
    SpaceMismatch,

    #[error("family does not satisfy role `{role}`: {reason}")]
    RoleViolation { role: &'static str, reason: String },

    #[error("cover sequence is empty")]
    EmptySequence,

    #[error("map image has length {got}, expected {expected}")]
    MapLength { got: usize, expected: usize },

    #[error("malformed witness: {0}")]
    MalformedWitness(String),

    #[error("side condition violated: {0}")]
    SideCondition(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("postcondition failed: {0}")]
    Postcondition(String),

    #[error("witness does not verify: members {0} and {1} are not separated")]
    WitnessRejected(usize, usize),

    #[error("unknown adversary kind `{0}`")]
    UnknownAdversary(String),

    #[error("illegal move in round {round}: {reason}")]
    IllegalMove { round: usize, reason: String },

    #[error("node budget of {budget} exceeded")]
    BudgetExceeded { budget: u64 },

    #[error("invalid generator input: {0}")]
    InvalidGenerator(String),

    #[error("document error: {0}")]
    Document(String),
}
