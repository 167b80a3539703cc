//! Error type shared by every module in the crate.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A multiplication table fails one of the group axioms.
    #[error("not a group: {0}")]
    NotAGroup(String),

    /// A member set is not a subgroup of the claimed ambient group.
    #[error("not a subgroup: {0}")]
    NotASubgroup(String),

    /// A subgroup is not normal where normality is required.
    #[error("not normal: {0}")]
    NotNormal(String),

    /// A chain step violates the normal-in-next requirement.
    #[error("chain step is not normal: {0}")]
    NotNormalStep(String),

    /// The requested construction exceeds the desk-scale order cap.
    #[error("order {order} exceeds the cap of {cap}")]
    TooLarge { order: usize, cap: usize },

    /// A claimed homomorphism fails on some pair.
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    /// A projection of the branch group does not reach every state.
    #[error("not a subdirect product: {0}")]
    NotSubdirect(String),

    /// The splitting chain stabilizes below the full branch group.
    /// Carries the members of the stable subgroup as a witness.
    #[error("section is not controllable: splitting chain stabilizes at order {}", stable.len())]
    NotControllable { stable: Vec<usize> },

    /// A Schreier matrix fails the diagonal condition.
    #[error("Schreier matrix is not controllable")]
    NotControllableMatrix,

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    /// Encoder input lies outside the input group (the splitting kernel).
    #[error("element {0} is not a valid encoder input")]
    InvalidInput(usize),

    /// A branch sequence breaks the state-adjacency rule.
    #[error("invalid path: branches {0} and {1} are not adjacent")]
    InvalidPath(usize, usize),

    /// The initial branch handed to the tracker differs from the path head.
    #[error("initial branch does not match the first path branch")]
    InitialMismatch,

    /// Two paths handed to the degradation profile start differently.
    #[error("first branches of the two paths differ")]
    FirstBranchMismatch,

    /// An internally constructed map failed its own exhaustive check.
    /// This always signals an implementation bug, never bad input.
    #[error("verification failed: {0}")]
    VerificationFailed(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
