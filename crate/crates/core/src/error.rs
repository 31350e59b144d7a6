use thiserror::Error;

use crate::rp::ScopeVerdict;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular or not finite")]
    SingularMatrix,
    #[error("element is the identity in PSL(2,C)")]
    IdentityElement,
    #[error("parameters are out of scope: {0}")]
    OutOfScope(ScopeVerdict),
    #[error("elliptic trace parameter {0} has no rational rotation angle within the denominator bound")]
    UnrecognizedEllipticAngle(f64),
    #[error("commutator [f,g] is trivial; the pair is elementary")]
    ElementaryInput,
    #[error("no square root h of [f,g] satisfies (hg)^2 = 1 (smallest deviation {0:e})")]
    NoRootSatisfiesRelation(f64),
    #[error("value {0} is outside the domain gamma < 0")]
    DomainError(f64),
    #[error("generators are not in normalized form: {0}")]
    NotNormalized(&'static str),
    #[error("planes coincide")]
    CoincidentPlanes,
    #[error("the verdict is not discrete")]
    NotDiscrete,
    #[error("p = {0} is even; e is not a word in f and g")]
    EvenP(u32),
    #[error("invalid order {0}")]
    InvalidOrder(u32),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("relator {relator} should be {expected} but evaluates to {found}")]
    RelatorMismatch {
        relator: String,
        expected: &'static str,
        found: String,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
