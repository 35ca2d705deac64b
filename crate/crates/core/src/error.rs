use thiserror::Error;

use crate::permgroup::Permutation;
use crate::quandle::AxiomViolation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),

    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("point {point} out of range for degree {degree}")]
    PointOutOfRange { point: usize, degree: usize },

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("group closure exceeds the element cap of {cap}")]
    CapExceeded { cap: usize },

    #[error("{what} exceeds its limit ({value} > {limit})")]
    LimitExceeded {
        what: &'static str,
        value: usize,
        limit: usize,
    },

    #[error("element {witness} is not contained in the ambient group")]
    NotSubgroup { witness: Permutation },

    #[error("subgroup is not normal: {conjugator}^-1 {element} {conjugator} leaves it (orbits of a subgroup form a quotient quandle only for normal subgroups)")]
    NotNormal {
        conjugator: Permutation,
        element: Permutation,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed table: {0}")]
    MalformedTable(String),

    #[error("{0}")]
    Axiom(AxiomViolation),

    #[error("not a quandle homomorphism: f({x} > {y}) != f({x}) > f({y})")]
    NotHomomorphism { x: usize, y: usize },

    #[error("map is not surjective: {missing} has no preimage")]
    NotSurjective { missing: usize },

    #[error("quandle is not connected: orbits {orbits:?}")]
    Disconnected { orbits: Vec<Vec<usize>> },

    #[error("subgroup is not a realizable kernel: closure contains {witness}")]
    NotRealizable { witness: Permutation },

    #[error("invalid coset presentation: {0}")]
    Presentation(String),

    #[error("homomorphisms have different sources")]
    DifferentSources,

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
