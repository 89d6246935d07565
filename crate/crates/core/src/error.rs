use thiserror::Error;

use crate::permgroup::Permutation;

pub type Result<T> = std::result::Result<T, AtlasError>;

/// Errors raised by the classification engine.
///
/// Every variant names the invariant that was violated so that front ends can
/// surface it verbatim.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("invalid permutation {images:?}: images must be a bijection on 0..{degree}")]
    InvalidPermutation { images: Vec<usize>, degree: usize },

    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },

    #[error("atom complexity must be positive")]
    EmptyAtom,

    #[error("tau is not a fixed-point-free involution (point {point})")]
    BadMatching { point: usize },

    #[error("f-graph is disconnected: only {reached} of {total} points reachable from 0")]
    Disconnected { reached: usize, total: usize },

    #[error("permutation {perm} does not commute with sigma and tau of the atom")]
    NotASymmetry { perm: Permutation },

    #[error("action is not free: element {element} fixes {location}")]
    NonFreeAction { element: String, location: String },

    #[error("cannot certify freeness of element {element}")]
    UndecidableFreeness { element: String },

    #[error("generators do not define the declared group: {reason}")]
    NotAHomomorphism { reason: String },

    #[error("quotient group G/N is not cyclic (|G| = {group_order}, |N| = {normal_order})")]
    QuotientNotCyclic {
        group_order: usize,
        normal_order: usize,
    },

    #[error("focus complexity must be positive")]
    EmptyFocus,

    #[error("shift {shift} out of range for focus complexity {n}")]
    ShiftOutOfRange { shift: usize, n: usize },

    #[error("flow angle {angle} outside [0, 1)")]
    AngleOutOfRange { angle: String },

    #[error("malformed angle {0:?}: expected an exact fraction \"p/q\"")]
    MalformedAngle(String),

    #[error("{k} does not divide {n}")]
    NotADivisor { k: usize, n: usize },

    #[error("set of focus automorphisms is not closed under composition")]
    NotClosed,

    #[error("invalid simple minimal model: {0}")]
    InvalidModel(String),

    #[error("complexity {requested} outside the configured bound 1..={max}")]
    ComplexityOutOfBounds { requested: usize, max: usize },

    #[error("group closure exceeded {limit} elements")]
    GroupTooLarge { limit: usize },

    #[error("unknown atom name {0:?}")]
    UnknownAtom(String),

    #[error("unknown output format {0:?} (expected table or json)")]
    UnknownFormat(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl From<serde_json::Error> for AtlasError {
    fn from(err: serde_json::Error) -> Self {
        AtlasError::Parse(err.to_string())
    }
}
