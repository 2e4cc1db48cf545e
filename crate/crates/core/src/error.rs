use thiserror::Error;

use crate::logic::ParseError;

#[derive(Debug, Error)]
pub enum Error {
    // spaces and events
    #[error("duplicate state label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate conditioning event name `{0}`")]
    DuplicateEventName(String),
    #[error("conditioning event `{0}` is empty")]
    EmptyConditioningEvent(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("event does not belong to this space (expected {expected} states, got {actual})")]
    EventOutsideSpace { expected: usize, actual: usize },
    #[error("duplicate proposition `{0}`")]
    DuplicateProposition(String),
    #[error("unknown proposition `{0}`")]
    UnknownProposition(String),
    #[error("literal set contains both `{0}` and `!{0}`")]
    InconsistentLiteralSet(String),
    #[error("literal set is empty")]
    EmptyLiteralSet,

    // rationals and measures
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("negative mass {mass} at `{state}`")]
    NegativeMass { state: String, mass: String },
    #[error("masses sum to {0}, not 1")]
    NotNormalized(String),
    #[error("measure domain has a single component")]
    NotAProductDomain,
    #[error("component {0} is out of range")]
    BadComponent(usize),
    #[error("map is not total: {0}")]
    PartialMap(String),
    #[error("measures live on different domains")]
    DomainMismatch,
    #[error("map moves the nature coordinate of `{from}` to `{to}`")]
    NatureCoordinateMoved { from: String, to: String },
    #[error("conditioning families differ: {0}")]
    ConditioningMismatch(String),
    #[error("no measure given for conditioning event `{0}`")]
    MissingEvent(String),
    #[error("measure given for unknown conditioning event `{0}`")]
    ExtraEvent(String),

    // type structures
    #[error("unknown player `{0}`")]
    UnknownPlayer(String),
    #[error("unknown type `{ty}` for player `{player}`")]
    UnknownType { player: String, ty: String },
    #[error("unknown conditioning event `{0}`")]
    UnknownEvent(String),
    #[error("probability {0} is outside [0,1]")]
    ProbabilityOutOfRange(String),
    #[error("structures are not defined on the same conditional space")]
    SpaceMismatch,
    #[error("nature component of a morphism must be the identity")]
    NatureNotIdentity,
    #[error("product state key `{0}` is ambiguous")]
    AmbiguousStateKey(String),
    #[error("malformed structure: {0}")]
    Malformed(String),
    #[error("structure has no valuation")]
    NoValuation,

    // hierarchies and quotients
    #[error("requested depth {requested} exceeds tree depth {depth}")]
    DepthExceeded { requested: usize, depth: usize },
    #[error("map is not a type morphism")]
    MorphismInvalid,
    #[error("quotient belief is not well defined for `{player}` block {block}")]
    WellDefinednessFailure { player: String, block: usize },

    // logic
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("threshold {0} is outside [0,1]")]
    ThresholdOutOfRange(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
