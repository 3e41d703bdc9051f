use thiserror::Error;

/// Everything that can go wrong while building spaces, measures, or running
/// the operators. Construction errors mean the inputs broke a contract;
/// `CrossCheckFailed` means an internal dual-route computation disagreed and
/// is a bug (or float tolerance blowup) rather than a caller mistake.
#[derive(Debug, Error)]
pub enum Error {
    #[error("time grid must be nonempty and strictly increasing")]
    BadTimeGrid,
    #[error("state space must have at least one state with distinct labels")]
    BadStateSpace,
    #[error("metric table must be square, symmetric, nonnegative, with zero diagonal")]
    BadMetric,
    #[error("step bound requires a metric on the state space")]
    StepBoundWithoutMetric,
    #[error("step bound must be nonnegative")]
    NegativeStepBound,
    #[error("cyclic grids must be uniformly spaced")]
    CyclicNonUniform,
    #[error("cyclic space is not closed under rotation: step {from}->{to} can close a path but exceeds the bound")]
    RotationNotClosed { from: usize, to: usize },
    #[error("interval bounds {lo}..={hi} invalid for a grid of length {len}")]
    BadInterval { lo: usize, hi: usize, len: usize },
    #[error("grid index {index} out of range for grid of length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("path has {got} states but the grid has {want} points")]
    PathLengthMismatch { got: usize, want: usize },
    #[error("unknown state id {0}")]
    UnknownState(usize),
    #[error("unknown state label {0:?}")]
    UnknownLabel(String),
    #[error("path violates the step bound and is not admissible")]
    InadmissiblePath,
    #[error("{0}^{1} paths exceed the enumeration cap of {2}")]
    EnumerationTooLarge(usize, usize, u64),
    #[error("shift requires a cyclic grid")]
    ShiftNeedsCyclic,
    #[error("interval shift by {steps} leaves the window")]
    ShiftOutOfWindow { steps: i64 },
    #[error("interval shift requires uniform grid spacing")]
    ShiftNeedsUniformSpacing,
    #[error("weights must be nonnegative and finite")]
    BadWeight,
    #[error("operands live on different path spaces")]
    SpaceMismatch,
    #[error("operands live on different intervals")]
    IntervalMismatch,
    #[error("measure has zero total mass")]
    ZeroMass,
    #[error("intervals {0:?} and {1:?} do not share exactly their touching endpoint")]
    NotAdjacent(String, String),
    #[error("gluing requires matching states at the shared grid point")]
    GlueEndpointMismatch,
    #[error("measure is not concentrated on a single state at grid index {pin}")]
    NotPinned { pin: usize },
    #[error("pinned operands disagree at the pin: {0}")]
    PinMismatch(String),
    #[error("pullback domain misses {missing} support atoms of the image measure")]
    PullbackNotOnto { missing: usize },
    #[error("pullback map is not injective: image atom hit {hits} times")]
    PullbackNotInjective { hits: usize },
    #[error("cylinder function coordinates must be distinct, sorted grid indices")]
    BadCylinderCoords,
    #[error("cylinder tuple arity {got} does not match {want} coordinates")]
    BadCylinderTuple { got: usize, want: usize },
    #[error("group table is not a Latin square")]
    NotLatinSquare,
    #[error("group table is not associative")]
    NotAssociative,
    #[error("group table has no two-sided identity")]
    NoIdentity,
    #[error("group element {0} has no inverse")]
    NoInverse(usize),
    #[error("action needs states in bijection with the group ({states} states vs order {order})")]
    ActionBijectionFailure { states: usize, order: usize },
    #[error("measure is not translation invariant")]
    NotInvariant,
    #[error("marginal at pin {pin} is not the uniform (haar) distribution")]
    MarginalNotHaar { pin: usize },
    #[error("measure is not invariant under the required one-time marginal: {0}")]
    MuInvarianceViolated(String),
    #[error("internal cross-check failed in {context}; this is a bug or a float tolerance blowup")]
    CrossCheckFailed { context: &'static str },
    #[error("map violates the declared commuting condition on a support atom")]
    CommutingConditionViolated,
    #[error("ordering pin {pin} out of range for grid of length {len}")]
    BadOrderingPin { pin: usize, len: usize },
    #[error("{0}")]
    Parse(String),
    #[error("generator {kind:?} cannot run on this space: {reason}")]
    GeneratorUnsupported { kind: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
