use thiserror::Error;

use crate::qnd::ProbeId;
use crate::state::ModeLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("duplicate mode label {0}")]
    DuplicateMode(ModeLabel),

    #[error("unknown mode {0}")]
    UnknownMode(ModeLabel),

    #[error("invalid mode label {0:?}")]
    InvalidLabel(String),

    #[error("registers overlap on mode {0}")]
    OverlappingRegistry(ModeLabel),

    #[error("registry mismatch: {left} vs {right}")]
    RegistryMismatch { left: String, right: String },

    #[error("too many modes: {0} (at most {1} supported)")]
    TooManyModes(usize, usize),

    #[error("GHZ state needs at least 2 modes, got {0}")]
    GhzTooSmall(usize),

    #[error("expected {expected} modes, got {got}")]
    ModeCount { expected: usize, got: usize },

    #[error("flip index {index} out of range 1..={m}")]
    FlipIndex { index: usize, m: usize },

    #[error("photons per logic qubit must be at least 2, got {0}")]
    PhotonsPerLogicQubit(usize),

    #[error("empty mode list")]
    EmptyModeList,

    #[error("zero-norm state")]
    ZeroNorm,

    #[error("probe {0} already used")]
    ProbeReused(ProbeId),

    #[error("probe {0} was never written")]
    ProbeUnwritten(ProbeId),

    #[error("probe {probe} carries tag {tag}; a single parity check only produces -1, 0, +1")]
    TagOverflow { probe: ProbeId, tag: i32 },

    #[error("state has unread probes {0:?}")]
    PendingProbes(Vec<ProbeId>),

    #[error("F out of range: {0} (must lie in [0, 1])")]
    FidelityOutOfRange(f64),

    #[error("mixture weights must be positive and sum to 1 (sum = {0})")]
    BadWeights(f64),

    #[error("empty mixture")]
    EmptyMixture,

    #[error("malformed input mixture: {0}")]
    MalformedMixture(String),

    #[error("density matrix over {0} photons is too large (limit {1})")]
    InstanceTooLarge(usize, usize),

    #[error("policy accepts pattern {0} but carries no correction for it")]
    MissingCorrection(String),

    #[error("policy pattern {pattern} has {got} probes, protocol uses {expected}")]
    PatternLength { pattern: String, expected: usize, got: usize },

    #[error("correction left residual infidelity: fidelity {0}")]
    CorrectionIncomplete(f64),

    #[error("rounds must be at least 1")]
    NoRounds,

    #[error("F0 = {0} does not improve: If F > 1/2, F' > F")]
    NoImprovement(f64),

    #[error("no branch or trial passed post-selection")]
    NothingAccepted,

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
