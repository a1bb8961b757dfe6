use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid game JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("duplicate node id `{0}`")]
    DuplicateNode(String),

    #[error("arc references unknown node `{0}`")]
    DanglingArc(String),

    #[error("arc {from} -> {to} does not follow the Despot -> Tribune -> People -> Despot orientation")]
    BadOrientation { from: String, to: String },

    #[error("duplicate arc {from} -> {to}")]
    DuplicateArc { from: String, to: String },

    #[error("weight given on non People->Despot arc {from} -> {to}")]
    MisplacedWeight { from: String, to: String },

    #[error("arc {from} -> {to} has nonpositive or non-finite weight {weight}")]
    BadWeight { from: String, to: String, weight: f64 },

    #[error("node without successor: `{0}`")]
    NoSuccessor(String),

    #[error("unknown initial state `{0}`")]
    UnknownInitial(String),

    #[error("game has no Despot state")]
    EmptyGame,

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("operation requires integer weights")]
    NonIntegerWeights,

    #[error("game is not Despot-free (significant Despot states: {0})")]
    NotDespotFree(usize),

    #[error("game is not Tribune-free")]
    NotTribuneFree,

    #[error("game is not irreducible ({0} strongly connected components in the projected graph)")]
    NotIrreducible(usize),

    #[error("subgame construction left node `{0}` without action; the component is not a nontrivial SCC")]
    EmptySubgameNode(String),

    #[error("irreducibility assumption violated: matrix has {classes} classes, class containing state {witness} is not the whole state space; solve per component or use Despot enumeration or the exhaustive oracle")]
    Reducible { classes: usize, witness: usize },

    #[error("Perron root is zero")]
    ZeroSpectralRadius,

    #[error("power iteration did not converge after {iterations} iterations (Collatz-Wielandt gap {gap:e})")]
    PerronNotConverged { iterations: usize, gap: f64 },

    #[error("value iteration overflowed at horizon {0}; use the log-domain iteration")]
    Overflow(usize),

    #[error("policy space too large: {count} candidates exceeds cap {cap}")]
    CapExceeded { count: f64, cap: f64 },

    #[error("min-max and max-min disagree at state {state}: {min_max} vs {max_min}")]
    NoSaddlePoint { state: usize, min_max: f64, max_min: f64 },

    #[error("synthesized policy failed verification (rho = {rho}, expected {expected}); retry with a smaller eps")]
    SynthesisFailed { rho: f64, expected: f64 },

    #[error("no certificate could be derived: {0}")]
    Certificate(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
