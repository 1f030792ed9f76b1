use thiserror::Error;

/// Errors raised by state construction, decomposition, process building and
/// the fluctuation checks.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation too small: discarded tail mass {tail:e} >= {bound:e}")]
    TruncationTooSmall { tail: f64, bound: f64 },

    #[error("Renyi order must be positive, got {0}")]
    InvalidRenyiOrder(f64),

    #[error("support of {size} levels exceeds the hard cap of {cap}")]
    SupportTooLarge { size: usize, cap: usize },

    #[error("rate out of range: mu = {mu}, lambda = {lambda}")]
    RateOutOfRange { mu: f64, lambda: f64 },

    #[error("state is not a shifted, phased coherent state (fit residual {residual:e})")]
    NotInC { residual: f64 },

    #[error("p differs from q * r by {residual:e} (sup norm)")]
    ConvolutionMismatch { residual: f64 },

    #[error("window [{lo}, {hi}] cannot hold index {index}")]
    WindowOverflow { lo: i64, hi: i64, index: i64 },

    #[error("output is entangled: product fidelity {fidelity}")]
    NotAProcess { fidelity: f64 },

    #[error("no nonnegative work distribution connects the states (residual {residual:e})")]
    NoValidProcess { residual: f64 },

    #[error("Gibbs normalizer underflows: log normalizer {log_normalizer}")]
    Underflow { log_normalizer: f64 },

    #[error("no mean-value inverse temperature found: {0}")]
    RootNotFound(String),

    #[error("reference distribution is not full rank on its window")]
    NotFullRank,

    #[error("cumulant order {0} outside 1..=8")]
    InvalidOrder(usize),

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("constraint has vanishing Boltzmann weight")]
    DegenerateConstraint,

    #[error("reverse trajectory probability {reverse:e} below floor (forward {forward:e})")]
    ReverseZero { forward: f64, reverse: f64 },

    #[error("states are not coherently connected through the given work state (deviation {deviation:e})")]
    NoMatch { deviation: f64 },

    #[error("4 Var = {four_var} exceeds the k-producible bound {bound}")]
    VarianceExceedsBound { four_var: f64, bound: f64 },

    #[error("invalid unitary: {0}")]
    InvalidUnitary(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
