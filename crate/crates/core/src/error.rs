use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

/// Errors raised by the analysis, synthesis and simulation routines.
///
/// Every variant has a stable name (see [`Error::name`]) that the CLI puts
/// in its diagnostics.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("series contains a non-finite value at index {index}")]
    NonFinite { index: usize },
    #[error("sampling interval must be positive, got {0}")]
    InvalidInterval(f64),
    #[error("series too short: need at least {needed} samples, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("series has zero variance")]
    DegenerateSeries,
    #[error("lag {max_lag} must be smaller than the series length {len}")]
    LagTooLarge { max_lag: usize, len: usize },
    #[error("log-log regression needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("log-log regression point ({0}, {1}) is not strictly positive")]
    NonPositivePoint(f64, f64),
    #[error("block size {block} exceeds series length {len}")]
    BlockTooLarge { block: usize, len: usize },
    #[error("series too short for this estimator: need at least {needed} samples, got {got}")]
    SeriesTooShort { needed: usize, got: usize },
    #[error("too few usable scales: need {needed}, got {got}")]
    TooFewScales { needed: usize, got: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("Hurst parameter must lie in (0, 1), got {0}")]
    InvalidH(f64),
    #[error("circulant embedding has a negative eigenvalue {0}")]
    EmbeddingFailure(f64),
    #[error("mean delay {mu} exceeds the delay bound {tau_max}")]
    InvalidBounds { mu: f64, tau_max: f64 },
    #[error("window of {window} samples exceeds series length {len}")]
    WindowTooLarge { window: usize, len: usize },
    #[error("least-squares design matrix is rank deficient")]
    RankDeficient,
    #[error("integration step {dt} s exceeds the stability bound {limit} s")]
    StepTooLarge { dt: f64, limit: f64 },
    #[error("integration produced a non-positive state at t = {t} s")]
    NonPositiveState { t: f64 },
    #[error("delay trace has {got} samples but the channel needs {needed}")]
    TraceTooShort { needed: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParams(&'static str),
}

impl Error {
    /// Variant name, used as a machine-readable error class.
    pub fn name(&self) -> &'static str {
        match self {
            Error::EmptySeries => "EmptySeries",
            Error::NonFinite { .. } => "NonFinite",
            Error::InvalidInterval(_) => "InvalidInterval",
            Error::TooShort { .. } => "TooShort",
            Error::DegenerateSeries => "DegenerateSeries",
            Error::LagTooLarge { .. } => "LagTooLarge",
            Error::TooFewPoints(_) => "TooFewPoints",
            Error::NonPositivePoint(..) => "NonPositivePoint",
            Error::BlockTooLarge { .. } => "BlockTooLarge",
            Error::SeriesTooShort { .. } => "SeriesTooShort",
            Error::TooFewScales { .. } => "TooFewScales",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::InvalidH(_) => "InvalidH",
            Error::EmbeddingFailure(_) => "EmbeddingFailure",
            Error::InvalidBounds { .. } => "InvalidBounds",
            Error::WindowTooLarge { .. } => "WindowTooLarge",
            Error::RankDeficient => "RankDeficient",
            Error::StepTooLarge { .. } => "StepTooLarge",
            Error::NonPositiveState { .. } => "NonPositiveState",
            Error::TraceTooShort { .. } => "TraceTooShort",
            Error::InvalidParams(_) => "InvalidParams",
        }
    }
}
