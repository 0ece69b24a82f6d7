use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension {n} exceeds the dense-storage cap of {max}")]
    Capacity { n: usize, max: usize },

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("matrix is not orthogonal (residual {residual:.3e})")]
    NotOrthogonal { residual: f64 },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("map {index} sends the unit cube outside itself (overshoot {overshoot:.3e})")]
    NotContained { index: usize, overshoot: f64 },

    #[error("series diverges at p = {p}: sum of r_s^p = {ratio_sum}, p must exceed dim_s")]
    Divergent { p: f64, ratio_sum: f64 },

    #[error("exponent {p} is below the critical value {critical}")]
    BelowCritical { p: f64, critical: f64 },

    #[error("word budget exceeded: {needed} cubes requested, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("symbol {symbol} out of range for an IFS with {maps} maps")]
    SymbolOutOfRange { symbol: usize, maps: usize },

    #[error("unknown preset: {0}")]
    UnknownPreset(String),

    #[error("self-similar measure requested for a system without the open set condition flag")]
    NotOsc,

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Short machine-readable tag used in error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "invalid_argument",
            Error::Capacity { .. } => "capacity",
            Error::SizeMismatch { .. } => "size_mismatch",
            Error::NotOrthogonal { .. } => "not_orthogonal",
            Error::NotUnitary { .. } => "not_unitary",
            Error::NotContained { .. } => "not_contained",
            Error::Divergent { .. } => "divergent",
            Error::BelowCritical { .. } => "below_critical",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::SymbolOutOfRange { .. } => "symbol_out_of_range",
            Error::UnknownPreset(_) => "unknown_preset",
            Error::NotOsc => "not_osc",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
            Error::Csv(_) => "csv",
        }
    }
}
