use thiserror::Error;

/// Errors raised by the solvers and functionals.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vorticity has nonzero mean {mean:e} (tolerance {tolerance:e})")]
    NonzeroMeanVorticity { mean: f64, tolerance: f64 },

    #[error("positivity lost: min density {min:e} against sup norm {linf:e}")]
    PositivityLoss { min: f64, linf: f64 },

    /// The density is not negligible near the outer radius, so integrals over
    /// the truncated plane are unreliable. `value` is what was computed anyway.
    #[error("{quantity}: truncation guard failed (edge ratio {edge_ratio:e}, value {value:e})")]
    Truncation {
        quantity: &'static str,
        value: f64,
        edge_ratio: f64,
    },

    #[error("remap target radius {requested:e} exceeds source radius {available:e}")]
    InterpolationRange { requested: f64, available: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
