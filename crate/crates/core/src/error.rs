use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid structure: {0}")]
    InvalidStructure(String),

    #[error("degenerate structure: |p22| = {magnitude:e} underflows for order {order}")]
    DegenerateStructure { order: i32, magnitude: f64 },

    #[error("truncation did not converge below n_max = {cap} (|W_n| = {last:e})")]
    NonConvergence { cap: usize, last: f64 },

    #[error("log-power capacity {capacity} exceeded (needed {needed})")]
    TruncationCapacity { capacity: usize, needed: usize },

    #[error("series read at t^{power} outside valid window (valid through t^{valid})")]
    WindowExceeded { power: i32, valid: i32 },

    #[error("series not invertible: {0}")]
    NotInvertible(String),

    #[error("optimization failed on all restarts (best objective {best_objective:e})")]
    OptimizationFailed {
        best_objective: f64,
        best_parameters: Vec<f64>,
    },

    #[error("point at radius {radius} lies outside the image of the blow-up map")]
    OutsideImage { radius: f64 },

    #[error("point at radius {radius} lies inside the insulating core")]
    InsideCore { radius: f64 },

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("mode {mode} system near resonance (condition number {condition:e})")]
    NearResonance { mode: i32, condition: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Variant name, for diagnostics that key on the kind of failure.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidArgument(_) => "InvalidArgument",
            Error::Domain(_) => "Domain",
            Error::InvalidStructure(_) => "InvalidStructure",
            Error::DegenerateStructure { .. } => "DegenerateStructure",
            Error::NonConvergence { .. } => "NonConvergence",
            Error::TruncationCapacity { .. } => "TruncationCapacity",
            Error::WindowExceeded { .. } => "WindowExceeded",
            Error::NotInvertible(_) => "NotInvertible",
            Error::OptimizationFailed { .. } => "OptimizationFailed",
            Error::OutsideImage { .. } => "OutsideImage",
            Error::InsideCore { .. } => "InsideCore",
            Error::SingularPoint(_) => "SingularPoint",
            Error::NearResonance { .. } => "NearResonance",
        }
    }
}
