//! Scattering coefficients of concentric layered disks for the 2D Helmholtz
//! equation `∇·(1/μ)∇u + ω²εu = 0`, their low-frequency power-log
//! expansions, gradient-based design of layers that suppress them, the
//! blow-up map used to turn such designs into near-cloaks, and a
//! boundary-integral cross-check for a single penetrable disk.
//!
//! Numerical code is generic over [`Real`] (`f32`, `f64`, and with the
//! `quad` feature a 113-bit float). The aliases below fix `f64`.

pub mod bie;
pub mod designer;
pub mod error;
pub mod expansion;
pub mod layered;
pub mod scalar;
pub mod series;
pub mod specfun;
pub mod transform;

pub use error::{Error, Result};
pub use scalar::Real;

pub use expansion::{extract_expansion, nonzero_coefficient_list, CoefficientLabel};
pub use layered::{scattering_coefficient, Core};

pub type Material = layered::Material<f64>;
pub type Structure = layered::LayeredStructure<f64>;
pub type Spectrum = layered::ScatteringSpectrum<f64>;
pub type Series = series::PowerLogSeries<f64>;
pub type Table = expansion::ExpansionTable<f64>;
pub type Problem = designer::DesignProblem<f64>;
pub type Design = designer::DesignResult<f64>;
pub type Map = transform::RadialMap<f64>;
pub type Sample = transform::TensorFieldSample<f64>;
pub type Disk = bie::DiskScatterer<f64>;
