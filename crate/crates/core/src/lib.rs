//! Solvers and monitored functionals for the Patlak-Keller-Segel system
//! coupled to incompressible Navier-Stokes.
//!
//! Three discretizations share one diagnostics layer:
//!
//! * [`torus`]: pseudo-spectral integration of the periodic system on the unit torus.
//! * [`radial`]: finite-volume integration of radially symmetric solutions on the plane.
//! * [`selfsim`]: the radial system in self-similar variables `X = x/R(t)`, `R = (1+2t)^{1/2}`.
//!
//! Everything numeric is generic over [`Real`]; the `*64` aliases below fix `f64`.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Banded solvers read more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod config;
pub mod diagnostics;
pub mod error;
pub mod radial;
pub mod run;
pub mod scalar;
pub mod selfsim;
pub mod spectral;
pub mod torus;

pub use error::{Error, Result};
pub use scalar::Real;

pub type TorusGrid64 = spectral::TorusGrid<f64>;
pub type SpectralScalar64 = spectral::SpectralScalar<f64>;
pub type SpectralVector64 = spectral::SpectralVector<f64>;

pub type RunConfig64 = config::RunConfig<f64>;
pub type DiagnosticsRecord64 = diagnostics::DiagnosticsRecord<f64>;
pub type RadialGrid64 = radial::RadialGrid<f64>;
pub type RadialState64 = radial::RadialState<f64>;
pub type SelfSimState64 = selfsim::SelfSimState<f64>;
pub type TorusState64 = torus::TorusState<f64>;
