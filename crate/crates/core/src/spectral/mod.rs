//! Periodic field algebra on the unit torus.
//!
//! Coefficients are Fourier-series coefficients of the physical field,
//! `f(x) = Σ_k f̂(k) e^{i k·x}`, so `f̂(0)` is the mean (equal to the integral
//! on the unit torus) and `∫|f|² dx = Σ|f̂|²` with constant one.

mod field;
mod grid;
mod ops;

pub use field::{SpectralScalar, SpectralVector};
pub use grid::{Axis, TorusGrid};
pub use ops::{
    biot_savart, curl, dealias, dealias_vector, divergence, gradient, laplacian, leray_project,
    padded_product, poisson_solve_zero_mean, spectral_derivative,
};
