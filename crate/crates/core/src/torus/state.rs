use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{SpectralScalar, SpectralVector, TorusGrid};

/// Torus state `(t, n̂, û)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorusState<T: Real> {
    pub t: T,
    pub n: SpectralScalar<T>,
    pub u: SpectralVector<T>,
}

impl<T: Real> TorusState<T> {
    pub fn new(t: T, n: SpectralScalar<T>, u: SpectralVector<T>) -> Result<Self> {
        if n.grid() != u.grid() {
            return Err(Error::GridMismatch(format!(
                "density on {} points, velocity on {}",
                n.grid().n_points(),
                u.grid().n_points()
            )));
        }
        Ok(Self { t, n, u })
    }

    pub fn grid(&self) -> &TorusGrid<T> {
        self.n.grid()
    }

    /// `M = ∫ n dx = n̂(0, 0)` on the unit torus.
    pub fn mass(&self) -> T {
        self.n.mean()
    }

    pub fn mean_velocity(&self) -> (T, T) {
        self.u.means()
    }
}
