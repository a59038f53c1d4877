use crate::error::{Error, Result};
use crate::radial::{total_mass, RadialGrid};
use crate::scalar::Real;

/// Rescaled state `(τ, N(X), Ω(X))` on a radial grid in `X`.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfSimState<T: Real> {
    pub tau: T,
    pub n: Vec<T>,
    pub omega: Vec<T>,
    pub grid: RadialGrid<T>,
}

impl<T: Real> SelfSimState<T> {
    pub fn new(grid: RadialGrid<T>, tau: T, n: Vec<T>, omega: Vec<T>) -> Result<Self> {
        if n.len() != grid.n_cells() || omega.len() != grid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "profiles of length {}/{} on a {}-cell grid",
                n.len(),
                omega.len(),
                grid.n_cells()
            )));
        }
        Ok(Self {
            tau,
            n,
            omega,
            grid,
        })
    }

    /// `R = e^τ`.
    pub fn scale(&self) -> T {
        self.tau.exp()
    }

    pub fn mass(&self) -> T {
        total_mass(&self.n, &self.grid)
    }

    pub fn sup_norm(&self) -> T {
        self.n.iter().fold(T::zero(), |a, &v| a.max(v.abs()))
    }

    /// Same truncation guard as for plane states.
    pub fn edge_ratio(&self) -> T {
        let sup = self.sup_norm();
        if sup == T::zero() {
            return T::zero();
        }
        let start = self.grid.guard_start();
        self.n[start..]
            .iter()
            .fold(T::zero(), |a, &v| a.max(v.abs()))
            / sup
    }

    pub fn guard_ok(&self) -> bool {
        self.edge_ratio() <= T::lit(1e-8)
    }
}
