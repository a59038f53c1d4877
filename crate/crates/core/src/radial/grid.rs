use crate::error::{Error, Result};
use crate::scalar::Real;

/// Uniform cell-centred grid on `[0, r_max]`: centres `r_j = (j + ½)h`,
/// faces `r_{j+½} = (j + 1)h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadialGrid<T: Real> {
    r_max: T,
    n_r: usize,
    h: T,
}

impl<T: Real> RadialGrid<T> {
    pub const MIN_CELLS: usize = 64;

    pub fn new(r_max: T, n_r: usize) -> Result<Self> {
        if !(r_max > T::zero()) || !r_max.is_finite() {
            return Err(Error::Config(format!(
                "r_max must be positive, got {r_max}"
            )));
        }
        if n_r < Self::MIN_CELLS {
            return Err(Error::Config(format!(
                "radial grid needs at least {} cells, got {n_r}",
                Self::MIN_CELLS
            )));
        }
        Ok(Self {
            r_max,
            n_r,
            h: r_max / T::from_index(n_r),
        })
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn n_cells(&self) -> usize {
        self.n_r
    }

    pub fn spacing(&self) -> T {
        self.h
    }

    pub fn center(&self, j: usize) -> T {
        (T::from_index(j) + T::lit(0.5)) * self.h
    }

    /// Radius of face `f`, `0 ≤ f ≤ n_r`; face `j` is the inner face of cell `j`.
    pub fn face(&self, f: usize) -> T {
        T::from_index(f) * self.h
    }

    /// Exact annulus area of cell `j`, `π(r_{j+½}² − r_{j−½}²) = 2π r_j h`.
    pub fn cell_area(&self, j: usize) -> T {
        T::lit(2.0) * T::PI() * self.center(j) * self.h
    }

    pub fn centers(&self) -> Vec<T> {
        (0..self.n_r).map(|j| self.center(j)).collect()
    }

    /// Profile sampled at the cell centres.
    pub fn sample(&self, f: impl Fn(T) -> T) -> Vec<T> {
        (0..self.n_r).map(|j| f(self.center(j))).collect()
    }

    /// Same cell count, radius scaled by `factor`.
    pub fn scaled(&self, factor: T) -> Self {
        Self {
            r_max: self.r_max * factor,
            n_r: self.n_r,
            h: self.h * factor,
        }
    }

    /// Each cell split in two; faces of `self` remain faces.
    pub fn bisected(&self) -> Self {
        Self {
            r_max: self.r_max,
            n_r: 2 * self.n_r,
            h: self.h * T::lit(0.5),
        }
    }

    /// Index of the first cell in the outer 5% of the grid.
    pub fn guard_start(&self) -> usize {
        self.n_r - (self.n_r / 20).max(1)
    }
}
