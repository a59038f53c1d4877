use rustfft::num_complex::Complex;

use super::grid::TorusGrid;
use crate::scalar::Real;

/// Real periodic field stored by its Fourier-series coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralScalar<T: Real> {
    grid: TorusGrid<T>,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> SpectralScalar<T> {
    pub fn zeros(grid: &TorusGrid<T>) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: vec![Complex::new(T::zero(), T::zero()); grid.len()],
        }
    }

    /// Constant field; its only nonzero coefficient is the mean.
    pub fn constant(grid: &TorusGrid<T>, value: T) -> Self {
        let mut f = Self::zeros(grid);
        f.coeffs[0] = Complex::new(value, T::zero());
        f
    }

    pub fn from_physical(grid: &TorusGrid<T>, values: &[T]) -> Self {
        Self {
            grid: grid.clone(),
            coeffs: grid.forward(values),
        }
    }

    pub fn from_fn(grid: &TorusGrid<T>, f: impl Fn(T, T) -> T) -> Self {
        Self::from_physical(grid, &grid.sample(f))
    }

    /// Wraps raw coefficients laid out row-major by array index.
    pub fn from_coefficients(grid: &TorusGrid<T>, coeffs: Vec<Complex<T>>) -> Self {
        assert_eq!(
            coeffs.len(),
            grid.len(),
            "coefficient count does not match grid"
        );
        Self {
            grid: grid.clone(),
            coeffs,
        }
    }

    pub fn grid(&self) -> &TorusGrid<T> {
        &self.grid
    }

    pub fn coefficients(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coefficients_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn into_coefficients(self) -> Vec<Complex<T>> {
        self.coeffs
    }

    /// Coefficient of integer frequency `(m1, m2)`; zero if not representable.
    pub fn coefficient(&self, m1: i64, m2: i64) -> Complex<T> {
        match (self.grid.index_of(m1), self.grid.index_of(m2)) {
            (Some(i1), Some(i2)) => self.coeffs[i1 * self.grid.n_points() + i2],
            _ => Complex::new(T::zero(), T::zero()),
        }
    }

    pub fn set_coefficient(&mut self, m1: i64, m2: i64, value: Complex<T>) {
        let i1 = self.grid.index_of(m1).expect("mode out of range");
        let i2 = self.grid.index_of(m2).expect("mode out of range");
        let n = self.grid.n_points();
        self.coeffs[i1 * n + i2] = value;
    }

    pub fn to_physical(&self) -> Vec<T> {
        self.grid.inverse(&self.coeffs)
    }

    /// Mean over the torus, which equals the integral since the area is one.
    pub fn mean(&self) -> T {
        self.coeffs[0].re
    }

    /// `‖f‖₂` computed from the coefficients.
    pub fn l2_norm(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc + c.norm_sqr())
            .sqrt()
    }

    /// Largest deviation from Hermitian symmetry `f̂(-k) = conj f̂(k)`.
    pub fn hermitian_defect(&self) -> T {
        let n = self.grid.n_points();
        let mut worst = T::zero();
        for i1 in 0..n {
            let j1 = (n - i1) % n;
            for i2 in 0..n {
                let j2 = (n - i2) % n;
                let d = (self.coeffs[i1 * n + i2] - self.coeffs[j1 * n + j2].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    pub fn scaled(&self, s: T) -> Self {
        self.map_coefficients(|_, c| c.scale(s))
    }

    /// Applies `f(flat_index, coefficient)` to every coefficient.
    pub fn map_coefficients(&self, f: impl Fn(usize, Complex<T>) -> Complex<T>) -> Self {
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, &c)| f(i, c))
                .collect(),
        }
    }

    /// `self + s·other`.
    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        assert_eq!(self.grid, other.grid, "fields live on different grids");
        Self {
            grid: self.grid.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(&a, &b)| a + b.scale(s))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, -T::one())
    }

    /// Largest coefficient-wise difference.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coefficient(&self) -> T {
        self.coeffs
            .iter()
            .fold(T::zero(), |acc, c| acc.max(c.norm()))
    }
}

/// Two-component periodic vector field on a shared grid.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVector<T: Real> {
    pub first: SpectralScalar<T>,
    pub second: SpectralScalar<T>,
}

impl<T: Real> SpectralVector<T> {
    pub fn new(first: SpectralScalar<T>, second: SpectralScalar<T>) -> Self {
        assert_eq!(
            first.grid(),
            second.grid(),
            "vector components on different grids"
        );
        Self { first, second }
    }

    pub fn zeros(grid: &TorusGrid<T>) -> Self {
        Self::new(SpectralScalar::zeros(grid), SpectralScalar::zeros(grid))
    }

    pub fn from_fn(grid: &TorusGrid<T>, f1: impl Fn(T, T) -> T, f2: impl Fn(T, T) -> T) -> Self {
        Self::new(
            SpectralScalar::from_fn(grid, f1),
            SpectralScalar::from_fn(grid, f2),
        )
    }

    pub fn grid(&self) -> &TorusGrid<T> {
        self.first.grid()
    }

    pub fn means(&self) -> (T, T) {
        (self.first.mean(), self.second.mean())
    }

    /// `‖u‖₂` over both components.
    pub fn l2_norm(&self) -> T {
        let a = self.first.l2_norm();
        let b = self.second.l2_norm();
        (a * a + b * b).sqrt()
    }

    pub fn scaled(&self, s: T) -> Self {
        Self::new(self.first.scaled(s), self.second.scaled(s))
    }

    pub fn add_scaled(&self, other: &Self, s: T) -> Self {
        Self::new(
            self.first.add_scaled(&other.first, s),
            self.second.add_scaled(&other.second, s),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, -T::one())
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        self.first
            .max_abs_diff(&other.first)
            .max(self.second.max_abs_diff(&other.second))
    }

    pub fn to_physical(&self) -> (Vec<T>, Vec<T>) {
        (self.first.to_physical(), self.second.to_physical())
    }
}
