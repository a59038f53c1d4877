use std::fmt;
use std::sync::Arc;

use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Coordinate axis of the torus: `X1` is the row index, `X2` the column index.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    X1,
    X2,
}

struct Plans<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

/// Uniform `n × n` grid on the unit torus `[0,1)²`.
///
/// Cloning is cheap; FFT plans are shared.
#[derive(Clone)]
pub struct TorusGrid<T: Real> {
    n: usize,
    wavenumbers: Arc<Vec<T>>,
    plans: Arc<Plans<T>>,
}

impl<T: Real> fmt::Debug for TorusGrid<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TorusGrid").field("n", &self.n).finish()
    }
}

impl<T: Real> PartialEq for TorusGrid<T> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n
    }
}

impl<T: Real> TorusGrid<T> {
    /// Builds a grid with `n` points per axis; `n` must be an even number ≥ 8.
    pub fn new(n: usize) -> Result<Self> {
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::Config(format!(
                "torus grid needs an even number of points >= 8, got {n}"
            )));
        }
        let mut planner = FftPlanner::new();
        let plans = Plans {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        };
        let two_pi = T::lit(2.0) * T::PI();
        let wavenumbers = (0..n)
            .map(|i| two_pi * T::from_f64(mode_index(i, n) as f64).unwrap())
            .collect();
        Ok(Self {
            n,
            wavenumbers: Arc::new(wavenumbers),
            plans: Arc::new(plans),
        })
    }

    pub fn n_points(&self) -> usize {
        self.n
    }

    /// Number of grid cells, `n²`.
    pub fn len(&self) -> usize {
        self.n * self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Side length of the torus.
    pub fn length(&self) -> T {
        T::one()
    }

    /// Grid spacing `1/n`.
    pub fn spacing(&self) -> T {
        T::one() / T::from_index(self.n)
    }

    /// Signed integer frequency stored at array index `i`.
    pub fn mode(&self, i: usize) -> i64 {
        mode_index(i, self.n)
    }

    /// Array index holding integer frequency `m`, if it is representable.
    pub fn index_of(&self, m: i64) -> Option<usize> {
        let half = (self.n / 2) as i64;
        if m < -half || m >= half {
            return None;
        }
        Some(if m >= 0 {
            m as usize
        } else {
            (m + self.n as i64) as usize
        })
    }

    /// Angular wavenumber `2π m` at array index `i`.
    pub fn wavenumber(&self, i: usize) -> T {
        self.wavenumbers[i]
    }

    pub fn wavenumbers(&self) -> &[T] {
        &self.wavenumbers
    }

    /// Squared wavevector magnitude `|k|²` at flat index `idx`.
    pub fn k_squared(&self, idx: usize) -> T {
        let k1 = self.wavenumbers[idx / self.n];
        let k2 = self.wavenumbers[idx % self.n];
        k1 * k1 + k2 * k2
    }

    /// Wavevector at flat index `idx`.
    pub fn k_vector(&self, idx: usize) -> (T, T) {
        (
            self.wavenumbers[idx / self.n],
            self.wavenumbers[idx % self.n],
        )
    }

    /// Coordinate of grid point `j` along either axis.
    pub fn coordinate(&self, j: usize) -> T {
        T::from_index(j) * self.spacing()
    }

    /// Physical field sampled from `f(x1, x2)` at the grid points.
    pub fn sample(&self, f: impl Fn(T, T) -> T) -> Vec<T> {
        let mut out = Vec::with_capacity(self.len());
        for j1 in 0..self.n {
            let x1 = self.coordinate(j1);
            for j2 in 0..self.n {
                out.push(f(x1, self.coordinate(j2)));
            }
        }
        out
    }

    /// Forward transform of a real field to Fourier-series coefficients.
    pub(crate) fn forward(&self, values: &[T]) -> Vec<Complex<T>> {
        assert_eq!(values.len(), self.len(), "field size does not match grid");
        let mut data: Vec<Complex<T>> =
            values.iter().map(|&v| Complex::new(v, T::zero())).collect();
        self.transform_2d(&mut data, &self.plans.forward);
        let scale = T::one() / T::from_index(self.len());
        for c in &mut data {
            *c = c.scale(scale);
        }
        data
    }

    /// Inverse transform; the imaginary part (roundoff for Hermitian input) is dropped.
    pub(crate) fn inverse(&self, coeffs: &[Complex<T>]) -> Vec<T> {
        let mut data = coeffs.to_vec();
        self.transform_2d(&mut data, &self.plans.inverse);
        data.into_iter().map(|c| c.re).collect()
    }

    fn transform_2d(&self, data: &mut [Complex<T>], plan: &Arc<dyn Fft<T>>) {
        let mut scratch = vec![Complex::new(T::zero(), T::zero()); plan.get_inplace_scratch_len()];
        plan.process_with_scratch(data, &mut scratch);
        transpose_in_place(data, self.n);
        plan.process_with_scratch(data, &mut scratch);
        transpose_in_place(data, self.n);
    }
}

fn mode_index(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

fn transpose_in_place<V: Copy>(data: &mut [V], n: usize) {
    for i in 0..n {
        for j in (i + 1)..n {
            data.swap(i * n + j, j * n + i);
        }
    }
}
