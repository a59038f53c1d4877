//! Spectral operators. First derivatives drop the Nyquist frequency of the
//! differentiated axis so that derivative, divergence, curl, projection and
//! Biot-Savart are mutually consistent on real fields.

use rustfft::num_complex::Complex;

use super::field::{SpectralScalar, SpectralVector};
use super::grid::{Axis, TorusGrid};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Wavenumber used for first derivatives along one axis at array index `i`.
fn derivative_wavenumber<T: Real>(grid: &TorusGrid<T>, i: usize) -> T {
    if i == grid.n_points() / 2 {
        T::zero()
    } else {
        grid.wavenumber(i)
    }
}

fn derivative_k<T: Real>(grid: &TorusGrid<T>, idx: usize) -> (T, T) {
    let n = grid.n_points();
    (
        derivative_wavenumber(grid, idx / n),
        derivative_wavenumber(grid, idx % n),
    )
}

fn i_times<T: Real>(c: Complex<T>, k: T) -> Complex<T> {
    Complex::new(-c.im * k, c.re * k)
}

/// `∂f/∂x_axis`, exact for band-limited fields.
pub fn spectral_derivative<T: Real>(f: &SpectralScalar<T>, axis: Axis) -> SpectralScalar<T> {
    let grid = f.grid().clone();
    f.map_coefficients(|idx, c| {
        let (k1, k2) = derivative_k(&grid, idx);
        let k = match axis {
            Axis::X1 => k1,
            Axis::X2 => k2,
        };
        i_times(c, k)
    })
}

pub fn gradient<T: Real>(f: &SpectralScalar<T>) -> SpectralVector<T> {
    SpectralVector::new(
        spectral_derivative(f, Axis::X1),
        spectral_derivative(f, Axis::X2),
    )
}

pub fn divergence<T: Real>(u: &SpectralVector<T>) -> SpectralScalar<T> {
    spectral_derivative(&u.first, Axis::X1)
        .add_scaled(&spectral_derivative(&u.second, Axis::X2), T::one())
}

/// Scalar curl `∂₁u² − ∂₂u¹`.
pub fn curl<T: Real>(u: &SpectralVector<T>) -> SpectralScalar<T> {
    spectral_derivative(&u.second, Axis::X1).sub(&spectral_derivative(&u.first, Axis::X2))
}

pub fn laplacian<T: Real>(f: &SpectralScalar<T>) -> SpectralScalar<T> {
    let grid = f.grid().clone();
    f.map_coefficients(|idx, c| c.scale(-grid.k_squared(idx)))
}

/// Solves `−Δc = n − n̄` with `mean(c) = 0`.
pub fn poisson_solve_zero_mean<T: Real>(n: &SpectralScalar<T>) -> SpectralScalar<T> {
    let grid = n.grid().clone();
    n.map_coefficients(|idx, c| {
        if idx == 0 {
            Complex::new(T::zero(), T::zero())
        } else {
            c.unscale(grid.k_squared(idx))
        }
    })
}

/// Leray projection onto divergence-free fields; the mean is left untouched.
pub fn leray_project<T: Real>(u: &SpectralVector<T>) -> SpectralVector<T> {
    let grid = u.grid().clone();
    let a = u.first.coefficients();
    let b = u.second.coefficients();
    let mut p1 = a.to_vec();
    let mut p2 = b.to_vec();
    for idx in 1..grid.len() {
        let (k1, k2) = derivative_k(&grid, idx);
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == T::zero() {
            continue;
        }
        let dot = (a[idx].scale(k1) + b[idx].scale(k2)).unscale(k2sum);
        p1[idx] = a[idx] - dot.scale(k1);
        p2[idx] = b[idx] - dot.scale(k2);
    }
    SpectralVector::new(
        SpectralScalar::from_coefficients(&grid, p1),
        SpectralScalar::from_coefficients(&grid, p2),
    )
}

/// Velocity `u = ∇⊥ψ = (−∂₂ψ, ∂₁ψ)` with `Δψ = ω`.
///
/// The torus admits a solution only for mean-free vorticity.
pub fn biot_savart<T: Real>(omega: &SpectralScalar<T>) -> Result<SpectralVector<T>> {
    let mean = omega.mean().abs();
    let tolerance = T::lit(1e-12) * omega.l2_norm();
    if mean > tolerance {
        return Err(Error::NonzeroMeanVorticity {
            mean: mean.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    let grid = omega.grid().clone();
    let psi = omega.map_coefficients(|idx, c| {
        let (k1, k2) = derivative_k(&grid, idx);
        let k2sum = k1 * k1 + k2 * k2;
        if k2sum == T::zero() {
            Complex::new(T::zero(), T::zero())
        } else {
            -c.unscale(k2sum)
        }
    });
    Ok(SpectralVector::new(
        spectral_derivative(&psi, Axis::X2).scaled(-T::one()),
        spectral_derivative(&psi, Axis::X1),
    ))
}

fn retained<T: Real>(grid: &TorusGrid<T>, i: usize) -> bool {
    3 * grid.mode(i).unsigned_abs() as usize <= grid.n_points()
}

/// Two-thirds rule: zeroes every mode with `|m| > n/3` on either axis.
pub fn dealias<T: Real>(f: &SpectralScalar<T>) -> SpectralScalar<T> {
    let grid = f.grid().clone();
    let n = grid.n_points();
    f.map_coefficients(|idx, c| {
        if retained(&grid, idx / n) && retained(&grid, idx % n) {
            c
        } else {
            Complex::new(T::zero(), T::zero())
        }
    })
}

pub fn dealias_vector<T: Real>(u: &SpectralVector<T>) -> SpectralVector<T> {
    SpectralVector::new(dealias(&u.first), dealias(&u.second))
}

/// Alias-free product via zero padding to `3n/2` points per axis.
///
/// Nyquist coefficients of the inputs are dropped. The result holds the
/// exact convolution for every representable mode.
pub fn padded_product<T: Real>(a: &SpectralScalar<T>, b: &SpectralScalar<T>) -> SpectralScalar<T> {
    let grid = a.grid().clone();
    assert_eq!(&grid, b.grid(), "fields live on different grids");
    let n = grid.n_points();
    let big_n = 3 * n / 2 + (3 * n / 2) % 2;
    let big = TorusGrid::<T>::new(big_n).expect("padded grid is valid");
    let half = (n / 2) as i64;
    let pad = |f: &SpectralScalar<T>| {
        let mut p = SpectralScalar::zeros(&big);
        for m1 in (1 - half)..half {
            for m2 in (1 - half)..half {
                p.set_coefficient(m1, m2, f.coefficient(m1, m2));
            }
        }
        p.to_physical()
    };
    let pa = pad(a);
    let pb = pad(b);
    let prod: Vec<T> = pa.iter().zip(&pb).map(|(&x, &y)| x * y).collect();
    let prod = SpectralScalar::from_physical(&big, &prod);
    let mut out = SpectralScalar::zeros(&grid);
    for m1 in -half..half {
        for m2 in -half..half {
            out.set_coefficient(m1, m2, prod.coefficient(m1, m2));
        }
    }
    out
}
