//! Radial integrals of cell-averaged profiles: cumulative mass, the
//! Newtonian chemical potential and the azimuthal velocity of a vorticity.

use super::grid::RadialGrid;
use crate::scalar::Real;

/// Cumulative mass `m(r) = 2π∫₀^r n(s) s ds` of a piecewise-constant profile,
/// at the faces (`faces[0] = 0`, `faces[n_r]` = total) and at the centres.
#[derive(Debug, Clone, PartialEq)]
pub struct CumulativeMass<T: Real> {
    pub faces: Vec<T>,
    pub centers: Vec<T>,
}

impl<T: Real> CumulativeMass<T> {
    pub fn total(&self) -> T {
        *self.faces.last().expect("non-empty grid")
    }
}

/// Total mass `Σ n_j · 2π r_j h`, summed in cell order.
pub fn total_mass<T: Real>(n: &[T], grid: &RadialGrid<T>) -> T {
    n.iter()
        .enumerate()
        .fold(T::zero(), |acc, (j, &v)| acc + v * grid.cell_area(j))
}

/// Telescoping midpoint quadrature of the cumulative mass. Centre values are
/// exact for the piecewise-constant profile.
pub fn cumulative_mass<T: Real>(n: &[T], grid: &RadialGrid<T>) -> CumulativeMass<T> {
    assert_eq!(n.len(), grid.n_cells(), "profile does not match grid");
    let mut faces = Vec::with_capacity(n.len() + 1);
    let mut centers = Vec::with_capacity(n.len());
    let mut acc = T::zero();
    faces.push(acc);
    for (j, &v) in n.iter().enumerate() {
        let inner = grid.face(j);
        let rc = grid.center(j);
        centers.push(acc + T::PI() * v * (rc * rc - inner * inner));
        acc += v * grid.cell_area(j);
        faces.push(acc);
    }
    CumulativeMass { faces, centers }
}

/// `∂_r c = −m(r)/(2πr)` at the cell centres.
pub fn chemical_gradient_radial<T: Real>(m: &CumulativeMass<T>, grid: &RadialGrid<T>) -> Vec<T> {
    let two_pi = T::lit(2.0) * T::PI();
    m.centers
        .iter()
        .enumerate()
        .map(|(j, &mc)| -mc / (two_pi * grid.center(j)))
        .collect()
}

/// `∂_r c = −m/(2πr)` at the faces; zero at the axis.
pub fn chemical_gradient_faces<T: Real>(m: &CumulativeMass<T>, grid: &RadialGrid<T>) -> Vec<T> {
    let two_pi = T::lit(2.0) * T::PI();
    m.faces
        .iter()
        .enumerate()
        .map(|(f, &mf)| {
            if f == 0 {
                T::zero()
            } else {
                -mf / (two_pi * grid.face(f))
            }
        })
        .collect()
}

/// `∫_a^b m(s)/(2πs) ds` inside one cell, where `m(s) = m_a + πn(s² − a²)`.
fn cell_potential_drop<T: Real>(m_a: T, n: T, a: T, b: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let quadratic = n * (b * b - a * a) / T::lit(4.0);
    if a == T::zero() {
        quadratic
    } else {
        (m_a - T::PI() * n * a * a) / two_pi * (b / a).ln() + quadratic
    }
}

/// Newtonian potential `c = −(1/2π) log|·| ∗ n` of the piecewise-constant
/// profile at the cell centres, anchored by `c(r_max) = −(M/2π) log r_max`
/// (exact when no mass lies beyond `r_max`).
pub fn newtonian_potential<T: Real>(n: &[T], grid: &RadialGrid<T>) -> Vec<T> {
    let m = cumulative_mass(n, grid);
    let two_pi = T::lit(2.0) * T::PI();
    let nr = grid.n_cells();
    let mut out = vec![T::zero(); nr];
    let mut c_outer = -m.total() / two_pi * grid.r_max().ln();
    for j in (0..nr).rev() {
        let a = grid.face(j);
        let b = grid.face(j + 1);
        let rc = grid.center(j);
        // centre value: integrate from the outer face down to r_j
        let m_c = m.centers[j];
        out[j] = c_outer + cell_potential_drop(m_c, n[j], rc, b);
        c_outer += cell_potential_drop(m.faces[j], n[j], a, b);
    }
    out
}

/// Azimuthal velocity `u_θ(r) = Γ(r)/(2πr)` induced by a radial vorticity,
/// `Γ` its cumulative circulation, at the cell centres.
pub fn azimuthal_velocity<T: Real>(omega: &[T], grid: &RadialGrid<T>) -> Vec<T> {
    chemical_gradient_radial(&cumulative_mass(omega, grid), grid)
        .into_iter()
        .map(|v| -v)
        .collect()
}
