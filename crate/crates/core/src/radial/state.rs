use super::grid::RadialGrid;
use super::profile::{cumulative_mass, total_mass, CumulativeMass};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Radial plane state `(t, n(r), ω(r))` on a truncated grid.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialState<T: Real> {
    pub t: T,
    pub n: Vec<T>,
    pub omega: Vec<T>,
    pub grid: RadialGrid<T>,
}

impl<T: Real> RadialState<T> {
    pub fn new(grid: RadialGrid<T>, t: T, n: Vec<T>, omega: Vec<T>) -> Result<Self> {
        if n.len() != grid.n_cells() || omega.len() != grid.n_cells() {
            return Err(Error::GridMismatch(format!(
                "profiles of length {}/{} on a {}-cell grid",
                n.len(),
                omega.len(),
                grid.n_cells()
            )));
        }
        Ok(Self { t, n, omega, grid })
    }

    /// Total mass `M = Σ n_j 2π r_j h`.
    pub fn mass(&self) -> T {
        total_mass(&self.n, &self.grid)
    }

    pub fn cumulative_mass(&self) -> CumulativeMass<T> {
        cumulative_mass(&self.n, &self.grid)
    }

    pub fn sup_norm(&self) -> T {
        self.n.iter().fold(T::zero(), |a, &v| a.max(v.abs()))
    }

    pub fn min_density(&self) -> T {
        self.n.iter().fold(T::infinity(), |a, &v| a.min(v))
    }

    /// `max n` over the outer 5% of the grid relative to `‖n‖_∞`.
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

    /// Truncation guard: the density is negligible (`≤ 1e−8‖n‖_∞`) near `r_max`.
    pub fn guard_ok(&self) -> bool {
        self.edge_ratio() <= T::lit(1e-8)
    }

    /// The state on the bisected grid. Children carry the parent value plus a
    /// van Leer slope, shifted so each parent keeps its mass; positivity is
    /// preserved.
    pub fn bisected(&self) -> Self {
        let grid = self.grid.bisected();
        Self {
            t: self.t,
            n: prolong(&self.n, &self.grid),
            omega: prolong(&self.omega, &self.grid),
            grid,
        }
    }
}

fn prolong<T: Real>(u: &[T], grid: &RadialGrid<T>) -> Vec<T> {
    let nr = u.len();
    let quarter = T::lit(0.25);
    let mut out = Vec::with_capacity(2 * nr);
    for j in 0..nr {
        let slope = if j == 0 || j + 1 == nr {
            T::zero()
        } else {
            let (left, right) = (u[j] - u[j - 1], u[j + 1] - u[j]);
            if left * right > T::zero() {
                T::lit(2.0) * left * right / (left + right)
            } else {
                T::zero()
            }
        };
        // child areas are proportional to r_j ∓ h/4
        let shift = -slope * grid.spacing() / (T::lit(16.0) * grid.center(j));
        out.push(u[j] - quarter * slope + shift);
        out.push(u[j] + quarter * slope + shift);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_keeps_mass_sign_and_faces() {
        let g = RadialGrid::new(6.0, 128).unwrap();
        let n = g.sample(|r: f64| (-(r - 1.0) * (r - 1.0) * 4.0).exp() + (-r * r * 9.0).exp());
        let omega = g.sample(|r: f64| (1.0 - r * r) * (-r * r).exp());
        let s = RadialState::new(g, 0.5, n, omega).unwrap();
        let b = s.bisected();
        assert_eq!(b.grid.n_cells(), 256);
        assert_eq!(b.grid.face(64), g.face(32));
        assert!((b.mass() - s.mass()).abs() <= 1e-14 * s.mass());
        assert!(b.min_density() >= 0.0);
        let circ = |st: &RadialState<f64>| {
            (0..st.grid.n_cells())
                .map(|j| st.omega[j] * st.grid.cell_area(j))
                .sum::<f64>()
        };
        assert!((circ(&b) - circ(&s)).abs() < 1e-14);
        // each pair of children keeps its parent's mass
        for j in 0..128 {
            let parent = s.n[j] * g.cell_area(j);
            let kids =
                b.n[2 * j] * b.grid.cell_area(2 * j) + b.n[2 * j + 1] * b.grid.cell_area(2 * j + 1);
            assert!((parent - kids).abs() <= 1e-15 * (1.0 + parent.abs()));
        }
    }
}
