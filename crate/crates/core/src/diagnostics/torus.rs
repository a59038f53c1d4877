//! Functionals of torus states. Density integrals use the grid quadrature,
//! quadratic forms of band-limited fields use Parseval.

use super::entropy::entropy_split;
use super::{DiagnosticsRecord, RecordMode};
use crate::scalar::{xlogx, Real};
use crate::spectral::{curl, gradient, poisson_solve_zero_mean, SpectralScalar, SpectralVector};
use crate::torus::TorusState;

fn quadrature<T: Real>(values: impl Iterator<Item = T>, weight: T) -> T {
    values.fold(T::zero(), |a, v| a + v) * weight
}

fn dot_real<T: Real>(a: &SpectralScalar<T>, b: &SpectralScalar<T>) -> T {
    a.coefficients()
        .iter()
        .zip(b.coefficients())
        .fold(T::zero(), |acc, (x, y)| acc + (x * y.conj()).re)
}

/// `E = ∫ n log n − ½∫ n c + ½∫|u|²` with `−Δc = n − n̄`, `mean(c) = 0`.
pub fn free_energy_torus<T: Real>(
    n: &SpectralScalar<T>,
    u: &SpectralVector<T>,
    c: &SpectralScalar<T>,
) -> T {
    let h = n.grid().spacing();
    let entropy = quadrature(n.to_physical().into_iter().map(xlogx), h * h);
    let half = T::lit(0.5);
    let kinetic = u.l2_norm();
    entropy - half * dot_real(n, c) + half * kinetic * kinetic
}

/// `(D_n, D_u) = (∫ n|∇log n − ∇c|², ∫|∇u|²)`.
///
/// Points where `n` drops below `10⁻¹⁴‖n‖_∞` contribute nothing to `D_n`.
pub fn dissipation_torus<T: Real>(
    n: &SpectralScalar<T>,
    c: &SpectralScalar<T>,
    u: &SpectralVector<T>,
) -> (T, T) {
    let grid = n.grid();
    let h = grid.spacing();
    let values = n.to_physical();
    let (n1, n2) = gradient(n).to_physical();
    let (c1, c2) = gradient(c).to_physical();
    let sup = values.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let floor = T::lit(1e-14) * sup;
    let mut d_n = T::zero();
    for i in 0..values.len() {
        let v = values[i];
        if v <= floor {
            continue;
        }
        let g1 = n1[i] - v * c1[i];
        let g2 = n2[i] - v * c2[i];
        d_n += (g1 * g1 + g2 * g2) / v;
    }
    let mut d_u = T::zero();
    for comp in [&u.first, &u.second] {
        for (idx, a) in comp.coefficients().iter().enumerate() {
            d_u += grid.k_squared(idx) * a.norm_sqr();
        }
    }
    (d_n * h * h, d_u)
}

/// Diagnostics row for a torus state; `V`, `E_gamma` and log-HLS do not
/// apply and are NaN.
pub fn torus_record<T: Real>(state: &TorusState<T>, dt: T) -> DiagnosticsRecord<T> {
    let grid = state.grid();
    let h = grid.spacing();
    let values = state.n.to_physical();
    let split = entropy_split(&values, |_| h * h);
    let c = poisson_solve_zero_mean(&state.n);
    let (d_n, d_u) = dissipation_torus(&state.n, &c, &state.u);
    let (mean_u1, mean_u2) = state.mean_velocity();
    let omega = curl(&state.u);
    DiagnosticsRecord {
        t: state.t,
        dt,
        mass: state.mass(),
        mean_u1,
        mean_u2,
        l2_n: state.n.l2_norm(),
        linf_n: values.iter().fold(T::zero(), |a, &v| a.max(v.abs())),
        l2_u: state.u.l2_norm(),
        l2_omega: omega.l2_norm(),
        second_moment: T::nan(),
        entropy: split.total,
        entropy_plus: split.positive,
        entropy_minus: split.negative,
        energy: free_energy_torus(&state.n, &state.u, &c),
        energy_gamma: T::nan(),
        dissipation_n: d_n,
        dissipation_u: d_u,
        energy_residual: T::nan(),
        loghls: T::nan(),
        mode: RecordMode::Torus,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::TorusGrid;
    use std::f64::consts::PI;

    #[test]
    fn uniform_density_with_shear() {
        let g = TorusGrid::<f64>::new(32).unwrap();
        let m = 3.0;
        let n = SpectralScalar::constant(&g, m);
        let u = SpectralVector::new(
            SpectralScalar::from_fn(&g, |_, y| (2.0 * PI * y).sin()),
            SpectralScalar::zeros(&g),
        );
        let c = poisson_solve_zero_mean(&n);
        let e = free_energy_torus(&n, &u, &c);
        assert!((e - (m * m.ln() + 0.25)).abs() < 1e-12, "{e}");
        let (d_n, d_u) = dissipation_torus(&n, &c, &u);
        assert!(d_n.abs() < 1e-20);
        assert!((d_u - 2.0 * PI * PI).abs() < 1e-10, "{d_u}");
    }

    #[test]
    fn detailed_balance_has_no_dissipation() {
        let g = TorusGrid::<f64>::new(64).unwrap();
        let c =
            SpectralScalar::from_fn(&g, |x, y| 0.3 * (2.0 * PI * x).cos() * (2.0 * PI * y).sin());
        let cp = c.to_physical();
        let z: f64 = cp.iter().map(|v| v.exp()).sum::<f64>() / cp.len() as f64;
        let np: Vec<f64> = cp.iter().map(|v| v.exp() / z).collect();
        let n = SpectralScalar::from_physical(&g, &np);
        let (d_n, _) = dissipation_torus(&n, &c, &SpectralVector::zeros(&g));
        assert!(d_n <= 1e-10, "{d_n}");
    }
}
