//! Functionals of radial plane states.

use super::entropy::entropy_split;
use super::gamma::{gamma_fn, GammaParams};
use super::{DiagnosticsRecord, RecordMode};
use crate::error::{Error, Result};
use crate::radial::{
    azimuthal_velocity, chemical_gradient_faces, cumulative_mass, newtonian_potential, RadialGrid,
    RadialState,
};
use crate::scalar::{xlogx, Real};

fn guarded<T: Real>(quantity: &'static str, value: T, state: &RadialState<T>) -> Result<T> {
    if state.guard_ok() {
        Ok(value)
    } else {
        Err(Error::Truncation {
            quantity,
            value: value.to_f64_lossy(),
            edge_ratio: state.edge_ratio().to_f64_lossy(),
        })
    }
}

/// `V = 2π Σ n_j r_j³ h` without the truncation check.
pub fn second_moment_raw<T: Real>(n: &[T], grid: &RadialGrid<T>) -> T {
    n.iter().enumerate().fold(T::zero(), |acc, (j, &v)| {
        let r = grid.center(j);
        acc + v * r * r * grid.cell_area(j)
    })
}

/// Second moment `V = ∫ n |x|² dx`; flagged when the density reaches `r_max`.
pub fn second_moment_radial<T: Real>(state: &RadialState<T>) -> Result<T> {
    guarded(
        "second moment",
        second_moment_raw(&state.n, &state.grid),
        state,
    )
}

/// `½∫|u|²` of the azimuthal flow induced by `ω`.
pub fn kinetic_energy_radial<T: Real>(omega: &[T], grid: &RadialGrid<T>) -> T {
    let u = azimuthal_velocity(omega, grid);
    T::lit(0.5)
        * u.iter()
            .enumerate()
            .fold(T::zero(), |acc, (j, &v)| acc + v * v * grid.cell_area(j))
}

fn interaction<T: Real>(state: &RadialState<T>) -> T {
    let c = newtonian_potential(&state.n, &state.grid);
    state
        .n
        .iter()
        .zip(&c)
        .enumerate()
        .fold(T::zero(), |acc, (j, (&n, &c))| {
            acc + n * c * state.grid.cell_area(j)
        })
}

fn free_energy_with<T: Real>(state: &RadialState<T>, density_term: impl Fn(T) -> T) -> T {
    let grid = &state.grid;
    let entropy = state.n.iter().enumerate().fold(T::zero(), |acc, (j, &n)| {
        acc + density_term(n) * grid.cell_area(j)
    });
    entropy - T::lit(0.5) * interaction(state) + kinetic_energy_radial(&state.omega, grid)
}

fn free_energy_unchecked<T: Real>(state: &RadialState<T>) -> T {
    free_energy_with(state, xlogx)
}

fn modified_unchecked<T: Real>(state: &RadialState<T>, params: &GammaParams<T>) -> T {
    free_energy_with(state, |n| {
        if n > T::zero() {
            n * gamma_fn(n, params)
        } else {
            T::zero()
        }
    })
}

/// `E = ∫ n log n − ½ n c + ½|u|²` with the Newtonian potential anchored at `r_max`.
pub fn free_energy_plane_radial<T: Real>(state: &RadialState<T>) -> Result<T> {
    guarded("free energy", free_energy_unchecked(state), state)
}

/// `E_Γ = ∫ n Γ(n) − ½ n c + ½|u|²`.
pub fn modified_free_energy<T: Real>(state: &RadialState<T>, params: &GammaParams<T>) -> Result<T> {
    guarded(
        "modified free energy",
        modified_unchecked(state, params),
        state,
    )
}

/// `∫ n |∂_r log n − a|²` evaluated on interior faces as `(∂_r n − n a)²/n`,
/// for a face drift `a`. Faces with `n < 1e−14‖n‖_∞` are skipped.
pub(crate) fn relative_fisher_information<T: Real>(
    n: &[T],
    grid: &RadialGrid<T>,
    drift: &[T],
) -> T {
    let sup = n.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let floor = T::lit(1e-14) * sup;
    let h = grid.spacing();
    let two_pi = T::lit(2.0) * T::PI();
    let mut acc = T::zero();
    for f in 1..n.len() {
        let nf = T::lit(0.5) * (n[f] + n[f - 1]);
        if nf <= floor || nf <= T::zero() {
            continue;
        }
        let g = (n[f] - n[f - 1]) / h - nf * drift[f];
        acc += two_pi * grid.face(f) * h * g * g / nf;
    }
    acc
}

/// `(D_n, D_u) = (∫ n|∇log n − ∇c|², ∫ω²)`; `∫|∇u|² = ∫ω²` for the
/// decaying divergence-free flow.
pub fn dissipation_radial<T: Real>(state: &RadialState<T>) -> (T, T) {
    let grid = &state.grid;
    let drift = chemical_gradient_faces(&cumulative_mass(&state.n, grid), grid);
    let d_n = relative_fisher_information(&state.n, grid, &drift);
    let d_u = state
        .omega
        .iter()
        .enumerate()
        .fold(T::zero(), |acc, (j, &w)| acc + w * w * grid.cell_area(j));
    (d_n, d_u)
}

/// Both sides of `∫ n log⁻ n ≤ ½∫ n|x|² + log(2π)∫ n + 1/e`.
pub fn s_minus_bound_check<T: Real>(state: &RadialState<T>) -> Result<(T, T)> {
    let grid = &state.grid;
    let split = entropy_split(&state.n, |j| grid.cell_area(j));
    let v = second_moment_raw(&state.n, grid);
    let rhs = T::lit(0.5) * v + (T::lit(2.0) * T::PI()).ln() * state.mass() + T::one() / T::E();
    guarded("S- bound", split.negative, state)?;
    Ok((split.negative, rhs))
}

fn loghls_unchecked<T: Real>(state: &RadialState<T>) -> Option<T> {
    let grid = &state.grid;
    let mass = state.mass();
    if !(mass > T::zero()) {
        return None;
    }
    let entropy = entropy_split(&state.n, |j| grid.cell_area(j)).total;
    // ∬ n n log|x−y| with the angular average log max(r, s), summed with a
    // running prefix so the double sum costs O(n_r).
    let mut prefix = T::zero();
    let mut double = T::zero();
    for (j, &n) in state.n.iter().enumerate() {
        let w = n * grid.cell_area(j);
        let log_r = grid.center(j).ln();
        double += w * log_r * (w + T::lit(2.0) * prefix);
        prefix += w;
    }
    Some(entropy + T::lit(2.0) / mass * double)
}

/// Log-HLS functional `∫ n log n + (2/M)∬ n(x) n(y) log|x − y|`.
pub fn loghls_functional<T: Real>(state: &RadialState<T>) -> Result<T> {
    let value = loghls_unchecked(state)
        .ok_or_else(|| Error::Config("log-HLS functional needs positive mass".into()))?;
    guarded("log-HLS functional", value, state)
}

/// Diagnostics row for a plane state (truncation is not checked here; the
/// edge ratio can be inspected on the state).
pub fn radial_record<T: Real>(
    state: &RadialState<T>,
    dt: T,
    gamma: &GammaParams<T>,
) -> DiagnosticsRecord<T> {
    let grid = &state.grid;
    let area = |j: usize| grid.cell_area(j);
    let split = entropy_split(&state.n, area);
    let (d_n, d_u) = dissipation_radial(state);
    let l2 = |p: &[T]| {
        p.iter()
            .enumerate()
            .fold(T::zero(), |acc, (j, &v)| acc + v * v * area(j))
            .sqrt()
    };
    let kinetic = kinetic_energy_radial(&state.omega, grid);
    DiagnosticsRecord {
        t: state.t,
        dt,
        mass: state.mass(),
        mean_u1: T::zero(),
        mean_u2: T::zero(),
        l2_n: l2(&state.n),
        linf_n: state.sup_norm(),
        l2_u: (T::lit(2.0) * kinetic).sqrt(),
        l2_omega: l2(&state.omega),
        second_moment: second_moment_raw(&state.n, grid),
        entropy: split.total,
        entropy_plus: split.positive,
        entropy_minus: split.negative,
        energy: free_energy_unchecked(state),
        energy_gamma: modified_unchecked(state, gamma),
        dissipation_n: d_n,
        dissipation_u: d_u,
        energy_residual: T::nan(),
        loghls: loghls_unchecked(state).unwrap_or_else(T::nan),
        mode: RecordMode::Radial,
    }
}
