use std::sync::Arc;

use super::state::SelfSimState;
use super::transform::{time_of_tau, to_selfsim};
use crate::config::{GridSpec, Mode, RunConfig, StepControl};
use crate::diagnostics::{
    entropy_split, kinetic_energy_radial, least_squares_slope, relative_fisher_information,
    second_moment_raw, DiagnosticsRecord, RecordMode,
};
use crate::error::{Error, Result};
use crate::radial::{
    centered_transport_heun, centered_transport_tendency, chemical_gradient_faces, cumulative_mass,
    newtonian_potential, radial_initial_state, transport_heun, transport_tendency, RadialDiffusion,
    RadialGrid,
};
use crate::run::{cfl_step, integrate, Evolve, StepSize, Trajectory};
use crate::scalar::{xlogx, Real};

/// Face velocity `χ ∂_r C − X` of the rescaled density.
fn density_velocity<T: Real>(n: &[T], grid: &RadialGrid<T>, chemotaxis: T) -> Vec<T> {
    let mut v = chemical_gradient_faces(&cumulative_mass(n, grid), grid);
    for (f, a) in v.iter_mut().enumerate() {
        *a = chemotaxis * *a - grid.face(f);
    }
    v
}

/// Face velocity `−X` of the rescaled vorticity, transported with centred
/// fluxes since `Ω` has no sign to protect.
fn confinement<T: Real>(grid: &RadialGrid<T>) -> Vec<T> {
    (0..=grid.n_cells()).map(|f| -grid.face(f)).collect()
}

/// Tendencies `∂_τ N = Δ_r N + ∇·(XN) − χ∇·(N∂_r C)` and
/// `∂_τ Ω = Δ_r Ω + ∇·(XΩ)`, in conservative flux form.
pub fn rhs_selfsim<T: Real>(state: &SelfSimState<T>, chemotaxis: T) -> (Vec<T>, Vec<T>) {
    let grid = &state.grid;
    let diffusion = RadialDiffusion::new(grid);
    let add =
        |a: Vec<T>, b: Vec<T>| -> Vec<T> { a.into_iter().zip(b).map(|(x, y)| x + y).collect() };
    let dn = add(
        diffusion.apply(&state.n),
        transport_tendency(
            &state.n,
            &density_velocity(&state.n, grid, chemotaxis),
            grid,
        ),
    );
    let dw = add(
        diffusion.apply(&state.omega),
        centered_transport_tendency(&state.omega, &confinement(grid), grid),
    );
    (dn, dw)
}

fn positivity<T: Real>(n: &[T]) -> Result<()> {
    let sup = n.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let min = n.iter().fold(T::infinity(), |a, &v| a.min(v));
    if min < -T::lit(1e-6) * sup || !min.is_finite() {
        return Err(Error::PositivityLoss {
            min: min.to_f64_lossy(),
            linf: sup.to_f64_lossy(),
        });
    }
    Ok(())
}

fn strang_step<T: Real>(
    state: &SelfSimState<T>,
    dtau: T,
    diffusion: &RadialDiffusion<T>,
    chemotaxis: T,
) -> Result<SelfSimState<T>> {
    let half = T::lit(0.5) * dtau;
    let grid = state.grid;
    let n = diffusion.tr_bdf2(&state.n, half);
    let n = transport_heun(&n, dtau, &grid, |p| density_velocity(p, &grid, chemotaxis));
    let n = diffusion.tr_bdf2(&n, half);
    positivity(&n)?;
    let drift = confinement(&grid);
    let omega = diffusion.tr_bdf2(&state.omega, half);
    let omega = centered_transport_heun(&omega, dtau, &grid, |_| drift.clone());
    let omega = diffusion.tr_bdf2(&omega, half);
    SelfSimState::new(grid, state.tau + dtau, n, omega)
}

/// Strang step in `τ`, arranged as for the plane solver; the confinement
/// drift is part of the explicit transport.
pub fn step_selfsim<T: Real>(
    state: &SelfSimState<T>,
    dtau: T,
    chemotaxis: T,
) -> Result<SelfSimState<T>> {
    assert!(dtau > T::zero(), "time step must be positive");
    strang_step(state, dtau, &RadialDiffusion::new(&state.grid), chemotaxis)
}

/// CFL step from `max|χ∂_r C − X|` and the aggregation rate `‖N‖_∞`.
pub fn adaptive_dt_selfsim<T: Real>(
    state: &SelfSimState<T>,
    ctl: &StepControl<T>,
    chemotaxis: T,
) -> StepSize<T> {
    let grid = &state.grid;
    let v = density_velocity(&state.n, grid, chemotaxis);
    let speed = v.iter().fold(T::zero(), |a, &x| a.max(x.abs()))
        + chemotaxis.abs() * grid.spacing() * state.sup_norm();
    cfl_step(grid.spacing(), speed, ctl)
}

fn energy_unchecked<T: Real>(state: &SelfSimState<T>) -> T {
    let grid = &state.grid;
    let c = newtonian_potential(&state.n, grid);
    let half = T::lit(0.5);
    let mut acc = T::zero();
    for (j, (&n, &c)) in state.n.iter().zip(&c).enumerate() {
        let x = grid.center(j);
        acc += (xlogx(n) - half * n * c + half * n * x * x) * grid.cell_area(j);
    }
    // −½∫ΨΩ = ½∫|∇Ψ|²
    acc + kinetic_energy_radial(&state.omega, grid)
}

/// `E_S = ∫ N log N − ½ N C + ½ N|X|² − ½ΨΩ`.
pub fn energy_selfsim<T: Real>(state: &SelfSimState<T>) -> Result<T> {
    let value = energy_unchecked(state);
    if state.guard_ok() {
        Ok(value)
    } else {
        Err(Error::Truncation {
            quantity: "self-similar energy",
            value: value.to_f64_lossy(),
            edge_ratio: state.edge_ratio().to_f64_lossy(),
        })
    }
}

/// Fixed point `V_∞ = 2M − M²/(4π)` of `dV_N/dτ = 4M − M²/(2π) − 2V_N`.
pub fn equilibrium_second_moment<T: Real>(mass: T) -> T {
    T::lit(2.0) * mass - mass * mass / (T::lit(4.0) * T::PI())
}

/// Diagnostics row with `τ` in the time column. `V` is `V_N`, the energy is
/// `E_S` and the dissipation pair is `(∫N|∇log N − ∇C + X|², ∫Ω²)`.
pub fn selfsim_record<T: Real>(state: &SelfSimState<T>, dtau: T) -> DiagnosticsRecord<T> {
    let grid = &state.grid;
    let area = |j: usize| grid.cell_area(j);
    let split = entropy_split(&state.n, area);
    let l2 = |p: &[T]| {
        p.iter()
            .enumerate()
            .fold(T::zero(), |acc, (j, &v)| acc + v * v * area(j))
            .sqrt()
    };
    let drift = density_velocity(&state.n, grid, T::one());
    let d_n = relative_fisher_information(&state.n, grid, &drift);
    let l2_omega = l2(&state.omega);
    let kinetic = kinetic_energy_radial(&state.omega, grid);
    DiagnosticsRecord {
        t: state.tau,
        dt: dtau,
        mass: state.mass(),
        mean_u1: T::zero(),
        mean_u2: T::zero(),
        l2_n: l2(&state.n),
        linf_n: state.sup_norm(),
        l2_u: (T::lit(2.0) * kinetic).sqrt(),
        l2_omega,
        second_moment: second_moment_raw(&state.n, grid),
        entropy: split.total,
        entropy_plus: split.positive,
        entropy_minus: split.negative,
        energy: energy_unchecked(state),
        energy_gamma: T::nan(),
        dissipation_n: d_n,
        dissipation_u: l2_omega * l2_omega,
        energy_residual: T::nan(),
        loghls: T::nan(),
        mode: RecordMode::SelfSim,
    }
}

/// Physical-time decay series `(1 + 2t, ‖n‖₂² + ‖ω‖₂²)` reconstructed from
/// self-similar records via `‖n‖₂² = e^{−2τ}‖N‖₂²`.
pub fn decay_series<T: Real>(records: &[DiagnosticsRecord<T>]) -> Vec<(T, T)> {
    records
        .iter()
        .map(|r| {
            let two_tau = T::lit(2.0) * r.t;
            let norm = r.l2_n * r.l2_n + r.l2_omega * r.l2_omega;
            (two_tau.exp(), (-two_tau).exp() * norm)
        })
        .collect()
}

/// Least-squares slope of `log(‖n‖₂² + ‖ω‖₂²)` against `log(1 + 2t)` over
/// records with physical time in `[t0, t1]`.
pub fn decay_slope<T: Real>(records: &[DiagnosticsRecord<T>], t0: T, t1: T) -> Option<T> {
    let (xs, ys): (Vec<T>, Vec<T>) = records
        .iter()
        .zip(decay_series(records))
        .filter(|(r, _)| {
            let t = time_of_tau(r.t);
            t >= t0 && t <= t1
        })
        .map(|(_, (s, y))| (s.ln(), y.ln()))
        .unzip();
    least_squares_slope(&xs, &ys)
}

#[derive(Debug, Clone)]
pub struct SelfSimRunner<T: Real> {
    pub state: SelfSimState<T>,
    pub chemotaxis: T,
    diffusion: Arc<RadialDiffusion<T>>,
}

impl<T: Real> SelfSimRunner<T> {
    pub fn new(state: SelfSimState<T>, chemotaxis: T) -> Self {
        let diffusion = Arc::new(RadialDiffusion::new(&state.grid));
        Self {
            state,
            chemotaxis,
            diffusion,
        }
    }
}

impl<T: Real> Evolve<T> for SelfSimRunner<T> {
    fn time(&self) -> T {
        self.state.tau
    }

    fn propose_dt(&self, ctl: &StepControl<T>) -> StepSize<T> {
        adaptive_dt_selfsim(&self.state, ctl, self.chemotaxis)
    }

    fn advance(&self, dt: T) -> Result<Self> {
        Ok(Self {
            state: strang_step(&self.state, dt, &self.diffusion, self.chemotaxis)?,
            chemotaxis: self.chemotaxis,
            diffusion: Arc::clone(&self.diffusion),
        })
    }

    fn record(&self, dt: T) -> DiagnosticsRecord<T> {
        selfsim_record(&self.state, dt)
    }

    fn sup_norm(&self) -> T {
        self.state.sup_norm()
    }
}

pub type SelfSimRun<T> = Trajectory<T, SelfSimRunner<T>>;

/// Integrates a self-similar configuration to `τ = t_end`. The initial plane
/// profile at `t = 0` is built on the configured grid, read as an `X` grid.
pub fn run_selfsim<T: Real>(config: &RunConfig<T>) -> Result<SelfSimRun<T>> {
    config.validate()?;
    if config.mode != Mode::SelfSim {
        return Err(Error::Config("run_selfsim needs mode = selfsim".into()));
    }
    let GridSpec::Radial { r_max, n_r } = config.grid else {
        return Err(Error::Config("selfsim mode needs r_max and n_r".into()));
    };
    let grid = RadialGrid::new(r_max, n_r)?;
    let plane = radial_initial_state(grid, &config.ic)?;
    run_selfsim_from(to_selfsim(&plane)?, config)
}

pub fn run_selfsim_from<T: Real>(
    initial: SelfSimState<T>,
    config: &RunConfig<T>,
) -> Result<SelfSimRun<T>> {
    let runner = SelfSimRunner::new(initial, config.coupling.chemotaxis);
    integrate(
        runner,
        &config.control,
        config.t_end,
        config.diag_every,
        Some(config.blowup_factor),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn state(grid: RadialGrid<f64>, n: Vec<f64>, omega: Vec<f64>) -> SelfSimState<f64> {
        SelfSimState::new(grid, 0.0, n, omega).unwrap()
    }

    #[test]
    fn empty_state_is_stationary_with_zero_energy() {
        let g = RadialGrid::new(8.0, 128).unwrap();
        let s = state(g, vec![0.0; 128], vec![0.0; 128]);
        let (dn, dw) = rhs_selfsim(&s, 1.0);
        assert!(dn.iter().chain(&dw).all(|&v| v == 0.0));
        assert_eq!(energy_selfsim(&s).unwrap(), 0.0);
    }

    fn fokker_planck_residual(nr: usize) -> f64 {
        let g = RadialGrid::new(10.0, nr).unwrap();
        let n = g.sample(|x: f64| (-x * x / 2.0).exp() / (2.0 * PI));
        let s = state(g, n, vec![0.0; nr]);
        let (dn, _) = rhs_selfsim(&s, 0.0);
        dn.iter().fold(0.0, |a, v: &f64| a.max(v.abs()))
    }

    #[test]
    fn gaussian_is_the_linear_steady_state() {
        let r1 = fokker_planck_residual(256);
        let r2 = fokker_planck_residual(512);
        assert!(r1 < 1e-2, "{r1}");
        assert!(r1 / r2 > 3.0, "ratio {}", r1 / r2);
    }

    #[test]
    fn small_mass_energy_is_entropy_plus_confinement() {
        let g = RadialGrid::new(10.0, 512).unwrap();
        let m = 1e-6;
        let n = g.sample(|x: f64| m * (-x * x / 2.0).exp() / (2.0 * PI));
        let s = state(g, n.clone(), vec![0.0; 512]);
        let direct: f64 = n
            .iter()
            .enumerate()
            .map(|(j, &v)| (v * v.ln() + 0.5 * v * g.center(j).powi(2)) * g.cell_area(j))
            .sum();
        let e = energy_selfsim(&s).unwrap();
        assert!(
            (e - direct).abs() < 1e-10 * direct.abs().max(1e-12) + m * m,
            "{e} {direct}"
        );
    }

    #[test]
    fn step_conserves_mass() {
        let g = RadialGrid::new(10.0, 256).unwrap();
        let n = g.sample(|x: f64| (-x * x).exp());
        let mut s = state(g, n, vec![0.0; 256]);
        let m0 = s.mass();
        for _ in 0..20 {
            s = step_selfsim(&s, 1e-3, 1.0).unwrap();
        }
        assert!(((s.mass() - m0) / m0).abs() < 1e-12);
    }

    #[test]
    fn equilibrium_second_moment_examples() {
        assert!((equilibrium_second_moment(4.0 * PI) - 4.0 * PI).abs() < 1e-13);
        assert_eq!(equilibrium_second_moment(0.0), 0.0);
    }
}
