use std::sync::Arc;

use super::grid::RadialGrid;
use super::ic::radial_initial_state;
use super::scheme::{transport_heun, transport_tendency, RadialDiffusion};
use super::state::RadialState;
use crate::config::{GridSpec, Mode, RunConfig, StepControl};
use crate::diagnostics::{radial_record, second_moment_raw, DiagnosticsRecord, GammaParams};
use crate::error::{Error, Result};
use crate::run::{cfl_step, integrate, Evolve, RunStatus, StepSize, Trajectory};
use crate::scalar::Real;

/// Face values of `χ ∂_r c = −χ m/(2πr)`, zero at the axis; the same
/// telescoping sum as [`cumulative_mass`], fused into one pass.
pub(crate) fn chemotactic_velocity<T: Real>(
    n: &[T],
    grid: &RadialGrid<T>,
    chemotaxis: T,
) -> Vec<T> {
    let scale = -chemotaxis / (T::lit(2.0) * T::PI());
    let mut v = Vec::with_capacity(n.len() + 1);
    v.push(T::zero());
    let mut acc = T::zero();
    for (j, &value) in n.iter().enumerate() {
        acc += value * grid.cell_area(j);
        v.push(scale * acc / grid.face(j + 1));
    }
    v
}

/// Semi-discrete tendencies `(∂_t n, ∂_t ω)`:
/// `∂_t n = Δ_r n − χ (1/r)∂_r(r n ∂_r c)`, `∂_t ω = Δ_r ω`.
pub fn rhs_radial<T: Real>(state: &RadialState<T>, chemotaxis: T) -> (Vec<T>, Vec<T>) {
    let grid = &state.grid;
    let diffusion = RadialDiffusion::new(grid);
    let velocity = chemotactic_velocity(&state.n, grid, chemotaxis);
    let transport = transport_tendency(&state.n, &velocity, grid);
    let dn = diffusion
        .apply(&state.n)
        .into_iter()
        .zip(transport)
        .map(|(a, b)| a + b)
        .collect();
    (dn, diffusion.apply(&state.omega))
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
    state: &RadialState<T>,
    dt: T,
    diffusion: &RadialDiffusion<T>,
    chemotaxis: T,
) -> Result<RadialState<T>> {
    let grid = state.grid;
    let heat = diffusion.tr_bdf2_plan(T::lit(0.5) * dt);
    let n = heat.apply(&state.n);
    let n = if chemotaxis == T::zero() {
        n
    } else {
        transport_heun(&n, dt, &grid, |p| {
            chemotactic_velocity(p, &grid, chemotaxis)
        })
    };
    let n = heat.apply(&n);
    positivity(&n)?;
    let omega = if state.omega.iter().all(|&w| w == T::zero()) {
        state.omega.clone()
    } else {
        heat.apply(&heat.apply(&state.omega))
    };
    RadialState::new(grid, state.t + dt, n, omega)
}

/// One Strang step: half diffusion (TR-BDF2), full chemotactic transport
/// (Heun, limited upwind fluxes), half diffusion.
pub fn step_radial<T: Real>(
    state: &RadialState<T>,
    dt: T,
    chemotaxis: T,
) -> Result<RadialState<T>> {
    assert!(dt > T::zero(), "time step must be positive");
    strang_step(state, dt, &RadialDiffusion::new(&state.grid), chemotaxis)
}

/// CFL step from the chemotactic speed `max|∂_r c|` and the aggregation rate `‖n‖_∞`.
pub fn adaptive_dt_radial<T: Real>(
    state: &RadialState<T>,
    ctl: &StepControl<T>,
    chemotaxis: T,
) -> StepSize<T> {
    let grid = &state.grid;
    let v = chemotactic_velocity(&state.n, grid, chemotaxis);
    let speed = v.iter().fold(T::zero(), |a, &x| a.max(x.abs()))
        + chemotaxis.abs() * grid.spacing() * state.sup_norm();
    cfl_step(grid.spacing(), speed, ctl)
}

/// Upper bound on the blow-up time for supercritical mass,
/// `T⋆ = 8π V₀ / (4M(M − 8π))`; `None` when `M ≤ 8π`.
pub fn blowup_time_estimate<T: Real>(mass: T, second_moment: T) -> Option<T> {
    let critical = T::lit(8.0) * T::PI();
    if mass > critical {
        Some(critical * second_moment / (T::lit(4.0) * mass * (mass - critical)))
    } else {
        None
    }
}

/// Plane state bundled with the fixed model data needed to advance it.
#[derive(Debug, Clone)]
pub struct RadialRunner<T: Real> {
    pub state: RadialState<T>,
    pub chemotaxis: T,
    pub gamma: GammaParams<T>,
    /// Bisection cap; see [`RadialRunner::with_refinement`].
    pub max_cells: Option<usize>,
    diffusion: Arc<RadialDiffusion<T>>,
}

impl<T: Real> RadialRunner<T> {
    /// The peak counts as resolved while `h²‖n‖_∞` stays below this, which
    /// keeps about 16 cells across a core of mass 8π.
    pub const REFINE_THRESHOLD: f64 = 1.0 / 32.0;

    pub fn new(state: RadialState<T>, chemotaxis: T, delta: T) -> Self {
        let gamma = GammaParams::new(delta, state.mass());
        let diffusion = Arc::new(RadialDiffusion::new(&state.grid));
        Self {
            state,
            chemotaxis,
            gamma,
            max_cells: None,
            diffusion,
        }
    }

    /// Lets the grid bisect after any step that leaves `h²‖n‖_∞` above
    /// [`Self::REFINE_THRESHOLD`], as long as the result has at most
    /// `max_cells` cells.
    pub fn with_refinement(mut self, max_cells: Option<usize>) -> Self {
        self.max_cells = max_cells;
        self
    }

    fn needs_bisection(&self, state: &RadialState<T>) -> bool {
        let Some(max) = self.max_cells else {
            return false;
        };
        let h = state.grid.spacing();
        2 * state.grid.n_cells() <= max && h * h * state.sup_norm() > T::lit(Self::REFINE_THRESHOLD)
    }
}

impl<T: Real> Evolve<T> for RadialRunner<T> {
    fn time(&self) -> T {
        self.state.t
    }

    fn propose_dt(&self, ctl: &StepControl<T>) -> StepSize<T> {
        adaptive_dt_radial(&self.state, ctl, self.chemotaxis)
    }

    fn advance(&self, dt: T) -> Result<Self> {
        let state = strang_step(&self.state, dt, &self.diffusion, self.chemotaxis)?;
        let (state, diffusion) = if self.needs_bisection(&state) {
            let finer = state.bisected();
            let diffusion = Arc::new(RadialDiffusion::new(&finer.grid));
            (finer, diffusion)
        } else {
            (state, Arc::clone(&self.diffusion))
        };
        Ok(Self {
            state,
            chemotaxis: self.chemotaxis,
            gamma: self.gamma,
            max_cells: self.max_cells,
            diffusion,
        })
    }

    fn record(&self, dt: T) -> DiagnosticsRecord<T> {
        radial_record(&self.state, dt, &self.gamma)
    }

    fn sup_norm(&self) -> T {
        self.state.sup_norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    Global,
    BlowupSuspected,
}

impl VerdictStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            VerdictStatus::Global => "Global",
            VerdictStatus::BlowupSuspected => "BlowupSuspected",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlowupVerdict<T: Real> {
    pub status: VerdictStatus,
    pub t_stop: T,
    /// Analytic blow-up time bound, present only for `M > 8π`.
    pub t_star: Option<T>,
    /// Time between the last two records, the tolerance of the bound check.
    pub reporting_interval: T,
}

impl<T: Real> BlowupVerdict<T> {
    /// Whether a suspected blow-up happened no later than `T⋆` plus one
    /// reporting interval; `None` when there is no bound or no blow-up.
    pub fn within_bound(&self) -> Option<bool> {
        match (self.status, self.t_star) {
            (VerdictStatus::BlowupSuspected, Some(ts)) => {
                Some(self.t_stop <= ts + self.reporting_interval)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RadialRun<T: Real> {
    pub trajectory: Trajectory<T, RadialRunner<T>>,
    pub verdict: BlowupVerdict<T>,
    pub initial_second_moment: T,
    pub mass: T,
}

/// Integrates a radial configuration from its generated initial condition.
pub fn run_radial<T: Real>(config: &RunConfig<T>) -> Result<RadialRun<T>> {
    config.validate()?;
    if config.mode != Mode::Radial {
        return Err(Error::Config("run_radial needs mode = radial".into()));
    }
    let GridSpec::Radial { r_max, n_r } = config.grid else {
        return Err(Error::Config("radial mode needs r_max and n_r".into()));
    };
    let grid = RadialGrid::new(r_max, n_r)?;
    run_radial_from(radial_initial_state(grid, &config.ic)?, config)
}

/// Integrates a radial configuration from a given state.
pub fn run_radial_from<T: Real>(
    initial: RadialState<T>,
    config: &RunConfig<T>,
) -> Result<RadialRun<T>> {
    let mass = initial.mass();
    let v0 = second_moment_raw(&initial.n, &initial.grid);
    let t_end = config.t_end;
    let runner = RadialRunner::new(initial, config.coupling.chemotaxis, config.delta)
        .with_refinement(config.max_cells);
    let trajectory = integrate(
        runner,
        &config.control,
        t_end,
        config.diag_every,
        Some(config.blowup_factor),
    )?;
    let records = &trajectory.records;
    let reporting_interval = if records.len() >= 2 {
        records[records.len() - 1].t - records[records.len() - 2].t
    } else {
        T::zero()
    };
    let verdict = BlowupVerdict {
        status: match trajectory.status {
            RunStatus::Completed => VerdictStatus::Global,
            RunStatus::BlowupSuspected => VerdictStatus::BlowupSuspected,
        },
        t_stop: trajectory.final_state.state.t,
        t_star: blowup_time_estimate(mass, v0),
        reporting_interval,
    };
    Ok(RadialRun {
        trajectory,
        verdict,
        initial_second_moment: v0,
        mass,
    })
}
