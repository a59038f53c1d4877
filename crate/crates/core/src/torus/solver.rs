use rustfft::num_complex::Complex;

use super::ic::torus_initial_state;
use super::state::TorusState;
use crate::config::{Coupling, GridSpec, Mode, RunConfig, StepControl};
use crate::diagnostics::{torus_record, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::run::{cfl_step, integrate, Evolve, StepSize, Trajectory};
use crate::scalar::Real;
use crate::spectral::{
    dealias, divergence, gradient, leray_project, poisson_solve_zero_mean, SpectralScalar,
    SpectralVector, TorusGrid,
};

/// Physical-space samples of the fields entering the nonlinearities.
#[derive(Debug, Clone)]
pub struct PhysicalFields<T: Real> {
    pub n: Vec<T>,
    pub u1: Vec<T>,
    pub u2: Vec<T>,
    /// `∇c` with `−Δc = n − n̄`.
    pub c1: Vec<T>,
    pub c2: Vec<T>,
}

impl<T: Real> PhysicalFields<T> {
    pub fn of(state: &TorusState<T>) -> Self {
        let grad_c = gradient(&poisson_solve_zero_mean(&state.n));
        let (u1, u2) = state.u.to_physical();
        let (c1, c2) = grad_c.to_physical();
        Self {
            n: state.n.to_physical(),
            u1,
            u2,
            c1,
            c2,
        }
    }

    pub fn max_speed(&self) -> T {
        max_norm(&self.u1, &self.u2)
    }

    pub fn max_chemical_gradient(&self) -> T {
        max_norm(&self.c1, &self.c2)
    }
}

fn max_norm<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |m, (&x, &y)| m.max((x * x + y * y).sqrt()))
}

fn transform<T: Real>(grid: &TorusGrid<T>, values: Vec<T>) -> SpectralScalar<T> {
    dealias(&SpectralScalar::from_physical(grid, &values))
}

/// Dealiased tendencies of the explicit part:
/// `−∇·(n(u + χ∇c))` for the density and
/// `−P ∇·(u⊗u + f ∇c⊗∇c)` for the velocity.
///
/// On the torus `P(n∇c) = −P ∇·(∇c⊗∇c)`, so the forcing is written in
/// divergence form and shares the quadratic products with the advection.
pub fn rhs_torus<T: Real>(
    state: &TorusState<T>,
    coupling: &Coupling<T>,
) -> (SpectralScalar<T>, SpectralVector<T>) {
    let grid = state.grid().clone();
    let p = PhysicalFields::of(state);
    let chi = coupling.chemotaxis;
    let f = coupling.forcing;
    let len = grid.len();
    let mut flux1 = Vec::with_capacity(len);
    let mut flux2 = Vec::with_capacity(len);
    let mut t11 = Vec::with_capacity(len);
    let mut t12 = Vec::with_capacity(len);
    let mut t22 = Vec::with_capacity(len);
    for i in 0..len {
        let (n, u1, u2, c1, c2) = (p.n[i], p.u1[i], p.u2[i], p.c1[i], p.c2[i]);
        flux1.push(n * (u1 + chi * c1));
        flux2.push(n * (u2 + chi * c2));
        t11.push(u1 * u1 + f * c1 * c1);
        t12.push(u1 * u2 + f * c1 * c2);
        t22.push(u2 * u2 + f * c2 * c2);
    }
    let flux = SpectralVector::new(transform(&grid, flux1), transform(&grid, flux2));
    let dn = divergence(&flux).scaled(-T::one());
    let t12 = transform(&grid, t12);
    let row1 = SpectralVector::new(transform(&grid, t11), t12.clone());
    let row2 = SpectralVector::new(t12, transform(&grid, t22));
    let div_t = SpectralVector::new(divergence(&row1), divergence(&row2));
    let du = leray_project(&div_t).scaled(-T::one());
    (dn, du)
}

fn heat_factors<T: Real>(grid: &TorusGrid<T>, dt: T) -> Vec<T> {
    (0..grid.len())
        .map(|idx| (-grid.k_squared(idx) * dt).exp())
        .collect()
}

fn combine<T: Real>(
    base: &SpectralScalar<T>,
    e: &[T],
    f: impl Fn(usize, Complex<T>) -> Complex<T>,
) -> SpectralScalar<T> {
    base.map_coefficients(|idx, c| f(idx, c.scale(e[idx])))
}

fn positivity<T: Real>(n: &SpectralScalar<T>) -> Result<()> {
    let values = n.to_physical();
    let sup = values.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
    let min = values.iter().fold(T::infinity(), |a, &v| a.min(v));
    if min < -T::lit(1e-6) * sup || !min.is_finite() {
        return Err(Error::PositivityLoss {
            min: min.to_f64_lossy(),
            linf: sup.to_f64_lossy(),
        });
    }
    Ok(())
}

/// Integrating-factor RK2: diffusion is integrated exactly with
/// `E = exp(−|k|²dt)`, the nonlinear tendencies by Heun's method,
/// `v* = E(v + dt N(v))`, `v⁺ = E v + dt/2 (E N(v) + N(v*))`.
pub fn step_imex<T: Real>(
    state: &TorusState<T>,
    dt: T,
    coupling: &Coupling<T>,
) -> Result<TorusState<T>> {
    assert!(dt > T::zero(), "time step must be positive");
    let e = heat_factors(state.grid(), dt);
    let half = T::lit(0.5) * dt;
    let (n0, u0) = rhs_torus(state, coupling);
    let predict = |v: &SpectralScalar<T>, nv: &SpectralScalar<T>| {
        let a = nv.coefficients();
        combine(v, &e, |idx, c| c + a[idx].scale(dt * e[idx]))
    };
    let star = TorusState {
        t: state.t + dt,
        n: predict(&state.n, &n0),
        u: SpectralVector::new(
            predict(&state.u.first, &u0.first),
            predict(&state.u.second, &u0.second),
        ),
    };
    let (n1, u1) = rhs_torus(&star, coupling);
    let correct = |v: &SpectralScalar<T>, a: &SpectralScalar<T>, b: &SpectralScalar<T>| {
        let a = a.coefficients();
        let b = b.coefficients();
        combine(v, &e, |idx, c| {
            c + (a[idx].scale(e[idx]) + b[idx]).scale(half)
        })
    };
    let next = TorusState {
        t: state.t + dt,
        n: correct(&state.n, &n0, &n1),
        u: SpectralVector::new(
            correct(&state.u.first, &u0.first, &u1.first),
            correct(&state.u.second, &u0.second, &u1.second),
        ),
    };
    positivity(&next.n)?;
    Ok(next)
}

/// `dt = min(dt_max, cfl·h/(max|u| + max|∇c| + ε))`.
pub fn adaptive_dt<T: Real>(state: &TorusState<T>, ctl: &StepControl<T>) -> StepSize<T> {
    let p = PhysicalFields::of(state);
    cfl_step(
        state.grid().spacing(),
        p.max_speed() + p.max_chemical_gradient(),
        ctl,
    )
}

#[derive(Debug, Clone)]
pub struct TorusRunner<T: Real> {
    pub state: TorusState<T>,
    pub coupling: Coupling<T>,
}

impl<T: Real> Evolve<T> for TorusRunner<T> {
    fn time(&self) -> T {
        self.state.t
    }

    fn propose_dt(&self, ctl: &StepControl<T>) -> StepSize<T> {
        adaptive_dt(&self.state, ctl)
    }

    fn advance(&self, dt: T) -> Result<Self> {
        Ok(Self {
            state: step_imex(&self.state, dt, &self.coupling)?,
            coupling: self.coupling,
        })
    }

    fn record(&self, dt: T) -> DiagnosticsRecord<T> {
        torus_record(&self.state, dt)
    }

    fn sup_norm(&self) -> T {
        self.state
            .n
            .to_physical()
            .iter()
            .fold(T::zero(), |a, &v| a.max(v.abs()))
    }
}

pub type TorusRun<T> = Trajectory<T, TorusRunner<T>>;

/// Integrates a torus configuration from its generated initial condition.
pub fn run_torus<T: Real>(config: &RunConfig<T>) -> Result<TorusRun<T>> {
    config.validate()?;
    if config.mode != Mode::Torus {
        return Err(Error::Config("run_torus needs mode = torus".into()));
    }
    let GridSpec::Torus { n_points } = config.grid else {
        return Err(Error::Config("torus mode needs n_points".into()));
    };
    let grid = TorusGrid::new(n_points)?;
    run_torus_from(torus_initial_state(&grid, &config.ic)?, config)
}

/// Integrates a torus configuration from a given state. The torus run
/// has no blow-up monitor: solutions are global for every mass.
pub fn run_torus_from<T: Real>(
    initial: TorusState<T>,
    config: &RunConfig<T>,
) -> Result<TorusRun<T>> {
    let runner = TorusRunner {
        state: initial,
        coupling: config.coupling,
    };
    integrate(
        runner,
        &config.control,
        config.t_end,
        config.diag_every,
        None,
    )
}
