//! Radial solutions in self-similar variables.
//!
//! With `R(t) = (1 + 2t)^{1/2}`, `τ = log R` and `X = x/R`, the rescaled
//! profiles `N = R² n(RX)`, `Ω = R² ω(RX)` obey the original system plus a
//! confining drift `∇·(XN)`, `∇·(XΩ)`. Diffusive decay of `(n, ω)` becomes
//! convergence of `(N, Ω)` to a steady state.

mod solver;
mod state;
mod transform;

pub use solver::{
    adaptive_dt_selfsim, decay_series, decay_slope, energy_selfsim, equilibrium_second_moment,
    rhs_selfsim, run_selfsim, run_selfsim_from, selfsim_record, step_selfsim, SelfSimRun,
    SelfSimRunner,
};
pub use state::SelfSimState;
pub use transform::{from_selfsim, remap_conservative, tau_of_time, time_of_tau, to_selfsim};
