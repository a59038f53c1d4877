//! Pseudo-spectral integration of the periodic system on the unit torus,
//! with the chemical slaved to the density through `−Δc = n − n̄`.

mod ic;
mod solver;
mod state;

pub use ic::{random_band_limited, torus_initial_state};
pub use solver::{
    adaptive_dt, rhs_torus, run_torus, run_torus_from, step_imex, PhysicalFields, TorusRun,
    TorusRunner,
};
pub use state::TorusState;
