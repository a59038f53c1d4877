//! Radially symmetric solutions on the plane.
//!
//! For radial `(n, ω)` the stream function is radial too, so the transport
//! terms `u·∇n`, `u·∇ω` and the forcing curl `∇⊥·(n∇c)` vanish identically:
//! the density follows the radial Keller-Segel equation and the vorticity a
//! radial heat equation. Only `∂_r c = −m/(2πr)` is ever needed.

mod grid;
mod ic;
mod profile;
pub(crate) mod scheme;
mod solver;
mod state;

pub use grid::RadialGrid;
pub use ic::{radial_initial_state, random_bump_profile, seeded_radial_corpus};
pub use profile::{
    azimuthal_velocity, chemical_gradient_faces, chemical_gradient_radial, cumulative_mass,
    newtonian_potential, total_mass, CumulativeMass,
};
pub use scheme::{
    centered_transport_heun, centered_transport_tendency, transport_heun, transport_tendency,
    RadialDiffusion, ShiftedFactor, TrBdf2,
};
pub use solver::{
    adaptive_dt_radial, blowup_time_estimate, rhs_radial, run_radial, run_radial_from, step_radial,
    BlowupVerdict, RadialRun, RadialRunner, VerdictStatus,
};
pub use state::RadialState;
