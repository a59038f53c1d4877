use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::grid::RadialGrid;
use super::profile::total_mass;
use super::scheme::RadialDiffusion;
use super::state::RadialState;
use crate::config::{FlowKind, IcKind, InitialCondition};
use crate::error::{Error, Result};
use crate::scalar::Real;

fn normalize<T: Real>(mut n: Vec<T>, mass: T, grid: &RadialGrid<T>) -> Vec<T> {
    let current = total_mass(&n, grid);
    if mass == T::zero() || current == T::zero() {
        return vec![T::zero(); n.len()];
    }
    let s = mass / current;
    for v in &mut n {
        *v *= s;
    }
    n
}

/// Seeded sum of `bumps` ring-shaped Gaussians with length scale `width`.
pub fn random_bump_profile<T: Real>(
    grid: &RadialGrid<T>,
    width: T,
    bumps: usize,
    seed: u64,
) -> Vec<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let w = width.to_f64_lossy();
    let params: Vec<(f64, f64, f64)> = (0..bumps.max(1))
        .map(|_| {
            let centre = rng.gen_range(0.0..3.0) * w;
            let spread = rng.gen_range(0.3..1.0) * w;
            let weight = rng.gen_range(0.2..1.0);
            (centre, spread, weight)
        })
        .collect();
    grid.sample(|r| {
        let r = r.to_f64_lossy();
        let v: f64 = params
            .iter()
            .map(|&(c, s, a)| a * (-(r - c) * (r - c) / (2.0 * s * s)).exp())
            .sum();
        T::lit(v)
    })
}

/// Builds the initial radial state described by `ic` (file input is handled
/// by the caller).
pub fn radial_initial_state<T: Real>(
    grid: RadialGrid<T>,
    ic: &InitialCondition<T>,
) -> Result<RadialState<T>> {
    let two = T::lit(2.0);
    let w2 = ic.width * ic.width;
    let raw = match &ic.kind {
        IcKind::Gaussian => grid.sample(|r| (-r * r / (two * w2)).exp()),
        IcKind::Random => random_bump_profile(&grid, ic.width, ic.modes, ic.seed),
        IcKind::File(path) => {
            return Err(Error::Config(format!(
                "file initial condition {} must be loaded by the caller",
                path.display()
            )))
        }
    };
    let n = normalize(raw, ic.mass, &grid);
    let omega = match ic.flow {
        FlowKind::None => vec![T::zero(); grid.n_cells()],
        FlowKind::Vortex => {
            // discrete Laplacian of a Gaussian stream function: zero net circulation
            let psi = grid.sample(|r| ic.flow_amplitude * (-r * r / (two * w2)).exp());
            RadialDiffusion::new(&grid).apply(&psi)
        }
        other => {
            return Err(Error::Config(format!(
                "flow {other:?} is not available for radial states"
            )))
        }
    };
    RadialState::new(grid, T::zero(), n, omega)
}

/// Seeded family of `count` radial states for property audits: random ring
/// profiles with masses in `[0.05, 30)` and length scales in `[0.2, 2)` on a
/// grid of radius 24 that holds every member.
pub fn seeded_radial_corpus<T: Real>(count: usize, seed: u64) -> Vec<RadialState<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let grid = RadialGrid::new(T::lit(24.0), 1024).expect("corpus grid is valid");
    (0..count)
        .map(|_| {
            let mass = T::lit(rng.gen_range(0.05..30.0));
            let width = T::lit(rng.gen_range(0.2..2.0));
            let bumps = rng.gen_range(1..5);
            let profile = random_bump_profile(&grid, width, bumps, rng.gen());
            let n = normalize(profile, mass, &grid);
            let omega = vec![T::zero(); grid.n_cells()];
            RadialState::new(grid, T::zero(), n, omega).expect("corpus state matches grid")
        })
        .collect()
}
