use super::state::SelfSimState;
use crate::error::{Error, Result};
use crate::radial::{RadialGrid, RadialState};
use crate::scalar::Real;

/// `τ = ½ log(1 + 2t)`.
pub fn tau_of_time<T: Real>(t: T) -> T {
    T::lit(0.5) * (T::one() + T::lit(2.0) * t).ln()
}

/// `t = (e^{2τ} − 1)/2`.
pub fn time_of_tau<T: Real>(tau: T) -> T {
    T::lit(0.5) * ((T::lit(2.0) * tau).exp() - T::one())
}

fn scaled_profile<T: Real>(values: &[T], factor: T) -> Vec<T> {
    values.iter().map(|&v| v * factor).collect()
}

/// Rescales a plane state onto its natural `X` grid (the plane grid divided
/// by `R`), where `N_j = R² n_j` holds cell by cell and mass is preserved
/// exactly. Use [`remap_conservative`] to move to another grid.
pub fn to_selfsim<T: Real>(state: &RadialState<T>) -> Result<SelfSimState<T>> {
    if state.t < T::zero() {
        return Err(Error::Config(format!("negative time {}", state.t)));
    }
    let tau = tau_of_time(state.t);
    let r = tau.exp();
    let r2 = r * r;
    SelfSimState::new(
        state.grid.scaled(T::one() / r),
        tau,
        scaled_profile(&state.n, r2),
        scaled_profile(&state.omega, r2),
    )
}

/// Inverse of [`to_selfsim`]: `n_j = R⁻² N_j` on the grid scaled by `R`.
pub fn from_selfsim<T: Real>(state: &SelfSimState<T>) -> Result<RadialState<T>> {
    let r = state.scale();
    let inv = T::one() / (r * r);
    RadialState::new(
        state.grid.scaled(r),
        time_of_tau(state.tau),
        scaled_profile(&state.n, inv),
        scaled_profile(&state.omega, inv),
    )
}

fn cumulative<T: Real>(values: &[T], grid: &RadialGrid<T>) -> Vec<T> {
    let mut acc = T::zero();
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(acc);
    for (j, &v) in values.iter().enumerate() {
        acc += v * grid.cell_area(j);
        out.push(acc);
    }
    out
}

/// Integral of the piecewise-constant profile over the disk of radius `r`;
/// linear in `r²` inside each cell.
fn integral_to<T: Real>(q: &[T], grid: &RadialGrid<T>, r: T) -> T {
    let h = grid.spacing();
    let n = grid.n_cells();
    let pos = (r / h).floor().to_usize().unwrap_or(0).min(n - 1);
    let (a, b) = (grid.face(pos), grid.face(pos + 1));
    let w = ((r * r - a * a) / (b * b - a * a))
        .max(T::zero())
        .min(T::one());
    q[pos] + w * (q[pos + 1] - q[pos])
}

/// Cell averages of a piecewise-constant radial profile on another grid.
///
/// Integrals over every disk centred at the origin are preserved, so the
/// mass is carried over up to roundoff. The target grid must not reach
/// beyond the source.
pub fn remap_conservative<T: Real>(
    values: &[T],
    from: &RadialGrid<T>,
    to: &RadialGrid<T>,
) -> Result<Vec<T>> {
    let slack = T::one() + T::lit(1e-12);
    if to.r_max() > from.r_max() * slack {
        return Err(Error::InterpolationRange {
            requested: to.r_max().to_f64_lossy(),
            available: from.r_max().to_f64_lossy(),
        });
    }
    let q = cumulative(values, from);
    let mut lower = T::zero();
    Ok((0..to.n_cells())
        .map(|j| {
            let upper = integral_to(&q, from, to.face(j + 1).min(from.r_max()));
            let v = (upper - lower) / to.cell_area(j);
            lower = upper;
            v
        })
        .collect())
}

impl<T: Real> SelfSimState<T> {
    /// The same state on another `X` grid (conservative remap).
    pub fn remap(&self, grid: RadialGrid<T>) -> Result<Self> {
        Self::new(
            grid,
            self.tau,
            remap_conservative(&self.n, &self.grid, &grid)?,
            remap_conservative(&self.omega, &self.grid, &grid)?,
        )
    }
}
