use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;

use super::state::TorusState;
use crate::config::{FlowKind, IcKind, InitialCondition};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{dealias, gradient, SpectralScalar, SpectralVector, TorusGrid};

/// Seeded real field with Fourier support in `0 < |m|_∞ ≤ modes`,
/// normalized so that `Σ|ξ̂| = 1` and hence `‖ξ‖_∞ ≤ 1`.
///
/// The coefficients depend on the seed and `modes` only, never on the grid.
pub fn random_band_limited<T: Real>(
    grid: &TorusGrid<T>,
    modes: usize,
    seed: u64,
) -> SpectralScalar<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = modes as i64;
    let mut f = SpectralScalar::zeros(grid);
    let mut total = 0.0;
    for m1 in 0..=k {
        for m2 in -k..=k {
            if m1 == 0 && m2 <= 0 {
                continue;
            }
            let decay = 1.0 / (1.0 + (m1 * m1 + m2 * m2) as f64);
            let re: f64 = rng.gen_range(-1.0..1.0) * decay;
            let im: f64 = rng.gen_range(-1.0..1.0) * decay;
            let c = Complex::new(T::lit(re), T::lit(im));
            f.set_coefficient(m1, m2, c);
            f.set_coefficient(-m1, -m2, c.conj());
            total += 2.0 * (re * re + im * im).sqrt();
        }
    }
    if total > 0.0 {
        f.scaled(T::lit(1.0 / total))
    } else {
        f
    }
}

fn periodic_gaussian<T: Real>(grid: &TorusGrid<T>, width: T) -> SpectralScalar<T> {
    let half = T::lit(0.5);
    let two_w2 = T::lit(2.0) * width * width;
    // three images per side are plenty for any width below one period
    let images = 3i32;
    SpectralScalar::from_fn(grid, |x1, x2| {
        let mut s = T::zero();
        for p1 in -images..=images {
            for p2 in -images..=images {
                let d1 = x1 - half + T::lit(p1 as f64);
                let d2 = x2 - half + T::lit(p2 as f64);
                s += (-(d1 * d1 + d2 * d2) / two_w2).exp();
            }
        }
        s
    })
}

fn with_mean<T: Real>(f: SpectralScalar<T>, mass: T) -> SpectralScalar<T> {
    let mean = f.mean();
    if mass == T::zero() || mean == T::zero() {
        return SpectralScalar::zeros(f.grid());
    }
    f.scaled(mass / mean)
}

fn initial_velocity<T: Real>(
    grid: &TorusGrid<T>,
    ic: &InitialCondition<T>,
) -> Result<SpectralVector<T>> {
    let a = ic.flow_amplitude;
    let two_pi = T::lit(2.0) * T::PI();
    Ok(match ic.flow {
        FlowKind::None => SpectralVector::zeros(grid),
        FlowKind::Shear => SpectralVector::new(
            SpectralScalar::from_fn(grid, |_, x2| a * (two_pi * x2).sin()),
            SpectralScalar::zeros(grid),
        ),
        FlowKind::Random => {
            let psi = random_band_limited(grid, ic.modes, ic.seed.wrapping_add(1));
            let g = gradient(&psi);
            let u = SpectralVector::new(g.second.scaled(-T::one()), g.first);
            let norm = u.l2_norm();
            if norm == T::zero() {
                u
            } else {
                u.scaled(a / norm)
            }
        }
        FlowKind::Vortex => {
            return Err(Error::Config(
                "vortex flow is only available for radial states".into(),
            ))
        }
    })
}

/// Builds the initial torus state described by `ic`, dealiased, with
/// `∫n = ic.mass` (file input is handled by the caller).
///
/// `Gaussian` is a periodized bump of standard deviation `width` centred
/// at `(½, ½)`. `Random` is `M(1 + a ξ)` with `ξ` from
/// [`random_band_limited`], positive whenever `a < 1`.
pub fn torus_initial_state<T: Real>(
    grid: &TorusGrid<T>,
    ic: &InitialCondition<T>,
) -> Result<TorusState<T>> {
    let n = match &ic.kind {
        IcKind::Gaussian => with_mean(dealias(&periodic_gaussian(grid, ic.width)), ic.mass),
        IcKind::Random => {
            let xi = random_band_limited(grid, ic.modes, ic.seed);
            SpectralScalar::constant(grid, ic.mass).add_scaled(&xi, ic.mass * ic.amplitude)
        }
        IcKind::File(path) => {
            return Err(Error::Config(format!(
                "file initial condition {} must be loaded by the caller",
                path.display()
            )))
        }
    };
    let u = initial_velocity(grid, ic)?;
    TorusState::new(T::zero(), n, u)
}
