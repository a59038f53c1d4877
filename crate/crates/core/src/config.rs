//! Run configuration shared by the three solvers. Text parsing lives in the
//! harness; this module holds the validated values.

use std::path::PathBuf;

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Torus,
    Radial,
    SelfSim,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Torus => "torus",
            Mode::Radial => "radial",
            Mode::SelfSim => "selfsim",
        }
    }
}

/// Time step policy: `dt = min(dt_max, cfl·h / (max speed + ε))`; a step
/// below `dt_min` is treated as a blow-up signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl<T: Real> {
    pub cfl: T,
    pub dt_max: T,
    pub dt_min: T,
}

impl<T: Real> StepControl<T> {
    pub fn new(cfl: T, dt_max: T, dt_min: T) -> Result<Self> {
        let ctl = Self {
            cfl,
            dt_max,
            dt_min,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.cfl > T::zero() && self.cfl <= T::one()) {
            return Err(Error::Config(format!(
                "cfl must lie in (0, 1], got {}",
                self.cfl
            )));
        }
        if !(self.dt_min > T::zero() && self.dt_min < self.dt_max) || !self.dt_max.is_finite() {
            return Err(Error::Config(format!(
                "need 0 < dt_min < dt_max, got dt_min={} dt_max={}",
                self.dt_min, self.dt_max
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum GridSpec<T: Real> {
    Torus { n_points: usize },
    Radial { r_max: T, n_r: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum IcKind {
    /// Gaussian bump (periodized on the torus, centred at the origin on the plane).
    Gaussian,
    /// Seeded band-limited noise on the torus, seeded sum of bumps on the plane.
    Random,
    /// State read from a checkpoint file.
    File(PathBuf),
}

/// Initial velocity (torus) or vorticity (plane) profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlowKind {
    None,
    /// `u = A (sin 2πx₂, 0)` on the torus.
    Shear,
    /// Seeded band-limited divergence-free field on the torus.
    Random,
    /// Zero-circulation vortex `ω = A Δ exp(−r²/2w²)` on the plane.
    Vortex,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InitialCondition<T: Real> {
    pub kind: IcKind,
    pub mass: T,
    pub width: T,
    /// Relative size of the density fluctuation for `Random`.
    pub amplitude: T,
    pub flow: FlowKind,
    pub flow_amplitude: T,
    pub seed: u64,
    /// Band limit of the random torus fields.
    pub modes: usize,
}

impl<T: Real> Default for InitialCondition<T> {
    fn default() -> Self {
        Self {
            kind: IcKind::Gaussian,
            mass: T::zero(),
            width: T::lit(0.1),
            amplitude: T::lit(0.5),
            flow: FlowKind::None,
            flow_amplitude: T::zero(),
            seed: 0,
            modes: 4,
        }
    }
}

/// Coupling strengths; `(1, 1)` is the physical system. Other values exist
/// for controlled experiments (decoupled diffusion, sign-flip mutants).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling<T: Real> {
    /// Multiplies the aggregation term `∇·(n∇c)`.
    pub chemotaxis: T,
    /// Multiplies the fluid forcing `n∇c`.
    pub forcing: T,
}

impl<T: Real> Default for Coupling<T> {
    fn default() -> Self {
        Self {
            chemotaxis: T::one(),
            forcing: T::one(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig<T: Real> {
    pub mode: Mode,
    pub grid: GridSpec<T>,
    /// Final time; rescaled time τ in self-similar mode.
    pub t_end: T,
    pub control: StepControl<T>,
    pub ic: InitialCondition<T>,
    pub diag_every: usize,
    /// Growth budget of the modified free energy.
    pub delta: T,
    /// Blow-up is suspected once `‖n‖_∞` exceeds this multiple of its initial value.
    pub blowup_factor: T,
    pub coupling: Coupling<T>,
    /// Radial runs bisect their grid while the peak is under-resolved, up to
    /// this many cells; `None` keeps the grid fixed.
    pub max_cells: Option<usize>,
    pub out_dir: PathBuf,
}

impl<T: Real> RunConfig<T> {
    pub const DEFAULT_CFL: f64 = 0.5;
    pub const DEFAULT_DT_MIN: f64 = 1e-10;
    pub const DEFAULT_DIAG_EVERY: usize = 10;
    pub const DEFAULT_BLOWUP_FACTOR: f64 = 1e6;
    pub const DEFAULT_DELTA: f64 = 0.01;

    /// Configuration with defaults for everything except mode, grid and horizon.
    pub fn new(mode: Mode, grid: GridSpec<T>, t_end: T, dt_max: T) -> Self {
        Self {
            mode,
            grid,
            t_end,
            control: StepControl {
                cfl: T::lit(Self::DEFAULT_CFL),
                dt_max,
                dt_min: T::lit(Self::DEFAULT_DT_MIN),
            },
            ic: InitialCondition::default(),
            diag_every: Self::DEFAULT_DIAG_EVERY,
            delta: T::lit(Self::DEFAULT_DELTA),
            blowup_factor: T::lit(Self::DEFAULT_BLOWUP_FACTOR),
            coupling: Coupling::default(),
            max_cells: None,
            out_dir: PathBuf::from("out"),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match (&self.mode, &self.grid) {
            (Mode::Torus, GridSpec::Torus { n_points }) => {
                if *n_points < 8 || n_points % 2 != 0 {
                    return Err(Error::Config(format!(
                        "n_points must be even and >= 8, got {n_points}"
                    )));
                }
                if 3 * self.ic.modes > *n_points {
                    return Err(Error::Config(format!(
                        "random modes {} exceed the dealiased band of a {n_points} grid",
                        self.ic.modes
                    )));
                }
            }
            (Mode::Radial | Mode::SelfSim, GridSpec::Radial { r_max, n_r }) => {
                if !(*r_max > T::zero()) || *n_r < 64 {
                    return Err(Error::Config(format!(
                        "radial grid needs r_max > 0 and n_r >= 64, got r_max={r_max} n_r={n_r}"
                    )));
                }
                if let Some(max) = self.max_cells {
                    if self.mode != Mode::Radial || max < *n_r {
                        return Err(Error::Config(format!(
                            "max_cells applies to radial mode and must be >= n_r, got {max}"
                        )));
                    }
                }
            }
            (mode, _) => {
                return Err(Error::Config(format!(
                    "grid keys do not match mode {}",
                    mode.as_str()
                )))
            }
        }
        if !(self.t_end > T::zero()) || !self.t_end.is_finite() {
            return Err(Error::Config(format!(
                "t_end must be positive, got {}",
                self.t_end
            )));
        }
        self.control.validate()?;
        if self.diag_every == 0 {
            return Err(Error::Config("diag_every must be positive".into()));
        }
        if !(self.delta > T::zero()) {
            return Err(Error::Config(format!(
                "delta must be positive, got {}",
                self.delta
            )));
        }
        if !(self.blowup_factor > T::one()) {
            return Err(Error::Config(format!(
                "blowup_factor must exceed 1, got {}",
                self.blowup_factor
            )));
        }
        let ic = &self.ic;
        if !(ic.mass >= T::zero()) || !ic.mass.is_finite() {
            return Err(Error::Config(format!(
                "mass must be non-negative, got {}",
                ic.mass
            )));
        }
        if !(ic.width > T::zero()) {
            return Err(Error::Config(format!(
                "width must be positive, got {}",
                ic.width
            )));
        }
        if !(ic.amplitude >= T::zero() && ic.amplitude < T::one()) {
            return Err(Error::Config(format!(
                "density amplitude must lie in [0, 1), got {}",
                ic.amplitude
            )));
        }
        if !ic.flow_amplitude.is_finite() {
            return Err(Error::Config("flow amplitude must be finite".into()));
        }
        if ic.modes == 0 {
            return Err(Error::Config("modes must be positive".into()));
        }
        let flow_ok = match self.mode {
            Mode::Torus => ic.flow != FlowKind::Vortex,
            Mode::Radial | Mode::SelfSim => matches!(ic.flow, FlowKind::None | FlowKind::Vortex),
        };
        if !flow_ok {
            return Err(Error::Config(format!(
                "flow {:?} is not available in {} mode",
                ic.flow,
                self.mode.as_str()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_validate() {
        let mut cfg = RunConfig::new(Mode::Torus, GridSpec::Torus { n_points: 32 }, 1.0, 1e-3);
        cfg.ic.mass = 1.0;
        cfg.validate().unwrap();
        cfg.grid = GridSpec::Radial {
            r_max: 1.0,
            n_r: 64,
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn step_control_rejects_bad_values() {
        assert!(StepControl::new(0.0, 1.0, 1e-6).is_err());
        assert!(StepControl::new(1.5, 1.0, 1e-6).is_err());
        assert!(StepControl::new(0.5, 1e-6, 1e-3).is_err());
        assert!(StepControl::new(0.5, 1e-3, 1e-10).is_ok());
    }
}
