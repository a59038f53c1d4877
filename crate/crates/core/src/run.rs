//! Adaptive time-stepping driver shared by all solvers.

use crate::config::StepControl;
use crate::diagnostics::{fill_energy_residuals, DiagnosticsRecord};
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Outcome of a step-size proposal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSize<T: Real> {
    Accept(T),
    /// The proposed step fell below `dt_min`.
    BlowupSuspected(T),
}

/// `min(dt_max, cfl·h/(speed + ε))`, flagged when it falls below `dt_min`.
pub fn cfl_step<T: Real>(spacing: T, speed: T, ctl: &StepControl<T>) -> StepSize<T> {
    let eps = T::lit(1e-12);
    let dt = ctl.dt_max.min(ctl.cfl * spacing / (speed + eps));
    if dt < ctl.dt_min {
        StepSize::BlowupSuspected(dt)
    } else {
        StepSize::Accept(dt)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    BlowupSuspected,
}

impl RunStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            RunStatus::Completed => "Completed",
            RunStatus::BlowupSuspected => "BlowupSuspected",
        }
    }
}

/// Why a run stopped early.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BlowupReason {
    /// The CFL step (or repeated positivity rejections) fell below `dt_min`.
    StepCollapse,
    /// `‖n‖_∞` exceeded the configured multiple of its initial value.
    SupNormGrowth,
}

/// A state that can be advanced in time and observed.
pub trait Evolve<T: Real>: Sized {
    fn time(&self) -> T;

    /// CFL-limited step proposal.
    fn propose_dt(&self, ctl: &StepControl<T>) -> StepSize<T>;

    /// One step; `PositivityLoss` asks the driver to retry with half the step.
    fn advance(&self, dt: T) -> Result<Self>;

    fn record(&self, dt: T) -> DiagnosticsRecord<T>;

    fn sup_norm(&self) -> T;
}

#[derive(Debug, Clone)]
pub struct Trajectory<T: Real, S> {
    pub records: Vec<DiagnosticsRecord<T>>,
    pub final_state: S,
    pub status: RunStatus,
    pub blowup_reason: Option<BlowupReason>,
    pub steps: usize,
}

impl<T: Real, S> Trajectory<T, S> {
    pub fn t_stop(&self) -> T {
        self.records.last().map(|r| r.t).unwrap_or_else(T::zero)
    }
}

/// Integrates to `t_end` or until a blow-up signal, recording every
/// `diag_every` accepted steps plus the first and last state.
///
/// `blowup_factor` bounds `‖n‖_∞` relative to its initial value; pass
/// `None` to rely on step collapse alone.
pub fn integrate<T: Real, S: Evolve<T>>(
    initial: S,
    ctl: &StepControl<T>,
    t_end: T,
    diag_every: usize,
    blowup_factor: Option<T>,
) -> Result<Trajectory<T, S>> {
    let sup0 = initial.sup_norm();
    let mut state = initial;
    let mut records = vec![state.record(T::zero())];
    let mut steps = 0usize;
    let mut status = RunStatus::Completed;
    let mut reason = None;
    let end_slack = T::lit(1e-12) * t_end.max(T::one());
    let mut last_recorded = 0usize;

    while state.time() < t_end - end_slack {
        let mut dt = match state.propose_dt(ctl) {
            StepSize::Accept(dt) => dt,
            StepSize::BlowupSuspected(_) => {
                status = RunStatus::BlowupSuspected;
                reason = Some(BlowupReason::StepCollapse);
                break;
            }
        };
        let remaining = t_end - state.time();
        if dt >= remaining - end_slack {
            dt = remaining;
        }
        let next = loop {
            match state.advance(dt) {
                Ok(next) => break Some(next),
                Err(Error::PositivityLoss { .. }) => {
                    dt *= T::lit(0.5);
                    if dt < ctl.dt_min {
                        break None;
                    }
                }
                Err(e) => return Err(e),
            }
        };
        let Some(next) = next else {
            status = RunStatus::BlowupSuspected;
            reason = Some(BlowupReason::StepCollapse);
            break;
        };
        state = next;
        steps += 1;
        let grown = blowup_factor
            .map(|f| state.sup_norm() > f * sup0)
            .unwrap_or(false);
        let finished = state.time() >= t_end - end_slack;
        if steps.is_multiple_of(diag_every) || finished || grown {
            records.push(state.record(dt));
            last_recorded = steps;
        }
        if grown {
            status = RunStatus::BlowupSuspected;
            reason = Some(BlowupReason::SupNormGrowth);
            break;
        }
    }
    if last_recorded != steps {
        records.push(state.record(T::zero()));
    }
    fill_energy_residuals(&mut records);
    Ok(Trajectory {
        records,
        final_state: state,
        status,
        blowup_reason: reason,
        steps,
    })
}
