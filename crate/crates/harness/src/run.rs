//! Single runs: initial state, integration, and the artifacts written for them.

use std::fmt::Write as _;
use std::path::Path;

use pkns_core::config::{GridSpec, IcKind, Mode};
use pkns_core::diagnostics::{least_squares_slope, DiagnosticsRecord};
use pkns_core::radial::{run_radial, run_radial_from};
use pkns_core::run::{BlowupReason, RunStatus};
use pkns_core::selfsim::{decay_slope, run_selfsim, run_selfsim_from, time_of_tau};
use pkns_core::torus::{run_torus, run_torus_from};
use pkns_core::{DiagnosticsRecord64, RunConfig64};
use serde_json::{json, Value};

use crate::checkpoint::Checkpoint;
use crate::config::{format_f64, render_config};
use crate::error::{ConfigError, HarnessError};

pub const CSV_FILE: &str = "diagnostics.csv";
pub const CHECKPOINT_FILE: &str = "final.ckpt";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CONFIG_FILE: &str = "config.ini";

/// Window of physical time over which the decay exponent is fitted.
pub const DECAY_WINDOW: (f64, f64) = (10.0, 100.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    /// Torus run that reached `t_end`.
    Completed,
    /// Plane run that reached `t_end` without a blow-up signal.
    Global,
    BlowupSuspected,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Completed => "Completed",
            Verdict::Global => "Global",
            Verdict::BlowupSuspected => "BlowupSuspected",
        }
    }

    /// 0 for a finished run, 4 for a suspected blow-up.
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Completed | Verdict::Global => 0,
            Verdict::BlowupSuspected => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub config: RunConfig64,
    pub records: Vec<DiagnosticsRecord64>,
    pub verdict: Verdict,
    pub blowup_reason: Option<BlowupReason>,
    pub steps: usize,
    /// Analytic blow-up time bound of a plane run with `M > 8π`.
    pub t_star: Option<f64>,
    pub initial_second_moment: Option<f64>,
    pub checkpoint: Checkpoint,
    pub threads: usize,
}

fn verdict_of(mode: Mode, status: RunStatus) -> Verdict {
    match (mode, status) {
        (_, RunStatus::BlowupSuspected) => Verdict::BlowupSuspected,
        (Mode::Torus, RunStatus::Completed) => Verdict::Completed,
        (_, RunStatus::Completed) => Verdict::Global,
    }
}

fn load_initial(config: &RunConfig64) -> Result<Option<Checkpoint>, HarnessError> {
    let IcKind::File(path) = &config.ic.kind else {
        return Ok(None);
    };
    let ckpt = Checkpoint::load(path)?;
    if ckpt.mode() != config.mode {
        return Err(crate::FormatError::InvalidState(format!(
            "checkpoint holds a {} state but the run is {}",
            ckpt.mode().as_str(),
            config.mode.as_str()
        ))
        .into());
    }
    ckpt.check_grid(&config.grid)?;
    Ok(Some(ckpt))
}

/// Runs `config` from its configured initial condition. `threads` is only
/// recorded: a single run is sequential.
pub fn execute(config: &RunConfig64, threads: usize) -> Result<RunOutcome, HarnessError> {
    let initial = load_initial(config)?;
    execute_from(config, initial.as_ref(), threads)
}

/// Runs `config` from `initial`, or from the generated initial condition.
pub fn execute_from(
    config: &RunConfig64,
    initial: Option<&Checkpoint>,
    threads: usize,
) -> Result<RunOutcome, HarnessError> {
    let config = config.clone();
    let outcome = match config.mode {
        Mode::Torus => {
            let run = match initial {
                Some(c) => run_torus_from(c.to_torus()?, &config)?,
                None => run_torus(&config)?,
            };
            RunOutcome {
                verdict: verdict_of(Mode::Torus, run.status),
                blowup_reason: run.blowup_reason,
                steps: run.steps,
                t_star: None,
                initial_second_moment: None,
                checkpoint: Checkpoint::of_torus(&run.final_state.state),
                records: run.records,
                config,
                threads,
            }
        }
        Mode::Radial => {
            let run = match initial {
                Some(c) => run_radial_from(c.to_radial()?, &config)?,
                None => run_radial(&config)?,
            };
            let traj = run.trajectory;
            RunOutcome {
                verdict: verdict_of(Mode::Radial, traj.status),
                blowup_reason: traj.blowup_reason,
                steps: traj.steps,
                t_star: run.verdict.t_star,
                initial_second_moment: Some(run.initial_second_moment),
                checkpoint: Checkpoint::of_radial(&traj.final_state.state),
                records: traj.records,
                config,
                threads,
            }
        }
        Mode::SelfSim => {
            let run = match initial {
                Some(c) => run_selfsim_from(c.to_selfsim()?, &config)?,
                None => run_selfsim(&config)?,
            };
            RunOutcome {
                verdict: verdict_of(Mode::SelfSim, run.status),
                blowup_reason: run.blowup_reason,
                steps: run.steps,
                t_star: None,
                initial_second_moment: None,
                checkpoint: Checkpoint::of_selfsim(&run.final_state.state),
                records: run.records,
                config,
                threads,
            }
        }
    };
    Ok(outcome)
}

/// Continues from `checkpoint` to `t_end` (τ for selfsim) with the settings
/// of `config`. The grid is taken from the checkpoint, which may have been
/// refined since the run started.
pub fn resume(
    checkpoint: &Checkpoint,
    config: &RunConfig64,
    t_end: f64,
    threads: usize,
) -> Result<RunOutcome, HarnessError> {
    if checkpoint.mode() != config.mode {
        return Err(ConfigError::new(format!(
            "checkpoint holds a {} state but the config is {}",
            checkpoint.mode().as_str(),
            config.mode.as_str()
        ))
        .into());
    }
    if !(t_end > checkpoint.time()) {
        return Err(ConfigError::for_key(
            "t_end",
            format!("must exceed the checkpoint time {}", checkpoint.time()),
        )
        .into());
    }
    let mut cfg = config.clone();
    cfg.t_end = t_end;
    cfg.grid = match checkpoint {
        Checkpoint::Torus { n_points, .. } => GridSpec::Torus {
            n_points: *n_points,
        },
        Checkpoint::Radial { r_max, n, .. } | Checkpoint::SelfSim { r_max, n, .. } => {
            GridSpec::Radial {
                r_max: *r_max,
                n_r: n.len(),
            }
        }
    };
    if let Some(max) = cfg.max_cells {
        cfg.max_cells = Some(max.max(checkpoint.dims()[0]));
    }
    cfg.validate()?;
    execute_from(&cfg, Some(checkpoint), threads)
}

/// Diagnostics table with a header row; floats in shortest round-trip form.
pub fn records_csv(records: &[DiagnosticsRecord64]) -> String {
    let mut out = DiagnosticsRecord::<f64>::COLUMNS.join(",");
    out.push('\n');
    for r in records {
        for v in r.values() {
            out.push_str(&format_f64(v));
            out.push(',');
        }
        out.push_str(r.mode.as_str());
        out.push('\n');
    }
    out
}

fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

fn optional(x: Option<f64>) -> Value {
    x.map(number).unwrap_or(Value::Null)
}

impl RunOutcome {
    /// Time of the last record (τ for selfsim).
    pub fn t_stop(&self) -> f64 {
        self.records.last().map(|r| r.t).unwrap_or(0.0)
    }

    pub fn reporting_interval(&self) -> f64 {
        match self.records.as_slice() {
            [.., a, b] => b.t - a.t,
            _ => 0.0,
        }
    }

    /// `t_stop ≤ T⋆` up to one reporting interval, for a suspected blow-up with a bound.
    pub fn within_bound(&self) -> Option<bool> {
        match (self.verdict, self.t_star) {
            (Verdict::BlowupSuspected, Some(ts)) => {
                Some(self.t_stop() <= ts + self.reporting_interval())
            }
            _ => None,
        }
    }

    /// Least-squares `dV/dt` over all records of a plane run.
    pub fn second_moment_slope(&self) -> Option<f64> {
        if self.config.mode != Mode::Radial {
            return None;
        }
        let (ts, vs): (Vec<f64>, Vec<f64>) =
            self.records.iter().map(|r| (r.t, r.second_moment)).unzip();
        least_squares_slope(&ts, &vs)
    }

    /// Decay exponent of `‖n‖₂² + ‖ω‖₂²` in `1 + 2t` over [`DECAY_WINDOW`],
    /// when a self-similar run covers it.
    pub fn decay_slope(&self) -> Option<f64> {
        if self.config.mode != Mode::SelfSim || time_of_tau(self.t_stop()) < DECAY_WINDOW.1 {
            return None;
        }
        decay_slope(&self.records, DECAY_WINDOW.0, DECAY_WINDOW.1)
    }

    /// Ratio of the final to the initial `‖n‖_∞`.
    pub fn sup_growth(&self) -> f64 {
        match (self.records.first(), self.records.last()) {
            (Some(a), Some(b)) if a.linf_n > 0.0 => b.linf_n / a.linf_n,
            _ => f64::NAN,
        }
    }

    pub fn summary(&self) -> Value {
        let last = self.records.last();
        let field =
            |f: fn(&DiagnosticsRecord64) -> f64| last.map(f).map(number).unwrap_or(Value::Null);
        let physical_t_stop = match self.config.mode {
            Mode::SelfSim => time_of_tau(self.t_stop()),
            _ => self.t_stop(),
        };
        json!({
            "mode": self.config.mode.as_str(),
            "status": self.verdict.as_str(),
            "blowup_reason": self.blowup_reason.map(|r| match r {
                BlowupReason::StepCollapse => "step_collapse",
                BlowupReason::SupNormGrowth => "sup_norm_growth",
            }),
            "t_stop": number(self.t_stop()),
            "physical_t_stop": number(physical_t_stop),
            "t_star": optional(self.t_star),
            "within_bound": self.within_bound(),
            "reporting_interval": number(self.reporting_interval()),
            "initial_second_moment": optional(self.initial_second_moment),
            "steps": self.steps,
            "records": self.records.len(),
            "final_cells": self.checkpoint.dims()[0],
            "final": {
                "M": field(|r| r.mass),
                "mean_u1": field(|r| r.mean_u1),
                "mean_u2": field(|r| r.mean_u2),
                "L2_n": field(|r| r.l2_n),
                "Linf_n": field(|r| r.linf_n),
                "L2_u": field(|r| r.l2_u),
                "L2_omega": field(|r| r.l2_omega),
                "V": field(|r| r.second_moment),
                "E": field(|r| r.energy),
            },
            "sup_growth": number(self.sup_growth()),
            "slopes": {
                "second_moment": optional(self.second_moment_slope()),
                "decay": optional(self.decay_slope()),
            },
            "seed": self.config.ic.seed,
            "threads": self.threads,
        })
    }

    pub fn csv(&self) -> String {
        records_csv(&self.records)
    }

    /// Writes the CSV, final checkpoint, summary and a complete copy of the config.
    pub fn write_artifacts(&self, dir: &Path) -> Result<(), HarnessError> {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let write = |name: &str, body: &str| {
            let path = dir.join(name);
            std::fs::write(&path, body).map_err(|e| HarnessError::io(path, e))
        };
        write(CSV_FILE, &self.csv())?;
        let mut summary =
            serde_json::to_string_pretty(&self.summary()).expect("summary serializes");
        summary.push('\n');
        write(SUMMARY_FILE, &summary)?;
        write(CONFIG_FILE, &render_config(&self.config))?;
        self.checkpoint.save(&dir.join(CHECKPOINT_FILE))
    }

    /// One-line human summary for the terminal.
    pub fn describe(&self) -> String {
        let mut s = format!(
            "{} {} t_stop={} steps={}",
            self.config.mode.as_str(),
            self.verdict.as_str(),
            format_f64(self.t_stop()),
            self.steps
        );
        if let Some(ts) = self.t_star {
            let _ = write!(s, " T*={}", format_f64(ts));
        }
        if let Some(within) = self.within_bound() {
            let _ = write!(s, " within_bound={within}");
        }
        s
    }
}
