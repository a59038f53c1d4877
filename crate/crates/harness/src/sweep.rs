//! Parameter sweeps over one configuration key, and threshold search.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::config::{format_f64, parse_number, ConfigDocument};
use crate::error::{ConfigError, HarnessError};
use crate::run::{execute, RunOutcome, Verdict};
use pkns_core::RunConfig64;

/// Keys that hold integers; sweep values for them must be whole numbers.
const INTEGER_KEYS: &[&str] = &[
    "n_points",
    "n_r",
    "max_cells",
    "seed",
    "modes",
    "diag_every",
];
const TEXT_KEYS: &[&str] = &["mode", "kind", "file", "flow", "out_dir"];

#[derive(Debug, Clone, PartialEq)]
pub enum SweepPlan {
    Values(Vec<f64>),
    /// Narrow `[lo, hi]` to width `tol` around the first value with a
    /// suspected blow-up.
    Bisect {
        lo: f64,
        hi: f64,
        tol: f64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: ConfigDocument,
    pub param: String,
    pub plan: SweepPlan,
}

/// Comma-separated numbers, each optionally `pi`-suffixed.
pub fn parse_values(list: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Vec<&str> = list
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .collect();
    if items.is_empty() {
        return Err(ConfigError::for_key("values", "empty value list"));
    }
    items
        .iter()
        .map(|s| {
            parse_number(s)
                .ok_or_else(|| ConfigError::for_key("values", format!("not a number: `{s}`")))
        })
        .collect()
}

impl SweepSpec {
    pub fn new(base: ConfigDocument, param: &str, plan: SweepPlan) -> Result<Self, ConfigError> {
        let key = param.rsplit('.').next().unwrap_or(param);
        if TEXT_KEYS.contains(&key) {
            return Err(ConfigError::for_key(
                param,
                "only numeric keys can be swept",
            ));
        }
        match &plan {
            SweepPlan::Values(v) if v.len() < 2 => {
                return Err(ConfigError::for_key(
                    "values",
                    format!("a sweep needs at least 2 values, got {}", v.len()),
                ))
            }
            SweepPlan::Bisect { lo, hi, tol }
                if !(lo < hi && *tol > 0.0 && hi.is_finite() && lo.is_finite()) =>
            {
                return Err(ConfigError::for_key(
                    "bisect",
                    format!("need lo < hi and tol > 0, got [{lo}, {hi}] tol {tol}"),
                ))
            }
            _ => {}
        }
        let spec = Self {
            base,
            param: param.to_owned(),
            plan,
        };
        // surface unknown keys and invalid values before any run starts
        match &spec.plan {
            SweepPlan::Values(values) => {
                for &v in values {
                    spec.config_for(v)?;
                }
            }
            SweepPlan::Bisect { lo, hi, .. } => {
                spec.config_for(*lo)?;
                spec.config_for(*hi)?;
            }
        }
        Ok(spec)
    }

    pub fn config_for(&self, value: f64) -> Result<RunConfig64, ConfigError> {
        let key = self.param.rsplit('.').next().unwrap_or(&self.param);
        let text = if INTEGER_KEYS.contains(&key) {
            if value.fract() != 0.0 || value < 0.0 {
                return Err(ConfigError::for_key(
                    &self.param,
                    format!("needs a whole number, got {value}"),
                ));
            }
            format!("{}", value as u64)
        } else {
            format_f64(value)
        };
        let mut doc = self.base.clone();
        doc.set(&self.param, &text)?;
        doc.to_config()
    }
}

#[derive(Debug, Clone)]
pub struct SweepRow {
    pub value: f64,
    pub outcome: RunOutcome,
}

#[derive(Debug, Clone)]
pub struct SweepReport {
    pub param: String,
    /// Sorted by parameter value.
    pub rows: Vec<SweepRow>,
    /// Final `[lo, hi]` of a threshold search.
    pub bracket: Option<(f64, f64)>,
}

fn run_one(
    spec: &SweepSpec,
    value: f64,
    out: Option<&Path>,
    tag: &str,
    threads: usize,
) -> Result<SweepRow, HarnessError> {
    let cfg = spec.config_for(value)?;
    let outcome = execute(&cfg, threads)?;
    if let Some(dir) = out {
        outcome.write_artifacts(&dir.join(tag))?;
    }
    Ok(SweepRow { value, outcome })
}

fn run_batch(
    spec: &SweepSpec,
    values: &[f64],
    first_index: usize,
    out: Option<&Path>,
    pool: &rayon::ThreadPool,
) -> Result<Vec<SweepRow>, HarnessError> {
    let threads = pool.current_num_threads();
    pool.install(|| {
        values
            .par_iter()
            .enumerate()
            .map(|(i, &v)| {
                run_one(
                    spec,
                    v,
                    out,
                    &format!("run_{:03}", first_index + i),
                    threads,
                )
            })
            .collect()
    })
}

/// Runs the sweep on `pool`, one run per worker, writing each run's artifacts
/// under `out/run_NNN` when `out` is given. Rows are assembled after all
/// workers finish, so the report does not depend on scheduling.
pub fn run_sweep(
    spec: &SweepSpec,
    pool: &rayon::ThreadPool,
    out: Option<&Path>,
) -> Result<SweepReport, HarnessError> {
    let mut rows = Vec::new();
    let mut bracket = None;
    match &spec.plan {
        SweepPlan::Values(values) => rows = run_batch(spec, values, 0, out, pool)?,
        SweepPlan::Bisect { lo, hi, tol } => {
            let ends = run_batch(spec, &[*lo, *hi], 0, out, pool)?;
            let blows = |r: &SweepRow| r.outcome.verdict == Verdict::BlowupSuspected;
            if blows(&ends[0]) || !blows(&ends[1]) {
                return Err(ConfigError::for_key(
                    "bisect",
                    format!(
                        "bracket does not straddle the threshold: {} at {}, {} at {}",
                        ends[0].outcome.verdict.as_str(),
                        format_f64(*lo),
                        ends[1].outcome.verdict.as_str(),
                        format_f64(*hi)
                    ),
                )
                .into());
            }
            rows.extend(ends);
            let (mut a, mut b) = (*lo, *hi);
            // k-section: one interior probe per worker and round
            let k = pool.current_num_threads().max(1);
            while b - a > *tol {
                let probes: Vec<f64> = (1..=k)
                    .map(|i| a + (b - a) * i as f64 / (k + 1) as f64)
                    .collect();
                let batch = run_batch(spec, &probes, rows.len(), out, pool)?;
                let first_blowup = batch.iter().position(blows);
                match first_blowup {
                    Some(0) => b = probes[0],
                    Some(i) => {
                        a = probes[i - 1];
                        b = probes[i];
                    }
                    None => a = probes[k - 1],
                }
                rows.extend(batch);
            }
            bracket = Some((a, b));
        }
    }
    rows.sort_by(|x, y| x.value.total_cmp(&y.value));
    Ok(SweepReport {
        param: spec.param.clone(),
        rows,
        bracket,
    })
}

impl SweepReport {
    pub fn verdicts(&self) -> Vec<Verdict> {
        self.rows.iter().map(|r| r.outcome.verdict).collect()
    }

    /// CSV table of parameter value, verdict and summary metrics.
    pub fn table(&self) -> String {
        let mut out = format!(
            "{p},{p}_over_pi,status,t_stop,t_star,within_bound,sup_growth,steps,final_cells\n",
            p = self.param
        );
        let opt = |x: Option<f64>| x.map(format_f64).unwrap_or_default();
        for row in &self.rows {
            let o = &row.outcome;
            out.push_str(&format!(
                "{},{},{},{},{},{},{},{},{}\n",
                format_f64(row.value),
                format_f64(row.value / PI),
                o.verdict.as_str(),
                format_f64(o.t_stop()),
                opt(o.t_star),
                o.within_bound().map(|b| b.to_string()).unwrap_or_default(),
                format_f64(o.sup_growth()),
                o.steps,
                o.checkpoint.dims()[0],
            ));
        }
        out
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, HarnessError> {
        std::fs::create_dir_all(dir).map_err(|e| HarnessError::io(dir, e))?;
        let path = dir.join("sweep.csv");
        std::fs::write(&path, self.table()).map_err(|e| HarnessError::io(&path, e))?;
        if let Some((lo, hi)) = self.bracket {
            let body = serde_json::json!({
                "param": self.param,
                "bracket": [lo, hi],
                "bracket_over_pi": [lo / PI, hi / PI],
            });
            let bpath = dir.join("threshold.json");
            std::fs::write(&bpath, format!("{body:#}\n"))
                .map_err(|e| HarnessError::io(&bpath, e))?;
        }
        Ok(path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_parse_with_pi_suffix() {
        let v = parse_values("4pi, 6pi,7.5pi").unwrap();
        assert_eq!(v, vec![4.0 * PI, 6.0 * PI, 7.5 * PI]);
        assert!(parse_values("").is_err());
        assert!(parse_values(" , ").is_err());
        assert!(parse_values("1,x").is_err());
    }
}
