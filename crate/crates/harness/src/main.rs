use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use pkns_harness::check::{run_suite, CheckOptions, CSV_HEADER};
use pkns_harness::config::{parse_number, ConfigDocument};
use pkns_harness::run::CONFIG_FILE;
use pkns_harness::sweep::parse_values;
use pkns_harness::{
    default_threads, execute, resume, run_sweep, thread_pool, Checkpoint, ConfigError,
    HarnessError, SweepPlan, SweepSpec, THREADS_ENV,
};

#[derive(Parser)]
#[command(
    name = "pkns",
    version,
    about = "Keller-Segel / Navier-Stokes experiments"
)]
struct Cli {
    /// Worker threads for sweeps; recorded in every run summary.
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configuration and write its artifacts.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory, overriding `out_dir` of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a configuration for several values of one key.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Key to vary, e.g. `mass` or `ic.mass`.
        #[arg(long)]
        param: String,
        #[command(flatten)]
        plan: PlanArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite: spectral, torus, radial, selfsim, diagnostics or all.
    Check {
        suite: String,
        /// Deliberate defect for testing the suite itself.
        #[arg(long, hide = true, value_parser = ["chemotaxis-sign"])]
        mutate: Option<String>,
    },
    /// Continue a run from a checkpoint.
    Resume {
        #[arg(long)]
        checkpoint: PathBuf,
        /// New final time (τ for selfsim runs); `pi` suffixes are accepted.
        #[arg(long)]
        t_end: String,
        /// Run settings; defaults to the config.ini beside the checkpoint.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Defaults to `resumed/` beside the checkpoint.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct PlanArgs {
    /// Comma-separated values, e.g. `4pi,6pi,7.5pi`.
    #[arg(long, allow_hyphen_values = true)]
    values: Option<String>,
    /// Threshold search between LO and HI down to width TOL.
    #[arg(long, num_args = 3, value_names = ["LO", "HI", "TOL"], allow_hyphen_values = true)]
    bisect: Option<Vec<String>>,
}

fn number(text: &str, key: &str) -> Result<f64, HarnessError> {
    parse_number(text)
        .ok_or_else(|| ConfigError::for_key(key, format!("not a number: `{text}`")).into())
}

fn cmd_run(config: &Path, out: Option<PathBuf>, threads: usize) -> Result<i32, HarnessError> {
    let cfg = ConfigDocument::from_file(config)?.to_config()?;
    let dir = out.unwrap_or_else(|| cfg.out_dir.clone());
    let outcome = execute(&cfg, threads)?;
    outcome.write_artifacts(&dir)?;
    println!("{}", outcome.describe());
    println!("artifacts: {}", dir.display());
    Ok(outcome.verdict.exit_code())
}

fn cmd_sweep(
    config: &Path,
    param: &str,
    plan: PlanArgs,
    out: Option<PathBuf>,
    threads: usize,
) -> Result<i32, HarnessError> {
    let doc = ConfigDocument::from_file(config)?;
    let plan = match (plan.values, plan.bisect) {
        (Some(list), _) => SweepPlan::Values(parse_values(&list)?),
        (None, Some(b)) => SweepPlan::Bisect {
            lo: number(&b[0], "bisect")?,
            hi: number(&b[1], "bisect")?,
            tol: number(&b[2], "bisect")?,
        },
        (None, None) => unreachable!("clap requires one plan"),
    };
    let spec = SweepSpec::new(doc, param, plan)?;
    let dir = out.unwrap_or_else(|| {
        spec.base
            .get("out_dir")
            .map(PathBuf::from)
            .unwrap_or_else(|| "out".into())
    });
    let pool = thread_pool(threads)?;
    let report = run_sweep(&spec, &pool, Some(&dir))?;
    print!("{}", report.table());
    if let Some((lo, hi)) = report.bracket {
        println!(
            "threshold in [{lo}, {hi}] = [{:.4}pi, {:.4}pi]",
            lo / std::f64::consts::PI,
            hi / std::f64::consts::PI
        );
    }
    let path = report.write(&dir)?;
    println!("report: {}", path.display());
    Ok(0)
}

fn cmd_check(suite: &str, mutate: Option<String>) -> Result<i32, HarnessError> {
    let opts = CheckOptions {
        flip_chemotaxis: mutate.is_some(),
    };
    let results = run_suite(suite, &opts)?;
    println!("{CSV_HEADER}");
    for r in &results {
        println!("{}", r.csv_line());
    }
    Ok(if results.iter().all(|r| r.passed()) {
        0
    } else {
        3
    })
}

fn cmd_resume(
    checkpoint: &Path,
    t_end: &str,
    config: Option<PathBuf>,
    out: Option<PathBuf>,
    threads: usize,
) -> Result<i32, HarnessError> {
    let beside = checkpoint.parent().unwrap_or(Path::new("."));
    let config = config.unwrap_or_else(|| beside.join(CONFIG_FILE));
    let cfg = ConfigDocument::from_file(&config)?.to_config()?;
    let ckpt = Checkpoint::load(checkpoint)?;
    let outcome = resume(&ckpt, &cfg, number(t_end, "t_end")?, threads)?;
    let dir = out.unwrap_or_else(|| beside.join("resumed"));
    outcome.write_artifacts(&dir)?;
    println!("{}", outcome.describe());
    println!("artifacts: {}", dir.display());
    Ok(outcome.verdict.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.unwrap_or_else(default_threads).max(1);
    let result = match cli.command {
        Command::Run { config, out } => cmd_run(&config, out, threads),
        Command::Sweep {
            config,
            param,
            plan,
            out,
        } => cmd_sweep(&config, &param, plan, out, threads),
        Command::Check { suite, mutate } => cmd_check(&suite, mutate),
        Command::Resume {
            checkpoint,
            t_end,
            config,
            out,
        } => cmd_resume(&checkpoint, &t_end, config, out, threads),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("pkns: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
