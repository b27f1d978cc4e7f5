//! `fwa` — benchmark harness for the fireworks-algorithm family.
//!
//! Exit codes: 0 success, 1 usage error (bad flags, unknown algorithm or
//! function, invalid config), 2 runtime error (I/O failures, failed cells).

mod campaign;
mod cli_config;
mod output;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cli_config::{build_function, parse_algorithm, HarnessConfig, ALGORITHM_CHOICES};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "fwa",
    about = "Fireworks-algorithm optimizers and benchmark campaigns",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute a single optimization run and write its trace and summary.
    Run(RunArgs),
    /// Execute a full (algorithms x functions x runs) campaign with reports.
    Campaign(CampaignArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Config file (sectioned key-value format).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Problem dimensionality.
    #[arg(long, default_value_t = 10)]
    dim: usize,
    /// Evaluation budget override (default: dim * 10000).
    #[arg(long)]
    evals: Option<u64>,
    /// Output directory; the FWA_OUT environment variable overrides this.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Seed used to generate the suite's shifts and rotations.
    #[arg(long, default_value_t = 7)]
    suite_seed: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Algorithm to run (e.g. coffwa, dynfwa, dynfwa-ng).
    #[arg(long)]
    algo: String,
    /// Suite function name.
    #[arg(long)]
    function: String,
    /// Run seed.
    #[arg(long, default_value_t = 1)]
    seed: u64,
}

#[derive(Args)]
struct CampaignArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Algorithms to run (repeat the flag or separate with commas).
    #[arg(long = "algo", value_delimiter = ',', required = true)]
    algos: Vec<String>,
    /// Suite functions to run (default: the whole suite).
    #[arg(long = "function", value_delimiter = ',')]
    functions: Vec<String>,
    /// Runs per (algorithm, function) cell.
    #[arg(long, default_value_t = 51)]
    runs: u32,
    /// Campaign seed base; cell seeds derive from it deterministically.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Worker threads.
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
    /// External per-run results to include in the rank table, as
    /// name=path.csv with rows `function_id,final_fitness`.
    #[arg(long = "external")]
    external: Vec<String>,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> ExitCode {
    // Usage errors (including clap's own parse failures) exit 1; runtime
    // failures exit 2.
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // help/version requests are successes
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Run(args) => cmd_run(args),
        Command::Campaign(args) => cmd_campaign(args),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            let usage = err.downcast_ref::<UsageError>().is_some();
            ExitCode::from(if usage { 1 } else { 2 })
        }
    }
}

/// Marker for errors caused by bad invocations rather than runtime failures.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage_error<T>(message: String) -> Result<T> {
    Err(UsageError(message).into())
}

fn load_setup(common: &CommonArgs) -> Result<(HarnessConfig, PathBuf)> {
    let config = match &common.config {
        Some(path) => {
            HarnessConfig::load(path).map_err(|e| UsageError(format!("{e:#}")))?
        }
        None => HarnessConfig::default(),
    };
    let out_dir = std::env::var_os("FWA_OUT")
        .map(PathBuf::from)
        .unwrap_or_else(|| common.out.clone());
    Ok((config, out_dir))
}

fn cmd_run(args: RunArgs) -> Result<ExitCode> {
    let (mut config, out_dir) = load_setup(&args.common)?;
    config.evals_override = args.common.evals;
    let (variant, _) = match parse_algorithm(&args.algo) {
        Ok(parsed) => parsed,
        Err(err) => return usage_error(format!("{err:#}")),
    };
    let algo_config = config
        .algorithm_config(&args.algo)
        .map_err(|e| UsageError(format!("{e:#}")))?;
    let spec = match build_function(
        &config,
        args.common.dim,
        args.common.suite_seed,
        &args.function,
    ) {
        Ok(spec) => spec,
        Err(err) => return usage_error(format!("{err:#}")),
    };

    let result = fwa::run(variant, &algo_config, &spec, args.seed)?;
    let dir = out_dir.join(&args.algo).join(spec.name());
    output::write_run_files(&dir, &format!("run_{}", args.seed), &result)?;
    println!(
        "{} on {} (D={}, seed {}): best {:e} after {} evaluations ({:.2}s)",
        result.algorithm,
        result.function,
        result.dim,
        result.seed,
        result.best_fitness,
        result.evals_used,
        result.wall_time
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_campaign(args: CampaignArgs) -> Result<ExitCode> {
    let (config, out_dir) = load_setup(&args.common)?;
    for spelling in &args.algos {
        if parse_algorithm(spelling).is_err() {
            return usage_error(format!(
                "unknown algorithm {spelling:?}; choices: {}",
                ALGORITHM_CHOICES.join(", ")
            ));
        }
    }
    let functions = if args.functions.is_empty() {
        fwa::objectives::SUITE_FUNCTION_NAMES
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        for name in &args.functions {
            if !fwa::objectives::SUITE_FUNCTION_NAMES.contains(&name.as_str()) {
                return usage_error(format!(
                    "unknown function {name:?}; choices: {}",
                    fwa::objectives::SUITE_FUNCTION_NAMES.join(", ")
                ));
            }
        }
        args.functions.clone()
    };
    if args.runs == 0 {
        return usage_error("campaign needs at least one run per cell".to_string());
    }

    let mut external = Vec::new();
    for entry in &args.external {
        let Some((name, path)) = entry.split_once('=') else {
            return usage_error(format!("--external expects name=path, got {entry:?}"));
        };
        let parsed = output::read_external_results(std::path::Path::new(path))
            .with_context(|| format!("external results {name}"))?;
        external.push((name.to_string(), parsed));
    }

    let plan = campaign::CampaignPlan {
        algorithms: args.algos.clone(),
        functions,
        dim: args.common.dim,
        runs: args.runs,
        seed_base: args.seed,
        suite_seed: args.common.suite_seed,
        jobs: args.jobs,
        external,
    };
    let mut config = config;
    config.evals_override = args.common.evals;

    let outcome = campaign::execute(&plan, &config, &out_dir)?;
    campaign::write_reports(&plan, &config, &outcome, &out_dir)?;

    let total_cells = plan.algorithms.len() * plan.functions.len() * plan.runs as usize;
    println!(
        "campaign complete: {} cells, {} failures, reports in {}",
        total_cells,
        outcome.failures.len(),
        out_dir.join("reports").display()
    );
    if outcome.failures.is_empty() {
        Ok(ExitCode::SUCCESS)
    } else {
        for failure in &outcome.failures {
            eprintln!("failed cell: {failure}");
        }
        Ok(ExitCode::from(2))
    }
}
