use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use swarm_core::harness::experiment::{run_experiment, ExperimentSpec, SweepValue};
use swarm_core::harness::metrics::{write_metrics, MetricsFormat, MetricsSummary};
use swarm_core::harness::{load_config, parse_config, render, write_trace, HarnessError};
use swarm_core::sim::{SimError, Simulation};

#[derive(Parser)]
#[command(name = "swarm", version, about = "Signal-based swarm encapsulation simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check a config against every guarantee bound.
    Validate {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Run one simulation.
    Run {
        config: PathBuf,
        /// Write one JSON record per tick.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Write an SVG of all trajectories.
        #[arg(long)]
        render: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        /// Run even if bounds fail.
        #[arg(long)]
        allow_bound_violations: bool,
    },
    /// Run an experiment spec.
    Batch {
        spec: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Sweep one parameter of a config from the command line.
    Sweep {
        config: PathBuf,
        /// Parameter path, e.g. noise.level or targets[*].required_robots.
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        #[arg(long, default_value_t = 100)]
        runs: usize,
        #[arg(long)]
        allow_bound_violations: bool,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(clap::Args)]
struct OutputArgs {
    /// Metrics CSV path; printed to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the summary as JSON.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Master seed.
    #[arg(long)]
    seed: Option<u64>,
}

const EXIT_RUNTIME: u8 = 1;
const EXIT_INVALID: u8 = 2;

/// Failure carrying the exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let error: anyhow::Error = e.into();
        let code = match error.downcast_ref::<HarnessError>() {
            Some(HarnessError::Parse { .. } | HarnessError::Config(_) | HarnessError::Spec(_) | HarnessError::Sweep { .. }) => {
                EXIT_INVALID
            }
            Some(HarnessError::Sim(SimError::Bounds(_) | SimError::Config(_) | SimError::Placement(_))) => EXIT_INVALID,
            _ => match error.downcast_ref::<SimError>() {
                Some(_) => EXIT_INVALID,
                None => EXIT_RUNTIME,
            },
        };
        Failure { code, error }
    }
}

fn invalid(msg: String) -> Failure {
    Failure { code: EXIT_INVALID, error: anyhow::anyhow!(msg) }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse().command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Validate { config, format, seed } => validate(&config, format, seed),
        Command::Run { config, trace, render, seed, allow_bound_violations } => {
            run(&config, trace.as_deref(), render.as_deref(), seed, allow_bound_violations)
        }
        Command::Batch { spec, out } => {
            let mut spec = ExperimentSpec::load(&spec)?;
            if let Some(s) = out.seed {
                spec.master_seed = s;
            }
            emit(&run_experiment(&spec, out.workers)?, &out)
        }
        Command::Sweep { config, param, values, runs, allow_bound_violations, out } => {
            let base = parse_config(&config)?;
            let values = values
                .iter()
                .map(|v| v.trim().parse::<f64>().map_or_else(|_| SweepValue::Text(v.trim().to_string()), SweepValue::Number))
                .collect();
            let mut spec = ExperimentSpec::new(format!("sweep {param}"), base).with_axis(&param, values);
            spec.runs_per_point = runs;
            spec.allow_bound_violations = allow_bound_violations;
            spec.master_seed = out.seed.unwrap_or(spec.base.seed);
            emit(&run_experiment(&spec, out.workers)?, &out)
        }
    }
}

fn validate(path: &Path, format: Format, seed: Option<u64>) -> Result<(), Failure> {
    let mut loaded = load_config(path)?;
    if let Some(s) = seed {
        loaded.config.seed = s;
        loaded.report = swarm_core::bounds::validate_config(&loaded.config);
    }
    match format {
        Format::Text => print!("{}", loaded.report.to_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(&loaded.report)?),
    }
    if loaded.report.passed() {
        Ok(())
    } else {
        let failed: Vec<&str> = loaded.report.failures().map(|c| c.id.as_str()).collect();
        Err(invalid(format!("bounds failed: {}", failed.join(", "))))
    }
}

fn run(path: &Path, trace: Option<&Path>, render_to: Option<&Path>, seed: Option<u64>, allow: bool) -> Result<(), Failure> {
    let mut config = parse_config(path)?;
    if let Some(s) = seed {
        config.seed = s;
    }
    config.allow_bound_violations |= allow;
    let sim = Simulation::new(&config)?;
    let initial = sim.world().clone();
    let keep = trace.is_some() || render_to.is_some();
    let result = sim.run(config.max_ticks, keep);
    if let Some(p) = trace {
        write_trace(result.trace.as_deref().unwrap_or_default(), p)?;
    }
    if let Some(p) = render_to {
        render::render_trajectories(&initial, result.trace.as_deref().unwrap_or_default(), p)?;
    }
    let mut summary = result.clone();
    summary.trace = None;
    println!("{}", serde_json::to_string_pretty(&summary).context("serializing result")?);
    Ok(())
}

fn emit(summary: &MetricsSummary, out: &OutputArgs) -> Result<(), Failure> {
    match &out.out {
        Some(p) => write_metrics(summary, p, MetricsFormat::Csv)?,
        None => print!("{}", summary.to_csv_string()),
    }
    if let Some(p) = &out.json {
        write_metrics(summary, p, MetricsFormat::Json)?;
    }
    Ok(())
}
