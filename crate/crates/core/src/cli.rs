//! Command-line interface.

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::Config;
use crate::error::{Error, Result};
use crate::optimize::{find_strategy, optimal_capacity_curve, uniform_strategy, Constraints, Objective};
use crate::rational::{self, Rational};
use crate::report;
use crate::search::{search, SearchOptions};

#[derive(Debug, Parser)]
#[command(
    name = "quorumkit",
    version,
    about = "Analyze, optimize and search read-write quorum systems"
)]
pub struct Cli {
    /// Output format for analyze, strategy and search.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fault tolerance and load-optimal metrics of the configured system.
    Analyze {
        config: PathBuf,
        /// Resilience of the strategy's quorums.
        #[arg(long, default_value_t = 0)]
        f: usize,
    },
    /// Optimal strategy for an objective under optional limits.
    Strategy {
        config: PathBuf,
        #[command(flatten)]
        optimize: OptimizeArgs,
        #[arg(long, default_value_t = 0)]
        f: usize,
    },
    /// Search duplicate-free read expressions over the configured nodes.
    Search {
        config: PathBuf,
        #[command(flatten)]
        optimize: OptimizeArgs,
        #[arg(long, default_value_t = 0)]
        f: usize,
        /// Minimum fault tolerance of the returned system.
        #[arg(long = "fault-tolerance", default_value_t = 0)]
        fault_tolerance: usize,
        /// Wall-clock limit in seconds; the best system so far is returned.
        #[arg(long)]
        timeout: Option<f64>,
        /// Maximum number of candidates to examine.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// CSV of capacity against read fraction.
    Curve {
        config: PathBuf,
        /// Number of intervals on [0, 1].
        #[arg(long, default_value_t = 10)]
        points: usize,
        /// Keep the workload's load-optimal strategy instead of
        /// re-optimizing at every read fraction.
        #[arg(long)]
        fixed: bool,
        #[arg(long, default_value_t = 0)]
        f: usize,
    },
    /// CSV of per-node, per-quorum throughput at peak load.
    Breakdown {
        config: PathBuf,
        /// Use uniform distributions over the minimal quorums.
        #[arg(long)]
        uniform: bool,
        #[arg(long, default_value_t = 0)]
        f: usize,
    },
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    /// Metric to minimize: load, latency or network.
    #[arg(long, default_value = "load")]
    pub optimize: Objective,
    /// Minimum capacity in operations per second.
    #[arg(long)]
    pub capacity_limit: Option<String>,
    /// Maximum expected latency in seconds.
    #[arg(long)]
    pub latency_limit: Option<String>,
    /// Maximum expected number of nodes contacted per operation.
    #[arg(long)]
    pub network_limit: Option<String>,
}

impl OptimizeArgs {
    fn constraints(&self) -> Result<Constraints> {
        let limit = |flag: &str, value: &Option<String>| -> Result<Option<Rational>> {
            value
                .as_deref()
                .map(|text| {
                    rational::parse_decimal(text)
                        .ok_or_else(|| Error::InvalidArgument(format!("--{flag} expects a number, got `{text}`")))
                })
                .transpose()
        };
        let constraints = Constraints {
            capacity_limit: limit("capacity-limit", &self.capacity_limit)?,
            latency_limit: limit("latency-limit", &self.latency_limit)?,
            network_limit: limit("network-limit", &self.network_limit)?,
        };
        constraints.validate()?;
        Ok(constraints)
    }
}

/// Process exit status for an error.
pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::Parse { .. }
        | Error::Domain(_)
        | Error::UniverseTooLarge { .. }
        | Error::UnknownNode(_)
        | Error::InvalidNode(_)
        | Error::InvalidArgument(_)
        | Error::InvalidWorkload(_)
        | Error::IntersectionViolation { .. }
        | Error::Config(_) => 2,
        Error::Infeasible(_) | Error::NoResilientQuorum { .. } => 3,
        Error::NoFeasibleCandidate { .. } => 4,
        Error::SolverFailure(_) => 1,
    }
}

/// Runs one command, writing its document to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let text = render(cli)?;
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|e| Error::Config(format!("cannot write output: {e}")))
}

fn render(cli: &Cli) -> Result<String> {
    let json = cli.format == Format::Json;
    match &cli.command {
        Command::Analyze { config, f } => {
            let config = Config::from_path(config)?;
            let qs = config.quorum_system()?;
            let sigma = find_strategy(&qs, &config.workload, Objective::Load, &Constraints::default(), *f)?;
            Ok(if json {
                report::to_json(&report::AnalyzeReport::new(&qs, &sigma, &config.workload))
            } else {
                report::analyze_table(&qs, &sigma, &config.workload)
            })
        }
        Command::Strategy { config, optimize, f } => {
            let constraints = optimize.constraints()?;
            let config = Config::from_path(config)?;
            let qs = config.quorum_system()?;
            let sigma = find_strategy(&qs, &config.workload, optimize.optimize, &constraints, *f)?;
            Ok(if json {
                report::to_json(&report::StrategyReport::new(&qs, &sigma, &config.workload))
            } else {
                report::strategy_table_text(&qs, &sigma, &config.workload)
            })
        }
        Command::Search {
            config,
            optimize,
            f,
            fault_tolerance,
            timeout,
            budget,
        } => {
            let timeout = match timeout {
                Some(t) if !(t.is_finite() && *t > 0.0) => {
                    return Err(Error::InvalidArgument(
                        "--timeout must be a positive number of seconds".into(),
                    ))
                }
                Some(t) => Some(Duration::from_secs_f64(*t)),
                None => None,
            };
            let options = SearchOptions {
                objective: optimize.optimize,
                constraints: optimize.constraints()?,
                min_fault_tolerance: *fault_tolerance,
                f: *f,
                timeout,
                budget: *budget,
            };
            let config = Config::from_path(config)?;
            let result = search(&config.nodes, &config.workload, &options)?;
            Ok(if json {
                report::to_json(&report::SearchReport::new(&result, options.objective, &config.workload))
            } else {
                report::search_table(&result, options.objective, &config.workload)
            })
        }
        Command::Curve {
            config,
            points,
            fixed,
            f,
        } => {
            if *points == 0 {
                return Err(Error::InvalidArgument("--points must be at least 1".into()));
            }
            let config = Config::from_path(config)?;
            let qs = config.quorum_system()?;
            let grid: Vec<Rational> = (0..=*points)
                .map(|i| Rational::new((i as i64).into(), (*points as i64).into()))
                .collect();
            let curve = if *fixed {
                let sigma = find_strategy(&qs, &config.workload, Objective::Load, &Constraints::default(), *f)?;
                sigma.capacity_curve(&qs, &grid)
            } else {
                optimal_capacity_curve(&qs, &grid, *f)?
            };
            Ok(report::curve_csv(&curve))
        }
        Command::Breakdown { config, uniform, f } => {
            let config = Config::from_path(config)?;
            let qs = config.quorum_system()?;
            let sigma = if *uniform {
                uniform_strategy(&qs, *f)?
            } else {
                find_strategy(&qs, &config.workload, Objective::Load, &Constraints::default(), *f)?
            };
            Ok(report::breakdown_csv(&qs, &sigma, &config.workload))
        }
    }
}

/// Parses `args`, runs the command and returns the process exit status.
/// Documents go to `out`, diagnostics to `err`.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if code == 0 {
                out.write_all(rendered.as_bytes())
            } else {
                err.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
