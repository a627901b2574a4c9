//! Command-line front end. The `nrm-lab` binary only parses arguments and
//! forwards here.
//!
//! Exit codes: 0 on success, 2 for unreadable or invalid input, 3 for
//! failures while computing or writing results.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::arrivals::{sample_path, ArrivalPath};
use crate::harness::{run_experiment, summarize, write_csv, ExperimentSpec, HarnessError};
use crate::lp::solve_dlp;
use crate::model::{capacity_rate, is_nondegenerate, Instance, DEFAULT_DEGENERACY_TOL};
use crate::policies::{run_policy, write_trace_csv, PolicyKind, RunOptions};
use crate::rng::ThinningStream;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "nrm-lab",
    version,
    about = "Network revenue management re-solving heuristics and regret experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate an instance file and print its dimensions.
    Validate { instance: PathBuf },
    /// Solve the DLP of an instance and classify its solution.
    SolveDlp { instance: PathBuf },
    /// Run an experiment spec and write the regret table as CSV.
    Run {
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, env = "NRM_LAB_WORKERS")]
        workers: Option<usize>,
        /// Overrides the spec's base seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sample one arrival path and dump it as JSON lines.
    SamplePath {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Replay one policy on a dumped path and emit its event trace as CSV.
    Replay {
        instance: PathBuf,
        path: PathBuf,
        policy: String,
        /// Seed of the thinning stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trace destination; stdout when omitted.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl ToString) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.to_string(),
        }
    }

    fn runtime(message: impl ToString) -> Self {
        Self {
            code: EXIT_RUNTIME,
            message: message.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    Instance::from_json_str(&read(path)?)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x}")).collect();
    format!("({})", parts.join(", "))
}

pub fn execute(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let mut text = String::new();
    match cli.command {
        Command::Validate { instance } => {
            let inst = load_instance(&instance)?;
            writeln!(
                text,
                "valid: n={} classes, m={} resources, T={}, b={}",
                inst.num_classes(),
                inst.num_resources(),
                inst.horizon(),
                fmt_vec(capacity_rate(&inst).rates())
            )
            .ok();
        }
        Command::SolveDlp { instance } => {
            let inst = load_instance(&instance)?;
            let dlp = solve_dlp(&inst).map_err(CliError::runtime)?;
            let report = is_nondegenerate(&inst, &dlp.solution, DEFAULT_DEGENERACY_TOL)
                .map_err(CliError::runtime)?;
            writeln!(text, "v_dlp = {}", dlp.value).ok();
            writeln!(text, "x* = {}", fmt_vec(&dlp.solution.x)).ok();
            writeln!(text, "binding rows = {:?}", dlp.solution.binding_rows).ok();
            writeln!(text, "{report}").ok();
        }
        Command::Run {
            spec,
            out: dest,
            workers,
            seed,
        } => {
            let mut spec = ExperimentSpec::from_json_str(&read(&spec)?).map_err(CliError::input)?;
            if let Some(s) = seed {
                spec.base_seed = s;
            }
            let table = run_experiment(&spec, workers).map_err(|e| match e {
                HarnessError::Spec(_) | HarnessError::Model(_) | HarnessError::Setup { .. } => {
                    CliError::input(e)
                }
                _ => CliError::runtime(e),
            })?;
            write_csv(&table, &dest).map_err(CliError::runtime)?;
            writeln!(
                text,
                "wrote {} rows to {}",
                table.sweeps.len() * table.policies.len(),
                dest.display()
            )
            .ok();
            for line in summarize(&table) {
                writeln!(text, "{line}").ok();
            }
        }
        Command::SamplePath {
            instance,
            seed,
            out: dest,
        } => {
            let inst = load_instance(&instance)?;
            let path = sample_path(&inst, seed);
            let file = fs::File::create(&dest)
                .map_err(|e| CliError::runtime(format!("{}: {e}", dest.display())))?;
            let mut w = io::BufWriter::new(file);
            path.write_jsonl(&mut w).map_err(CliError::runtime)?;
            w.flush().map_err(CliError::runtime)?;
            writeln!(text, "wrote {} events to {}", path.len(), dest.display()).ok();
        }
        Command::Replay {
            instance,
            path,
            policy,
            seed,
            trace,
        } => {
            let kind: PolicyKind = policy.parse().map_err(CliError::input)?;
            let inst = load_instance(&instance)?;
            let file = fs::File::open(&path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let arrivals = ArrivalPath::read_jsonl(
                BufReader::new(file),
                inst.num_classes(),
                inst.horizon(),
                seed,
            )
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            let mut thinning = ThinningStream::new(seed, kind.default_id());
            let res = run_policy(
                kind,
                &inst,
                &arrivals,
                &mut thinning,
                RunOptions { trace: true },
            )
            .map_err(CliError::runtime)?;
            let events = res.trace.unwrap_or_default();
            match trace {
                Some(dest) => {
                    let file = fs::File::create(&dest)
                        .map_err(|e| CliError::runtime(format!("{}: {e}", dest.display())))?;
                    write_trace_csv(&events, inst.num_resources(), io::BufWriter::new(file))
                        .map_err(CliError::runtime)?;
                    writeln!(
                        text,
                        "{kind}: revenue {} over {} arrivals",
                        res.revenue,
                        events.len()
                    )
                    .ok();
                }
                None => {
                    write_trace_csv(&events, inst.num_resources(), &mut *out)
                        .map_err(CliError::runtime)?;
                }
            }
        }
    }
    out.write_all(text.as_bytes()).map_err(CliError::runtime)
}
