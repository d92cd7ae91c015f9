//! `pmasched` — solve, generate and benchmark single-machine scheduling
//! instances where jobs wear the machine down and maintenance restores it.
//!
//! Exit codes: 0 on success, 2 when the input instance is infeasible
//! (some job exceeds the maintenance cap), 1 for I/O, parse and parameter
//! errors.

mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pmasched::{
    build_reduction, evaluate, random_instance, solve_a1, solve_brute_force, solve_spt,
    solve_subset_dp, tight_instance, ApproxError, ExactError, Instance, ModelError,
    PartitionInstance, ReductionError, Schedule, BRUTE_FORCE_DEFAULT_LIMIT,
};
use serde::{Deserialize, Serialize};

use report::{emit_csv, BenchRow};

#[derive(Debug)]
enum CliError {
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    Parse {
        path: PathBuf,
        source: serde_json::Error,
    },
    Encode(serde_json::Error),
    Model(ModelError),
    Exact(ExactError),
    Approx(ApproxError),
    Reduction(ReductionError),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io { path, source } => write!(f, "{}: {}", path.display(), source),
            CliError::Parse { path, source } => write!(f, "{}: {}", path.display(), source),
            CliError::Encode(source) => write!(f, "could not encode output: {}", source),
            CliError::Model(source) => source.fmt(f),
            CliError::Exact(source) => source.fmt(f),
            CliError::Approx(source) => source.fmt(f),
            CliError::Reduction(source) => source.fmt(f),
        }
    }
}

impl std::error::Error for CliError {}

impl From<ModelError> for CliError {
    fn from(source: ModelError) -> Self {
        CliError::Model(source)
    }
}

impl From<ExactError> for CliError {
    fn from(source: ExactError) -> Self {
        CliError::Exact(source)
    }
}

impl From<ApproxError> for CliError {
    fn from(source: ApproxError) -> Self {
        CliError::Approx(source)
    }
}

impl From<ReductionError> for CliError {
    fn from(source: ReductionError) -> Self {
        CliError::Reduction(source)
    }
}

impl CliError {
    /// Feasibility failures get their own exit code so shell harnesses
    /// can tell "this instance cannot be scheduled" from plumbing errors.
    fn exit_code(&self) -> u8 {
        let infeasible = |m: &ModelError| matches!(m, ModelError::InfeasibleJob { .. });
        let is_feasibility_failure = match self {
            CliError::Model(m) => infeasible(m),
            CliError::Exact(ExactError::Model(m)) => infeasible(m),
            CliError::Approx(ApproxError::Model(m)) => infeasible(m),
            CliError::Reduction(ReductionError::Model(m)) => infeasible(m),
            _ => false,
        };
        if is_feasibility_failure {
            2
        } else {
            1
        }
    }
}

#[derive(Parser)]
#[command(
    name = "pmasched",
    version,
    about = "Schedule jobs on a machine that wears down and needs maintenance"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance file and print the schedule plus a summary.
    Solve(SolveArgs),
    /// Generate instance files.
    #[command(subcommand)]
    Generate(GenerateCmd),
    /// Run solvers over a directory of instances and emit a ratio CSV.
    Bench(BenchArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance JSON file.
    path: PathBuf,
    /// Solver to run.
    #[arg(long, value_enum, default_value_t = Algorithm::A1)]
    algorithm: Algorithm,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Algorithm {
    /// Shortest processing time first.
    Spt,
    /// Greedy wear-split heuristic (within a factor of two).
    A1,
    /// Pruned permutation search, small instances only.
    ExactBf,
    /// Subset dynamic program, up to 24 jobs.
    ExactDp,
}

impl Algorithm {
    fn name(self) -> &'static str {
        match self {
            Algorithm::Spt => "spt",
            Algorithm::A1 => "a1",
            Algorithm::ExactBf => "exact-bf",
            Algorithm::ExactDp => "exact-dp",
        }
    }
}

#[derive(Subcommand)]
enum GenerateCmd {
    /// Uniform random jobs; the maintenance cap equals the delta bound.
    Random(RandomArgs),
    /// Two-job family on which the greedy split costs twice the optimum.
    Tight(TightArgs),
    /// Scheduling instance that encodes a number-partition puzzle.
    Reduction(ReductionArgs),
}

#[derive(Args)]
struct RandomArgs {
    /// Number of jobs.
    #[arg(long)]
    n: usize,
    /// Upper bound for processing times.
    #[arg(long, default_value_t = 20)]
    max_p: u64,
    /// Upper bound for deterioration amounts.
    #[arg(long, default_value_t = 20)]
    max_delta: u64,
    /// RNG seed; equal seeds give byte-identical output.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TightArgs {
    /// Family parameter, at least 2.
    #[arg(long)]
    lambda: u64,
    /// Write here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReductionArgs {
    /// JSON file {"x":[..]} with the positive values to split in half.
    #[arg(long)]
    partition_file: PathBuf,
    /// Instance file to write; metadata lands next to it as *.meta.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Directory of instance JSON files.
    dir: PathBuf,
    /// Solvers to run on every instance.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Algorithm::A1, Algorithm::Spt])]
    algorithms: Vec<Algorithm>,
    /// Optimum provider for the ratio column.
    #[arg(long, value_enum, default_value_t = Oracle::ExactDp)]
    oracle: Oracle,
    /// Write the CSV here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Oracle {
    /// Subset dynamic program provides the exact optimum.
    ExactDp,
    /// Leave the optimum and ratio columns empty.
    None,
}

/// On-disk format for partition inputs.
#[derive(Deserialize)]
struct PartitionFile {
    x: Vec<u64>,
}

/// Sidecar written next to a generated reduction instance.
#[derive(Serialize)]
struct ReductionMeta {
    #[serde(rename = "M")]
    m: u64,
    #[serde(rename = "Q0")]
    q0: u64,
    #[serde(rename = "Q")]
    q: u64,
    #[serde(rename = "B")]
    b: u64,
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run() -> Result<(), CliError> {
    match Cli::parse().command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Generate(cmd) => cmd_generate(&cmd),
        Command::Bench(args) => cmd_bench(&args),
    }
}

fn read_instance(path: &Path) -> Result<Instance, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let instance: Instance = serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.to_path_buf(),
        source,
    })?;
    instance.validate()?;
    Ok(instance)
}

fn solve_with(algorithm: Algorithm, instance: &Instance) -> Result<Schedule, CliError> {
    match algorithm {
        Algorithm::Spt => Ok(solve_spt(instance)?),
        Algorithm::A1 => Ok(solve_a1(instance)?.schedule),
        Algorithm::ExactBf => {
            Ok(solve_brute_force(instance, BRUTE_FORCE_DEFAULT_LIMIT)?.schedule(instance)?)
        }
        Algorithm::ExactDp => Ok(solve_subset_dp(instance)?.schedule(instance)?),
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), CliError> {
    let instance = read_instance(&args.path)?;
    instance.check_feasible()?;
    let schedule = solve_with(args.algorithm, &instance)?;
    let evaluation = evaluate(&instance, &schedule)?;
    println!(
        "{}",
        serde_json::to_string(&schedule).map_err(CliError::Encode)?
    );
    println!("algorithm {}", args.algorithm.name());
    println!("n {}", instance.n());
    println!("total {}", evaluation.total);
    println!("makespan {}", evaluation.makespan);
    println!("feasible {}", evaluation.feasible);
    Ok(())
}

fn write_json_line<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string(value).map_err(CliError::Encode)?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_generate(cmd: &GenerateCmd) -> Result<(), CliError> {
    match cmd {
        GenerateCmd::Random(args) => {
            let instance = random_instance(args.n, args.max_p, args.max_delta, args.seed);
            write_json_line(args.out.as_deref(), &instance)
        }
        GenerateCmd::Tight(args) => {
            let instance = tight_instance(args.lambda)?;
            write_json_line(args.out.as_deref(), &instance)
        }
        GenerateCmd::Reduction(args) => {
            let text = fs::read_to_string(&args.partition_file).map_err(|source| CliError::Io {
                path: args.partition_file.clone(),
                source,
            })?;
            let file: PartitionFile =
                serde_json::from_str(&text).map_err(|source| CliError::Parse {
                    path: args.partition_file.clone(),
                    source,
                })?;
            let partition = PartitionInstance::new(file.x)?;
            let artifacts = build_reduction(&partition)?;
            write_json_line(Some(&args.out), &artifacts.instance)?;
            let meta = ReductionMeta {
                m: artifacts.m_value,
                q0: artifacts.q0,
                q: artifacts.q,
                b: artifacts.partition.b(),
            };
            write_json_line(Some(&args.out.with_extension("meta.json")), &meta)
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), CliError> {
    let entries = fs::read_dir(&args.dir).map_err(|source| CliError::Io {
        path: args.dir.clone(),
        source,
    })?;
    let mut paths: Vec<PathBuf> = entries
        .filter_map(|entry| entry.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|ext| ext == "json"))
        .collect();
    paths.sort();

    let mut rows = Vec::new();
    for path in paths {
        let instance = match read_instance(&path).and_then(|inst| {
            inst.check_feasible()?;
            Ok(inst)
        }) {
            Ok(instance) => instance,
            Err(err) => {
                eprintln!("warning: skipping {}: {}", path.display(), err);
                continue;
            }
        };
        let instance_id = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        let optimum = match args.oracle {
            Oracle::ExactDp => match solve_subset_dp(&instance) {
                Ok(result) => Some(result.best_total),
                Err(err) => {
                    eprintln!(
                        "warning: skipping {}: oracle failed: {}",
                        path.display(),
                        err
                    );
                    continue;
                }
            },
            Oracle::None => None,
        };
        for &algorithm in &args.algorithms {
            let started = Instant::now();
            let schedule = match solve_with(algorithm, &instance) {
                Ok(schedule) => schedule,
                Err(err) => {
                    eprintln!(
                        "warning: {} on {}: {}",
                        algorithm.name(),
                        path.display(),
                        err
                    );
                    continue;
                }
            };
            let wall_ms = started.elapsed().as_millis();
            let total = evaluate(&instance, &schedule)?.total;
            rows.push(BenchRow {
                instance_id: instance_id.clone(),
                n: instance.n(),
                algorithm: algorithm.name(),
                total,
                optimum,
                wall_ms,
            });
        }
    }

    let csv = emit_csv(rows);
    match args.out.as_deref() {
        Some(path) => fs::write(path, csv).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{csv}");
            Ok(())
        }
    }
}
