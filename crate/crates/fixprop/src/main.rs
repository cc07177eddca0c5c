//! Command-line front end: solve one instance, sweep a batch, re-aggregate a
//! results file, or solve just the LP relaxation.

use clap::{Args, Parser, Subcommand};
use fixprop::folp::{pdhg_solve, FolpConfig, LpStatus, Residuals};
use fixprop::harness::{
    aggregate, parse_config_matrix, parse_jsonl, render_jsonl, run_batch, write_aggregate_csv,
    BatchOptions,
};
use fixprop::model::read_mps_file;
use fixprop::search::{run_heuristic, HeuristicConfig, Strategy, Tiebreak};
use serde::Serialize;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_NO_SOLUTION: u8 = 1;
const EXIT_INPUT_ERROR: u8 = 2;

#[derive(Parser)]
#[command(
    name = "fixprop",
    version,
    about = "LP-guided fix-and-propagate primal heuristic for mixed-integer programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the heuristic on one instance and print its report as JSON.
    Solve(SolveArgs),
    /// Sweep configurations over instances and permutations; write JSONL and
    /// an aggregate CSV.
    Batch(BatchArgs),
    /// Recompute the aggregate CSV from a JSONL results file.
    Aggregate(AggregateArgs),
    /// Solve only the LP relaxation and print solver diagnostics.
    Lp(LpArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// MPS or gzipped MPS file.
    instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Strategy::Frac)]
    strategy: Strategy,
    #[arg(long, value_enum, default_value_t = Tiebreak::None)]
    tiebreak: Tiebreak,
    /// Tolerance of the guiding LP.
    #[arg(long, default_value_t = 1e-4)]
    init_tol: f64,
    /// Tolerance of the LP over the fixed integers.
    #[arg(long, default_value_t = 1e-8)]
    final_tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1000)]
    backtrack_limit: u64,
    /// Defaults to 100 nodes per integer variable.
    #[arg(long)]
    node_limit: Option<u64>,
    /// Wall-clock budget in seconds (makes runs machine-dependent).
    #[arg(long)]
    time_limit: Option<f64>,
    /// Include wall-clock timings in the report (breaks byte-reproducibility).
    #[arg(long)]
    timings: bool,
    /// Known objective to measure the gap against (input sense).
    #[arg(long)]
    reference: Option<f64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Also write the solution vector (JSON) here.
    #[arg(long)]
    solution: Option<PathBuf>,
}

#[derive(Args)]
struct BatchArgs {
    /// MPS files and/or directories to scan for *.mps / *.mps.gz.
    #[arg(required = true)]
    instances: Vec<PathBuf>,
    /// Config matrix file (`key = v1, v2, ...` lines). Defaults to one run
    /// with default settings.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Number of permutation seeds per instance (seed 0 = identity).
    #[arg(long, default_value_t = 1)]
    permutations: u64,
    #[arg(long, default_value_t = default_threads())]
    threads: usize,
    /// Skip wall-clock timings in the records.
    #[arg(long)]
    no_timings: bool,
    /// JSONL output path, written incrementally as runs finish.
    #[arg(long, default_value = "results.jsonl")]
    output: PathBuf,
    /// Aggregate CSV output path.
    #[arg(long, default_value = "aggregate.csv")]
    aggregate: PathBuf,
}

#[derive(Args)]
struct AggregateArgs {
    /// JSONL results file produced by `batch`.
    records: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct LpArgs {
    /// MPS or gzipped MPS file.
    instance: PathBuf,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    time_limit: Option<f64>,
    /// Write the summary here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn emit(text: &str, output: Option<&Path>) -> Result<(), String> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{text}");
            std::io::stdout().flush().map_err(|e| e.to_string())
        }
    }
}

fn input_error(message: String) -> ExitCode {
    eprintln!("error: {message}");
    ExitCode::from(EXIT_INPUT_ERROR)
}

fn run_solve(args: &SolveArgs) -> ExitCode {
    let instance = match read_mps_file(&args.instance) {
        Ok(i) => i,
        Err(e) => return input_error(format!("{}: {e}", args.instance.display())),
    };
    let config = HeuristicConfig {
        strategy: args.strategy,
        tiebreak: args.tiebreak,
        init_tolerance: args.init_tol,
        final_tolerance: args.final_tol,
        seed: args.seed,
        backtrack_limit: args.backtrack_limit,
        node_limit: args.node_limit,
        time_limit: args.time_limit,
        include_timings: args.timings,
    };
    if let Err(e) = config.validate() {
        return input_error(e.to_string());
    }
    let result = match run_heuristic(&instance, &config, args.reference) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NO_SOLUTION);
        }
    };
    let mut text = serde_json::to_string_pretty(&result.report).expect("reports serialize");
    text.push('\n');
    if let Err(e) = emit(&text, args.output.as_deref()) {
        return input_error(e);
    }
    if let Some(path) = &args.solution {
        if let Some(solution) = &result.solution {
            let mut body = serde_json::to_string_pretty(solution).expect("solutions serialize");
            body.push('\n');
            if let Err(e) = emit(&body, Some(path)) {
                return input_error(e);
            }
        }
    }
    if result.report.found {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_NO_SOLUTION)
    }
}

/// Expands directories into their MPS files (sorted), keeps files as given.
fn discover_instances(paths: &[PathBuf]) -> Result<Vec<PathBuf>, String> {
    let mut found = Vec::new();
    for path in paths {
        if path.is_dir() {
            let mut entries: Vec<PathBuf> = std::fs::read_dir(path)
                .map_err(|e| format!("{}: {e}", path.display()))?
                .filter_map(|entry| entry.ok().map(|e| e.path()))
                .filter(|p| {
                    let name = p.file_name().map(|s| s.to_string_lossy()).unwrap_or_default();
                    name.ends_with(".mps") || name.ends_with(".mps.gz")
                })
                .collect();
            entries.sort();
            if entries.is_empty() {
                return Err(format!("{}: no .mps or .mps.gz files", path.display()));
            }
            found.extend(entries);
        } else {
            found.push(path.clone());
        }
    }
    if found.is_empty() {
        return Err("no instances given".to_string());
    }
    Ok(found)
}

fn run_batch_cmd(args: &BatchArgs) -> ExitCode {
    let instances = match discover_instances(&args.instances) {
        Ok(found) => found,
        Err(e) => return input_error(e),
    };
    let configs = match &args.config {
        Some(path) => {
            let text = match std::fs::read_to_string(path) {
                Ok(t) => t,
                Err(e) => return input_error(format!("{}: {e}", path.display())),
            };
            match parse_config_matrix(&text) {
                Ok(c) => c,
                Err(e) => return input_error(format!("{}: {e}", path.display())),
            }
        }
        None => vec![HeuristicConfig::default()],
    };
    let options = BatchOptions {
        instances,
        permutations: args.permutations,
        configs,
        threads: args.threads,
        timings: !args.no_timings,
    };

    let log = match std::fs::File::create(&args.output) {
        Ok(f) => f,
        Err(e) => return input_error(format!("{}: {e}", args.output.display())),
    };
    let mut log = std::io::BufWriter::new(log);
    let records = match run_batch(&options, |report| {
        // Incremental log: one line per finished run, completion order.
        let line = serde_json::to_string(report).expect("reports serialize");
        let _ = writeln!(log, "{line}");
        let _ = log.flush();
    }) {
        Ok(records) => records,
        Err(e) => return input_error(e),
    };
    drop(log);
    // Rewrite in canonical order now that the batch is complete.
    if let Err(e) = std::fs::write(&args.output, render_jsonl(&records)) {
        return input_error(format!("{}: {e}", args.output.display()));
    }
    let csv = write_aggregate_csv(&aggregate(&records));
    if let Err(e) = std::fs::write(&args.aggregate, &csv) {
        return input_error(format!("{}: {e}", args.aggregate.display()));
    }
    let found = records.iter().filter(|r| r.found).count();
    eprintln!(
        "{} runs, {} found; records in {}, table in {}",
        records.len(),
        found,
        args.output.display(),
        args.aggregate.display()
    );
    if found > 0 {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_NO_SOLUTION)
    }
}

fn run_aggregate(args: &AggregateArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&args.records) {
        Ok(t) => t,
        Err(e) => return input_error(format!("{}: {e}", args.records.display())),
    };
    let records = match parse_jsonl(&text) {
        Ok(r) => r,
        Err(e) => return input_error(format!("{}: {e}", args.records.display())),
    };
    let csv = write_aggregate_csv(&aggregate(&records));
    if let Err(e) = emit(&csv, args.output.as_deref()) {
        return input_error(e);
    }
    ExitCode::from(EXIT_OK)
}

/// What `lp` prints: enough to judge a solve without the full vectors.
#[derive(Serialize)]
struct LpSummary {
    instance: String,
    status: LpStatus,
    primal_objective: f64,
    dual_objective: f64,
    residuals: Residuals,
    iterations: u64,
    restarts: usize,
}

fn run_lp(args: &LpArgs) -> ExitCode {
    let instance = match read_mps_file(&args.instance) {
        Ok(i) => i,
        Err(e) => return input_error(format!("{}: {e}", args.instance.display())),
    };
    let mut config = FolpConfig::with_tolerance(args.tol);
    config.time_limit = args.time_limit;
    let solution = match pdhg_solve(&instance, &config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_NO_SOLUTION);
        }
    };
    let summary = LpSummary {
        instance: instance.name().to_string(),
        status: solution.status,
        primal_objective: solution.primal_objective,
        dual_objective: solution.dual_objective,
        residuals: solution.residuals,
        iterations: solution.iterations,
        restarts: solution.restart_merits.len(),
    };
    let mut text = serde_json::to_string_pretty(&summary).expect("summaries serialize");
    text.push('\n');
    if let Err(e) = emit(&text, args.output.as_deref()) {
        return input_error(e);
    }
    if solution.status == LpStatus::Optimal {
        ExitCode::from(EXIT_OK)
    } else {
        ExitCode::from(EXIT_NO_SOLUTION)
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Solve(args) => run_solve(&args),
        Command::Batch(args) => run_batch_cmd(&args),
        Command::Aggregate(args) => run_aggregate(&args),
        Command::Lp(args) => run_lp(&args),
    }
}
