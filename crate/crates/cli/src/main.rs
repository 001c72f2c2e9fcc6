//! `oscm` command-line front end: solve, verify and benchmark instances in
//! the PACE one-sided crossing minimization format.

mod stats;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};

use oscm::crossings::{count_crossings, crossing_matrix, pair_lower_bound};
use oscm::model::{parse_instance, parse_solution, write_solution};
use oscm::reduction::{extract_isolated, ReductionCounts};
use oscm::{
    solve_exact, solve_heuristic, Error, HeuristicConfig, Instance, SolveReport, SolverConfig,
};

use stats::{ErrorRow, Mode, RunStats, Summary};

const EXIT_INVALID_ORDERING: u8 = 1;
const EXIT_BAD_INPUT: u8 = 2;
const EXIT_INTERNAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "oscm",
    version,
    about = "One-sided crossing minimization solver"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an instance and print the ordering of the free layer.
    Solve(SolveArgs),
    /// Print the number of crossings of an ordering.
    Verify {
        instance: PathBuf,
        ordering: PathBuf,
    },
    /// Solve every `.gr` file in a directory and print JSON lines.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Args)]
struct SolverOpts {
    #[arg(long, value_enum, default_value = "exact")]
    mode: Mode,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Local search window; 0 disables local search.
    #[arg(long, default_value_t = 20)]
    window: usize,
    /// Probabilistic-median restarts.
    #[arg(long, default_value_t = 64)]
    restarts: usize,
}

#[derive(Debug, Args)]
struct SolveArgs {
    /// Instance file; standard input when omitted.
    path: Option<PathBuf>,
    #[command(flatten)]
    opts: SolverOpts,
    /// Write run statistics as JSON to this file.
    #[arg(long)]
    stats: Option<PathBuf>,
    /// Do not print the summary line on standard error.
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Args)]
struct BenchArgs {
    dir: PathBuf,
    #[command(flatten)]
    opts: SolverOpts,
}

#[derive(Debug)]
enum Failure {
    Input(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_BAD_INPUT,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Internal(m) => m,
        }
    }
}

fn read_input(path: Option<&Path>) -> Result<String, Failure> {
    let mut text = String::new();
    match path {
        Some(p) => {
            text = fs::read_to_string(p)
                .map_err(|e| Failure::Input(format!("{}: {e}", p.display())))?;
        }
        None => {
            io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        }
    }
    Ok(text)
}

fn load(path: Option<&Path>) -> Result<Instance, Failure> {
    let text = read_input(path)?;
    let name = path.map_or("stdin".into(), |p| p.display().to_string());
    parse_instance(&text).map_err(|e| Failure::Input(format!("{name}: {e}")))
}

fn run(instance: &Instance, opts: &SolverOpts) -> Result<SolveReport, Failure> {
    let internal = |e: Error| Failure::Internal(e.to_string());
    let time_limit = match opts.time_limit {
        Some(t) if !(t.is_finite() && t >= 0.0) => {
            return Err(Failure::Input(format!("invalid time limit {t}")))
        }
        t => t.map(Duration::from_secs_f64),
    };
    match opts.mode {
        Mode::Exact => {
            let config = SolverConfig {
                seed: opts.seed,
                restarts: opts.restarts,
                window: (opts.window > 0).then_some(opts.window),
                time_limit,
                ..SolverConfig::default()
            };
            solve_exact(instance, &config).map_err(internal)
        }
        Mode::Heuristic => {
            let start = Instant::now();
            let config = HeuristicConfig {
                seed: opts.seed,
                restarts: opts.restarts,
            };
            let best = solve_heuristic(instance, &config).map_err(internal)?;
            let lower_bound = pair_lower_bound(&crossing_matrix(instance));
            Ok(SolveReport {
                proven_optimal: lower_bound == best.crossings,
                heuristic_cost: best.crossings,
                lower_bound,
                nodes_explored: 0,
                cuts_added: 0,
                lp_solves: 0,
                reductions: ReductionCounts {
                    isolated: extract_isolated(instance).isolated.len(),
                    ..ReductionCounts::default()
                },
                best,
                wall_time: start.elapsed(),
            })
        }
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<(), Failure> {
    let instance = load(args.path.as_deref())?;
    let report = run(&instance, &args.opts)?;
    let out = write_solution(&instance, &report.best.ordering)
        .map_err(|e| Failure::Internal(e.to_string()))?;
    io::stdout()
        .write_all(out.as_bytes())
        .map_err(|e| Failure::Internal(format!("stdout: {e}")))?;

    let name = args
        .path
        .as_ref()
        .map_or("stdin".into(), |p| p.display().to_string());
    let stats = RunStats::from_report(args.opts.mode, &name, &instance, &report);
    if let Some(path) = &args.stats {
        let json = serde_json::to_string(&stats).expect("stats serialize");
        fs::write(path, json + "\n")
            .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    }
    if !args.quiet {
        eprintln!(
            "c crossings {} lower bound {} {} nodes {} time {:.1} ms",
            stats.final_cost,
            stats.lower_bound,
            if stats.proven_optimal {
                "optimal"
            } else {
                "not proven"
            },
            stats.nodes,
            stats.wall_time_ms,
        );
    }
    Ok(())
}

fn cmd_verify(instance: &Path, ordering: &Path) -> Result<ExitCode, Failure> {
    let inst = load(Some(instance))?;
    let text = read_input(Some(ordering))?;
    match parse_solution(&inst, &text) {
        Ok(ord) => {
            let c = count_crossings(&inst, &ord).map_err(|e| Failure::Internal(e.to_string()))?;
            println!("{c}");
            Ok(ExitCode::SUCCESS)
        }
        Err(e) => {
            eprintln!("invalid ordering: {e}");
            Ok(ExitCode::from(EXIT_INVALID_ORDERING))
        }
    }
}

fn cmd_bench(args: &BenchArgs) -> Result<(), Failure> {
    let entries = fs::read_dir(&args.dir)
        .map_err(|e| Failure::Input(format!("{}: {e}", args.dir.display())))?;
    let mut files: Vec<PathBuf> = entries
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gr"))
        .collect();
    files.sort();

    let start = Instant::now();
    let mut summary = Summary {
        summary: true,
        ..Summary::default()
    };
    let mut stdout = io::stdout().lock();
    for file in &files {
        summary.instances += 1;
        let name = file.display().to_string();
        let line = match load(Some(file)).and_then(|inst| {
            run(&inst, &args.opts).map(|r| RunStats::from_report(args.opts.mode, &name, &inst, &r))
        }) {
            Ok(stats) => {
                summary.solved += 1;
                summary.proven_optimal += usize::from(stats.proven_optimal);
                summary.total_final_cost += stats.final_cost;
                serde_json::to_string(&stats)
            }
            Err(f) => {
                summary.errors += 1;
                serde_json::to_string(&ErrorRow {
                    instance: name,
                    error: f.message().to_string(),
                })
            }
        };
        writeln!(stdout, "{}", line.expect("row serializes"))
            .map_err(|e| Failure::Internal(format!("stdout: {e}")))?;
    }
    summary.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    writeln!(
        stdout,
        "{}",
        serde_json::to_string(&summary).expect("summary serializes")
    )
    .map_err(|e| Failure::Internal(format!("stdout: {e}")))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args).map(|()| ExitCode::SUCCESS),
        Command::Verify { instance, ordering } => cmd_verify(instance, ordering),
        Command::Bench(args) => cmd_bench(args).map(|()| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message());
        ExitCode::from(f.code())
    })
}
