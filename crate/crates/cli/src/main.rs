//! `minball`: generate, solve, verify and benchmark minimum covering ball instances.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use minball::{SolveOptions, Tolerances};
use minball_cli::bench::{bench, default_suite, write_csv, BenchSpec, Cell};
use minball_cli::error::{CliError, Result};
use minball_cli::format::{read_text, InstanceFile};
use minball_cli::generate::{generate_file, Distribution, GenerateSpec};
use minball_cli::report::{run, verify, Algorithm, SolveDocument, EXIT_IO, EXIT_OK};

/// Environment variable overriding the default activity tolerance.
const TOL_ENV: &str = "MINBALL_TOL";

#[derive(Parser)]
#[command(name = "minball", version, about = "Minimum covering ball of balls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a random instance file.
    Gen(GenArgs),
    /// Solve an instance and print a result document.
    Solve(SolveArgs),
    /// Check a result document against its instance.
    Verify(VerifyArgs),
    /// Run a seeded benchmark grid and print CSV.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DistributionArg {
    Uniform,
}

#[derive(Args)]
struct GenArgs {
    /// Dimension n.
    #[arg(short = 'n', long)]
    dim: usize,
    /// Number of balls m.
    #[arg(short = 'm', long)]
    count: usize,
    /// Radii are drawn uniformly from [0, radius_max].
    #[arg(long, default_value_t = 0.5)]
    radius_max: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "uniform")]
    distribution: DistributionArg,
    /// Name stored in the metadata.
    #[arg(long)]
    name: Option<String>,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AlgorithmArg {
    Primal,
    Dual,
    Both,
    Oracle,
}

impl AlgorithmArg {
    fn algorithms(self) -> Vec<Algorithm> {
        match self {
            Self::Primal => vec![Algorithm::Primal],
            Self::Dual => vec![Algorithm::Dual],
            Self::Both => vec![Algorithm::Primal, Algorithm::Dual],
            Self::Oracle => vec![Algorithm::Oracle],
        }
    }
}

#[derive(Args)]
struct SolverArgs {
    /// Activity tolerance; defaults to $MINBALL_TOL, then 1e-7.
    #[arg(long)]
    tol: Option<f64>,
    /// Iteration cap; defaults to 100 m.
    #[arg(long)]
    max_iters: Option<usize>,
}

impl SolverArgs {
    fn options(&self, trace: bool) -> Result<SolveOptions> {
        let mut tolerances = Tolerances::default();
        let tol =
            match self.tol {
                Some(t) => Some(t),
                None => match std::env::var(TOL_ENV) {
                    Ok(v) => Some(v.trim().parse::<f64>().map_err(|_| {
                        CliError::Setting(format!("{TOL_ENV}={v} is not a number"))
                    })?),
                    Err(_) => None,
                },
            };
        if let Some(t) = tol {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::Setting(format!("tolerance {t} must be positive")));
            }
            tolerances.active = t;
        }
        Ok(SolveOptions {
            tolerances,
            max_iterations: self.max_iters,
            trace,
            ..SolveOptions::default()
        })
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    file: PathBuf,
    #[arg(long, value_enum, default_value = "both")]
    algorithm: AlgorithmArg,
    #[command(flatten)]
    solver: SolverArgs,
    /// Write one JSON line per iteration to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Instance file.
    file: PathBuf,
    /// Result document produced by `solve`.
    result: PathBuf,
}

#[derive(Args)]
struct BenchArgs {
    /// Grid cell N:M:SEEDS (repeatable).
    #[arg(long = "cell", required_unless_present = "suite")]
    cells: Vec<String>,
    /// Use the built-in grid.
    #[arg(long, conflicts_with = "cells")]
    suite: bool,
    #[arg(long, value_enum, default_value = "both")]
    algorithm: AlgorithmArg,
    #[arg(long, default_value_t = 0.5)]
    radius_max: f64,
    #[command(flatten)]
    solver: SolverArgs,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file; standard output when absent.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|source| CliError::Io {
            path: p.to_owned(),
            source,
        }),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_gen(args: &GenArgs) -> Result<i32> {
    let spec = GenerateSpec {
        dim: args.dim,
        count: args.count,
        radius_max: args.radius_max,
        seed: args.seed,
        distribution: match args.distribution {
            DistributionArg::Uniform => Distribution::Uniform,
        },
    };
    let file = generate_file(&spec, args.name.clone())?;
    write_output(args.output.as_deref(), &file.to_json()?)?;
    Ok(EXIT_OK)
}

fn cmd_solve(args: &SolveArgs) -> Result<i32> {
    let instance = InstanceFile::read(&args.file)?.to_instance(&args.file.display().to_string())?;
    let options = args.solver.options(args.trace.is_some())?;
    let mut results = Vec::new();
    let mut trace = String::new();
    for algorithm in args.algorithm.algorithms() {
        let (rec, lines) = run(&instance, algorithm, &options);
        for line in lines {
            trace.push_str(&serde_json::to_string(&line)?);
            trace.push('\n');
        }
        results.push(rec);
    }
    if let Some(path) = &args.trace {
        write_output(Some(path), &trace)?;
    }
    let doc = SolveDocument::new(results);
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    write_output(None, &text)?;
    Ok(doc.exit_code())
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32> {
    let instance = InstanceFile::read(&args.file)?.to_instance(&args.file.display().to_string())?;
    let text = read_text(&args.result)?;
    let doc: SolveDocument = serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: args.result.clone(),
        source,
    })?;
    let report = verify(&instance, &doc)?;
    let mut out = serde_json::to_string_pretty(&report)?;
    out.push('\n');
    write_output(None, &out)?;
    Ok(report.exit_code())
}

fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let cells = if args.suite {
        default_suite()
    } else {
        args.cells
            .iter()
            .map(|c| c.parse::<Cell>())
            .collect::<Result<Vec<_>>>()?
    };
    let spec = BenchSpec {
        cells,
        algorithms: args.algorithm.algorithms(),
        radius_max: args.radius_max,
        options: args.solver.options(false)?,
        jobs: args.jobs,
    };
    let rows = bench(&spec)?;
    let mut buf = Vec::new();
    write_csv(&mut buf, &rows)?;
    write_output(args.output.as_deref(), &String::from_utf8_lossy(&buf))?;
    Ok(EXIT_OK)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_IO } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let outcome = match &cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("minball: {e}");
            ExitCode::from(EXIT_IO as u8)
        }
    }
}
