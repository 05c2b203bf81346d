//! Seeded benchmark grid with CSV output.
//!
//! A cell `N:M:SEEDS` generates instances of `M` balls in dimension `N` for seeds
//! `0..SEEDS`. Rows come out ordered by cell, then seed, then algorithm, whatever
//! the number of worker threads.

use std::io::Write;
use std::str::FromStr;

use minball::SolveOptions;
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::generate::{generate, Distribution, GenerateSpec};
use crate::report::{run, Algorithm, Status};

/// Fixed CSV header.
pub const HEADER: [&str; 8] = [
    "n",
    "m",
    "seed",
    "algorithm",
    "z",
    "iterations",
    "wall_time_ms",
    "certified",
];

/// One `(n, m, seeds)` cell of a benchmark grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub n: usize,
    pub m: usize,
    pub seeds: u64,
}

impl FromStr for Cell {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || CliError::Cell(s.to_owned());
        let parts: Vec<&str> = s.split(':').collect();
        let [n, m, seeds] = parts.as_slice() else {
            return Err(bad());
        };
        let cell = Cell {
            n: n.trim().parse().map_err(|_| bad())?,
            m: m.trim().parse().map_err(|_| bad())?,
            seeds: seeds.trim().parse().map_err(|_| bad())?,
        };
        if cell.n == 0 || cell.m == 0 {
            return Err(bad());
        }
        Ok(cell)
    }
}

/// The built-in grid used by `bench --suite`.
pub fn default_suite() -> Vec<Cell> {
    [
        (2, 10, 5),
        (3, 50, 5),
        (5, 100, 5),
        (10, 200, 5),
        (20, 500, 3),
        (50, 1000, 2),
    ]
    .into_iter()
    .map(|(n, m, seeds)| Cell { n, m, seeds })
    .collect()
}

/// One CSV row. `z` is empty when the solver failed outright.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub m: usize,
    pub seed: u64,
    pub algorithm: &'static str,
    pub z: Option<f64>,
    pub iterations: usize,
    pub wall_time_ms: f64,
    pub certified: bool,
}

/// Settings of a benchmark run.
#[derive(Debug, Clone)]
pub struct BenchSpec {
    pub cells: Vec<Cell>,
    pub algorithms: Vec<Algorithm>,
    pub radius_max: f64,
    pub options: SolveOptions,
    pub jobs: usize,
}

struct Job {
    cell: Cell,
    seed: u64,
}

fn run_job(spec: &BenchSpec, job: &Job) -> Result<Vec<BenchRow>> {
    let instance = generate(&GenerateSpec {
        dim: job.cell.n,
        count: job.cell.m,
        radius_max: spec.radius_max,
        seed: job.seed,
        distribution: Distribution::Uniform,
    })?;
    Ok(spec
        .algorithms
        .iter()
        .map(|&algorithm| {
            let (rec, _) = run(&instance, algorithm, &spec.options);
            BenchRow {
                n: job.cell.n,
                m: job.cell.m,
                seed: job.seed,
                algorithm: algorithm.name(),
                z: (rec.status != Status::Failed).then_some(rec.radius),
                iterations: rec.iterations,
                wall_time_ms: rec.wall_time_ms,
                certified: rec.certified(),
            }
        })
        .collect())
}

/// Runs every cell and returns the rows in grid order.
pub fn bench(spec: &BenchSpec) -> Result<Vec<BenchRow>> {
    let jobs: Vec<Job> = spec
        .cells
        .iter()
        .flat_map(|&cell| (0..cell.seeds).map(move |seed| Job { cell, seed }))
        .collect();
    let workers = spec.jobs.clamp(1, jobs.len().max(1));
    let mut slots: Vec<Option<Result<Vec<BenchRow>>>> = (0..jobs.len()).map(|_| None).collect();
    std::thread::scope(|scope| {
        let chunk = jobs.len().div_ceil(workers).max(1);
        for (jobs, slots) in jobs.chunks(chunk).zip(slots.chunks_mut(chunk)) {
            scope.spawn(move || {
                for (job, slot) in jobs.iter().zip(slots.iter_mut()) {
                    *slot = Some(run_job(spec, job));
                }
            });
        }
    });
    let mut rows = Vec::new();
    for slot in slots {
        rows.extend(slot.expect("every job ran")?);
    }
    Ok(rows)
}

/// Writes the header and rows as CSV.
pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    w.write_record(HEADER)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
