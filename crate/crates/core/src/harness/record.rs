//! Run records and their on-disk layout.
//!
//! A results directory contains:
//!
//! - `<scenario>/<solver>/seed-<seed>.json`: one [`RunRecord`] per run;
//! - `results.csv`: one row per run, appended;
//! - `timings.csv`: wall-clock seconds per run, appended.
//!
//! Wall-clock time is kept out of the JSON and `results.csv` so that
//! re-running a seed reproduces those files byte for byte.

use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::SolverKind;
use crate::harness::library::InstanceLibrary;
use crate::solution::{TaskBest, TracePoint};

pub const RESULTS_CSV: &str = "results.csv";
pub const TIMINGS_CSV: &str = "timings.csv";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub scenario: String,
    pub solver: SolverKind,
    pub seed: u64,
    pub budget: u64,
    pub evaluations_used: u64,
    /// Best tour per task, in scenario order.
    pub results: Vec<TaskBest>,
    pub trace: Vec<TracePoint>,
    #[serde(skip)]
    pub wall_clock_seconds: f64,
}

impl RunRecord {
    pub fn fitness_of(&self, instance: &str) -> Option<u64> {
        self.results
            .iter()
            .find(|r| r.instance == instance)
            .map(|r| r.fitness)
    }

    /// Relative path of this record's JSON file.
    pub fn relative_path(&self) -> PathBuf {
        record_path(&self.scenario, self.solver, self.seed)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Results whose fitness is below the manifest optimum of their instance.
    pub fn optimum_violations<'a>(&'a self, library: &InstanceLibrary) -> Vec<&'a TaskBest> {
        self.results
            .iter()
            .filter(|r| {
                library
                    .optimum(&r.instance)
                    .is_some_and(|opt| r.fitness < opt)
            })
            .collect()
    }
}

pub fn record_path(scenario: &str, solver: SolverKind, seed: u64) -> PathBuf {
    Path::new(scenario)
        .join(solver.id())
        .join(format!("seed-{seed}.json"))
}

/// Flat form of a record written to `results.csv`. Per-task columns hold
/// `;`-separated lists in scenario order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsvRow {
    pub scenario: String,
    pub solver: SolverKind,
    pub seed: u64,
    pub budget: u64,
    pub evaluations_used: u64,
    pub instances: String,
    pub fitness: String,
    pub tours: String,
}

impl From<&RunRecord> for CsvRow {
    fn from(r: &RunRecord) -> Self {
        let join =
            |f: &dyn Fn(&TaskBest) -> String| r.results.iter().map(f).collect::<Vec<_>>().join(";");
        CsvRow {
            scenario: r.scenario.clone(),
            solver: r.solver,
            seed: r.seed,
            budget: r.budget,
            evaluations_used: r.evaluations_used,
            instances: join(&|t| t.instance.clone()),
            fitness: join(&|t| t.fitness.to_string()),
            tours: join(&|t| t.tour.to_string()),
        }
    }
}

fn append_csv<T: Serialize>(path: &Path, rows: &[T]) -> Result<()> {
    let fresh = !path.exists();
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut writer = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    for row in rows {
        writer.serialize(row).map_err(|e| Error::format(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize)]
struct TimingRow<'a> {
    scenario: &'a str,
    solver: SolverKind,
    seed: u64,
    wall_clock_seconds: f64,
}

/// Writes each record's JSON file and appends its CSV rows.
pub fn persist(out_dir: &Path, records: &[RunRecord]) -> Result<()> {
    for record in records {
        let path = out_dir.join(record.relative_path());
        let parent = path.parent().expect("record path has a parent");
        fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        fs::write(&path, record.to_json()? + "\n").map_err(|e| Error::io(&path, e))?;
    }
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let rows: Vec<CsvRow> = records.iter().map(CsvRow::from).collect();
    append_csv(&out_dir.join(RESULTS_CSV), &rows)?;
    let timings: Vec<TimingRow> = records
        .iter()
        .map(|r| TimingRow {
            scenario: &r.scenario,
            solver: r.solver,
            seed: r.seed,
            wall_clock_seconds: r.wall_clock_seconds,
        })
        .collect();
    append_csv(&out_dir.join(TIMINGS_CSV), &timings)
}

pub fn load_record(path: &Path) -> Result<RunRecord> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::format(path, e))
}

/// Loads every record of `scenario` and `solver` under `in_dir`, sorted by
/// seed. A missing directory yields an empty list.
pub fn load_records(in_dir: &Path, scenario: &str, solver: SolverKind) -> Result<Vec<RunRecord>> {
    let dir = in_dir.join(scenario).join(solver.id());
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut records = Vec::new();
    for entry in fs::read_dir(&dir).map_err(|e| Error::io(&dir, e))? {
        let path = entry.map_err(|e| Error::io(&dir, e))?.path();
        if path.extension().is_some_and(|e| e == "json") {
            records.push(load_record(&path)?);
        }
    }
    records.sort_by_key(|r| r.seed);
    Ok(records)
}

pub fn read_results_csv(path: &Path) -> Result<Vec<CsvRow>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| Error::format(path, e))?;
    reader
        .deserialize()
        .map(|row| row.map_err(|e| Error::format(path, e)))
        .collect()
}
