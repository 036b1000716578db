//! Experiment orchestration: scenarios, seeded runs, persistence and reports.

pub mod compare;
pub mod config;
pub mod library;
pub mod record;
pub mod scenario;

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tsplib::TspInstance;
use crate::{coeba, mfea};

pub use compare::{compare, ComparisonReport, InstanceComparison, Verdict};
pub use config::{ConfigOverrides, SolverKind};
pub use library::{default_data_dir, InstanceLibrary, ManifestEntry};
pub use record::{load_records, persist, RunRecord};
pub use scenario::{builtin_scenarios, find_scenario, Scenario, INSTANCE_NAMES};

pub const DEFAULT_BUDGET: u64 = 500_000;

/// Parses seed lists such as `1..20`, `3`, `1,4,9` or `1..5,10`. Ranges are
/// inclusive. Duplicates are rejected.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let bad = || Error::Config(format!("invalid seed list `{text}`"));
    let mut seeds = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: u64 = hi
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?;
            if lo > hi {
                return Err(bad());
            }
            seeds.extend(lo..=hi);
        } else {
            seeds.push(part.parse().map_err(|_| bad())?);
        }
    }
    check_distinct(&seeds)?;
    Ok(seeds)
}

fn check_distinct(seeds: &[u64]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for s in seeds {
        if !seen.insert(s) {
            return Err(Error::Config(format!("seed {s} listed twice")));
        }
    }
    if seeds.is_empty() {
        return Err(Error::Config("no seeds given".into()));
    }
    Ok(())
}

/// Runs one solver once on already loaded instances.
pub fn run_single(
    scenario: &Scenario,
    instances: &[TspInstance],
    solver: SolverKind,
    seed: u64,
    budget: u64,
    overrides: &ConfigOverrides,
) -> Result<RunRecord> {
    let start = Instant::now();
    let outcome = match solver {
        SolverKind::Coeba => coeba::run(instances, &overrides.coeba(budget, seed))?,
        SolverKind::Mfea => mfea::run(instances, &overrides.mfea(budget, seed))?,
    };
    let wall_clock_seconds = start.elapsed().as_secs_f64();
    log::info!(
        "{} {} seed {seed}: {:?} in {wall_clock_seconds:.1}s",
        scenario.name,
        solver,
        outcome.best.iter().map(|b| b.fitness).collect::<Vec<_>>()
    );
    Ok(RunRecord {
        scenario: scenario.name.clone(),
        solver,
        seed,
        budget,
        evaluations_used: outcome.evaluations_used,
        results: outcome.best,
        trace: outcome.trace,
        wall_clock_seconds,
    })
}

/// Runs `solver` on `scenario` once per seed, in parallel across seeds.
/// Records come back in seed order and, when `out_dir` is given, are
/// persisted there.
pub fn run_experiment(
    library: &InstanceLibrary,
    scenario: &Scenario,
    solver: SolverKind,
    seeds: &[u64],
    budget: u64,
    overrides: &ConfigOverrides,
    out_dir: Option<&Path>,
) -> Result<Vec<RunRecord>> {
    check_distinct(seeds)?;
    let instances = library.load_all(&scenario.instance_names)?;
    // Reject bad configurations before spawning any work.
    match solver {
        SolverKind::Coeba => overrides.coeba(budget, 0).validate(instances.len())?,
        SolverKind::Mfea => overrides.mfea(budget, 0).validate(instances.len())?,
    }
    let records = seeds
        .par_iter()
        .map(|&seed| run_single(scenario, &instances, solver, seed, budget, overrides))
        .collect::<Result<Vec<_>>>()?;
    if let Some(dir) = out_dir {
        persist(dir, &records)?;
    }
    Ok(records)
}

/// Compares both solvers on one scenario from records under `in_dir`.
pub fn compare_scenario(
    in_dir: &Path,
    scenario: &str,
    library: Option<&InstanceLibrary>,
) -> Result<ComparisonReport> {
    let coeba = load_records(in_dir, scenario, SolverKind::Coeba)?;
    let mfea = load_records(in_dir, scenario, SolverKind::Mfea)?;
    compare(&coeba, &mfea, library)
}

/// Comparisons for every built-in scenario that has runs of both solvers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FullReport {
    pub comparisons: Vec<ComparisonReport>,
}

#[derive(Debug, Serialize)]
struct ReportRow<'a> {
    scenario: &'a str,
    instance: &'a str,
    optimum: Option<u64>,
    coeba_best: f64,
    coeba_mean: f64,
    coeba_std: f64,
    mfea_best: f64,
    mfea_mean: f64,
    mfea_std: f64,
    verdict: Verdict,
    z: f64,
    p: f64,
    significant: bool,
}

impl FullReport {
    pub fn build(in_dir: &Path, library: Option<&InstanceLibrary>) -> Result<Self> {
        let mut comparisons = Vec::new();
        for s in builtin_scenarios() {
            let coeba = load_records(in_dir, &s.name, SolverKind::Coeba)?;
            let mfea = load_records(in_dir, &s.name, SolverKind::Mfea)?;
            if coeba.len() >= 2 && mfea.len() >= 2 {
                comparisons.push(compare(&coeba, &mfea, library)?);
            } else if !coeba.is_empty() || !mfea.is_empty() {
                log::warn!("{}: skipped, need 2 runs of each solver", s.name);
            }
        }
        Ok(FullReport { comparisons })
    }

    /// Verdict matrix over all instances followed by each scenario's table.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = write!(s, "{:<16}", "scenario");
        for name in INSTANCE_NAMES {
            let _ = write!(s, " {name:>6}");
        }
        s.push('\n');
        for c in &self.comparisons {
            let _ = write!(s, "{:<16}", c.scenario);
            for name in INSTANCE_NAMES {
                let cell = c
                    .instances
                    .iter()
                    .find(|i| i.instance == name)
                    .map_or_else(|| "-".to_string(), |i| i.verdict.to_string());
                let _ = write!(s, " {cell:>6}");
            }
            s.push('\n');
        }
        for c in &self.comparisons {
            s.push('\n');
            s.push_str(&c.to_text());
        }
        s
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for c in &self.comparisons {
            for i in &c.instances {
                w.serialize(ReportRow {
                    scenario: &c.scenario,
                    instance: &i.instance,
                    optimum: i.optimum,
                    coeba_best: i.coeba.best,
                    coeba_mean: i.coeba.mean,
                    coeba_std: i.coeba.std,
                    mfea_best: i.mfea.best,
                    mfea_mean: i.mfea.mean,
                    mfea_std: i.mfea.std,
                    verdict: i.verdict,
                    z: i.wilcoxon.z_value,
                    p: i.wilcoxon.p_two_sided,
                    significant: i.wilcoxon.significant_at_95,
                })
                .map_err(|e| Error::Config(e.to_string()))?;
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
    }

    /// Writes `report.txt`, `report.json` and `report.csv` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        let files = [
            ("report.txt", self.to_text()),
            (
                "report.json",
                serde_json::to_string_pretty(self).expect("report serializes"),
            ),
            ("report.csv", self.to_csv()?),
        ];
        for (name, body) in files {
            let path = dir.join(name);
            fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
        }
        Ok(())
    }
}
