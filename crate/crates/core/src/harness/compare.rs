//! Per-instance comparison of COEBA and MFEA runs on one scenario.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::SolverKind;
use crate::harness::library::InstanceLibrary;
use crate::harness::record::RunRecord;
use crate::stats::{summarize, wilcoxon_rank_sum, SampleSummary, WilcoxonResult};

/// Outcome for COEBA against MFEA on one instance, decided by mean fitness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Win,
    Loss,
    Tie,
}

impl Verdict {
    pub fn from_means(coeba: f64, mfea: f64) -> Verdict {
        if coeba < mfea {
            Verdict::Win
        } else if coeba > mfea {
            Verdict::Loss
        } else {
            Verdict::Tie
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Win => "WIN",
            Verdict::Loss => "LOSS",
            Verdict::Tie => "TIE",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceComparison {
    pub instance: String,
    pub optimum: Option<u64>,
    pub coeba: SampleSummary,
    pub mfea: SampleSummary,
    pub verdict: Verdict,
    /// COEBA sample against MFEA sample; `z < 0` favours COEBA.
    pub wilcoxon: WilcoxonResult,
}

impl InstanceComparison {
    /// Gap of a solver's mean over the optimum, in percent.
    pub fn gap_percent(&self, solver: SolverKind) -> Option<f64> {
        let mean = match solver {
            SolverKind::Coeba => self.coeba.mean,
            SolverKind::Mfea => self.mfea.mean,
        };
        self.optimum
            .map(|opt| (mean - opt as f64) / opt as f64 * 100.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub scenario: String,
    pub coeba_runs: usize,
    pub mfea_runs: usize,
    pub instances: Vec<InstanceComparison>,
}

impl ComparisonReport {
    pub fn verdicts(&self) -> Vec<Verdict> {
        self.instances.iter().map(|c| c.verdict).collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(
            s,
            "{} (COEBA runs: {}, MFEA runs: {})",
            self.scenario, self.coeba_runs, self.mfea_runs
        );
        let _ = writeln!(
            s,
            "{:<8} {:>9} {:>11} {:>11} {:>9} {:>11} {:>11} {:>9} {:>7} {:>8} {:>10}",
            "instance",
            "optimum",
            "COEBA best",
            "COEBA avg",
            "COEBA std",
            "MFEA best",
            "MFEA avg",
            "MFEA std",
            "verdict",
            "z",
            "p"
        );
        for c in &self.instances {
            let opt = c.optimum.map_or_else(|| "-".to_string(), |o| o.to_string());
            let _ = writeln!(
                s,
                "{:<8} {:>9} {:>11.0} {:>11.1} {:>9.2} {:>11.0} {:>11.1} {:>9.2} {:>7} {:>8.3} {:>10.3e}",
                c.instance,
                opt,
                c.coeba.best,
                c.coeba.mean,
                c.coeba.std,
                c.mfea.best,
                c.mfea.mean,
                c.mfea.std,
                c.verdict,
                c.wilcoxon.z_value,
                c.wilcoxon.p_two_sided
            );
        }
        let tokens: Vec<String> = self.verdicts().iter().map(Verdict::to_string).collect();
        let _ = writeln!(s, "verdicts: {}", tokens.join(" "));
        s
    }
}

fn sample(records: &[RunRecord], instance: &str) -> Result<Vec<f64>> {
    records
        .iter()
        .map(|r| {
            r.fitness_of(instance).map(|f| f as f64).ok_or_else(|| {
                Error::Comparison(format!("run seed {} has no result for {instance}", r.seed))
            })
        })
        .collect()
}

/// Builds the comparison from both solvers' runs on the same scenario.
pub fn compare(
    coeba: &[RunRecord],
    mfea: &[RunRecord],
    library: Option<&InstanceLibrary>,
) -> Result<ComparisonReport> {
    if coeba.len() < 2 || mfea.len() < 2 {
        return Err(Error::Comparison(format!(
            "need at least 2 runs per solver, got {} COEBA and {} MFEA",
            coeba.len(),
            mfea.len()
        )));
    }
    let scenario = &coeba[0].scenario;
    for (records, kind) in [(coeba, SolverKind::Coeba), (mfea, SolverKind::Mfea)] {
        for r in records {
            if &r.scenario != scenario {
                return Err(Error::Comparison(format!(
                    "mismatched scenarios: {scenario} and {}",
                    r.scenario
                )));
            }
            if r.solver != kind {
                return Err(Error::Comparison(format!(
                    "expected {kind} runs, found a {} run",
                    r.solver
                )));
            }
        }
    }
    let names: Vec<&str> = coeba[0]
        .results
        .iter()
        .map(|t| t.instance.as_str())
        .collect();
    let mut instances = Vec::with_capacity(names.len());
    for name in names {
        let a = sample(coeba, name)?;
        let b = sample(mfea, name)?;
        let coeba_summary = summarize(&a)?;
        let mfea_summary = summarize(&b)?;
        instances.push(InstanceComparison {
            instance: name.to_string(),
            optimum: library.and_then(|l| l.optimum(name)),
            verdict: Verdict::from_means(coeba_summary.mean, mfea_summary.mean),
            coeba: coeba_summary,
            mfea: mfea_summary,
            wilcoxon: wilcoxon_rank_sum(&a, &b)?,
        });
    }
    Ok(ComparisonReport {
        scenario: scenario.clone(),
        coeba_runs: coeba.len(),
        mfea_runs: mfea.len(),
        instances,
    })
}
