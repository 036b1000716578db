//! Solver selection and flat key/value configuration overrides.
//!
//! Config files are TOML documents with top-level keys only, for example:
//!
//! ```toml
//! population_size = 200
//! migration_period = 100
//! crossover_prob = 0.9
//! ```
//!
//! `population_size` applies to both solvers; every other key belongs to
//! exactly one of them and is ignored by the other. The evaluation budget
//! and the seed come from the command line, not from the file.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::coeba::CoebaConfig;
use crate::error::{Error, Result};
use crate::mfea::MfeaConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum SolverKind {
    Coeba,
    Mfea,
}

impl SolverKind {
    pub const ALL: [SolverKind; 2] = [SolverKind::Coeba, SolverKind::Mfea];

    /// Lower-case id used on the command line and in file names.
    pub fn id(self) -> &'static str {
        match self {
            SolverKind::Coeba => "coeba",
            SolverKind::Mfea => "mfea",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolverKind::Coeba => "COEBA",
            SolverKind::Mfea => "MFEA",
        })
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "coeba" => Ok(SolverKind::Coeba),
            "mfea" => Ok(SolverKind::Mfea),
            _ => Err(Error::UnknownSolver(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub population_size: Option<usize>,
    pub migration_period: Option<usize>,
    pub alpha: Option<f64>,
    pub gamma: Option<f64>,
    pub loudness_init_min: Option<f64>,
    pub loudness_init_max: Option<f64>,
    pub pulse_init_min: Option<f64>,
    pub pulse_init_max: Option<f64>,
    pub neighbor_samples: Option<usize>,
    pub elite_pool_size: Option<usize>,
    pub rebuild_period: Option<usize>,
    pub parallel_demes: Option<bool>,
    pub crossover_prob: Option<f64>,
    pub mutation_prob: Option<f64>,
}

impl ConfigOverrides {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        toml::from_str(&text).map_err(|e| Error::format(path, e))
    }

    pub fn coeba(&self, budget: u64, seed: u64) -> CoebaConfig {
        let d = CoebaConfig::default();
        CoebaConfig {
            population_size: self.population_size.unwrap_or(d.population_size),
            migration_period: self.migration_period.unwrap_or(d.migration_period),
            alpha: self.alpha.unwrap_or(d.alpha),
            gamma: self.gamma.unwrap_or(d.gamma),
            loudness_init_range: (
                self.loudness_init_min.unwrap_or(d.loudness_init_range.0),
                self.loudness_init_max.unwrap_or(d.loudness_init_range.1),
            ),
            pulse_init_range: (
                self.pulse_init_min.unwrap_or(d.pulse_init_range.0),
                self.pulse_init_max.unwrap_or(d.pulse_init_range.1),
            ),
            neighbor_samples: self.neighbor_samples.unwrap_or(d.neighbor_samples),
            elite_pool_size: self.elite_pool_size.unwrap_or(d.elite_pool_size),
            budget,
            seed,
            rebuild_period: self.rebuild_period.or(d.rebuild_period),
            parallel_demes: self.parallel_demes.unwrap_or(d.parallel_demes),
        }
    }

    pub fn mfea(&self, budget: u64, seed: u64) -> MfeaConfig {
        let d = MfeaConfig::default();
        MfeaConfig {
            population_size: self.population_size.unwrap_or(d.population_size),
            crossover_prob: self.crossover_prob.unwrap_or(d.crossover_prob),
            mutation_prob: self.mutation_prob.unwrap_or(d.mutation_prob),
            budget,
            seed,
        }
    }
}
