//! Coevolutionary bat algorithm and multifactorial evolutionary algorithm for
//! solving several TSPLIB instances at once, with the benchmark harness and
//! statistics used to compare them.
//!
//! ```no_run
//! use coeba_core::{coeba, harness};
//!
//! let library = harness::InstanceLibrary::open_default()?;
//! let scenario = harness::find_scenario("Test_Case_4_1")?;
//! let instances = library.load_all(&scenario.instance_names)?;
//! let cfg = coeba::CoebaConfig { budget: 100_000, seed: 1, ..Default::default() };
//! let outcome = coeba::run(&instances, &cfg)?;
//! for best in &outcome.best {
//!     println!("{}: {}", best.instance, best.fitness);
//! }
//! # Ok::<(), coeba_core::Error>(())
//! ```

pub mod budget;
pub mod coeba;
pub mod encoding;
pub mod error;
pub mod harness;
pub mod mfea;
pub mod operators;
pub mod rng;
pub mod solution;
pub mod stats;
pub mod tsplib;

pub use budget::{EvalBudget, Objective};
pub use coeba::CoebaConfig;
pub use encoding::{random_permutation, Permutation};
pub use error::{Error, ParseError, Result};
pub use harness::{RunRecord, Scenario, SolverKind};
pub use mfea::MfeaConfig;
pub use solution::{SolverOutcome, TaskBest, TracePoint};
pub use stats::{SampleSummary, WilcoxonResult};
pub use tsplib::TspInstance;
