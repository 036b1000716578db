use serde::{Deserialize, Serialize};

use crate::encoding::Permutation;

/// Best tour found for one task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskBest {
    pub instance: String,
    pub fitness: u64,
    pub tour: Permutation,
}

/// Best-so-far fitness of one task at a checkpoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TracePoint {
    pub evaluations_used: u64,
    /// 0-based task index (the deme, for COEBA).
    pub task: usize,
    pub best_fitness: u64,
}

/// What a solver returns for one seeded run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolverOutcome {
    pub best: Vec<TaskBest>,
    pub trace: Vec<TracePoint>,
    pub evaluations_used: u64,
}
