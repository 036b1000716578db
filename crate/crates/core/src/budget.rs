//! Objective-evaluation accounting.
//!
//! Every tour-length computation a solver performs goes through an
//! [`Objective`] backed by an [`EvalBudget`]; there are no cached or free
//! evaluations. Once the budget is spent, further evaluations are refused
//! and the solver stops, so a run never uses more than its limit.

use crate::encoding::Permutation;
use crate::tsplib::TspInstance;

/// Source of objective values that may refuse once its budget is spent.
pub trait Objective {
    /// Cost of `tour`, or `None` if no evaluations remain.
    fn evaluate(&mut self, tour: &Permutation) -> Option<u64>;
}

impl<F> Objective for F
where
    F: FnMut(&Permutation) -> Option<u64>,
{
    fn evaluate(&mut self, tour: &Permutation) -> Option<u64> {
        self(tour)
    }
}

/// A monotone evaluation counter with a hard limit.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EvalBudget {
    limit: u64,
    used: u64,
}

impl EvalBudget {
    pub fn new(limit: u64) -> Self {
        EvalBudget { limit, used: 0 }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.limit
    }

    /// Reserves one evaluation. Returns `false` when the limit is reached.
    pub fn try_consume(&mut self) -> bool {
        if self.used < self.limit {
            self.used += 1;
            true
        } else {
            false
        }
    }

    /// Splits off a sub-budget of at most `allowance` evaluations.
    pub fn split(&self, allowance: u64) -> EvalBudget {
        EvalBudget::new(allowance.min(self.remaining()))
    }

    /// Folds a sub-budget's consumption back into this counter.
    pub fn absorb(&mut self, child: &EvalBudget) {
        self.used += child.used;
        debug_assert!(self.used <= self.limit);
    }
}

/// Evaluates tours on one task, charging each call to a budget.
pub struct TaskObjective<'a> {
    instance: &'a TspInstance,
    budget: &'a mut EvalBudget,
}

impl<'a> TaskObjective<'a> {
    pub fn new(instance: &'a TspInstance, budget: &'a mut EvalBudget) -> Self {
        TaskObjective { instance, budget }
    }
}

impl Objective for TaskObjective<'_> {
    fn evaluate(&mut self, tour: &Permutation) -> Option<u64> {
        debug_assert_eq!(tour.dimension(), self.instance.dimension());
        if !self.budget.try_consume() {
            return None;
        }
        Some(self.instance.tour_length_unchecked(tour.as_slice()))
    }
}

/// Evaluates a unified-space genome on one task by projecting it first.
pub struct ProjectedObjective<'a> {
    instance: &'a TspInstance,
    budget: &'a mut EvalBudget,
}

impl<'a> ProjectedObjective<'a> {
    pub fn new(instance: &'a TspInstance, budget: &'a mut EvalBudget) -> Self {
        ProjectedObjective { instance, budget }
    }
}

impl Objective for ProjectedObjective<'_> {
    fn evaluate(&mut self, genome: &Permutation) -> Option<u64> {
        if !self.budget.try_consume() {
            return None;
        }
        let tour = genome
            .project(self.instance.dimension())
            .expect("unified genome is at least as long as every task");
        Some(self.instance.tour_length_unchecked(tour.as_slice()))
    }
}
