//! Multifactorial evolutionary algorithm over the unified permutation space.
//!
//! Genomes are permutations of the largest task dimension and are decoded
//! for a task by projection. After the fully evaluated initial population,
//! each offspring is evaluated only on the task given by its skill factor.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{EvalBudget, Objective, ProjectedObjective};
use crate::encoding::{random_permutation, Permutation};
use crate::error::{Error, Result};
use crate::operators::{order_crossover, two_opt_step};
use crate::rng::{self, SolverRng};
use crate::solution::{SolverOutcome, TaskBest, TracePoint};
use crate::tsplib::TspInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MfeaConfig {
    pub population_size: usize,
    /// Probability that parents with different skill factors still mate by
    /// crossover.
    pub crossover_prob: f64,
    /// Probability of an extra 2-opt mutation on each offspring.
    pub mutation_prob: f64,
    pub budget: u64,
    pub seed: u64,
}

impl Default for MfeaConfig {
    fn default() -> Self {
        MfeaConfig {
            population_size: 200,
            crossover_prob: 0.9,
            mutation_prob: 0.1,
            budget: 500_000,
            seed: 1,
        }
    }
}

impl MfeaConfig {
    pub fn validate(&self, tasks: usize) -> Result<()> {
        if tasks == 0 {
            return Err(Error::TooFewTasks {
                required: 1,
                actual: 0,
            });
        }
        if self.population_size < 2 || self.population_size % 2 != 0 {
            return Err(Error::Config(
                "population_size must be even and at least 2".into(),
            ));
        }
        for (name, p) in [
            ("crossover_prob", self.crossover_prob),
            ("mutation_prob", self.mutation_prob),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Config(format!("{name} must lie in [0, 1]")));
            }
        }
        let required = (self.population_size * tasks) as u64;
        if self.budget < required {
            return Err(Error::BudgetTooSmall {
                budget: self.budget,
                required,
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MfeaIndividual {
    pub genome: Permutation,
    /// Cost per task; `None` where the individual was never evaluated.
    pub factorial_costs: Vec<Option<u64>>,
    pub factorial_ranks: Vec<usize>,
    pub scalar_fitness: f64,
    pub skill_factor: usize,
}

impl MfeaIndividual {
    pub fn new(genome: Permutation, factorial_costs: Vec<Option<u64>>) -> Self {
        let k = factorial_costs.len();
        MfeaIndividual {
            genome,
            factorial_costs,
            factorial_ranks: vec![0; k],
            scalar_fitness: 0.0,
            skill_factor: 0,
        }
    }
}

/// Assigns factorial ranks, scalar fitness and skill factors.
///
/// Per task, individuals are ranked `1..=N` by ascending cost with ties in
/// population order; unevaluated individuals all get rank `N + 1`.
pub fn rank_population(pop: &mut [MfeaIndividual]) -> Result<()> {
    let n = pop.len();
    if n == 0 {
        return Err(Error::EmptyPopulation);
    }
    let k = pop[0].factorial_costs.len();
    let mut order: Vec<usize> = (0..n).collect();
    for task in 0..k {
        order.sort_by_key(|&i| match pop[i].factorial_costs[task] {
            Some(c) => (0, c, i),
            None => (1, 0, i),
        });
        for (pos, &i) in order.iter().enumerate() {
            pop[i].factorial_ranks[task] = match pop[i].factorial_costs[task] {
                Some(_) => pos + 1,
                None => n + 1,
            };
        }
    }
    for ind in pop.iter_mut() {
        let (skill, &rank) = ind
            .factorial_ranks
            .iter()
            .enumerate()
            .min_by_key(|&(t, &r)| (r, t))
            .expect("at least one task");
        ind.skill_factor = skill;
        ind.scalar_fitness = 1.0 / rank as f64;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Offspring {
    pub genome: Permutation,
    pub skill_factor: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mating {
    pub children: [Offspring; 2],
    /// Whether the children came from crossover rather than mutation.
    pub crossed: bool,
}

/// Produces two offspring from two parents.
pub fn assortative_mating<R: Rng + ?Sized>(
    a: &MfeaIndividual,
    b: &MfeaIndividual,
    cfg: &MfeaConfig,
    rng: &mut R,
) -> Result<Mating> {
    let crossed = a.skill_factor == b.skill_factor || rng.random::<f64>() < cfg.crossover_prob;
    let mut children = if crossed {
        let (x, y) = order_crossover(&a.genome, &b.genome, rng)?;
        let mut imitate = |genome| {
            let parent = if rng.random::<bool>() { a } else { b };
            Offspring {
                genome,
                skill_factor: parent.skill_factor,
            }
        };
        [imitate(x), imitate(y)]
    } else {
        [a, b].map(|p| Offspring {
            genome: two_opt_step(&p.genome, rng),
            skill_factor: p.skill_factor,
        })
    };
    for child in &mut children {
        if rng.random::<f64>() < cfg.mutation_prob {
            child.genome = two_opt_step(&child.genome, rng);
        }
    }
    Ok(Mating { children, crossed })
}

/// An MFEA run in progress.
pub struct Mfea<'a> {
    instances: &'a [TspInstance],
    cfg: MfeaConfig,
    population: Vec<MfeaIndividual>,
    best: Vec<(u64, Permutation)>,
    budget: EvalBudget,
    rng: SolverRng,
    generation: u64,
    trace: Vec<TracePoint>,
}

impl<'a> Mfea<'a> {
    /// Validates the configuration and evaluates the initial population on
    /// every task.
    pub fn new(instances: &'a [TspInstance], cfg: MfeaConfig) -> Result<Self> {
        cfg.validate(instances.len())?;
        let mut rng = rng::stream(cfg.seed, rng::MAIN_STREAM);
        let mut budget = EvalBudget::new(cfg.budget);
        let d_max = instances
            .iter()
            .map(TspInstance::dimension)
            .max()
            .unwrap_or(0);
        let mut population = Vec::with_capacity(cfg.population_size);
        for _ in 0..cfg.population_size {
            let genome = random_permutation(d_max, &mut rng);
            let costs = instances
                .iter()
                .map(|inst| ProjectedObjective::new(inst, &mut budget).evaluate(&genome))
                .collect();
            population.push(MfeaIndividual::new(genome, costs));
        }
        rank_population(&mut population)?;

        let best = (0..instances.len())
            .map(|task| {
                let ind = population
                    .iter()
                    .min_by_key(|ind| ind.factorial_costs[task])
                    .expect("non-empty population");
                (
                    ind.factorial_costs[task].expect("initial population evaluated"),
                    ind.genome
                        .project(instances[task].dimension())
                        .expect("d_max bound"),
                )
            })
            .collect();
        let mut run = Mfea {
            instances,
            cfg,
            population,
            best,
            budget,
            rng,
            generation: 0,
            trace: Vec::new(),
        };
        run.checkpoint();
        Ok(run)
    }

    pub fn population(&self) -> &[MfeaIndividual] {
        &self.population
    }

    pub fn budget(&self) -> &EvalBudget {
        &self.budget
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn best_fitness(&self) -> Vec<u64> {
        self.best.iter().map(|(c, _)| *c).collect()
    }

    fn checkpoint(&mut self) {
        let used = self.budget.used();
        self.trace.extend(
            self.best
                .iter()
                .enumerate()
                .map(|(task, (c, _))| TracePoint {
                    evaluations_used: used,
                    task,
                    best_fitness: *c,
                }),
        );
    }

    /// Runs one generation. Returns `false` once the budget is spent.
    pub fn step(&mut self) -> Result<bool> {
        if self.budget.is_exhausted() {
            return Ok(false);
        }
        self.generation += 1;
        let n = self.population.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut self.rng);

        let mut offspring = Vec::with_capacity(n);
        'mating: for pair in order.chunks_exact(2) {
            let mating = assortative_mating(
                &self.population[pair[0]],
                &self.population[pair[1]],
                &self.cfg,
                &mut self.rng,
            )?;
            for child in mating.children {
                let task = child.skill_factor;
                let inst = &self.instances[task];
                let Some(cost) =
                    ProjectedObjective::new(inst, &mut self.budget).evaluate(&child.genome)
                else {
                    break 'mating;
                };
                if cost < self.best[task].0 {
                    let tour = child.genome.project(inst.dimension()).expect("d_max bound");
                    self.best[task] = (cost, tour);
                }
                let mut costs = vec![None; self.instances.len()];
                costs[task] = Some(cost);
                offspring.push(MfeaIndividual::new(child.genome, costs));
            }
        }

        self.population.extend(offspring);
        rank_population(&mut self.population)?;
        // Stable sort keeps parents ahead of offspring with equal fitness.
        self.population
            .sort_by(|x, y| y.scalar_fitness.total_cmp(&x.scalar_fitness));
        self.population.truncate(n);
        rank_population(&mut self.population)?;

        self.checkpoint();
        Ok(!self.budget.is_exhausted())
    }

    pub fn finish(self) -> SolverOutcome {
        let best = self
            .best
            .into_iter()
            .zip(self.instances)
            .map(|((fitness, tour), inst)| TaskBest {
                instance: inst.name().to_string(),
                fitness,
                tour,
            })
            .collect();
        SolverOutcome {
            best,
            trace: self.trace,
            evaluations_used: self.budget.used(),
        }
    }
}

/// Runs MFEA until the evaluation budget is spent.
pub fn run(instances: &[TspInstance], cfg: &MfeaConfig) -> Result<SolverOutcome> {
    let mut state = Mfea::new(instances, cfg.clone())?;
    while state.step()? {}
    Ok(state.finish())
}
