//! Coevolutionary bat algorithm for discrete multitasking.
//!
//! One deme per task. Demes are built once from a shared random population
//! evaluated on every task, then evolve independently with a discrete bat
//! update (Hamming-distance velocity, 2-opt/insertion inclination, sampled
//! neighbourhood search around elite bats). Every `migration_period`
//! iterations each deme sends two copies of its bats to another deme,
//! shrinking or growing them to the target task's dimension.
//!
//! Acceptance compares a candidate with the deme's best solution, not with
//! the bat's own fitness, so bats only move on deme-wide improvements.

use rand::seq::IndexedRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::{EvalBudget, Objective, TaskObjective};
use crate::encoding::{random_permutation, Permutation};
use crate::error::{Error, Result};
use crate::operators::{apply_move, best_sampled_neighbor, hamming, MoveKind};
use crate::rng::{self, SolverRng};
use crate::solution::{SolverOutcome, TaskBest, TracePoint};
use crate::tsplib::TspInstance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoebaConfig {
    /// Total number of bats `X` across all demes.
    pub population_size: usize,
    /// Iterations between migrations.
    pub migration_period: usize,
    /// Loudness decay factor.
    pub alpha: f64,
    /// Pulse-rate growth constant.
    pub gamma: f64,
    pub loudness_init_range: (f64, f64),
    pub pulse_init_range: (f64, f64),
    /// 2-opt neighbours sampled around an elite bat.
    pub neighbor_samples: usize,
    /// Size of the elite pool used for local search and protected from
    /// replacement during migration.
    pub elite_pool_size: usize,
    /// Objective evaluations allowed for the whole run.
    pub budget: u64,
    pub seed: u64,
    /// Rebuild all demes from the pooled bats every this many iterations.
    /// Off by default.
    pub rebuild_period: Option<usize>,
    /// Evolve demes on worker threads between migrations.
    pub parallel_demes: bool,
}

impl Default for CoebaConfig {
    fn default() -> Self {
        CoebaConfig {
            population_size: 200,
            migration_period: 100,
            alpha: 0.98,
            gamma: 0.98,
            loudness_init_range: (0.8, 1.0),
            pulse_init_range: (0.0, 0.4),
            neighbor_samples: 10,
            elite_pool_size: 10,
            budget: 500_000,
            seed: 1,
            rebuild_period: None,
            parallel_demes: false,
        }
    }
}

impl CoebaConfig {
    /// Checks the configuration against a scenario with `tasks` tasks.
    pub fn validate(&self, tasks: usize) -> Result<()> {
        if tasks < 2 {
            return Err(Error::TooFewTasks {
                required: 2,
                actual: tasks,
            });
        }
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        if self.population_size < 2 * tasks {
            return bad("population_size must be at least twice the number of tasks");
        }
        if self.migration_period == 0 {
            return bad("migration_period must be at least 1");
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return bad("alpha must lie in (0, 1)");
        }
        if self.gamma <= 0.0 {
            return bad("gamma must be positive");
        }
        let (p_lo, p_hi) = self.pulse_init_range;
        if !(0.0 <= p_lo && p_lo <= p_hi && p_hi <= 1.0) {
            return bad("pulse_init_range must be an interval inside [0, 1]");
        }
        let (a_lo, a_hi) = self.loudness_init_range;
        if !(0.0 <= a_lo && a_lo <= a_hi) {
            return bad("loudness_init_range must be a non-negative interval");
        }
        if self.neighbor_samples == 0 || self.elite_pool_size == 0 {
            return bad("neighbor_samples and elite_pool_size must be positive");
        }
        let smallest = self.population_size / tasks;
        if smallest < self.elite_pool_size + 2 {
            return Err(Error::DemeTooSmall {
                deme: tasks - 1,
                size: smallest,
                protected: self.elite_pool_size,
            });
        }
        if self.rebuild_period == Some(0) {
            return bad("rebuild_period must be positive when set");
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

/// A COEBA individual living in one deme's task space.
#[derive(Debug, Clone, PartialEq)]
pub struct Bat {
    pub position: Permutation,
    pub fitness: u64,
    pub pulse_rate: f64,
    pub loudness: f64,
    pub initial_pulse_rate: f64,
    pub initial_loudness: f64,
    /// Iterations since the bat was created.
    pub age: u32,
}

impl Bat {
    /// A new bat with fresh initial pulse rate and loudness draws. The pulse
    /// rate starts at the schedule's value for age zero, which is 0.
    pub fn fresh<R: Rng + ?Sized>(
        position: Permutation,
        fitness: u64,
        cfg: &CoebaConfig,
        rng: &mut R,
    ) -> Bat {
        let initial_pulse_rate = uniform(cfg.pulse_init_range, rng);
        let initial_loudness = uniform(cfg.loudness_init_range, rng);
        Bat {
            position,
            fitness,
            pulse_rate: 0.0,
            loudness: initial_loudness,
            initial_pulse_rate,
            initial_loudness,
            age: 0,
        }
    }
}

fn uniform<R: Rng + ?Sized>((lo, hi): (f64, f64), rng: &mut R) -> f64 {
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

/// `r0 * (1 - exp(-gamma * t))`.
pub fn pulse_rate_schedule(initial: f64, gamma: f64, age: u32) -> f64 {
    initial * (1.0 - (-gamma * f64::from(age)).exp())
}

/// A subpopulation bound to one task.
#[derive(Debug, Clone)]
pub struct Deme {
    /// 0-based task index.
    pub task: usize,
    pub bats: Vec<Bat>,
    pub best: Permutation,
    pub best_fitness: u64,
}

impl Deme {
    pub fn dimension(&self) -> usize {
        self.best.dimension()
    }

    /// Indices of the `n` fittest bats, ties broken by index.
    pub fn elite_indices(&self, n: usize) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.bats.len()).collect();
        idx.sort_by_key(|&i| (self.bats[i].fitness, i));
        idx.truncate(n.min(idx.len()));
        idx
    }

    fn offer(&mut self, candidate: &Permutation, cost: u64) {
        if cost < self.best_fitness {
            self.best = candidate.clone();
            self.best_fitness = cost;
        }
    }
}

/// Sizes `floor(total / parts)`, with the remainder given one each to the
/// lowest-indexed parts.
pub fn deme_sizes(total: usize, parts: usize) -> Vec<usize> {
    let base = total / parts;
    let extra = total % parts;
    (0..parts).map(|k| base + usize::from(k < extra)).collect()
}

/// Generates `X` random permutations of the largest task dimension,
/// evaluates each on every task and gives each deme the fittest ones for its
/// task, projected to that task's dimension. A bat may be chosen by several
/// demes.
pub fn initialize<R: Rng + ?Sized>(
    instances: &[TspInstance],
    cfg: &CoebaConfig,
    budget: &mut EvalBudget,
    rng: &mut R,
) -> Result<(Vec<Permutation>, Vec<Deme>)> {
    let k = instances.len();
    if k < 2 {
        return Err(Error::TooFewTasks {
            required: 2,
            actual: k,
        });
    }
    let x = cfg.population_size;
    let required = (x * k) as u64;
    if budget.remaining() < required {
        return Err(Error::BudgetTooSmall {
            budget: budget.remaining(),
            required,
        });
    }
    let d_max = instances
        .iter()
        .map(TspInstance::dimension)
        .max()
        .unwrap_or(0);
    let population: Vec<Permutation> = (0..x).map(|_| random_permutation(d_max, rng)).collect();

    // costs[task][individual]
    let mut costs = vec![vec![0u64; x]; k];
    for (task, inst) in instances.iter().enumerate() {
        let mut obj = TaskObjective::new(inst, budget);
        for (i, genome) in population.iter().enumerate() {
            let tour = genome.project(inst.dimension())?;
            costs[task][i] = obj.evaluate(&tour).expect("budget checked above");
        }
    }

    let sizes = deme_sizes(x, k);
    let mut demes = Vec::with_capacity(k);
    for (task, inst) in instances.iter().enumerate() {
        let mut order: Vec<usize> = (0..x).collect();
        order.sort_by_key(|&i| (costs[task][i], i));
        let bats: Vec<Bat> = order[..sizes[task]]
            .iter()
            .map(|&i| {
                let pos = population[i]
                    .project(inst.dimension())
                    .expect("d_max bound");
                Bat::fresh(pos, costs[task][i], cfg, rng)
            })
            .collect();
        let best = bats[0].position.clone();
        let best_fitness = bats[0].fitness;
        demes.push(Deme {
            task,
            bats,
            best,
            best_fitness,
        });
    }
    Ok((population, demes))
}

/// One pass of the discrete bat update over every bat of `deme`.
///
/// Returns `false` if the budget ran out part-way through the pass.
pub fn bat_iteration<R: Rng + ?Sized>(
    deme: &mut Deme,
    instance: &TspInstance,
    cfg: &CoebaConfig,
    budget: &mut EvalBudget,
    rng: &mut R,
) -> bool {
    let dim = deme.dimension();
    let mut obj = TaskObjective::new(instance, budget);
    for i in 0..deme.bats.len() {
        let bat = &mut deme.bats[i];
        bat.age = bat.age.saturating_add(1);

        let distance = hamming(&bat.position, &deme.best).expect("deme dimension is homogeneous");
        let velocity = rng.random_range(1..=distance.max(1));
        let kind = if (velocity as f64) < dim as f64 / 2.0 {
            MoveKind::TwoOpt
        } else {
            MoveKind::Insertion
        };

        let local_search = rng.random::<f64>() > bat.pulse_rate;
        let evaluated = if local_search {
            let elites = deme.elite_indices(cfg.elite_pool_size);
            let chosen = *elites.choose(rng).expect("deme is non-empty");
            let origin = &deme.bats[chosen].position;
            best_sampled_neighbor(origin, cfg.neighbor_samples, &mut obj, rng)
        } else {
            let moved = apply_move(&deme.bats[i].position, kind, velocity, rng);
            obj.evaluate(&moved).map(|cost| (moved, cost))
        };
        let Some((candidate, cost)) = evaluated else {
            return false;
        };

        let bat = &mut deme.bats[i];
        if rng.random::<f64>() < bat.loudness && cost < deme.best_fitness {
            bat.position = candidate.clone();
            bat.fitness = cost;
            bat.pulse_rate = pulse_rate_schedule(bat.initial_pulse_rate, cfg.gamma, bat.age);
            bat.loudness *= cfg.alpha;
        }
        deme.offer(&candidate, cost);
    }
    true
}

/// Adapts a migrant to the target dimension: projection when shrinking,
/// inflation against the bat being replaced when growing.
pub fn adapt_migrant(migrant: &Permutation, replaced: &Permutation) -> Result<Permutation> {
    let target = replaced.dimension();
    match migrant.dimension().cmp(&target) {
        std::cmp::Ordering::Greater => migrant.project(target),
        std::cmp::Ordering::Less => migrant.inflate(replaced),
        std::cmp::Ordering::Equal => Ok(migrant.clone()),
    }
}

/// Each deme, in index order, sends copies of two bats (one from its elite
/// pool, one from anywhere) to a uniformly chosen other deme, where they
/// replace two distinct non-elite bats. Migrants are evaluated on the target
/// task, which counts against the budget.
///
/// Returns `Ok(false)` if the budget ran out during migration.
pub fn migrate<R: Rng + ?Sized>(
    demes: &mut [Deme],
    instances: &[TspInstance],
    cfg: &CoebaConfig,
    budget: &mut EvalBudget,
    rng: &mut R,
) -> Result<bool> {
    let k = demes.len();
    for deme in demes.iter() {
        if deme.bats.len() < cfg.elite_pool_size + 2 {
            return Err(Error::DemeTooSmall {
                deme: deme.task,
                size: deme.bats.len(),
                protected: cfg.elite_pool_size,
            });
        }
    }
    for source in 0..k {
        let mut target = rng.random_range(0..k - 1);
        if target >= source {
            target += 1;
        }

        let src = &demes[source];
        let elites = src.elite_indices(cfg.elite_pool_size);
        let first = src.bats[*elites.choose(rng).expect("elite pool non-empty")]
            .position
            .clone();
        let second = src.bats[rng.random_range(0..src.bats.len())]
            .position
            .clone();

        let dst = &demes[target];
        let protected = dst.elite_indices(cfg.elite_pool_size);
        let open: Vec<usize> = (0..dst.bats.len())
            .filter(|i| !protected.contains(i))
            .collect();
        let slots: Vec<usize> = open.choose_multiple(rng, 2).copied().collect();

        let instance = &instances[demes[target].task];
        for (migrant, slot) in [first, second].into_iter().zip(slots) {
            let dst = &mut demes[target];
            let position = adapt_migrant(&migrant, &dst.bats[slot].position)?;
            let Some(cost) = TaskObjective::new(instance, budget).evaluate(&position) else {
                return Ok(false);
            };
            dst.offer(&position, cost);
            dst.bats[slot] = Bat::fresh(position, cost, cfg, rng);
        }
    }
    Ok(true)
}

/// Pools every bat, lifts it to the largest dimension, re-evaluates it on
/// all tasks and rebuilds the demes as in initialisation. Bats keep their
/// pulse and loudness state. Costs `X * K` evaluations; returns `false`
/// (leaving the demes untouched) when the budget cannot cover them.
fn rebuild<R: Rng + ?Sized>(
    demes: &mut [Deme],
    instances: &[TspInstance],
    budget: &mut EvalBudget,
    rng: &mut R,
) -> bool {
    let pool: Vec<Bat> = demes.iter().flat_map(|d| d.bats.iter().cloned()).collect();
    let k = instances.len();
    if budget.remaining() < (pool.len() * k) as u64 {
        return false;
    }
    let d_max = instances
        .iter()
        .map(TspInstance::dimension)
        .max()
        .unwrap_or(0);
    let lifted: Vec<Permutation> = pool
        .iter()
        .map(|b| {
            let template = random_permutation(d_max, rng);
            b.position.inflate(&template).expect("d_max bound")
        })
        .collect();
    let sizes: Vec<usize> = demes.iter().map(|d| d.bats.len()).collect();
    for (task, inst) in instances.iter().enumerate() {
        let mut obj = TaskObjective::new(inst, budget);
        let scored: Vec<(u64, usize, Permutation)> = lifted
            .iter()
            .enumerate()
            .map(|(i, g)| {
                let tour = g.project(inst.dimension()).expect("d_max bound");
                let cost = obj.evaluate(&tour).expect("budget checked above");
                (cost, i, tour)
            })
            .collect();
        let mut scored = scored;
        scored.sort_by_key(|(c, i, _)| (*c, *i));
        let deme = &mut demes[task];
        deme.bats = scored
            .into_iter()
            .take(sizes[task])
            .map(|(cost, i, tour)| Bat {
                position: tour,
                fitness: cost,
                ..pool[i].clone()
            })
            .collect();
        let (best_cost, best) = deme
            .bats
            .iter()
            .map(|b| (b.fitness, &b.position))
            .min_by_key(|(c, _)| *c)
            .expect("non-empty deme");
        if best_cost < deme.best_fitness {
            deme.best = best.clone();
            deme.best_fitness = best_cost;
        }
    }
    true
}

/// A COEBA run in progress.
pub struct Coeba<'a> {
    instances: &'a [TspInstance],
    cfg: CoebaConfig,
    demes: Vec<Deme>,
    deme_rngs: Vec<SolverRng>,
    budget: EvalBudget,
    tick: u64,
    trace: Vec<TracePoint>,
}

impl<'a> Coeba<'a> {
    /// Validates the configuration and performs initialisation.
    pub fn new(instances: &'a [TspInstance], cfg: CoebaConfig) -> Result<Self> {
        cfg.validate(instances.len())?;
        let mut budget = EvalBudget::new(cfg.budget);
        let mut init_rng = rng::stream(cfg.seed, rng::MAIN_STREAM);
        let (_, demes) = initialize(instances, &cfg, &mut budget, &mut init_rng)?;
        let deme_rngs = (0..demes.len())
            .map(|k| rng::deme_stream(cfg.seed, k))
            .collect();
        let mut run = Coeba {
            instances,
            cfg,
            demes,
            deme_rngs,
            budget,
            tick: 0,
            trace: Vec::new(),
        };
        run.checkpoint();
        Ok(run)
    }

    pub fn demes(&self) -> &[Deme] {
        &self.demes
    }

    pub fn budget(&self) -> &EvalBudget {
        &self.budget
    }

    pub fn tick(&self) -> u64 {
        self.tick
    }

    pub fn trace(&self) -> &[TracePoint] {
        &self.trace
    }

    pub fn is_finished(&self) -> bool {
        self.budget.is_exhausted()
    }

    fn checkpoint(&mut self) {
        let used = self.budget.used();
        self.trace.extend(self.demes.iter().map(|d| TracePoint {
            evaluations_used: used,
            task: d.task,
            best_fitness: d.best_fitness,
        }));
        log::trace!(
            "tick {} evals {} best {:?}",
            self.tick,
            used,
            self.demes
                .iter()
                .map(|d| d.best_fitness)
                .collect::<Vec<_>>()
        );
    }

    /// Upper bound on the evaluations one deme pass can use.
    fn pass_allowance(&self, deme: &Deme) -> u64 {
        (deme.bats.len() * self.cfg.neighbor_samples.max(1)) as u64
    }

    /// Runs one iteration: a bat pass over every deme, then migration or
    /// rebuilding when due. Returns `false` once the budget is spent.
    pub fn step(&mut self) -> Result<bool> {
        if self.budget.is_exhausted() {
            return Ok(false);
        }
        self.tick += 1;
        let instances = self.instances;
        let cfg = &self.cfg;

        let worst_case: u64 = self.demes.iter().map(|d| self.pass_allowance(d)).sum();
        if cfg.parallel_demes && worst_case <= self.budget.remaining() {
            // No deme can be cut short, so the outcome matches a sequential pass.
            let allowances: Vec<u64> = self.demes.iter().map(|d| self.pass_allowance(d)).collect();
            let parent = self.budget;
            let children: Vec<EvalBudget> = self
                .demes
                .par_iter_mut()
                .zip(self.deme_rngs.par_iter_mut())
                .zip(allowances)
                .map(|((deme, rng), allowance)| {
                    let mut child = parent.split(allowance);
                    bat_iteration(deme, &instances[deme.task], cfg, &mut child, rng);
                    child
                })
                .collect();
            for child in &children {
                self.budget.absorb(child);
            }
        } else {
            for (deme, rng) in self.demes.iter_mut().zip(self.deme_rngs.iter_mut()) {
                if !bat_iteration(deme, &instances[deme.task], cfg, &mut self.budget, rng) {
                    break;
                }
            }
        }

        if !self.budget.is_exhausted() && self.tick % cfg.migration_period as u64 == 0 {
            let mut mrng = rng::migration_stream(cfg.seed, self.tick);
            migrate(&mut self.demes, instances, cfg, &mut self.budget, &mut mrng)?;
        }
        if let Some(period) = cfg.rebuild_period {
            if !self.budget.is_exhausted() && self.tick % period as u64 == 0 {
                let mut rrng = rng::rebuild_stream(cfg.seed, self.tick);
                rebuild(&mut self.demes, instances, &mut self.budget, &mut rrng);
            }
        }
        self.checkpoint();
        Ok(!self.budget.is_exhausted())
    }

    pub fn finish(self) -> SolverOutcome {
        let best = self
            .demes
            .iter()
            .map(|d| TaskBest {
                instance: self.instances[d.task].name().to_string(),
                fitness: d.best_fitness,
                tour: d.best.clone(),
            })
            .collect();
        SolverOutcome {
            best,
            trace: self.trace,
            evaluations_used: self.budget.used(),
        }
    }
}

/// Runs COEBA until the evaluation budget is spent.
pub fn run(instances: &[TspInstance], cfg: &CoebaConfig) -> Result<SolverOutcome> {
    let mut state = Coeba::new(instances, cfg.clone())?;
    while state.step()? {}
    Ok(state.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_instance(name: &str, n: usize, seed: u64) -> TspInstance {
        let mut r = ChaCha8Rng::seed_from_u64(seed);
        let coords = (0..n)
            .map(|_| (r.random_range(0.0..1000.0), r.random_range(0.0..1000.0)))
            .collect();
        TspInstance::from_coords(name, coords).unwrap()
    }

    fn scenario(dims: &[usize]) -> Vec<TspInstance> {
        dims.iter()
            .enumerate()
            .map(|(i, &n)| random_instance(&format!("r{n}"), n, 100 + i as u64))
            .collect()
    }

    fn small_cfg() -> CoebaConfig {
        CoebaConfig {
            population_size: 60,
            migration_period: 3,
            budget: 20_000,
            ..CoebaConfig::default()
        }
    }

    #[test]
    fn deme_size_rule() {
        assert_eq!(deme_sizes(200, 4), vec![50; 4]);
        assert_eq!(deme_sizes(200, 8), vec![25; 8]);
        let six = deme_sizes(200, 6);
        assert_eq!(six, vec![34, 34, 33, 33, 33, 33]);
        assert_eq!(six.iter().sum::<usize>(), 200);
    }

    #[test]
    fn initialization_builds_projected_demes() {
        let insts = scenario(&[12, 20, 16, 9]);
        let cfg = CoebaConfig {
            budget: 1000,
            ..CoebaConfig::default()
        };
        let mut budget = EvalBudget::new(cfg.budget);
        let mut r = ChaCha8Rng::seed_from_u64(1);
        let (pop, demes) = initialize(&insts, &cfg, &mut budget, &mut r).unwrap();
        assert_eq!(pop.len(), 200);
        assert!(pop.iter().all(|p| p.dimension() == 20));
        assert_eq!(budget.used(), 800);
        assert_eq!(demes.len(), 4);
        for (deme, inst) in demes.iter().zip(&insts) {
            assert_eq!(deme.bats.len(), 50);
            for bat in &deme.bats {
                assert_eq!(bat.position.dimension(), inst.dimension());
                assert_eq!(bat.fitness, inst.tour_length(&bat.position).unwrap());
                assert!((0.0..=0.4).contains(&bat.initial_pulse_rate));
                assert!((0.8..=1.0).contains(&bat.initial_loudness));
                assert_eq!(bat.loudness, bat.initial_loudness);
            }
            // The deme holds exactly the top-50 projected costs.
            let mut all: Vec<u64> = pop
                .iter()
                .map(|g| {
                    inst.tour_length(&g.project(inst.dimension()).unwrap())
                        .unwrap()
                })
                .collect();
            all.sort_unstable();
            let mut mine: Vec<u64> = deme.bats.iter().map(|b| b.fitness).collect();
            mine.sort_unstable();
            assert_eq!(mine, all[..50]);
            assert_eq!(deme.best_fitness, all[0]);
        }
    }

    #[test]
    fn initialization_errors() {
        let insts = scenario(&[10, 12]);
        let cfg = CoebaConfig::default();
        let mut r = ChaCha8Rng::seed_from_u64(1);
        let mut tiny = EvalBudget::new(399);
        assert!(matches!(
            initialize(&insts, &cfg, &mut tiny, &mut r),
            Err(Error::BudgetTooSmall { required: 400, .. })
        ));
        let mut ok = EvalBudget::new(1000);
        assert!(matches!(
            initialize(&insts[..1], &cfg, &mut ok, &mut r),
            Err(Error::TooFewTasks { .. })
        ));
    }

    #[test]
    fn config_validation() {
        assert!(CoebaConfig::default().validate(8).is_ok());
        assert!(CoebaConfig::default().validate(1).is_err());
        let bad_alpha = CoebaConfig {
            alpha: 1.0,
            ..CoebaConfig::default()
        };
        assert!(bad_alpha.validate(4).is_err());
        let bad_migr = CoebaConfig {
            migration_period: 0,
            ..CoebaConfig::default()
        };
        assert!(bad_migr.validate(4).is_err());
        let small_pop = CoebaConfig {
            population_size: 7,
            ..CoebaConfig::default()
        };
        assert!(small_pop.validate(4).is_err());
        let crowded = CoebaConfig {
            population_size: 60,
            ..CoebaConfig::default()
        };
        assert!(matches!(
            crowded.validate(8),
            Err(Error::DemeTooSmall { size: 7, .. })
        ));
        assert!(crowded.validate(4).is_ok());
        let exact = CoebaConfig {
            budget: 800,
            ..CoebaConfig::default()
        };
        assert!(exact.validate(4).is_ok());
        let short = CoebaConfig {
            budget: 799,
            ..CoebaConfig::default()
        };
        assert!(matches!(
            short.validate(4),
            Err(Error::BudgetTooSmall { .. })
        ));
    }

    #[test]
    fn pulse_schedule_value() {
        let r = pulse_rate_schedule(0.4, 0.98, 1);
        assert!((r - 0.4 * (1.0 - (-0.98f64).exp())).abs() < 1e-15);
        assert!((r - 0.2499).abs() < 1e-4);
        assert_eq!(pulse_rate_schedule(0.4, 0.98, 0), 0.0);
    }

    #[test]
    fn zero_distance_velocity_is_one() {
        // Every bat sits on the deme best, so hamming is 0 and the velocity
        // draw collapses to a single elementary move.
        let inst = random_instance("r8", 8, 3);
        let cfg = CoebaConfig {
            pulse_init_range: (1.0, 1.0),
            ..small_cfg()
        };
        let start = Permutation::identity(8);
        let cost = inst.tour_length(&start).unwrap();
        let mut r = ChaCha8Rng::seed_from_u64(5);
        let mut bat = Bat::fresh(start.clone(), cost, &cfg, &mut r);
        // Pulse rate 1 disables the local-search branch.
        bat.pulse_rate = 1.0;
        let mut deme = Deme {
            task: 0,
            bats: vec![bat],
            best: start.clone(),
            best_fitness: cost,
        };
        let mut budget = EvalBudget::new(10);
        assert!(bat_iteration(&mut deme, &inst, &cfg, &mut budget, &mut r));
        assert_eq!(budget.used(), 1);
        let pos = &deme.bats[0].position;
        assert!(*pos == start || crate::operators::hamming(pos, &start).unwrap() >= 2);
    }

    #[test]
    fn acceptance_updates_loudness_and_pulse() {
        let inst = random_instance("r30", 30, 4);
        let cfg = small_cfg();
        let mut r = ChaCha8Rng::seed_from_u64(8);
        let start = random_permutation(30, &mut r);
        let cost = inst.tour_length(&start).unwrap();
        let mut bat = Bat::fresh(start.clone(), cost, &cfg, &mut r);
        bat.loudness = 1.0;
        bat.initial_loudness = 1.0;
        let mut deme = Deme {
            task: 0,
            bats: vec![bat],
            best: start,
            best_fitness: cost,
        };
        let mut budget = EvalBudget::new(100_000);
        // Random tour on 30 cities: some 2-opt neighbour improves quickly.
        for _ in 0..50 {
            bat_iteration(&mut deme, &inst, &cfg, &mut budget, &mut r);
            if deme.bats[0].loudness < 1.0 {
                break;
            }
        }
        let bat = &deme.bats[0];
        assert!(bat.loudness < 1.0);
        let accepted = (bat.loudness.ln() / 0.98f64.ln()).round() as i32;
        assert!((bat.loudness - 0.98f64.powi(accepted)).abs() < 1e-12);
        assert!(bat.pulse_rate > 0.0 && bat.pulse_rate <= bat.initial_pulse_rate);
    }

    #[test]
    fn single_acceptance_scales_loudness_by_alpha() {
        let inst = random_instance("r30", 30, 4);
        let cfg = small_cfg();
        let mut r = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let start = random_permutation(30, &mut r);
            let cost = inst.tour_length(&start).unwrap();
            let mut bat = Bat::fresh(start.clone(), cost, &cfg, &mut r);
            bat.loudness = 1.0;
            let mut deme = Deme {
                task: 0,
                bats: vec![bat],
                best: start,
                best_fitness: cost,
            };
            let mut budget = EvalBudget::new(1000);
            bat_iteration(&mut deme, &inst, &cfg, &mut budget, &mut r);
            if deme.bats[0].fitness < cost {
                assert!((deme.bats[0].loudness - 0.98).abs() < 1e-15);
                return;
            }
        }
        panic!("no acceptance observed");
    }

    #[test]
    fn migration_between_dimensions() {
        let insts = scenario(&[40, 16]);
        let cfg = CoebaConfig {
            population_size: 40,
            budget: 10_000,
            ..CoebaConfig::default()
        };
        let mut budget = EvalBudget::new(cfg.budget);
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let (_, mut demes) = initialize(&insts, &cfg, &mut budget, &mut r).unwrap();
        let before_src: Vec<Permutation> =
            demes[0].bats.iter().map(|b| b.position.clone()).collect();
        let before_dst: Vec<Permutation> =
            demes[1].bats.iter().map(|b| b.position.clone()).collect();
        let protected_dst = demes[1].elite_indices(cfg.elite_pool_size);
        let used = budget.used();

        // With K = 2, deme 0 always targets deme 1 and vice versa.
        assert!(migrate(&mut demes, &insts, &cfg, &mut budget, &mut r).unwrap());
        assert_eq!(budget.used() - used, 4);

        let changed: Vec<usize> = (0..demes[1].bats.len())
            .filter(|&i| demes[1].bats[i].position != before_dst[i])
            .collect();
        assert!(changed.len() <= 2);
        for &i in &changed {
            assert!(!protected_dst.contains(&i));
            let p = &demes[1].bats[i].position;
            assert_eq!(p.dimension(), 16);
            assert!(p.is_valid());
            // A projected copy of some deme-0 bat.
            assert!(before_src.iter().any(|s| s.project(16).unwrap() == *p));
        }
        for deme in &demes {
            assert!(deme
                .bats
                .iter()
                .all(|b| b.position.dimension() == deme.dimension()));
        }
    }

    #[test]
    fn inflating_migrant_keeps_large_values_in_place() {
        let migrant = random_permutation(76, &mut ChaCha8Rng::seed_from_u64(1));
        let replaced = random_permutation(264, &mut ChaCha8Rng::seed_from_u64(2));
        let adapted = adapt_migrant(&migrant, &replaced).unwrap();
        assert!(adapted.is_valid());
        assert_eq!(adapted.dimension(), 264);
        for (i, &v) in replaced.as_slice().iter().enumerate() {
            if v > 76 {
                assert_eq!(adapted.as_slice()[i], v);
            }
        }
        assert_eq!(adapted.project(76).unwrap(), migrant);
        let shrunk = adapt_migrant(&replaced, &migrant).unwrap();
        assert_eq!(shrunk, replaced.project(76).unwrap());
    }

    #[test]
    fn migration_rejects_small_demes() {
        let insts = scenario(&[10, 12]);
        let cfg = CoebaConfig {
            population_size: 20,
            budget: 1000,
            ..CoebaConfig::default()
        };
        let mut budget = EvalBudget::new(cfg.budget);
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let (_, mut demes) = initialize(&insts, &cfg, &mut budget, &mut r).unwrap();
        assert!(matches!(
            migrate(&mut demes, &insts, &cfg, &mut budget, &mut r),
            Err(Error::DemeTooSmall { .. })
        ));
    }

    #[test]
    fn initialization_only_run() {
        let insts = scenario(&[10, 12, 14, 9]);
        let cfg = CoebaConfig {
            budget: 800,
            ..CoebaConfig::default()
        };
        let out = run(&insts, &cfg).unwrap();
        assert_eq!(out.evaluations_used, 800);
        assert_eq!(out.best.len(), 4);
        for (b, inst) in out.best.iter().zip(&insts) {
            assert_eq!(b.fitness, inst.tour_length(&b.tour).unwrap());
        }
    }

    #[test]
    fn run_is_deterministic_and_spends_budget() {
        let insts = scenario(&[25, 18, 30]);
        let cfg = small_cfg();
        let a = run(&insts, &cfg).unwrap();
        let b = run(&insts, &cfg).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.evaluations_used, cfg.budget);
        for (best, inst) in a.best.iter().zip(&insts) {
            assert_eq!(best.fitness, inst.tour_length(&best.tour).unwrap());
        }
    }

    #[test]
    fn parallel_demes_match_sequential() {
        let insts = scenario(&[25, 18, 30]);
        let seq = run(&insts, &small_cfg()).unwrap();
        let par = run(
            &insts,
            &CoebaConfig {
                parallel_demes: true,
                ..small_cfg()
            },
        )
        .unwrap();
        assert_eq!(seq, par);
    }

    #[test]
    fn rebuild_keeps_demes_consistent() {
        let insts = scenario(&[25, 18, 30]);
        let cfg = CoebaConfig {
            rebuild_period: Some(2),
            ..small_cfg()
        };
        let mut state = Coeba::new(&insts, cfg.clone()).unwrap();
        let sizes: Vec<usize> = state.demes().iter().map(|d| d.bats.len()).collect();
        let mut last: Vec<u64> = state.demes().iter().map(|d| d.best_fitness).collect();
        while state.step().unwrap() {
            for (k, d) in state.demes().iter().enumerate() {
                assert_eq!(d.bats.len(), sizes[k]);
                assert!(d
                    .bats
                    .iter()
                    .all(|b| b.position.dimension() == insts[k].dimension()));
                assert!(d.best_fitness <= last[k]);
                last[k] = d.best_fitness;
            }
        }
        assert_eq!(state.budget().used(), cfg.budget);
    }
}
