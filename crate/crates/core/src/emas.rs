//! The EMAS engine: agents with energy, the meet / reproduce / die cycle and
//! the main loop that runs until the evaluation budget is spent.
//!
//! Energy is never created or destroyed. Meetings move a fixed quantum from
//! the worse agent to the better one, a child is funded by its parents, and an
//! agent is removed only once its energy has run out.

use serde::{Deserialize, Serialize};

use crate::benchmarks::{EvalBudget, ObjectiveFunction};
use crate::variation::{
    polynomial_mutation_in_place, sbx_crossover, MutationParams, RngStream, SbxParams,
};
use crate::{Error, Genotype, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub id: u64,
    pub genotype: Genotype,
    /// Cached objective value of `genotype`.
    pub fitness: f64,
    pub energy: f64,
}

/// The agents of one run together with the energy pool they share.
#[derive(Debug, Clone, PartialEq)]
pub struct Population {
    pub agents: Vec<Agent>,
    total_energy: f64,
    next_id: u64,
}

impl Population {
    pub fn new(agents: Vec<Agent>) -> Self {
        let total_energy = agents.iter().map(|a| a.energy).sum();
        let next_id = agents.iter().map(|a| a.id + 1).max().unwrap_or(0);
        Population {
            agents,
            total_energy,
            next_id,
        }
    }

    /// Energy the population was created with; the conserved quantity.
    pub fn total_energy(&self) -> f64 {
        self.total_energy
    }

    /// Current sum of agent energies.
    pub fn energy_sum(&self) -> f64 {
        self.agents.iter().map(|a| a.energy).sum()
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn best(&self) -> Option<&Agent> {
        self.agents
            .iter()
            .min_by(|a, b| a.fitness.total_cmp(&b.fitness))
    }

    pub fn get(&self, id: u64) -> Option<&Agent> {
        self.agents.iter().find(|a| a.id == id)
    }

    pub fn get_mut(&mut self, id: u64) -> Option<&mut Agent> {
        self.agents.iter_mut().find(|a| a.id == id)
    }

    fn fresh_id(&mut self) -> u64 {
        let id = self.next_id;
        self.next_id += 1;
        id
    }
}

/// Parameters of the agent system. Defaults are the standard experimental setting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmasParams {
    pub population_size: usize,
    pub total_energy: f64,
    pub initial_energy: f64,
    /// Energy a meeting winner takes from the loser.
    pub meet_transfer: f64,
    pub death_threshold: f64,
    pub reproduction_threshold: f64,
    pub crossover: SbxParams,
    pub mutation: MutationParams,
    pub strong_mutation: MutationParams,
    /// Loop iterations without a single fitness evaluation after which the
    /// run is abandoned. Only reachable on degenerate populations.
    pub max_idle_steps: u64,
}

impl Default for EmasParams {
    fn default() -> Self {
        EmasParams {
            population_size: 50,
            total_energy: 500.0,
            initial_energy: 10.0,
            meet_transfer: 1.0,
            death_threshold: 0.0,
            reproduction_threshold: 20.0,
            crossover: SbxParams {
                distribution_index: 5.0,
                probability: 1.0,
            },
            mutation: MutationParams {
                distribution_index: 10.0,
                probability: 0.01,
            },
            strong_mutation: MutationParams::STRONG,
            max_idle_steps: 1_000_000,
        }
    }
}

impl EmasParams {
    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, reason: &str| Err(Error::config(format!("emas.{field}"), reason));
        if self.population_size == 0 {
            return bad("population_size", "must be at least 1");
        }
        if !(self.initial_energy > 0.0) {
            return bad("initial_energy", "must be positive");
        }
        let pooled = self.population_size as f64 * self.initial_energy;
        if (pooled - self.total_energy).abs() > 1e-9 * self.total_energy.abs().max(1.0) {
            return bad(
                "total_energy",
                "must equal population_size × initial_energy",
            );
        }
        if !(self.meet_transfer > 0.0) {
            return bad("meet_transfer", "must be positive");
        }
        if !(self.death_threshold >= 0.0) {
            return bad("death_threshold", "must be non-negative");
        }
        if !(self.reproduction_threshold >= self.initial_energy) {
            return bad(
                "reproduction_threshold",
                "must be at least initial_energy so a lone parent can fund a child",
            );
        }
        SbxParams::new(self.crossover.distribution_index, self.crossover.probability)?;
        MutationParams::new(self.mutation.distribution_index, self.mutation.probability)?;
        MutationParams::new(
            self.strong_mutation.distribution_index,
            self.strong_mutation.probability,
        )?;
        if self.max_idle_steps == 0 {
            return bad("max_idle_steps", "must be at least 1");
        }
        Ok(())
    }
}

/// Best solution seen so far.
#[derive(Debug, Clone, PartialEq)]
pub struct BestSolution {
    pub genotype: Genotype,
    pub fitness: f64,
}

/// One best-so-far sample, keyed by evaluations spent.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryPoint {
    pub evals: u64,
    pub best_fitness: f64,
}

/// A hybrid operator that fired during a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriggerEvent {
    pub step: u64,
    pub rule: String,
    pub participants: usize,
}

/// Mutable state of a single run.
#[derive(Debug, Clone)]
pub struct RunState {
    pub population: Population,
    pub budget: EvalBudget,
    pub step_index: u64,
    pub global_best: BestSolution,
    pub trajectory: Vec<TrajectoryPoint>,
    pub trigger_log: Vec<TriggerEvent>,
}

impl RunState {
    /// Wraps an evaluated population.
    pub fn new(population: Population, budget: EvalBudget) -> Result<Self> {
        let best = population.best().ok_or(Error::EmptyInput)?;
        let global_best = BestSolution {
            genotype: best.genotype.clone(),
            fitness: best.fitness,
        };
        let mut state = RunState {
            population,
            budget,
            step_index: 0,
            global_best,
            trajectory: Vec::new(),
            trigger_log: Vec::new(),
        };
        state.update_progress();
        Ok(state)
    }

    /// Considers a freshly evaluated solution for the best-so-far record.
    pub fn offer(&mut self, genotype: &[f64], fitness: f64) {
        if fitness < self.global_best.fitness {
            self.global_best = BestSolution {
                genotype: genotype.to_vec(),
                fitness,
            };
        }
    }

    /// Refreshes the best-so-far record from the current population.
    pub fn update_global_best(&mut self) {
        if let Some(best) = self.population.best() {
            if best.fitness < self.global_best.fitness {
                self.global_best = BestSolution {
                    genotype: best.genotype.clone(),
                    fitness: best.fitness,
                };
            }
        }
    }

    /// Appends a trajectory sample when evaluations were spent since the last one.
    pub fn update_progress(&mut self) {
        let evals = self.budget.used();
        if self.trajectory.last().is_none_or(|p| p.evals < evals) {
            self.trajectory.push(TrajectoryPoint {
                evals,
                best_fitness: self.global_best.fitness,
            });
        }
    }
}

/// Summary of the population left at the end of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationSummary {
    pub size: usize,
    pub best_fitness: f64,
    pub mean_fitness: f64,
    pub energy_sum: f64,
}

impl PopulationSummary {
    pub fn of(population: &Population) -> Self {
        let n = population.len();
        PopulationSummary {
            size: n,
            best_fitness: population.best().map_or(f64::NAN, |a| a.fitness),
            mean_fitness: population.agents.iter().map(|a| a.fitness).sum::<f64>() / n as f64,
            energy_sum: population.energy_sum(),
        }
    }
}

/// Outcome of one EMAS or HEMAS run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub trajectory: Vec<TrajectoryPoint>,
    pub best: BestSolution,
    pub evaluations: u64,
    pub steps: u64,
    pub final_population: PopulationSummary,
    pub trigger_log: Vec<TriggerEvent>,
    /// Population at the end of the run.
    pub population: Population,
}

impl RunRecord {
    pub fn final_best_fitness(&self) -> f64 {
        self.best.fitness
    }
}

/// Samples `population_size` agents uniformly in the box, each holding
/// `initial_energy`, and evaluates them.
pub fn create_initial_population(
    params: &EmasParams,
    f: &ObjectiveFunction,
    budget: &mut EvalBudget,
    rng: &mut RngStream,
) -> Result<Population> {
    if budget.remaining() < params.population_size as u64 {
        return Err(Error::BudgetExhausted {
            limit: budget.limit(),
        });
    }
    let bounds = f.bounds();
    let mut agents = Vec::with_capacity(params.population_size);
    for id in 0..params.population_size as u64 {
        let genotype: Genotype = (0..f.dimension())
            .map(|_| rng.uniform_in(bounds.lower, bounds.upper))
            .collect();
        let fitness = f.evaluate(&genotype, budget)?;
        agents.push(Agent {
            id,
            genotype,
            fitness,
            energy: params.initial_energy,
        });
    }
    Ok(Population::new(agents))
}

/// Random pairwise meetings. The strictly better agent of each pair takes
/// up to `meet_transfer` energy from the other; ties move nothing.
pub fn meet_step(state: &mut RunState, params: &EmasParams, rng: &mut RngStream) {
    let agents = &mut state.population.agents;
    let mut order: Vec<usize> = (0..agents.len()).collect();
    rng.shuffle(&mut order);
    for pair in order.chunks_exact(2) {
        let (a, b) = (pair[0], pair[1]);
        let (winner, loser) = if agents[a].fitness < agents[b].fitness {
            (a, b)
        } else if agents[b].fitness < agents[a].fitness {
            (b, a)
        } else {
            continue;
        };
        let amount = params.meet_transfer.min(agents[loser].energy);
        agents[loser].energy -= amount;
        agents[winner].energy += amount;
    }
}

/// Agents at or above the reproduction threshold are paired at random and
/// each pair produces one child funded equally by both parents.
///
/// When an odd number of agents is eligible the leftover one waits for a
/// partner in a later step; only an agent that is the sole eligible one
/// reproduces alone, producing a strongly mutated copy of itself.
///
/// A child is only created if its evaluation fits into the budget.
pub fn repro_step(
    state: &mut RunState,
    params: &EmasParams,
    f: &ObjectiveFunction,
    rng: &mut RngStream,
) -> Result<()> {
    let bounds = f.bounds();
    let mut eligible: Vec<usize> = state
        .population
        .agents
        .iter()
        .enumerate()
        .filter(|(_, a)| a.energy >= params.reproduction_threshold)
        .map(|(i, _)| i)
        .collect();
    if eligible.is_empty() {
        return Ok(());
    }
    rng.shuffle(&mut eligible);

    let groups: Vec<&[usize]> = if eligible.len() == 1 {
        vec![&eligible[..]]
    } else {
        eligible.chunks_exact(2).collect()
    };
    let mut children = Vec::new();
    for group in groups {
        if state.budget.is_exhausted() {
            break;
        }
        let agents = &state.population.agents;
        let genotype = match *group {
            [a, b] => {
                let (mut child, _) = sbx_crossover(
                    &agents[a].genotype,
                    &agents[b].genotype,
                    &params.crossover,
                    &bounds,
                    rng,
                )?;
                polynomial_mutation_in_place(&mut child, &params.mutation, &bounds, rng);
                child
            }
            [a] => {
                let mut child = agents[a].genotype.clone();
                polynomial_mutation_in_place(&mut child, &params.strong_mutation, &bounds, rng);
                child
            }
            _ => unreachable!(),
        };
        let fitness = match f.evaluate(&genotype, &mut state.budget) {
            Ok(v) => v,
            Err(Error::BudgetExhausted { .. }) => break,
            Err(e) => return Err(e),
        };
        let share = params.initial_energy / group.len() as f64;
        for &parent in group {
            state.population.agents[parent].energy -= share;
        }
        state.offer(&genotype, fitness);
        let id = state.population.fresh_id();
        children.push(Agent {
            id,
            genotype,
            fitness,
            energy: params.initial_energy,
        });
    }
    state.population.agents.extend(children);
    Ok(())
}

/// Removes agents whose energy fell to the death threshold. The last agent
/// is never removed: if everyone would die, the fittest one survives.
pub fn dead_step(state: &mut RunState, params: &EmasParams) {
    let agents = &mut state.population.agents;
    if agents.iter().all(|a| a.energy <= params.death_threshold) {
        if let Some(best) = agents
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| a.fitness.total_cmp(&b.fitness))
            .map(|(i, _)| i)
        {
            let survivor = agents.swap_remove(best);
            agents.clear();
            agents.push(survivor);
        }
        return;
    }
    agents.retain(|a| a.energy > params.death_threshold);
}

/// Extra work performed once per loop iteration after the death step.
///
/// This is where HEMAS plugs its hybridization step into the EMAS loop.
pub trait StepExtension {
    fn after_dead_step(
        &mut self,
        state: &mut RunState,
        f: &ObjectiveFunction,
        rng: &mut RngStream,
    ) -> Result<()>;
}

/// The plain EMAS loop has nothing to add.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoExtension;

impl StepExtension for NoExtension {
    fn after_dead_step(&mut self, _: &mut RunState, _: &ObjectiveFunction, _: &mut RngStream) -> Result<()> {
        Ok(())
    }
}

/// Runs plain EMAS until the budget is exhausted.
pub fn run_emas(
    params: &EmasParams,
    f: &ObjectiveFunction,
    budget: EvalBudget,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    run_engine(params, f, budget, rng, &mut NoExtension, |_| {})
}

/// The shared main loop. `observe` sees the state after every completed iteration.
pub fn run_engine<X, O>(
    params: &EmasParams,
    f: &ObjectiveFunction,
    mut budget: EvalBudget,
    rng: &mut RngStream,
    extension: &mut X,
    mut observe: O,
) -> Result<RunRecord>
where
    X: StepExtension + ?Sized,
    O: FnMut(&RunState),
{
    params.validate()?;
    let population = create_initial_population(params, f, &mut budget, rng)?;
    let mut state = RunState::new(population, budget)?;
    let mut idle_steps = 0;

    while !state.budget.is_exhausted() {
        let used_before = state.budget.used();
        meet_step(&mut state, params, rng);
        repro_step(&mut state, params, f, rng)?;
        dead_step(&mut state, params);
        state.step_index += 1;
        extension.after_dead_step(&mut state, f, rng)?;
        state.update_global_best();
        state.update_progress();
        observe(&state);

        if state.budget.used() == used_before {
            idle_steps += 1;
            if idle_steps >= params.max_idle_steps {
                break;
            }
        } else {
            idle_steps = 0;
        }
    }

    Ok(RunRecord {
        final_population: PopulationSummary::of(&state.population),
        evaluations: state.budget.used(),
        steps: state.step_index,
        trajectory: state.trajectory,
        best: state.global_best,
        trigger_log: state.trigger_log,
        population: state.population,
    })
}
