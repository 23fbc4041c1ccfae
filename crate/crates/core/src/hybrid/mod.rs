//! HEMAS: the EMAS loop extended with a periodic hybridization step.
//!
//! Every `period` iterations each configured operator evaluates its trigger
//! rule. When enough agents are willing, their solutions seed the operator
//! (PSO or GA here; anything implementing [`HybridOperator`] can be plugged
//! in), the improved solutions are written back and the participants' pooled
//! energy is redistributed according to their new fitness.

mod ga;
mod pso;
mod redistribution;
mod rules;

use serde::{Deserialize, Serialize};

pub use ga::{run_ga, run_ga_with, Ga, GaParams};
pub use pso::{run_pso, run_pso_with, Pso, PsoParams};
pub use redistribution::{redistribute_energy, RedistributionScheme};
pub use rules::{
    diversity, evaluate_rule, quartile, Metric, PopulationStatistic, Quartile, Relation, RuleSpec,
    Scope, Threshold, EQUAL_TOLERANCE,
};

use crate::benchmarks::{EvalBudget, ObjectiveFunction};
use crate::emas::{run_engine, EmasParams, RunRecord, RunState, StepExtension, TriggerEvent};
use crate::variation::RngStream;
use crate::{Error, Genotype, Result};

/// An agent's solution as seen by a hybrid operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Participant {
    pub id: u64,
    pub genotype: Genotype,
    pub fitness: f64,
}

/// A metaheuristic that can improve a group of agents' solutions.
///
/// Implementations must return one entry per participant id, with fitness
/// values obtained from `f.evaluate` (they are cached without re-evaluation)
/// and must stop gracefully when the budget runs out.
pub trait HybridOperator: Send + Sync {
    fn name(&self) -> &str;

    fn optimize(
        &self,
        participants: &[Participant],
        f: &ObjectiveFunction,
        budget: &mut EvalBudget,
        rng: &mut RngStream,
        max_cycles: usize,
    ) -> Result<Vec<Participant>>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum HybridAlgorithm {
    Pso,
    Ga,
}

impl HybridAlgorithm {
    fn build(self) -> Box<dyn HybridOperator> {
        match self {
            HybridAlgorithm::Pso => Box::new(Pso::default()),
            HybridAlgorithm::Ga => Box::new(Ga::default()),
        }
    }
}

fn default_min_participants() -> usize {
    2
}

fn default_max_cycles() -> usize {
    3
}

fn default_period() -> u64 {
    2000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HybridOperatorSpec {
    pub algorithm: HybridAlgorithm,
    pub rule: RuleSpec,
    #[serde(default = "default_min_participants")]
    pub min_participants: usize,
    #[serde(default = "default_max_cycles")]
    pub max_cycles: usize,
}

impl HybridOperatorSpec {
    pub fn new(algorithm: HybridAlgorithm, rule: &str) -> Result<Self> {
        Ok(HybridOperatorSpec {
            algorithm,
            rule: rule.parse()?,
            min_participants: default_min_participants(),
            max_cycles: default_max_cycles(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HybridConfig {
    pub operators: Vec<HybridOperatorSpec>,
    /// Main-loop iterations between hybridization checks.
    #[serde(default = "default_period")]
    pub period: u64,
    #[serde(default)]
    pub redistribution: RedistributionScheme,
}

impl HybridConfig {
    pub fn new(operators: Vec<HybridOperatorSpec>) -> Self {
        HybridConfig {
            operators,
            period: default_period(),
            redistribution: RedistributionScheme::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.period == 0 {
            return Err(Error::config("hybrid.period", "must be at least 1"));
        }
        for (i, op) in self.operators.iter().enumerate() {
            if op.min_participants < 2 {
                return Err(Error::config(
                    format!("hybrid.operators[{i}].min_participants"),
                    "population-based operators need at least 2 participants",
                ));
            }
        }
        Ok(())
    }
}

struct BoundOperator {
    rule: RuleSpec,
    min_participants: usize,
    max_cycles: usize,
    operator: Box<dyn HybridOperator>,
}

/// The hybridization step, ready to be attached to the EMAS loop.
pub struct Hybridizer {
    operators: Vec<BoundOperator>,
    period: u64,
    redistribution: RedistributionScheme,
}

impl Hybridizer {
    pub fn new(config: &HybridConfig) -> Result<Self> {
        config.validate()?;
        if config.redistribution != RedistributionScheme::Proportional && !config.operators.is_empty() {
            // fail before the run rather than at the first trigger
            redistribute_energy(&[(0, 0.0)], 0.0, config.redistribution)?;
        }
        Ok(Hybridizer {
            operators: config
                .operators
                .iter()
                .map(|spec| BoundOperator {
                    rule: spec.rule,
                    min_participants: spec.min_participants,
                    max_cycles: spec.max_cycles,
                    operator: spec.algorithm.build(),
                })
                .collect(),
            period: config.period,
            redistribution: config.redistribution,
        })
    }

    /// Adds a custom operator after the configured ones.
    pub fn with_operator(
        mut self,
        rule: RuleSpec,
        min_participants: usize,
        max_cycles: usize,
        operator: Box<dyn HybridOperator>,
    ) -> Self {
        self.operators.push(BoundOperator {
            rule,
            min_participants,
            max_cycles,
            operator,
        });
        self
    }

    /// Runs every operator once, in order, against the current population.
    pub fn step(&self, state: &mut RunState, f: &ObjectiveFunction, rng: &mut RngStream) -> Result<()> {
        for bound in &self.operators {
            if state.budget.is_exhausted() {
                break;
            }
            let ids = evaluate_rule(&bound.rule, &state.population);
            if ids.len() < bound.min_participants {
                continue;
            }
            let participants: Vec<Participant> = ids
                .iter()
                .filter_map(|id| state.population.get(*id))
                .map(|a| Participant {
                    id: a.id,
                    genotype: a.genotype.clone(),
                    fitness: a.fitness,
                })
                .collect();
            let pool: f64 = ids
                .iter()
                .filter_map(|id| state.population.get(*id))
                .map(|a| a.energy)
                .sum();

            let improved = bound.operator.optimize(
                &participants,
                f,
                &mut state.budget,
                rng,
                bound.max_cycles,
            )?;

            for p in &improved {
                if let Some(agent) = state.population.get_mut(p.id) {
                    agent.genotype.clone_from(&p.genotype);
                    agent.fitness = p.fitness;
                }
                state.offer(&p.genotype, p.fitness);
            }
            let scores: Vec<(u64, f64)> = improved.iter().map(|p| (p.id, p.fitness)).collect();
            for (id, energy) in redistribute_energy(&scores, pool, self.redistribution)? {
                if let Some(agent) = state.population.get_mut(id) {
                    agent.energy = energy;
                }
            }
            state.trigger_log.push(TriggerEvent {
                step: state.step_index,
                rule: format!("{}:{}", bound.operator.name(), bound.rule),
                participants: participants.len(),
            });
        }
        state.update_global_best();
        Ok(())
    }
}

impl StepExtension for Hybridizer {
    fn after_dead_step(
        &mut self,
        state: &mut RunState,
        f: &ObjectiveFunction,
        rng: &mut RngStream,
    ) -> Result<()> {
        if state.step_index > 0 && state.step_index.is_multiple_of(self.period) {
            self.step(state, f, rng)?;
        }
        Ok(())
    }
}

/// One hybridization step with the operators described by `config`.
pub fn hybridization_step(
    state: &mut RunState,
    config: &HybridConfig,
    f: &ObjectiveFunction,
    rng: &mut RngStream,
) -> Result<()> {
    Hybridizer::new(config)?.step(state, f, rng)
}

/// Runs HEMAS until the budget is exhausted.
pub fn run_hemas(
    params: &EmasParams,
    config: &HybridConfig,
    f: &ObjectiveFunction,
    budget: EvalBudget,
    rng: &mut RngStream,
) -> Result<RunRecord> {
    let mut hybridizer = Hybridizer::new(config)?;
    run_engine(params, f, budget, rng, &mut hybridizer, |_| {})
}
