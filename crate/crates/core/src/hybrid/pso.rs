//! Global-best particle swarm used as a hybrid operator.

use serde::{Deserialize, Serialize};

use super::{HybridOperator, Participant};
use crate::benchmarks::{EvalBudget, ObjectiveFunction};
use crate::variation::RngStream;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PsoParams {
    pub inertia: f64,
    pub cognitive: f64,
    pub social: f64,
}

impl Default for PsoParams {
    /// Constriction-equivalent coefficients.
    fn default() -> Self {
        PsoParams {
            inertia: 0.7298,
            cognitive: 1.49618,
            social: 1.49618,
        }
    }
}

/// Runs up to `max_cycles` synchronous swarm iterations starting from the
/// participants' solutions with zero velocity.
///
/// Each particle reports its personal best, so no participant comes back
/// worse than it went in. Running out of budget ends the swarm early and
/// returns what was found so far.
pub fn run_pso(
    participants: &[Participant],
    f: &ObjectiveFunction,
    budget: &mut EvalBudget,
    rng: &mut RngStream,
    max_cycles: usize,
) -> Result<Vec<Participant>> {
    run_pso_with(&PsoParams::default(), participants, f, budget, rng, max_cycles)
}

pub fn run_pso_with(
    params: &PsoParams,
    participants: &[Participant],
    f: &ObjectiveFunction,
    budget: &mut EvalBudget,
    rng: &mut RngStream,
    max_cycles: usize,
) -> Result<Vec<Participant>> {
    if participants.len() < 2 {
        return Err(Error::TooFewParticipants {
            required: 2,
            actual: participants.len(),
        });
    }
    let bounds = f.bounds();
    let max_velocity = bounds.width();
    let dim = f.dimension();

    let mut positions: Vec<Vec<f64>> = participants.iter().map(|p| p.genotype.clone()).collect();
    let mut velocities = vec![vec![0.0; dim]; participants.len()];
    let mut bests: Vec<Participant> = participants.to_vec();
    let mut leader = best_index(&bests);

    'cycles: for _ in 0..max_cycles {
        let guide = bests[leader].genotype.clone();
        for (i, (x, v)) in positions.iter_mut().zip(velocities.iter_mut()).enumerate() {
            if budget.is_exhausted() {
                break 'cycles;
            }
            let personal = &bests[i].genotype;
            for d in 0..dim {
                let r1 = rng.uniform();
                let r2 = rng.uniform();
                let vel = params.inertia * v[d]
                    + params.cognitive * r1 * (personal[d] - x[d])
                    + params.social * r2 * (guide[d] - x[d]);
                v[d] = vel.clamp(-max_velocity, max_velocity);
                x[d] = bounds.clamp(x[d] + v[d]);
            }
            let fitness = f.evaluate(x, budget)?;
            if fitness < bests[i].fitness {
                bests[i].genotype.clone_from(x);
                bests[i].fitness = fitness;
            }
        }
        leader = best_index(&bests);
    }
    Ok(bests)
}

fn best_index(particles: &[Participant]) -> usize {
    particles
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.fitness.total_cmp(&b.fitness))
        .map(|(i, _)| i)
        .unwrap_or(0)
}

/// PSO as a pluggable hybrid operator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pso {
    pub params: PsoParams,
}

impl HybridOperator for Pso {
    fn name(&self) -> &str {
        "PSO"
    }

    fn optimize(
        &self,
        participants: &[Participant],
        f: &ObjectiveFunction,
        budget: &mut EvalBudget,
        rng: &mut RngStream,
        max_cycles: usize,
    ) -> Result<Vec<Participant>> {
        run_pso_with(&self.params, participants, f, budget, rng, max_cycles)
    }
}
