//! Generational real-coded GA used as a hybrid operator: binary tournament,
//! SBX, polynomial mutation and single-individual elitism.

use serde::{Deserialize, Serialize};

use super::{HybridOperator, Participant};
use crate::benchmarks::{EvalBudget, ObjectiveFunction};
use crate::variation::{
    polynomial_mutation_in_place, sbx_crossover, MutationParams, RngStream, SbxParams,
};
use crate::{Error, Genotype, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GaParams {
    pub crossover: SbxParams,
    pub mutation_distribution_index: f64,
    /// Per-gene mutation probability; `None` means one over the dimension.
    pub mutation_probability: Option<f64>,
}

impl Default for GaParams {
    fn default() -> Self {
        GaParams {
            crossover: SbxParams {
                distribution_index: 20.0,
                probability: 0.9,
            },
            mutation_distribution_index: 20.0,
            mutation_probability: None,
        }
    }
}

#[derive(Debug, Clone)]
struct Individual {
    genotype: Genotype,
    fitness: f64,
}

/// Runs up to `max_cycles` generations on the participants' solutions.
///
/// The final population is handed back rank-matched: the best solution goes
/// to the participant that had the best fitness on entry, and so on.
pub fn run_ga(
    participants: &[Participant],
    f: &ObjectiveFunction,
    budget: &mut EvalBudget,
    rng: &mut RngStream,
    max_cycles: usize,
) -> Result<Vec<Participant>> {
    run_ga_with(&GaParams::default(), participants, f, budget, rng, max_cycles)
}

pub fn run_ga_with(
    params: &GaParams,
    participants: &[Participant],
    f: &ObjectiveFunction,
    budget: &mut EvalBudget,
    rng: &mut RngStream,
    max_cycles: usize,
) -> Result<Vec<Participant>> {
    let size = participants.len();
    if size < 2 {
        return Err(Error::TooFewParticipants {
            required: 2,
            actual: size,
        });
    }
    let bounds = f.bounds();
    let mutation = MutationParams::new(
        params.mutation_distribution_index,
        params
            .mutation_probability
            .unwrap_or(1.0 / f.dimension() as f64),
    )?;

    let mut population: Vec<Individual> = participants
        .iter()
        .map(|p| Individual {
            genotype: p.genotype.clone(),
            fitness: p.fitness,
        })
        .collect();

    for _ in 0..max_cycles {
        if budget.is_exhausted() {
            break;
        }
        let mut offspring: Vec<Individual> = Vec::with_capacity(size);
        'breed: while offspring.len() < size {
            let a = tournament(&population, rng);
            let b = tournament(&population, rng);
            let (c1, c2) = sbx_crossover(
                &population[a].genotype,
                &population[b].genotype,
                &params.crossover,
                &bounds,
                rng,
            )?;
            for mut child in [c1, c2] {
                if offspring.len() == size {
                    break;
                }
                polynomial_mutation_in_place(&mut child, &mutation, &bounds, rng);
                let fitness = match f.evaluate(&child, budget) {
                    Ok(v) => v,
                    Err(Error::BudgetExhausted { .. }) => break 'breed,
                    Err(e) => return Err(e),
                };
                offspring.push(Individual {
                    genotype: child,
                    fitness,
                });
            }
        }
        population = replace(population, offspring);
    }

    population.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
    let mut order: Vec<&Participant> = participants.iter().collect();
    order.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
    Ok(order
        .into_iter()
        .zip(population)
        .map(|(p, ind)| Participant {
            id: p.id,
            genotype: ind.genotype,
            fitness: ind.fitness,
        })
        .collect())
}

/// Better of two uniformly drawn individuals.
fn tournament(population: &[Individual], rng: &mut RngStream) -> usize {
    let a = rng.index(population.len());
    let b = rng.index(population.len());
    if population[b].fitness < population[a].fitness {
        b
    } else {
        a
    }
}

/// Offspring replace the parents. A short (budget-truncated) brood is topped
/// up with the best parents, and the best parent survives if no child beats it.
fn replace(mut parents: Vec<Individual>, mut offspring: Vec<Individual>) -> Vec<Individual> {
    let size = parents.len();
    parents.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
    let elite = parents[0].clone();
    let missing = size - offspring.len();
    offspring.extend(parents.into_iter().take(missing));
    offspring.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
    if elite.fitness < offspring[0].fitness {
        offspring.pop();
        offspring.insert(0, elite);
    }
    offspring
}

/// The GA as a pluggable hybrid operator.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ga {
    pub params: GaParams,
}

impl HybridOperator for Ga {
    fn name(&self) -> &str {
        "GA"
    }

    fn optimize(
        &self,
        participants: &[Participant],
        f: &ObjectiveFunction,
        budget: &mut EvalBudget,
        rng: &mut RngStream,
        max_cycles: usize,
    ) -> Result<Vec<Participant>> {
        run_ga_with(&self.params, participants, f, budget, rng, max_cycles)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::{make_benchmark, FunctionName};

    fn random_group(f: &ObjectiveFunction, k: usize, rng: &mut RngStream) -> Vec<Participant> {
        let b = f.bounds();
        (0..k)
            .map(|i| {
                let g: Vec<f64> = (0..f.dimension()).map(|_| rng.uniform_in(b.lower, b.upper)).collect();
                Participant {
                    id: 100 + i as u64,
                    fitness: f.value(&g),
                    genotype: g,
                }
            })
            .collect()
    }

    #[test]
    fn zero_generations_is_identity() {
        let f = make_benchmark(FunctionName::Griewank, 5).unwrap();
        let mut rng = RngStream::new(1);
        let group = random_group(&f, 4, &mut rng);
        let mut budget = EvalBudget::new(100);
        let mut out = run_ga(&group, &f, &mut budget, &mut rng, 0).unwrap();
        out.sort_by_key(|p| p.id);
        assert_eq!(out, group);
        assert_eq!(budget.used(), 0);
    }

    #[test]
    fn elitism_and_accounting() {
        let f = make_benchmark(FunctionName::Rastrigin, 10).unwrap();
        let mut rng = RngStream::new(2);
        for _ in 0..30 {
            let group = random_group(&f, 4, &mut rng);
            let mut budget = EvalBudget::new(1000);
            let out = run_ga(&group, &f, &mut budget, &mut rng, 3).unwrap();
            assert_eq!(budget.used(), 12);
            let best_in = group.iter().map(|p| p.fitness).fold(f64::INFINITY, f64::min);
            let best_out = out.iter().map(|p| p.fitness).fold(f64::INFINITY, f64::min);
            assert!(best_out <= best_in);
            for p in &out {
                assert_eq!(p.fitness, f.value(&p.genotype));
            }
        }
    }

    #[test]
    fn write_back_is_rank_matched() {
        let f = make_benchmark(FunctionName::Sphere, 3).unwrap();
        let mut rng = RngStream::new(3);
        let group = random_group(&f, 5, &mut rng);
        let out = run_ga(&group, &f, &mut EvalBudget::new(1000), &mut rng, 2).unwrap();
        let mut by_input: Vec<&Participant> = group.iter().collect();
        by_input.sort_by(|a, b| a.fitness.total_cmp(&b.fitness));
        let ids: Vec<u64> = by_input.iter().map(|p| p.id).collect();
        assert_eq!(out.iter().map(|p| p.id).collect::<Vec<_>>(), ids);
        assert!(out.windows(2).all(|w| w[0].fitness <= w[1].fitness));
    }

    #[test]
    fn truncated_generation_keeps_population_size() {
        let f = make_benchmark(FunctionName::Sphere, 3).unwrap();
        let mut rng = RngStream::new(4);
        let group = random_group(&f, 6, &mut rng);
        let mut budget = EvalBudget::new(8);
        let out = run_ga(&group, &f, &mut budget, &mut rng, 3).unwrap();
        assert_eq!(budget.used(), 8);
        assert_eq!(out.len(), 6);
    }

    #[test]
    fn needs_two_participants() {
        let f = make_benchmark(FunctionName::Sphere, 3).unwrap();
        let mut rng = RngStream::new(5);
        let group = random_group(&f, 1, &mut rng);
        assert!(matches!(
            run_ga(&group, &f, &mut EvalBudget::new(10), &mut rng, 3),
            Err(Error::TooFewParticipants { .. })
        ));
    }
}
