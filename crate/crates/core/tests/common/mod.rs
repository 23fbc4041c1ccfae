//! Checks shared by the property tests and the acceptance runner.
//!
//! Each check returns `Err(description)` on the first violation.
#![allow(dead_code)]

use hemas::benchmarks::{make_benchmark, EvalBudget, FunctionName, ObjectiveFunction};
use hemas::emas::{run_emas, run_engine, EmasParams, NoExtension, RunRecord};
use hemas::harness::Preset;
use hemas::hybrid::{run_ga, run_hemas, run_pso, HybridConfig, Hybridizer, Participant};
use hemas::stats::{dunn_test, kruskal_wallis, mid_ranks, SampleSet};
use hemas::variation::RngStream;

pub type Check = Result<(), String>;

fn fail<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

/// Hybrid presets with a short period so that small runs see many triggers.
pub fn busy_hybrids() -> Vec<(Preset, HybridConfig)> {
    [Preset::Hemas1, Preset::Hemas2, Preset::Hemas3]
        .into_iter()
        .map(|p| {
            let mut h = p.hybrid().expect("hybrid preset");
            h.period = 15;
            (p, h)
        })
        .collect()
}

fn run_observed(
    f: &ObjectiveFunction,
    hybrid: Option<&HybridConfig>,
    seed: u64,
    mut observe: impl FnMut(&hemas::emas::RunState),
) -> Result<RunRecord, String> {
    let params = EmasParams::default();
    let mut rng = RngStream::new(seed);
    let result = match hybrid {
        None => run_engine(&params, f, f.default_budget(), &mut rng, &mut NoExtension, &mut observe),
        Some(h) => {
            let mut x = Hybridizer::new(h).map_err(|e| e.to_string())?;
            run_engine(&params, f, f.default_budget(), &mut rng, &mut x, &mut observe)
        }
    };
    result.map_err(|e| e.to_string())
}

/// Σ energy stays at 500 after every iteration, for EMAS and every hybrid preset.
pub fn energy_conservation() -> Check {
    let total = EmasParams::default().total_energy;
    for name in FunctionName::ALL {
        let f = make_benchmark(name, 20).unwrap();
        let mut configs: Vec<Option<HybridConfig>> = vec![None];
        configs.extend(busy_hybrids().into_iter().map(|(_, h)| Some(h)));
        for (ci, cfg) in configs.iter().enumerate() {
            let mut worst = 0.0f64;
            let mut worst_step = 0.0f64;
            let mut previous = total;
            let mut steps = 0u64;
            run_observed(&f, cfg.as_ref(), 17 + ci as u64, |s| {
                let sum = s.population.energy_sum();
                worst = worst.max(((sum - total) / total).abs());
                worst_step = worst_step.max(((sum - previous) / total).abs());
                previous = sum;
                steps += 1;
            })?;
            if worst > 1e-6 || worst_step > 1e-9 {
                return fail(format!(
                    "{name} config {ci}: run drift {worst:.3e}, largest per-step drift {worst_step:.3e} over {steps} steps"
                ));
            }
        }
    }
    Ok(())
}

/// Final budget use is exactly 100 × dimension.
pub fn budget_exactness() -> Check {
    for name in FunctionName::ALL {
        for dim in [1, 7, 40] {
            let f = make_benchmark(name, dim).unwrap();
            let mut configs: Vec<Option<HybridConfig>> = vec![None];
            configs.extend(busy_hybrids().into_iter().map(|(_, h)| Some(h)));
            for cfg in &configs {
                let r = run_observed(&f, cfg.as_ref(), dim as u64, |_| {})?;
                if r.evaluations != 100 * dim as u64 {
                    return fail(format!(
                        "{name} {dim}-D used {} of {} evaluations",
                        r.evaluations,
                        100 * dim
                    ));
                }
                let last = r.trajectory.last().unwrap();
                if last.evals != r.evaluations {
                    return fail(format!("{name} {dim}-D trajectory ends at {}", last.evals));
                }
            }
        }
    }
    Ok(())
}

/// Best-so-far never rises; trajectory evaluations strictly increase.
pub fn best_so_far_monotone() -> Check {
    for name in FunctionName::ALL {
        let f = make_benchmark(name, 25).unwrap();
        let mut configs: Vec<Option<HybridConfig>> = vec![None];
        configs.extend(busy_hybrids().into_iter().map(|(_, h)| Some(h)));
        for (ci, cfg) in configs.iter().enumerate() {
            let mut last_best = f64::INFINITY;
            let mut violation = None;
            let r = run_observed(&f, cfg.as_ref(), 3 + ci as u64, |s| {
                if s.global_best.fitness > last_best && violation.is_none() {
                    violation = Some((s.step_index, last_best, s.global_best.fitness));
                }
                last_best = s.global_best.fitness;
            })?;
            if let Some((step, a, b)) = violation {
                return fail(format!("{name} config {ci}: best rose from {a} to {b} at step {step}"));
            }
            for w in r.trajectory.windows(2) {
                if w[1].evals <= w[0].evals || w[1].best_fitness > w[0].best_fitness {
                    return fail(format!("{name} config {ci}: trajectory {:?} -> {:?}", w[0], w[1]));
                }
            }
            if r.trajectory.last().unwrap().best_fitness != r.final_best_fitness() {
                return fail(format!("{name} config {ci}: final best differs from trajectory"));
            }
        }
    }
    Ok(())
}

fn random_participants(f: &ObjectiveFunction, k: usize, rng: &mut RngStream) -> Vec<Participant> {
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

/// Every PSO participant leaves with fitness no worse than it arrived with.
pub fn pso_non_degradation() -> Check {
    let mut rng = RngStream::new(99);
    for trial in 0..200u64 {
        let name = FunctionName::ALL[(trial % 4) as usize];
        let f = make_benchmark(name, 1 + (trial % 12) as usize).unwrap();
        let k = 2 + (trial % 9) as usize;
        let input = random_participants(&f, k, &mut rng);
        let mut budget = EvalBudget::new(1 + trial % 40);
        let out = run_pso(&input, &f, &mut budget, &mut rng, 3).map_err(|e| e.to_string())?;
        if out.len() != input.len() {
            return fail(format!("trial {trial}: {} outputs for {} inputs", out.len(), input.len()));
        }
        for (a, b) in input.iter().zip(&out) {
            if a.id != b.id || b.fitness > a.fitness || f.value(&b.genotype) != b.fitness {
                return fail(format!("trial {trial}: id {} went {} -> {}", a.id, a.fitness, b.fitness));
            }
        }
    }
    Ok(())
}

/// GA never loses the best participant fitness.
pub fn ga_elitism() -> Check {
    let mut rng = RngStream::new(7);
    for trial in 0..200u64 {
        let name = FunctionName::ALL[(trial % 4) as usize];
        let f = make_benchmark(name, 1 + (trial % 10) as usize).unwrap();
        let k = 2 + (trial % 11) as usize;
        let input = random_participants(&f, k, &mut rng);
        let mut budget = EvalBudget::new(1 + trial % 50);
        let out = run_ga(&input, &f, &mut budget, &mut rng, 3).map_err(|e| e.to_string())?;
        let best_in = input.iter().map(|p| p.fitness).fold(f64::INFINITY, f64::min);
        let best_out = out.iter().map(|p| p.fitness).fold(f64::INFINITY, f64::min);
        let mut ids_in: Vec<u64> = input.iter().map(|p| p.id).collect();
        let mut ids_out: Vec<u64> = out.iter().map(|p| p.id).collect();
        ids_in.sort_unstable();
        ids_out.sort_unstable();
        if best_out > best_in || ids_in != ids_out {
            return fail(format!("trial {trial}: best {best_in} -> {best_out}"));
        }
        if let Some(p) = out.iter().find(|p| f.value(&p.genotype) != p.fitness) {
            return fail(format!("trial {trial}: cached fitness of {} is stale", p.id));
        }
    }
    Ok(())
}

fn same_run(a: &RunRecord, b: &RunRecord) -> bool {
    a.trajectory == b.trajectory
        && a.best == b.best
        && a.evaluations == b.evaluations
        && a.steps == b.steps
        && a.population == b.population
}

/// Hybrid presets whose rules can never gather enough agents behave exactly like EMAS.
pub fn inert_hemas_is_emas() -> Check {
    let params = EmasParams::default();
    for name in FunctionName::ALL {
        let f = make_benchmark(name, 30).unwrap();
        for seed in 0..3 {
            let emas = run_emas(&params, &f, f.default_budget(), &mut RngStream::new(seed))
                .map_err(|e| e.to_string())?;
            for (preset, mut h) in busy_hybrids() {
                for op in &mut h.operators {
                    op.min_participants = params.population_size + 1;
                }
                let hemas = run_hemas(&params, &h, &f, f.default_budget(), &mut RngStream::new(seed))
                    .map_err(|e| e.to_string())?;
                if !same_run(&emas, &hemas) || !hemas.trigger_log.is_empty() {
                    return fail(format!("{name} seed {seed}: inert {preset} diverged from EMAS"));
                }
            }
        }
    }
    Ok(())
}

/// Brute-force mid-ranks: 1 + #smaller + (#equal − 1)/2.
pub fn oracle_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let ranks = values
        .iter()
        .map(|v| {
            let smaller = values.iter().filter(|w| *w < v).count();
            let equal = values.iter().filter(|w| *w == v).count();
            1.0 + smaller as f64 + (equal as f64 - 1.0) / 2.0
        })
        .collect();
    let mut distinct: Vec<f64> = values.to_vec();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let ties = distinct
        .iter()
        .map(|d| values.iter().filter(|v| *v == d).count())
        .filter(|&c| c > 1)
        .collect();
    (ranks, ties)
}

fn permutations(m: usize, visit: &mut impl FnMut(&[usize])) {
    fn go(prefix: &mut Vec<usize>, used: &mut [bool], visit: &mut impl FnMut(&[usize])) {
        if prefix.len() == used.len() {
            visit(prefix);
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                go(prefix, used, visit);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    go(&mut Vec::with_capacity(m), &mut vec![false; m], visit);
}

/// Calls `visit` once for every weak ordering of `n` items, i.e. every
/// distinct pattern of ranks and ties a sample of size `n` can show.
pub fn for_each_weak_ordering(n: usize, visit: &mut impl FnMut(&[f64])) {
    fn partitions(
        labels: &mut Vec<usize>,
        blocks: usize,
        n: usize,
        visit: &mut impl FnMut(&[usize], usize),
    ) {
        if labels.len() == n {
            visit(labels, blocks);
            return;
        }
        for b in 0..=blocks {
            labels.push(b);
            partitions(labels, blocks.max(b + 1), n, visit);
            labels.pop();
        }
    }
    if n == 0 {
        visit(&[]);
        return;
    }
    let mut values = vec![0.0; n];
    partitions(&mut Vec::with_capacity(n), 0, n, &mut |labels, blocks| {
        permutations(blocks, &mut |order| {
            for (v, &l) in values.iter_mut().zip(labels) {
                *v = order[l] as f64 * 1.5 - 2.0;
            }
            visit(&values);
        });
    });
}

/// Implementation ranks equal brute-force ranks on every input of pooled size ≤ 8.
pub fn ranks_match_oracle() -> Check {
    let mut seen = 0u64;
    for n in 0..=8 {
        let mut failure = None;
        for_each_weak_ordering(n, &mut |values| {
            seen += 1;
            if failure.is_some() {
                return;
            }
            let got = mid_ranks(values);
            if got != oracle_ranks(values) {
                failure = Some(format!("{values:?}: got {got:?}"));
            }
        });
        if let Some(msg) = failure {
            return fail(msg);
        }
    }
    // Fubini numbers 1..8 plus the empty input.
    if seen != 1 + 1 + 3 + 13 + 75 + 541 + 4683 + 47293 + 545_835 {
        return fail(format!("enumerated {seen} inputs"));
    }
    Ok(())
}

pub fn kw_hand_example() -> Result<f64, String> {
    let kw = kruskal_wallis(&[
        SampleSet::new("a", vec![1.0, 2.0, 3.0]).unwrap(),
        SampleSet::new("b", vec![4.0, 5.0, 6.0]).unwrap(),
    ])
    .map_err(|e| e.to_string())?;
    if (kw.h - 3.857).abs() > 1e-3 {
        return fail(format!("H = {}", kw.h));
    }
    Ok(kw.h)
}

/// Swapping the two groups of a pair negates z and leaves both p-values unchanged.
pub fn dunn_order_invariance() -> Check {
    let mut rng = RngStream::new(5);
    for trial in 0..300 {
        let k = 2 + trial % 4;
        let groups: Vec<SampleSet> = (0..k)
            .map(|g| {
                let n = 1 + rng.index(12);
                let values = (0..n).map(|_| (rng.uniform() * 6.0).floor() + g as f64 * 0.3).collect();
                SampleSet::new(format!("g{g}"), values).unwrap()
            })
            .collect();
        let forward = dunn_test(&groups).map_err(|e| e.to_string())?;
        let mut reversed = groups.clone();
        reversed.reverse();
        let backward = dunn_test(&reversed).map_err(|e| e.to_string())?;
        for p in &forward {
            let q = backward
                .iter()
                .find(|q| q.label_a == p.label_b && q.label_b == p.label_a)
                .ok_or("missing mirrored pair")?;
            if (p.z + q.z).abs() > 1e-12
                || (p.p_unadjusted - q.p_unadjusted).abs() > 1e-15
                || (p.p_bonferroni - q.p_bonferroni).abs() > 1e-15
            {
                return fail(format!("trial {trial}: {p:?} vs {q:?}"));
            }
        }
    }
    Ok(())
}

/// Unit values of the benchmark functions.
pub fn benchmark_values() -> Check {
    for name in FunctionName::ALL {
        for dim in [1, 100, 2000] {
            let f = make_benchmark(name, dim).unwrap();
            let v = f.value(&vec![0.0; dim]);
            if v != 0.0 {
                return fail(format!("{name}(0) in {dim}-D = {v:e}"));
            }
        }
    }
    let ackley = make_benchmark(FunctionName::Ackley, 2).unwrap().value(&[1.0, 1.0]);
    if (ackley - 3.625385).abs() > 1e-6 {
        return fail(format!("ackley(1,1) = {ackley}"));
    }
    let rastrigin = make_benchmark(FunctionName::Rastrigin, 3).unwrap().value(&[1.0, 0.0, 0.0]);
    if (rastrigin - 1.0).abs() > 1e-12 {
        return fail(format!("rastrigin(1,0,0) = {rastrigin}"));
    }
    Ok(())
}
