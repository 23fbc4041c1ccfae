//! Trigger rules and a user-defined hybrid operator.
//!
//! The operator below is a greedy coordinate search. It is attached under
//! rule `SLM` (fitness below the population mean) next to a stock PSO
//! operator, and the trigger log shows which one fired when.
//!
//! cargo run --release --example custom_hybrid

use hemas::benchmarks::{make_benchmark, EvalBudget, FunctionName, ObjectiveFunction};
use hemas::emas::{run_engine, EmasParams};
use hemas::hybrid::{
    diversity, evaluate_rule, HybridAlgorithm, HybridConfig, HybridOperator, HybridOperatorSpec,
    Hybridizer, Participant, RuleSpec,
};
use hemas::variation::RngStream;
use hemas::Result;

struct CoordinateNudge {
    step: f64,
}

impl HybridOperator for CoordinateNudge {
    fn name(&self) -> &str {
        "NUDGE"
    }

    fn optimize(
        &self,
        participants: &[Participant],
        f: &ObjectiveFunction,
        budget: &mut EvalBudget,
        rng: &mut RngStream,
        max_cycles: usize,
    ) -> Result<Vec<Participant>> {
        let mut out = participants.to_vec();
        for p in &mut out {
            for _ in 0..max_cycles {
                if budget.is_exhausted() {
                    return Ok(out);
                }
                let mut trial = p.genotype.clone();
                let i = rng.index(trial.len());
                let sign = if rng.uniform() < 0.5 { -1.0 } else { 1.0 };
                trial[i] = f.bounds().clamp(trial[i] + sign * self.step);
                let fitness = f.evaluate(&trial, budget)?;
                if fitness < p.fitness {
                    p.genotype = trial;
                    p.fitness = fitness;
                }
            }
        }
        Ok(out)
    }
}

fn main() -> Result<()> {
    for rule in ["VE0", "ELQ1", "EGQ3", "VG0.5", "EL3", "SLM", "SGQ2"] {
        let parsed: RuleSpec = rule.parse()?;
        println!("{rule:<6} -> {parsed:?}");
    }
    if let Err(e) = "VLQ1".parse::<RuleSpec>() {
        println!("VLQ1   -> {e}");
    }

    let f = make_benchmark(FunctionName::Griewank, 50)?;
    let params = EmasParams::default();
    let config = HybridConfig {
        period: 250,
        ..HybridConfig::new(vec![HybridOperatorSpec::new(HybridAlgorithm::Pso, "EGQ3")?])
    };
    let mut hybridizer = Hybridizer::new(&config)?.with_operator(
        "SLM".parse()?,
        2,
        2,
        Box::new(CoordinateNudge { step: 0.5 }),
    );

    let mut rng = RngStream::new(11);
    let mut checkpoints = 0;
    let record = run_engine(&params, &f, f.default_budget(), &mut rng, &mut hybridizer, |s| {
        if s.step_index % 1000 == 0 {
            checkpoints += 1;
            let willing = evaluate_rule(&"SLM".parse().unwrap(), &s.population).len();
            println!(
                "step {:>5}: diversity {:.4}, {willing} agents below mean fitness, best {:.4}",
                s.step_index,
                diversity(&s.population),
                s.global_best.fitness
            );
        }
    })?;

    let pso = record.trigger_log.iter().filter(|t| t.rule.starts_with("PSO")).count();
    let nudge = record.trigger_log.len() - pso;
    println!(
        "\nbest {:.6}; {pso} PSO and {nudge} NUDGE triggers over {} steps ({checkpoints} checkpoints)",
        record.final_best_fitness(),
        record.steps
    );
    for t in record.trigger_log.iter().take(4) {
        println!("  step {:>5} {:<10} {} participants", t.step, t.rule, t.participants);
    }
    Ok(())
}
