//! A single EMAS run with a progress printout.
//!
//! cargo run --release --example emas_run -- ackley 100 7

use hemas::benchmarks::{make_benchmark, FunctionName};
use hemas::emas::{run_engine, EmasParams, NoExtension};
use hemas::variation::RngStream;

fn main() -> hemas::Result<()> {
    let mut args = std::env::args().skip(1);
    let name: FunctionName = args.next().as_deref().unwrap_or("ackley").parse()?;
    let dim: usize = args.next().map_or(100, |s| s.parse().expect("dimension"));
    let seed: u64 = args.next().map_or(7, |s| s.parse().expect("seed"));

    let f = make_benchmark(name, dim)?;
    let params = EmasParams::default();
    let mut rng = RngStream::new(seed);
    let report_every = f.default_budget().limit() / 10;
    let mut next = report_every;

    let record = run_engine(&params, &f, f.default_budget(), &mut rng, &mut NoExtension, |s| {
        if s.budget.used() >= next {
            println!(
                "evals {:>7}  step {:>7}  agents {:>3}  best {:.6}",
                s.budget.used(),
                s.step_index,
                s.population.len(),
                s.global_best.fitness
            );
            next += report_every;
        }
    })?;

    let pop = record.final_population;
    println!(
        "\n{name} {dim}-D: best {:.6} after {} evaluations and {} steps",
        record.final_best_fitness(),
        record.evaluations,
        record.steps
    );
    println!(
        "final population: {} agents, mean fitness {:.6}, energy {:.3}",
        pop.size, pop.mean_fitness, pop.energy_sum
    );
    Ok(())
}
