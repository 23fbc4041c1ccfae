//! The four experimental configurations on one instance, side by side.
//!
//! cargo run --release --example hemas_presets -- ackley 100 10

use hemas::benchmarks::FunctionName;
use hemas::harness::{execute, Comparison, ExperimentConfig, Preset};
use hemas::stats::SampleSet;

fn main() -> hemas::Result<()> {
    let mut args = std::env::args().skip(1);
    let function: FunctionName = args.next().as_deref().unwrap_or("ackley").parse()?;
    let dim: usize = args.next().map_or(100, |s| s.parse().expect("dimension"));
    let reps: u64 = args.next().map_or(10, |s| s.parse().expect("repetitions"));

    let mut groups = Vec::new();
    for preset in Preset::ALL {
        let mut config = ExperimentConfig::from_preset(preset, function, dim);
        config.repetitions = reps;
        let runs = execute(&config)?;
        let triggers: usize = runs.iter().map(|r| r.trigger_log.len()).sum();
        println!(
            "{preset:<7} {:.1} hybrid triggers per run",
            triggers as f64 / reps as f64
        );
        let finals = runs.iter().map(|r| r.final_best_fitness).collect();
        groups.push(SampleSet::new(preset.as_str(), finals)?);
    }
    println!();
    print!("{}", Comparison::from_samples(function, dim, groups)?.render());
    Ok(())
}
