//! A persisted campaign pair, reloaded from disk and compared.
//!
//! Campaigns are written to a temporary directory unless one is given.
//! Set HEMAS_WORKERS to limit the worker threads.
//!
//! cargo run --release --example campaign -- [output-dir]

use std::path::PathBuf;

use hemas::benchmarks::FunctionName;
use hemas::harness::{compare, read_trajectory, run_campaign, trajectory_path, ExperimentConfig, Preset};

fn main() -> hemas::Result<()> {
    let root = match std::env::args().nth(1) {
        Some(dir) => PathBuf::from(dir),
        None => std::env::temp_dir().join(format!("hemas-campaign-{}", std::process::id())),
    };

    let mut dirs = Vec::new();
    for preset in [Preset::Emas, Preset::Hemas2] {
        let mut config = ExperimentConfig::from_preset(preset, FunctionName::Sphere, 30);
        config.repetitions = 10;
        config.master_seed = 42;
        config.output_dir = Some(root.join(preset.as_str()));
        if let Some(h) = config.hybrid.as_mut() {
            h.period = 100;
        }
        let runs = run_campaign(&config)?;
        let dir = config.output_dir();
        let last = read_trajectory(trajectory_path(&dir, 0))?;
        println!(
            "{preset}: {} runs in {} (fingerprint {}…), run 0 ends at {:?}",
            runs.len(),
            dir.display(),
            &runs[0].fingerprint[..12],
            last.last().unwrap()
        );
        dirs.push(dir);
    }

    let comparison = compare(&dirs)?;
    let csv = root.join("comparison.csv");
    comparison.write_csv(&csv)?;
    println!("\n{}", comparison.render());
    println!("pairwise CSV: {}", csv.display());
    Ok(())
}
