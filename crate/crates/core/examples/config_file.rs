//! Loading an experiment from TOML and overriding fields in code.
//!
//! cargo run --example config_file

use hemas::harness::{execute, ExperimentConfig};
use hemas::Error;

const DOCUMENT: &str = r#"
label = "ga-on-diverse"
algorithm = "hemas"
function = "rastrigin"
dimension = 20
repetitions = 5
master_seed = 3

[emas]
meet_transfer = 2.0

[hybrid]
period = 60

[[hybrid.operators]]
algorithm = "ga"
rule = "VG0.5"
max_cycles = 2
"#;

fn main() -> hemas::Result<()> {
    let mut config = ExperimentConfig::from_toml_str(DOCUMENT)?;
    config.dimension = 10;
    println!("{}", config.to_toml_string());
    println!("fingerprint {}", config.fingerprint());

    for r in execute(&config)? {
        println!(
            "run {} seed {:>20} best {:.4} ({} GA triggers)",
            r.run_index,
            r.seed,
            r.final_best_fitness,
            r.trigger_log.len()
        );
    }

    let broken = DOCUMENT.replace("period = 60", "period = 0");
    match ExperimentConfig::from_toml_str(&broken) {
        Err(e @ Error::InvalidConfig { .. }) => println!("\nrejected: {e} (exit code {})", e.exit_code()),
        other => panic!("expected a config error, got {other:?}"),
    }
    Ok(())
}
