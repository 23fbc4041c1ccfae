//! Command-line front end for the experiment harness.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hemas::benchmarks::FunctionName;
use hemas::harness::{self, ExperimentConfig, Preset, Table1Options};
use hemas::stats::describe;
use hemas::{Error, Result};

#[derive(Parser)]
#[command(name = "hemas", version, about = "EMAS / HEMAS experiment runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one campaign from a config file or a preset.
    Run(RunArgs),
    /// Compare finished campaigns of the same instance.
    Compare {
        #[arg(required = true, num_args = 2..)]
        dirs: Vec<PathBuf>,
        /// Where to write the pairwise CSV.
        #[arg(long, default_value = "comparison.csv")]
        out: PathBuf,
    },
    /// Run every preset on every function for the given dimensions.
    Table1 {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',')]
        functions: Option<Vec<String>>,
        #[arg(long, value_delimiter = ',')]
        presets: Option<Vec<String>>,
        #[arg(long, default_value_t = 30)]
        repetitions: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        eval_multiplier: u64,
        #[arg(long, default_value = "results")]
        output_dir: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, conflicts_with = "preset", required_unless_present = "preset")]
    config: Option<PathBuf>,
    #[arg(long, requires_all = ["function", "dim"])]
    preset: Option<String>,
    #[arg(long)]
    function: Option<String>,
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repetitions: Option<u64>,
    #[arg(long)]
    eval_multiplier: Option<u64>,
    #[arg(long)]
    output_dir: Option<PathBuf>,
}

impl RunArgs {
    fn resolve(&self) -> Result<ExperimentConfig> {
        let mut config = match (&self.config, &self.preset) {
            (Some(path), _) => ExperimentConfig::load(path)?,
            (None, Some(name)) => {
                let function: FunctionName = self.function.as_deref().unwrap_or_default().parse()?;
                ExperimentConfig::from_preset(name.parse()?, function, self.dim.unwrap_or(0))
            }
            (None, None) => unreachable!("clap requires --config or --preset"),
        };
        if let Some(f) = &self.function {
            config.function = f.parse()?;
        }
        if let Some(d) = self.dim {
            config.dimension = d;
        }
        if let Some(s) = self.seed {
            config.master_seed = s;
        }
        if let Some(r) = self.repetitions {
            config.repetitions = r;
        }
        if let Some(m) = self.eval_multiplier {
            config.eval_multiplier = m;
        }
        if let Some(o) = &self.output_dir {
            config.output_dir = Some(o.clone());
        }
        config.validate()?;
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => {
            let config = args.resolve()?;
            let records = harness::run_campaign(&config)?;
            let finals: Vec<f64> = records.iter().map(|r| r.final_best_fitness).collect();
            let s = describe(&finals)?;
            println!(
                "{} on {} {}-D, {} runs -> {}",
                config.label(),
                config.function,
                config.dimension,
                records.len(),
                config.output_dir().display()
            );
            println!(
                "mean {:.6}  median {:.6}  sd {:.6}  min {:.6}  max {:.6}",
                s.mean, s.median, s.sd, s.min, s.max
            );
        }
        Command::Compare { dirs, out } => {
            let comparison = harness::compare(&dirs)?;
            comparison.write_csv(&out)?;
            print!("{}", comparison.render());
        }
        Command::Table1 {
            dims,
            functions,
            presets,
            repetitions,
            seed,
            eval_multiplier,
            output_dir,
        } => {
            let mut options = Table1Options::new(dims);
            if let Some(fs) = functions {
                options.functions = fs.iter().map(|f| f.parse()).collect::<Result<_>>()?;
            }
            if let Some(ps) = presets {
                options.presets = ps
                    .iter()
                    .map(|p| p.parse::<Preset>())
                    .collect::<Result<_>>()?;
            }
            options.repetitions = repetitions;
            options.master_seed = seed;
            options.eval_multiplier = eval_multiplier;
            options.output_root = output_dir.clone();
            let report = harness::run_table1(&options)?;
            report.write_csv(&output_dir)?;
            print!("{}", report.render());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            report_source(&e);
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn report_source(e: &Error) {
    let mut source = std::error::Error::source(e);
    while let Some(s) = source {
        eprintln!("  caused by: {s}");
        source = s.source();
    }
}
