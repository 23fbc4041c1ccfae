//! Repeated runs of one configuration, persisted as CSV.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::{Algorithm, ExperimentConfig};
use crate::emas::{run_emas, RunRecord as EngineRecord, TrajectoryPoint, TriggerEvent};
use crate::hybrid::run_hemas;
use crate::variation::{derive_seed, RngStream};
use crate::{Error, Result};

/// Environment variable holding the number of worker threads.
pub const WORKERS_ENV: &str = "HEMAS_WORKERS";

pub const CONFIG_FILE: &str = "config.toml";
pub const SUMMARY_FILE: &str = "summary.csv";
pub const TRIGGERS_FILE: &str = "triggers.csv";
pub const RUNS_DIR: &str = "runs";

/// Result of one repetition within a campaign.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub fingerprint: String,
    pub run_index: u64,
    pub seed: u64,
    pub trajectory: Vec<TrajectoryPoint>,
    pub final_best_fitness: f64,
    pub trigger_log: Vec<TriggerEvent>,
}

impl RunRecord {
    fn from_engine(fingerprint: &str, run_index: u64, seed: u64, record: EngineRecord) -> Self {
        RunRecord {
            fingerprint: fingerprint.to_string(),
            run_index,
            seed,
            final_best_fitness: record.final_best_fitness(),
            trajectory: record.trajectory,
            trigger_log: record.trigger_log,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub run: u64,
    pub seed: u64,
    pub final_best: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct TriggerRow {
    run: u64,
    step: u64,
    rule: String,
    participants: usize,
}

/// Worker count from [`WORKERS_ENV`]; `None` when unset or empty.
pub fn workers_from_env() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) if v.trim().is_empty() => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Error::config(WORKERS_ENV, format!("`{v}` is not a positive integer"))),
        },
    }
}

/// Runs a single repetition of `config` in memory.
pub fn execute_run(config: &ExperimentConfig, run_index: u64) -> Result<EngineRecord> {
    let f = config.objective()?;
    let mut rng = RngStream::for_run(config.master_seed, run_index);
    match (config.algorithm, &config.hybrid) {
        (Algorithm::Hemas, Some(hybrid)) => {
            run_hemas(&config.emas, hybrid, &f, config.budget(), &mut rng)
        }
        _ => run_emas(&config.emas, &f, config.budget(), &mut rng),
    }
}

/// Runs every repetition in memory, ordered by run index.
pub fn execute(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let fingerprint = config.fingerprint();
    let one = |i: u64| {
        execute_run(config, i)
            .map(|r| RunRecord::from_engine(&fingerprint, i, derive_seed(config.master_seed, i), r))
    };
    in_pool(|| (0..config.repetitions).into_par_iter().map(one).collect())
}

/// Runs the campaign and writes its files under `config.output_dir()`.
///
/// Layout: `config.toml`, `summary.csv` (`run,seed,final_best`),
/// `triggers.csv` and `runs/run_NNN.csv` (`evals,best_fitness`).
pub fn run_campaign(config: &ExperimentConfig) -> Result<Vec<RunRecord>> {
    config.validate()?;
    let dir = config.output_dir();
    let runs_dir = dir.join(RUNS_DIR);
    fs::create_dir_all(&runs_dir).map_err(|e| Error::io(&runs_dir, e))?;
    write_config(&dir, config)?;

    let fingerprint = config.fingerprint();
    let records: Vec<RunRecord> = in_pool(|| {
        (0..config.repetitions)
            .into_par_iter()
            .map(|i| {
                let engine = execute_run(config, i)?;
                let record = RunRecord::from_engine(
                    &fingerprint,
                    i,
                    derive_seed(config.master_seed, i),
                    engine,
                );
                write_trajectory(&trajectory_path(&dir, i), &record.trajectory)?;
                Ok(record)
            })
            .collect::<Result<Vec<_>>>()
    })?;

    write_summary(&dir.join(SUMMARY_FILE), &records)?;
    write_triggers(&dir.join(TRIGGERS_FILE), &records)?;
    Ok(records)
}

fn in_pool<T: Send>(job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match workers_from_env()? {
        None => job(),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?
            .install(job),
    }
}

pub fn trajectory_path(dir: &Path, run_index: u64) -> PathBuf {
    dir.join(RUNS_DIR).join(format!("run_{run_index:03}.csv"))
}

fn write_config(dir: &Path, config: &ExperimentConfig) -> Result<()> {
    let path = dir.join(CONFIG_FILE);
    let text = format!(
        "# fingerprint: {}\n{}",
        config.fingerprint(),
        config.to_toml_string()
    );
    fs::write(&path, text).map_err(|e| Error::io(&path, e))
}

fn write_rows<S: Serialize>(path: &Path, rows: impl IntoIterator<Item = S>) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    for row in rows {
        w.serialize(row).map_err(|e| Error::csv(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn write_trajectory(path: &Path, trajectory: &[TrajectoryPoint]) -> Result<()> {
    write_rows(path, trajectory)
}

fn write_summary(path: &Path, records: &[RunRecord]) -> Result<()> {
    write_rows(
        path,
        records.iter().map(|r| SummaryRow {
            run: r.run_index,
            seed: r.seed,
            final_best: r.final_best_fitness,
        }),
    )
}

fn write_triggers(path: &Path, records: &[RunRecord]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
    w.write_record(["run", "step", "rule", "participants"])
        .map_err(|e| Error::csv(path, e))?;
    for r in records {
        for t in &r.trigger_log {
            w.serialize(TriggerRow {
                run: r.run_index,
                step: t.step,
                rule: t.rule.clone(),
                participants: t.participants,
            })
            .map_err(|e| Error::csv(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

fn read_rows<D: serde::de::DeserializeOwned>(path: &Path) -> Result<Vec<D>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| Error::csv(path, e))?;
    r.deserialize()
        .collect::<std::result::Result<Vec<D>, _>>()
        .map_err(|e| Error::csv(path, e))
}

pub fn read_summary(path: impl AsRef<Path>) -> Result<Vec<SummaryRow>> {
    read_rows(path.as_ref())
}

pub fn read_trajectory(path: impl AsRef<Path>) -> Result<Vec<TrajectoryPoint>> {
    read_rows(path.as_ref())
}

/// A campaign directory loaded back from disk.
#[derive(Debug, Clone)]
pub struct StoredCampaign {
    pub dir: PathBuf,
    pub config: ExperimentConfig,
    pub summary: Vec<SummaryRow>,
}

impl StoredCampaign {
    pub fn load(dir: impl AsRef<Path>) -> Result<Self> {
        let dir = dir.as_ref().to_path_buf();
        let config = ExperimentConfig::load(dir.join(CONFIG_FILE))?;
        let summary = read_summary(dir.join(SUMMARY_FILE))?;
        if summary.is_empty() {
            return Err(Error::InvalidInput(format!(
                "{} holds no runs",
                dir.join(SUMMARY_FILE).display()
            )));
        }
        Ok(StoredCampaign {
            dir,
            config,
            summary,
        })
    }

    pub fn final_fitnesses(&self) -> Vec<f64> {
        self.summary.iter().map(|r| r.final_best).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::benchmarks::FunctionName;
    use crate::harness::config::Preset;

    fn small(preset: Preset, dir: &Path) -> ExperimentConfig {
        let mut c = ExperimentConfig::from_preset(preset, FunctionName::Sphere, 2);
        c.eval_multiplier = 200;
        c.repetitions = 3;
        c.master_seed = 5;
        c.output_dir = Some(dir.to_path_buf());
        if let Some(h) = c.hybrid.as_mut() {
            h.period = 20;
        }
        c
    }

    #[test]
    fn campaign_writes_expected_layout() {
        let tmp = tempfile::tempdir().unwrap();
        let config = small(Preset::Hemas2, tmp.path());
        let records = run_campaign(&config).unwrap();
        assert_eq!(records.len(), 3);

        let stored = StoredCampaign::load(tmp.path()).unwrap();
        assert_eq!(stored.config, config);
        for (row, rec) in stored.summary.iter().zip(&records) {
            assert_eq!(row.run, rec.run_index);
            assert_eq!(row.seed, derive_seed(5, rec.run_index));
            assert_eq!(row.final_best, rec.final_best_fitness);
            let t = read_trajectory(trajectory_path(tmp.path(), rec.run_index)).unwrap();
            assert_eq!(t, rec.trajectory);
            assert_eq!(t.last().unwrap().evals, 400);
            assert_eq!(t.last().unwrap().best_fitness, rec.final_best_fitness);
        }
        let header = fs::read_to_string(tmp.path().join(TRIGGERS_FILE)).unwrap();
        assert!(header.starts_with("run,step,rule,participants"));
    }

    #[test]
    fn repetitions_do_not_shift_earlier_runs() {
        let tmp = tempfile::tempdir().unwrap();
        let mut config = small(Preset::Emas, tmp.path());
        let three = execute(&config).unwrap();
        config.repetitions = 1;
        let one = execute(&config).unwrap();
        assert_eq!(one[0].trajectory, three[0].trajectory);
        assert_eq!(one[0].seed, three[0].seed);
    }
}
