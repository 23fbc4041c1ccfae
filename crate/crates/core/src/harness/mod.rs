//! Experiment harness: configuration, campaigns, persistence and reports.

mod campaign;
mod compare;
mod config;
mod table1;

pub use campaign::{
    execute, execute_run, read_summary, read_trajectory, run_campaign, trajectory_path,
    workers_from_env, RunRecord, StoredCampaign, SummaryRow, CONFIG_FILE, RUNS_DIR, SUMMARY_FILE,
    TRIGGERS_FILE, WORKERS_ENV,
};
pub use compare::{compare, Comparison, SIGNIFICANCE};
pub use config::{preset, Algorithm, ExperimentConfig, Preset};
pub use table1::{run_table1, Table1Options, Table1Report, Table1Row};
