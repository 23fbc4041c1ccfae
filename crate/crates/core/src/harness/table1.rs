//! Full reproduction grid: every preset on every function and dimension.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::campaign::run_campaign;
use super::compare::{Comparison, SIGNIFICANCE};
use super::config::{ExperimentConfig, Preset};
use crate::benchmarks::FunctionName;
use crate::stats::SampleSet;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct Table1Options {
    pub dims: Vec<usize>,
    pub functions: Vec<FunctionName>,
    pub presets: Vec<Preset>,
    pub repetitions: u64,
    pub master_seed: u64,
    pub eval_multiplier: u64,
    /// Campaigns go to `<output_root>/<preset>/<function>_<dim>`.
    pub output_root: PathBuf,
}

impl Table1Options {
    pub fn new(dims: Vec<usize>) -> Self {
        Table1Options {
            dims,
            functions: FunctionName::ALL.to_vec(),
            presets: Preset::ALL.to_vec(),
            repetitions: 30,
            master_seed: 0,
            eval_multiplier: 100,
            output_root: PathBuf::from("results"),
        }
    }

    pub fn campaign(&self, preset: Preset, function: FunctionName, dim: usize) -> ExperimentConfig {
        let mut c = ExperimentConfig::from_preset(preset, function, dim);
        c.repetitions = self.repetitions;
        c.master_seed = self.master_seed;
        c.eval_multiplier = self.eval_multiplier;
        c.output_dir = Some(
            self.output_root
                .join(preset.as_str())
                .join(format!("{function}_{dim}")),
        );
        c
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table1Row {
    pub preset: String,
    pub function: FunctionName,
    pub dimension: usize,
    pub mean: f64,
    pub median: f64,
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone)]
pub struct Table1Report {
    pub comparisons: Vec<Comparison>,
}

impl Table1Report {
    pub fn rows(&self) -> Vec<Table1Row> {
        self.comparisons
            .iter()
            .flat_map(|c| {
                c.groups.iter().zip(&c.summaries).map(|(g, s)| Table1Row {
                    preset: g.label.clone(),
                    function: c.function,
                    dimension: c.dimension,
                    mean: s.mean,
                    median: s.median,
                    sd: s.sd,
                    min: s.min,
                    max: s.max,
                })
            })
            .collect()
    }

    /// Writes `table1.csv` (descriptive rows) and `dunn.csv` (pairwise tests).
    pub fn write_csv(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
        let path = dir.join("table1.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::csv(&path, e))?;
        for row in self.rows() {
            w.serialize(row).map_err(|e| Error::csv(&path, e))?;
        }
        w.flush().map_err(|e| Error::io(&path, e))?;

        let path = dir.join("dunn.csv");
        let mut w = csv::Writer::from_path(&path).map_err(|e| Error::csv(&path, e))?;
        w.write_record([
            "function",
            "dimension",
            "group_a",
            "group_b",
            "z",
            "p_unadjusted",
            "p_bonferroni",
        ])
        .map_err(|e| Error::csv(&path, e))?;
        for c in &self.comparisons {
            for p in &c.report.pairwise {
                w.write_record([
                    c.function.to_string(),
                    c.dimension.to_string(),
                    p.label_a.clone(),
                    p.label_b.clone(),
                    p.z.to_string(),
                    p.p_unadjusted.to_string(),
                    p.p_bonferroni.to_string(),
                ])
                .map_err(|e| Error::csv(&path, e))?;
            }
        }
        w.flush().map_err(|e| Error::io(&path, e))
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let presets: Vec<String> = self
            .comparisons
            .first()
            .map(|c| c.groups.iter().map(|g| g.label.clone()).collect())
            .unwrap_or_default();
        for (i, preset) in presets.iter().enumerate() {
            let _ = writeln!(out, "== {preset}");
            let _ = writeln!(
                out,
                "{:<16}  {:>12}  {:>12}  {:>12}  {:>12}  {:>12}",
                "instance", "mean", "median", "sd", "min", "max"
            );
            for c in &self.comparisons {
                let s = &c.summaries[i];
                let _ = writeln!(
                    out,
                    "{:<16}  {:>12.6}  {:>12.6}  {:>12.6}  {:>12.6}  {:>12.6}",
                    format!("{} {}", c.function, c.dimension),
                    s.mean,
                    s.median,
                    s.sd,
                    s.min,
                    s.max
                );
            }
            out.push('\n');
        }
        let _ = writeln!(out, "== Dunn p-values (unadjusted, * below {SIGNIFICANCE})");
        for c in &self.comparisons {
            let _ = writeln!(out, "{} {}", c.function, c.dimension);
            for p in &c.report.pairwise {
                let flag = if p.p_unadjusted < SIGNIFICANCE { " *" } else { "" };
                let _ = writeln!(
                    out,
                    "  {:<8} {:<8} {:>13.6e}{flag}",
                    p.label_a, p.label_b, p.p_unadjusted
                );
            }
        }
        out
    }
}

/// Runs every campaign of the grid and compares presets per instance.
pub fn run_table1(options: &Table1Options) -> Result<Table1Report> {
    if options.dims.is_empty() {
        return Err(Error::config("dims", "must list at least one dimension"));
    }
    if options.presets.len() < 2 {
        return Err(Error::config("presets", "must list at least two presets"));
    }
    let mut comparisons = Vec::new();
    for &function in &options.functions {
        for &dim in &options.dims {
            let mut groups = Vec::with_capacity(options.presets.len());
            for &preset in &options.presets {
                let config = options.campaign(preset, function, dim);
                let values = run_campaign(&config)?
                    .iter()
                    .map(|r| r.final_best_fitness)
                    .collect();
                groups.push(SampleSet::new(preset.as_str(), values)?);
            }
            comparisons.push(Comparison::from_samples(function, dim, groups)?);
        }
    }
    Ok(Table1Report { comparisons })
}
