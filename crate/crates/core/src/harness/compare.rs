//! Statistical comparison of stored campaigns.

use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::campaign::StoredCampaign;
use crate::benchmarks::FunctionName;
use crate::stats::{describe, SampleSet, Summary, TestReport};
use crate::{Error, Result};

pub const SIGNIFICANCE: f64 = 0.05;

/// Descriptive statistics and tests over campaigns of one instance.
#[derive(Debug, Clone)]
pub struct Comparison {
    pub function: FunctionName,
    pub dimension: usize,
    pub groups: Vec<SampleSet>,
    pub summaries: Vec<Summary>,
    pub report: TestReport,
}

#[derive(Debug, Serialize)]
struct PairRow<'a> {
    group_a: &'a str,
    group_b: &'a str,
    z: f64,
    p_unadjusted: f64,
    p_bonferroni: f64,
}

impl Comparison {
    /// Compares labelled samples drawn on one instance.
    pub fn from_samples(
        function: FunctionName,
        dimension: usize,
        groups: Vec<SampleSet>,
    ) -> Result<Self> {
        if groups.len() < 2 {
            return Err(Error::InvalidInput(
                "a comparison needs at least two groups".to_string(),
            ));
        }
        let summaries = groups
            .iter()
            .map(|g| describe(&g.values))
            .collect::<Result<Vec<_>>>()?;
        let report = TestReport::new(&groups)?;
        Ok(Comparison {
            function,
            dimension,
            groups,
            summaries,
            report,
        })
    }

    /// Loads campaign directories. Duplicate labels get a `#n` suffix.
    pub fn load<P: AsRef<Path>>(dirs: &[P]) -> Result<Self> {
        let campaigns = dirs
            .iter()
            .map(StoredCampaign::load)
            .collect::<Result<Vec<_>>>()?;
        let first = campaigns.first().ok_or_else(|| {
            Error::InvalidInput("a comparison needs at least two groups".to_string())
        })?;
        let (function, dimension) = (first.config.function, first.config.dimension);
        for c in &campaigns[1..] {
            if (c.config.function, c.config.dimension) != (function, dimension) {
                return Err(Error::MixedInstances(format!(
                    "{} is {} {}-D but {} is {} {}-D",
                    first.dir.display(),
                    function,
                    dimension,
                    c.dir.display(),
                    c.config.function,
                    c.config.dimension
                )));
            }
        }

        let mut labels: Vec<String> = Vec::new();
        let mut groups = Vec::with_capacity(campaigns.len());
        for c in &campaigns {
            let base = c.config.label();
            let mut label = base.clone();
            let mut n = 2;
            while labels.contains(&label) {
                label = format!("{base}#{n}");
                n += 1;
            }
            labels.push(label.clone());
            groups.push(SampleSet::new(label, c.final_fitnesses())?);
        }
        Self::from_samples(function, dimension, groups)
    }

    pub fn write_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut w = csv::Writer::from_path(path).map_err(|e| Error::csv(path, e))?;
        for p in &self.report.pairwise {
            w.serialize(PairRow {
                group_a: &p.label_a,
                group_b: &p.label_b,
                z: p.z,
                p_unadjusted: p.p_unadjusted,
                p_bonferroni: p.p_bonferroni,
            })
            .map_err(|e| Error::csv(path, e))?;
        }
        w.flush().map_err(|e| Error::io(path, e))
    }

    /// Plain-text report. Pairs with unadjusted p below 0.05 are marked `*`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let width = self
            .groups
            .iter()
            .map(|g| g.label.len())
            .max()
            .unwrap_or(5)
            .max(5);
        let _ = writeln!(out, "{} {}-D", self.function, self.dimension);
        let _ = writeln!(
            out,
            "{:<width$}  {:>4}  {:>12}  {:>12}  {:>12}  {:>12}  {:>12}",
            "group", "n", "mean", "median", "sd", "min", "max"
        );
        for (g, s) in self.groups.iter().zip(&self.summaries) {
            let _ = writeln!(
                out,
                "{:<width$}  {:>4}  {:>12.6}  {:>12.6}  {:>12.6}  {:>12.6}  {:>12.6}",
                g.label, g.values.len(), s.mean, s.median, s.sd, s.min, s.max
            );
        }
        let kw = &self.report.kruskal_wallis;
        let _ = writeln!(
            out,
            "\nKruskal-Wallis H = {:.4}, df = {}, p = {:.6e}",
            kw.h, kw.df, kw.p
        );
        let _ = writeln!(
            out,
            "\n{:<width$}  {:<width$}  {:>9}  {:>13}  {:>13}",
            "a", "b", "z", "p", "p_bonferroni"
        );
        for p in &self.report.pairwise {
            let flag = if p.p_unadjusted < SIGNIFICANCE { " *" } else { "" };
            let _ = writeln!(
                out,
                "{:<width$}  {:<width$}  {:>9.4}  {:>13.6e}  {:>13.6e}{flag}",
                p.label_a, p.label_b, p.z, p.p_unadjusted, p.p_bonferroni
            );
        }
        out
    }
}

/// Loads and compares campaign directories.
pub fn compare<P: AsRef<Path>>(dirs: &[P]) -> Result<Comparison> {
    Comparison::load(dirs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(label: &str, values: &[f64]) -> SampleSet {
        SampleSet::new(label, values.to_vec()).unwrap()
    }

    #[test]
    fn disjoint_groups_are_flagged() {
        let low: Vec<f64> = (0..10).map(f64::from).collect();
        let high: Vec<f64> = (100..110).map(f64::from).collect();
        let c = Comparison::from_samples(
            FunctionName::Sphere,
            3,
            vec![set("low", &low), set("high", &high)],
        )
        .unwrap();
        assert!(c.report.pairwise[0].p_unadjusted < SIGNIFICANCE);
        let text = c.render();
        assert!(text.contains("low"));
        assert!(text.lines().any(|l| l.ends_with(" *")));
    }

    #[test]
    fn four_groups_give_six_pairs() {
        let groups = (0..4)
            .map(|g| set(&format!("g{g}"), &[g as f64, g as f64 + 0.5, g as f64 + 0.25]))
            .collect();
        let c = Comparison::from_samples(FunctionName::Ackley, 3, groups).unwrap();
        assert_eq!(c.report.pairwise.len(), 6);
    }

    #[test]
    fn one_group_is_not_a_comparison() {
        let r = Comparison::from_samples(FunctionName::Ackley, 3, vec![set("a", &[1.0])]);
        assert!(r.is_err());
    }
}
