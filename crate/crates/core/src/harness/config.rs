//! Experiment configuration and presets.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::benchmarks::{make_benchmark, EvalBudget, FunctionName, ObjectiveFunction};
use crate::emas::EmasParams;
use crate::hybrid::{HybridAlgorithm, HybridConfig, HybridOperatorSpec};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Emas,
    Hemas,
}

/// Named configurations used in the experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    /// Plain EMAS.
    Emas,
    /// PSO under VE0.
    Hemas1,
    /// PSO under ELQ1 and PSO under EGQ3.
    Hemas2,
    /// `Hemas2` plus GA under VG0.5.
    Hemas3,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::Emas, Preset::Hemas1, Preset::Hemas2, Preset::Hemas3];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Emas => "emas",
            Preset::Hemas1 => "hemas1",
            Preset::Hemas2 => "hemas2",
            Preset::Hemas3 => "hemas3",
        }
    }

    /// Hybrid layer of the preset, `None` for plain EMAS.
    pub fn hybrid(self) -> Option<HybridConfig> {
        let op = |algorithm, rule| {
            HybridOperatorSpec::new(algorithm, rule).expect("preset rules are well formed")
        };
        let operators = match self {
            Preset::Emas => return None,
            Preset::Hemas1 => vec![op(HybridAlgorithm::Pso, "VE0")],
            Preset::Hemas2 => vec![
                op(HybridAlgorithm::Pso, "ELQ1"),
                op(HybridAlgorithm::Pso, "EGQ3"),
            ],
            Preset::Hemas3 => vec![
                op(HybridAlgorithm::Pso, "ELQ1"),
                op(HybridAlgorithm::Pso, "EGQ3"),
                op(HybridAlgorithm::Ga, "VG0.5"),
            ],
        };
        Some(HybridConfig::new(operators))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::UnknownPreset(s.to_string()))
    }
}

/// One campaign: an algorithm on one benchmark instance, repeated.
///
/// ```toml
/// label = "hemas2"
/// algorithm = "hemas"
/// function = "ackley"
/// dimension = 300
/// repetitions = 30
/// master_seed = 7
/// eval_multiplier = 100
/// output_dir = "results/hemas2_ackley_300"
///
/// [hybrid]
/// period = 2000
///
/// [[hybrid.operators]]
/// algorithm = "pso"
/// rule = "ELQ1"
///
/// [[hybrid.operators]]
/// algorithm = "pso"
/// rule = "EGQ3"
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Group name in reports. Defaults to the algorithm name.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub algorithm: Algorithm,
    pub function: FunctionName,
    pub dimension: usize,
    #[serde(default = "default_repetitions")]
    pub repetitions: u64,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default = "default_eval_multiplier")]
    pub eval_multiplier: u64,
    /// Defaults to `results/<label>_<function>_<dimension>`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub emas: EmasParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hybrid: Option<HybridConfig>,
}

fn default_repetitions() -> u64 {
    30
}

fn default_eval_multiplier() -> u64 {
    100
}

impl ExperimentConfig {
    /// Plain EMAS with default parameters.
    pub fn emas(function: FunctionName, dimension: usize) -> Self {
        ExperimentConfig {
            label: None,
            algorithm: Algorithm::Emas,
            function,
            dimension,
            repetitions: default_repetitions(),
            master_seed: 0,
            eval_multiplier: default_eval_multiplier(),
            output_dir: None,
            emas: EmasParams::default(),
            hybrid: None,
        }
    }

    pub fn from_preset(preset: Preset, function: FunctionName, dimension: usize) -> Self {
        let hybrid = preset.hybrid();
        ExperimentConfig {
            label: Some(preset.as_str().to_string()),
            algorithm: if hybrid.is_some() {
                Algorithm::Hemas
            } else {
                Algorithm::Emas
            },
            hybrid,
            ..ExperimentConfig::emas(function, dimension)
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::InvalidConfig {
            field: "<document>".to_string(),
            reason: e.message().to_string(),
        })?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::InvalidConfig { field, reason } if field == "<document>" => Error::InvalidConfig {
                field: path.display().to_string(),
                reason,
            },
            other => other,
        })
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string(self).expect("config is representable in TOML")
    }

    pub fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::config("dimension", "must be at least 1"));
        }
        if self.repetitions == 0 {
            return Err(Error::config("repetitions", "must be at least 1"));
        }
        if self.eval_multiplier == 0 {
            return Err(Error::config("eval_multiplier", "must be at least 1"));
        }
        if self.master_seed > i64::MAX as u64 {
            return Err(Error::config(
                "master_seed",
                "must not exceed 9223372036854775807",
            ));
        }
        if let Some(label) = &self.label {
            if label.trim().is_empty() {
                return Err(Error::config("label", "must not be empty"));
            }
        }
        self.emas.validate()?;
        let limit = self.budget_limit();
        if limit < self.emas.population_size as u64 {
            return Err(Error::config(
                "eval_multiplier",
                format!(
                    "budget of {limit} evaluations cannot cover the initial population of {}",
                    self.emas.population_size
                ),
            ));
        }
        match (self.algorithm, &self.hybrid) {
            (Algorithm::Emas, Some(_)) => Err(Error::config(
                "hybrid",
                "must be absent when algorithm = \"emas\"",
            )),
            (Algorithm::Hemas, None) => Err(Error::config(
                "hybrid",
                "is required when algorithm = \"hemas\"",
            )),
            (Algorithm::Hemas, Some(h)) => h.validate(),
            (Algorithm::Emas, None) => Ok(()),
        }
    }

    pub fn label(&self) -> String {
        match &self.label {
            Some(l) => l.clone(),
            None => match self.algorithm {
                Algorithm::Emas => "emas".to_string(),
                Algorithm::Hemas => "hemas".to_string(),
            },
        }
    }

    pub fn budget_limit(&self) -> u64 {
        self.eval_multiplier.saturating_mul(self.dimension as u64)
    }

    pub fn budget(&self) -> EvalBudget {
        EvalBudget::new(self.budget_limit())
    }

    pub fn objective(&self) -> Result<ObjectiveFunction> {
        make_benchmark(self.function, self.dimension)
    }

    pub fn output_dir(&self) -> PathBuf {
        self.output_dir.clone().unwrap_or_else(|| {
            PathBuf::from("results").join(format!(
                "{}_{}_{}",
                self.label(),
                self.function,
                self.dimension
            ))
        })
    }

    /// SHA-256 of the canonical TOML form, ignoring `output_dir`.
    pub fn fingerprint(&self) -> String {
        let canonical = ExperimentConfig {
            output_dir: None,
            ..self.clone()
        };
        let digest = Sha256::digest(canonical.to_toml_string().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<Preset> {
    name.parse()
}
