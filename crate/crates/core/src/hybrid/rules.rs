//! Trigger rules deciding which agents take part in a hybrid step.
//!
//! Rules are written as `<METRIC><RELATION><THRESHOLD>`:
//! `V`ariety, `E`nergy or `S`olution fitness; `L`ess, `G`reater or `E`qual;
//! a numeric constant, `M` (mean) or `Q1`/`Q2`/`Q3` (population quartiles).
//! `VE0`, `ELQ1`, `EGQ3`, `VG0.5` and `SLQ1` are all valid rules.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::emas::Population;
use crate::{Error, Result};

/// Absolute tolerance of the `Equal` relation.
pub const EQUAL_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Energy,
    Fitness,
    Variety,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Less,
    Greater,
    Equal,
}

impl Relation {
    pub fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Relation::Less => value < threshold,
            Relation::Greater => value > threshold,
            Relation::Equal => (value - threshold).abs() <= EQUAL_TOLERANCE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quartile {
    Q1,
    Median,
    Q3,
}

impl Quartile {
    fn fraction(self) -> f64 {
        match self {
            Quartile::Q1 => 0.25,
            Quartile::Median => 0.5,
            Quartile::Q3 => 0.75,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PopulationStatistic {
    Mean,
    Quartile(Quartile),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Threshold {
    Constant(f64),
    Statistic(PopulationStatistic),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scope {
    /// Each agent is tested on its own value.
    PerAgent,
    /// One population-level value decides for everyone.
    Global,
}

/// A parsed trigger rule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct RuleSpec {
    pub metric: Metric,
    pub relation: Relation,
    pub threshold: Threshold,
    pub scope: Scope,
}

impl RuleSpec {
    pub fn new(metric: Metric, relation: Relation, threshold: Threshold, scope: Scope) -> Result<Self> {
        let rule = RuleSpec {
            metric,
            relation,
            threshold,
            scope,
        };
        if metric == Metric::Variety {
            if scope != Scope::Global {
                return Err(rule.invalid("variety is a population-level metric"));
            }
            if matches!(threshold, Threshold::Statistic(_)) {
                return Err(rule.invalid("variety rules need a constant threshold"));
            }
        }
        if let Threshold::Constant(c) = threshold {
            if !c.is_finite() {
                return Err(rule.invalid("threshold must be finite"));
            }
        }
        Ok(rule)
    }

    fn invalid(&self, reason: &str) -> Error {
        Error::InvalidRule {
            rule: self.to_string(),
            reason: reason.to_string(),
        }
    }
}

impl fmt::Display for RuleSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let metric = match self.metric {
            Metric::Energy => 'E',
            Metric::Fitness => 'S',
            Metric::Variety => 'V',
        };
        let relation = match self.relation {
            Relation::Less => 'L',
            Relation::Greater => 'G',
            Relation::Equal => 'E',
        };
        write!(f, "{metric}{relation}")?;
        match self.threshold {
            Threshold::Constant(c) => write!(f, "{c}"),
            Threshold::Statistic(PopulationStatistic::Mean) => f.write_str("M"),
            Threshold::Statistic(PopulationStatistic::Quartile(q)) => f.write_str(match q {
                Quartile::Q1 => "Q1",
                Quartile::Median => "Q2",
                Quartile::Q3 => "Q3",
            }),
        }
    }
}

impl FromStr for RuleSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidRule {
            rule: s.to_string(),
            reason: reason.to_string(),
        };
        let mut chars = s.trim().chars();
        let (metric, scope) = match chars.next() {
            Some('V') => (Metric::Variety, Scope::Global),
            Some('E') => (Metric::Energy, Scope::PerAgent),
            Some('S') => (Metric::Fitness, Scope::PerAgent),
            _ => return Err(invalid("metric must be one of V, E, S")),
        };
        let relation = match chars.next() {
            Some('L') => Relation::Less,
            Some('G') => Relation::Greater,
            Some('E') => Relation::Equal,
            _ => return Err(invalid("relation must be one of L, G, E")),
        };
        let threshold = match chars.as_str() {
            "M" => Threshold::Statistic(PopulationStatistic::Mean),
            "Q1" => Threshold::Statistic(PopulationStatistic::Quartile(Quartile::Q1)),
            "Q2" => Threshold::Statistic(PopulationStatistic::Quartile(Quartile::Median)),
            "Q3" => Threshold::Statistic(PopulationStatistic::Quartile(Quartile::Q3)),
            "" => return Err(invalid("missing threshold")),
            number => Threshold::Constant(
                number
                    .parse::<f64>()
                    .map_err(|_| invalid("threshold must be a number, M, Q1, Q2 or Q3"))?,
            ),
        };
        RuleSpec::new(metric, relation, threshold, scope).map_err(|e| match e {
            Error::InvalidRule { reason, .. } => invalid(&reason),
            other => other,
        })
    }
}

impl TryFrom<String> for RuleSpec {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<RuleSpec> for String {
    fn from(rule: RuleSpec) -> String {
        rule.to_string()
    }
}

/// Smallest per-gene population standard deviation (divisor N).
///
/// Zero as soon as a single gene has the same value in every agent.
pub fn diversity(population: &Population) -> f64 {
    let agents = &population.agents;
    let Some(first) = agents.first() else {
        return 0.0;
    };
    let n = agents.len() as f64;
    (0..first.genotype.len())
        .map(|gene| {
            let mean = agents.iter().map(|a| a.genotype[gene]).sum::<f64>() / n;
            let var = agents
                .iter()
                .map(|a| {
                    let d = a.genotype[gene] - mean;
                    d * d
                })
                .sum::<f64>()
                / n;
            var.sqrt()
        })
        .fold(f64::INFINITY, f64::min)
}

/// Quartile by linear interpolation between order statistics at `(n - 1)·p`.
pub fn quartile(values: &[f64], which: Quartile) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let h = (sorted.len() - 1) as f64 * which.fraction();
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    Ok(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

fn statistic(values: &[f64], stat: PopulationStatistic) -> Result<f64> {
    match stat {
        PopulationStatistic::Mean => {
            if values.is_empty() {
                return Err(Error::EmptyInput);
            }
            Ok(values.iter().sum::<f64>() / values.len() as f64)
        }
        PopulationStatistic::Quartile(q) => quartile(values, q),
    }
}

/// Ids of the agents willing to take part under `rule`, in population order.
///
/// A global rule selects either everyone or no one.
pub fn evaluate_rule(rule: &RuleSpec, population: &Population) -> Vec<u64> {
    if population.is_empty() {
        return Vec::new();
    }
    let values: Vec<f64> = match rule.metric {
        Metric::Energy => population.agents.iter().map(|a| a.energy).collect(),
        Metric::Fitness => population.agents.iter().map(|a| a.fitness).collect(),
        Metric::Variety => vec![diversity(population)],
    };
    let threshold = match rule.threshold {
        Threshold::Constant(c) => c,
        Threshold::Statistic(stat) => match statistic(&values, stat) {
            Ok(t) => t,
            Err(_) => return Vec::new(),
        },
    };
    let all_ids = || population.agents.iter().map(|a| a.id).collect();
    match rule.scope {
        Scope::Global => {
            let level = if rule.metric == Metric::Variety {
                values[0]
            } else {
                values.iter().sum::<f64>() / values.len() as f64
            };
            if rule.relation.holds(level, threshold) {
                all_ids()
            } else {
                Vec::new()
            }
        }
        Scope::PerAgent => population
            .agents
            .iter()
            .zip(&values)
            .filter(|(_, v)| rule.relation.holds(**v, threshold))
            .map(|(a, _)| a.id)
            .collect(),
    }
}
