//! Continuous benchmark functions and the fitness-evaluation budget that
//! acts as the stopping criterion.
//!
//! All four functions have their global minimum of 0 at the origin.

use std::f64::consts::{E, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Identity of a benchmark function. Serialized as the lowercase name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionName {
    Sphere,
    Ackley,
    Griewank,
    Rastrigin,
}

impl FunctionName {
    pub const ALL: [FunctionName; 4] = [
        FunctionName::Sphere,
        FunctionName::Ackley,
        FunctionName::Griewank,
        FunctionName::Rastrigin,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FunctionName::Sphere => "sphere",
            FunctionName::Ackley => "ackley",
            FunctionName::Griewank => "griewank",
            FunctionName::Rastrigin => "rastrigin",
        }
    }

    /// Symmetric per-gene half-width of the search box.
    pub fn half_width(self) -> f64 {
        match self {
            FunctionName::Sphere | FunctionName::Rastrigin => 5.12,
            FunctionName::Ackley => 32.768,
            FunctionName::Griewank => 600.0,
        }
    }
}

impl fmt::Display for FunctionName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FunctionName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sphere" => Ok(FunctionName::Sphere),
            "ackley" => Ok(FunctionName::Ackley),
            "griewank" => Ok(FunctionName::Griewank),
            "rastrigin" => Ok(FunctionName::Rastrigin),
            _ => Err(Error::UnknownFunction(s.to_string())),
        }
    }
}

/// Box limits shared by every gene.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

impl Bounds {
    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if !(lower < upper) || !lower.is_finite() || !upper.is_finite() {
            return Err(Error::InvalidInput(format!(
                "bounds must satisfy lower < upper, got [{lower}, {upper}]"
            )));
        }
        Ok(Bounds { lower, upper })
    }

    pub fn symmetric(half_width: f64) -> Self {
        Bounds {
            lower: -half_width,
            upper: half_width,
        }
    }

    #[inline]
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }

    #[inline]
    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lower, self.upper)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        x >= self.lower && x <= self.upper
    }
}

/// Counts fitness evaluations and refuses new ones once the limit is hit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalBudget {
    used: u64,
    limit: u64,
}

impl EvalBudget {
    pub fn new(limit: u64) -> Self {
        EvalBudget { used: 0, limit }
    }

    /// `multiplier × dimension` evaluations; 100 × dimension is the standard setting.
    pub fn for_dimension(dimension: usize, multiplier: u64) -> Self {
        EvalBudget::new(multiplier * dimension as u64)
    }

    pub fn used(&self) -> u64 {
        self.used
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.used
    }

    pub fn is_exhausted(&self) -> bool {
        self.used >= self.limit
    }

    /// Reserves one evaluation.
    pub fn consume(&mut self) -> Result<()> {
        if self.is_exhausted() {
            return Err(Error::BudgetExhausted { limit: self.limit });
        }
        self.used += 1;
        Ok(())
    }
}

/// A benchmark instance: function, dimension and search box.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveFunction {
    name: FunctionName,
    dimension: usize,
    bounds: Bounds,
}

/// Builds a benchmark instance on its conventional domain.
pub fn make_benchmark(name: FunctionName, dimension: usize) -> Result<ObjectiveFunction> {
    if dimension == 0 {
        return Err(Error::InvalidDimension(dimension));
    }
    Ok(ObjectiveFunction {
        name,
        dimension,
        bounds: Bounds::symmetric(name.half_width()),
    })
}

impl ObjectiveFunction {
    pub fn name(&self) -> FunctionName {
        self.name
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn bounds(&self) -> Bounds {
        self.bounds
    }

    /// The standard budget of 100 evaluations per dimension.
    pub fn default_budget(&self) -> EvalBudget {
        EvalBudget::for_dimension(self.dimension, 100)
    }

    /// Checked evaluation that draws one unit from `budget`.
    ///
    /// Nothing is consumed when the input is rejected.
    pub fn evaluate(&self, x: &[f64], budget: &mut EvalBudget) -> Result<f64> {
        if x.len() != self.dimension {
            return Err(Error::DimensionMismatch {
                expected: self.dimension,
                actual: x.len(),
            });
        }
        if let Some((index, &value)) = x
            .iter()
            .enumerate()
            .find(|(_, v)| !self.bounds.contains(**v))
        {
            return Err(Error::OutOfBounds {
                index,
                value,
                lower: self.bounds.lower,
                upper: self.bounds.upper,
            });
        }
        budget.consume()?;
        Ok(self.value(x))
    }

    /// Raw function value, outside any budget. Any length and any point are accepted.
    pub fn value(&self, x: &[f64]) -> f64 {
        match self.name {
            FunctionName::Sphere => sphere(x),
            FunctionName::Ackley => ackley(x),
            FunctionName::Griewank => griewank(x),
            FunctionName::Rastrigin => rastrigin(x),
        }
    }
}

pub fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn ackley(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let sum_cos: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
    // grouped so that both terms vanish exactly at the origin
    20.0 * (1.0 - (-0.2 * (sum_sq / n).sqrt()).exp()) + (E - (sum_cos / n).exp())
}

pub fn griewank(x: &[f64]) -> f64 {
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let prod: f64 = x
        .iter()
        .enumerate()
        .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
        .product();
    1.0 + sum_sq / 4000.0 - prod
}

pub fn rastrigin(x: &[f64]) -> f64 {
    let n = x.len() as f64;
    10.0 * n
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}
