//! Evolutionary multi-agent system (EMAS) for continuous minimization, its
//! autonomously hybridized variant (HEMAS), and the experiment harness used to
//! compare them.
//!
//! Agents carry a real-valued genotype and a share of a fixed energy pool.
//! Pairwise meetings move energy from the worse agent to the better one, rich
//! agents reproduce and bankrupt agents die. HEMAS adds a periodic step in
//! which agents that satisfy a trigger rule hand their solutions to a classic
//! metaheuristic (PSO or a generational GA) and have their energy
//! redistributed according to the improved fitness.
//!
//! ```
//! use hemas::{benchmarks::{make_benchmark, FunctionName}, emas::{run_emas, EmasParams}, variation::RngStream};
//!
//! let f = make_benchmark(FunctionName::Sphere, 10).unwrap();
//! let mut rng = RngStream::new(7);
//! let record = run_emas(&EmasParams::default(), &f, f.default_budget(), &mut rng).unwrap();
//! assert_eq!(record.evaluations, 1000);
//! ```

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod emas;
mod error;
pub mod harness;
pub mod hybrid;
pub mod stats;
pub mod variation;

pub use error::{Error, Result};

/// A candidate solution: one real value per decision variable.
pub type Genotype = Vec<f64>;
