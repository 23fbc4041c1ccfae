//! Real-coded variation operators and the seeded random stream they draw from.
//!
//! Every operator takes an explicit [`RngStream`]; there is no global generator,
//! so a run is fully determined by its seed.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::benchmarks::Bounds;
use crate::{Error, Result};

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the stream owned by repetition `run_index` of a campaign.
pub fn derive_seed(master_seed: u64, run_index: u64) -> u64 {
    mix64(mix64(master_seed) ^ mix64(run_index.wrapping_add(0xD1B5_4A32_D192_ED03)))
}

/// Portable, seedable random stream (ChaCha8 keyed by a 64-bit seed).
#[derive(Debug, Clone)]
pub struct RngStream {
    seed: u64,
    rng: ChaCha8Rng,
}

impl RngStream {
    pub fn new(seed: u64) -> Self {
        RngStream {
            seed,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    /// Stream for one repetition of a campaign.
    pub fn for_run(master_seed: u64, run_index: u64) -> Self {
        RngStream::new(derive_seed(master_seed, run_index))
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Uniform draw from `[0, 1)`.
    #[inline]
    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    /// Uniform draw from `[lower, upper)`.
    #[inline]
    pub fn uniform_in(&mut self, lower: f64, upper: f64) -> f64 {
        lower + (upper - lower) * self.uniform()
    }

    /// Uniform index in `0..n`. `n` must be positive.
    #[inline]
    pub fn index(&mut self, n: usize) -> usize {
        self.rng.random_range(0..n)
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        items.shuffle(&mut self.rng);
    }
}

/// Simulated binary crossover settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SbxParams {
    pub distribution_index: f64,
    pub probability: f64,
}

impl SbxParams {
    pub fn new(distribution_index: f64, probability: f64) -> Result<Self> {
        check_params("crossover", distribution_index, probability)?;
        Ok(SbxParams {
            distribution_index,
            probability,
        })
    }
}

/// Polynomial mutation settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MutationParams {
    pub distribution_index: f64,
    pub probability: f64,
}

impl MutationParams {
    pub fn new(distribution_index: f64, probability: f64) -> Result<Self> {
        check_params("mutation", distribution_index, probability)?;
        Ok(MutationParams {
            distribution_index,
            probability,
        })
    }

    /// Settings of the strong mutation used by a parent without a partner.
    pub const STRONG: MutationParams = MutationParams {
        distribution_index: 20.0,
        probability: 1.0,
    };
}

fn check_params(what: &str, eta: f64, probability: f64) -> Result<()> {
    if !(eta >= 0.0) || !eta.is_finite() {
        return Err(Error::InvalidInput(format!(
            "{what} distribution index must be a finite non-negative number, got {eta}"
        )));
    }
    if !(0.0..=1.0).contains(&probability) {
        return Err(Error::InvalidInput(format!(
            "{what} probability must lie in [0, 1], got {probability}"
        )));
    }
    Ok(())
}

/// SBX spread factor for a uniform draw `u`.
#[inline]
pub fn sbx_spread(u: f64, eta: f64) -> f64 {
    let exponent = 1.0 / (eta + 1.0);
    if u <= 0.5 {
        (2.0 * u).powf(exponent)
    } else {
        (1.0 / (2.0 * (1.0 - u))).powf(exponent)
    }
}

/// Children of one gene pair for a given draw, before any repair.
#[inline]
pub fn sbx_gene(p1: f64, p2: f64, u: f64, eta: f64) -> (f64, f64) {
    let beta = sbx_spread(u, eta);
    (
        0.5 * ((1.0 + beta) * p1 + (1.0 - beta) * p2),
        0.5 * ((1.0 - beta) * p1 + (1.0 + beta) * p2),
    )
}

/// Simulated binary crossover with clamping repair.
///
/// The operator fires with `params.probability`; when it does, each gene
/// pair that differs is recombined with probability 0.5 and the two
/// resulting values are handed to the children in random order. Otherwise
/// the children are copies of the parents.
pub fn sbx_crossover(
    p1: &[f64],
    p2: &[f64],
    params: &SbxParams,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Result<(Vec<f64>, Vec<f64>)> {
    if p1.len() != p2.len() {
        return Err(Error::DimensionMismatch {
            expected: p1.len(),
            actual: p2.len(),
        });
    }
    let mut c1 = p1.to_vec();
    let mut c2 = p2.to_vec();
    if rng.uniform() >= params.probability {
        return Ok((c1, c2));
    }
    for i in 0..p1.len() {
        if rng.uniform() <= 0.5 && p1[i] != p2[i] {
            let u = rng.uniform();
            let (a, b) = sbx_gene(p1[i], p2[i], u, params.distribution_index);
            c1[i] = bounds.clamp(a);
            c2[i] = bounds.clamp(b);
            if rng.uniform() <= 0.5 {
                std::mem::swap(&mut c1[i], &mut c2[i]);
            }
        }
    }
    Ok((c1, c2))
}

/// Bounded polynomial perturbation of a single gene for draw `u`, clamped.
#[inline]
pub fn polynomial_gene(x: f64, bounds: &Bounds, u: f64, eta: f64) -> f64 {
    let width = bounds.width();
    let power = eta + 1.0;
    let exponent = 1.0 / power;
    let delta_q = if u < 0.5 {
        let delta1 = (x - bounds.lower) / width;
        let value = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - delta1).powf(power);
        value.powf(exponent) - 1.0
    } else {
        let delta2 = (bounds.upper - x) / width;
        let value = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - delta2).powf(power);
        1.0 - value.powf(exponent)
    };
    bounds.clamp(x + delta_q * width)
}

/// Polynomial mutation applied in place; returns the number of genes perturbed.
pub fn polynomial_mutation_in_place(
    x: &mut [f64],
    params: &MutationParams,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> usize {
    let mut perturbed = 0;
    for gene in x.iter_mut() {
        if rng.uniform() < params.probability {
            let u = rng.uniform();
            *gene = polynomial_gene(*gene, bounds, u, params.distribution_index);
            perturbed += 1;
        }
    }
    perturbed
}

/// Polynomial mutation; each gene is perturbed independently with `params.probability`.
pub fn polynomial_mutation(
    x: &[f64],
    params: &MutationParams,
    bounds: &Bounds,
    rng: &mut RngStream,
) -> Vec<f64> {
    let mut out = x.to_vec();
    polynomial_mutation_in_place(&mut out, params, bounds, rng);
    out
}

/// Polynomial mutation of every gene with distribution index 20.
pub fn strong_mutation(x: &[f64], bounds: &Bounds, rng: &mut RngStream) -> Vec<f64> {
    polynomial_mutation(x, &MutationParams::STRONG, bounds, rng)
}
