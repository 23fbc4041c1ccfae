//! Reallocation of the participants' pooled energy after a hybrid step.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RedistributionScheme {
    #[default]
    Proportional,
    Ranking,
    Tournament,
}

/// Splits `pool` among the participants according to their post-hybrid fitness.
///
/// Proportional weights are `(f_max − f_i + ε) / Σ_j (f_max − f_j + ε)` with
/// `f_max` the worst participant fitness and `ε = 1e-9·(1 + |f_max|)`, so the
/// best solutions receive the most energy and equal fitnesses split evenly.
pub fn redistribute_energy(
    participants: &[(u64, f64)],
    pool: f64,
    scheme: RedistributionScheme,
) -> Result<Vec<(u64, f64)>> {
    if participants.is_empty() {
        return Err(Error::EmptyParticipants);
    }
    if let Some(&(_, bad)) = participants.iter().find(|(_, f)| !f.is_finite()) {
        return Err(Error::NonFiniteFitness(bad));
    }
    match scheme {
        RedistributionScheme::Proportional => Ok(proportional(participants, pool)),
        RedistributionScheme::Ranking => Err(Error::NotImplemented("ranking energy redistribution")),
        RedistributionScheme::Tournament => {
            Err(Error::NotImplemented("tournament energy redistribution"))
        }
    }
}

fn proportional(participants: &[(u64, f64)], pool: f64) -> Vec<(u64, f64)> {
    let worst = participants
        .iter()
        .map(|(_, f)| *f)
        .fold(f64::NEG_INFINITY, f64::max);
    let eps = 1e-9 * (1.0 + worst.abs());
    let raw: Vec<f64> = participants.iter().map(|(_, f)| worst - f + eps).collect();
    let total: f64 = raw.iter().sum();
    participants
        .iter()
        .zip(raw)
        .map(|((id, _), w)| (*id, pool * (w / total)))
        .collect()
}
