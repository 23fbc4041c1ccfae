//! Descriptive statistics and rank-based hypothesis tests (Kruskal-Wallis
//! omnibus test followed by Dunn's pairwise comparisons).

use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::erf::erfc;

use crate::{Error, Result};

/// Final fitnesses of one algorithm configuration, one value per repetition.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleSet {
    pub label: String,
    pub values: Vec<f64>,
}

impl SampleSet {
    pub fn new(label: impl Into<String>, values: Vec<f64>) -> Result<Self> {
        let label = label.into();
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidInput(format!("sample `{label}` contains non-finite value {v}")));
        }
        Ok(SampleSet { label, values })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    pub median: f64,
    /// Sample standard deviation (n − 1 divisor); 0 for a single value.
    pub sd: f64,
    pub min: f64,
    pub max: f64,
}

pub fn describe(values: &[f64]) -> Result<Summary> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = values.len();
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mean = values.iter().sum::<f64>() / n as f64;
    let median = if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    };
    let sd = if n > 1 {
        (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(Summary {
        mean,
        median,
        sd,
        min: sorted[0],
        max: sorted[n - 1],
    })
}

/// Mid-ranks (1-based, ties share the average rank) and the sizes of all tie groups.
pub fn mid_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end
        let rank = (start + 1 + end) as f64 / 2.0;
        for &idx in &order[start..end] {
            ranks[idx] = rank;
        }
        if end - start > 1 {
            ties.push(end - start);
        }
        start = end;
    }
    (ranks, ties)
}

struct PooledRanks {
    mean_ranks: Vec<f64>,
    sizes: Vec<usize>,
    total: usize,
    ties: Vec<usize>,
}

fn pool(groups: &[SampleSet]) -> Result<PooledRanks> {
    if groups.len() < 2 {
        return Err(Error::InvalidInput("at least two groups are required".into()));
    }
    if groups.iter().any(|g| g.values.is_empty()) {
        return Err(Error::EmptyInput);
    }
    let pooled: Vec<f64> = groups.iter().flat_map(|g| g.values.iter().copied()).collect();
    let (ranks, ties) = mid_ranks(&pooled);
    let mut mean_ranks = Vec::with_capacity(groups.len());
    let mut offset = 0;
    for g in groups {
        let n = g.values.len();
        mean_ranks.push(ranks[offset..offset + n].iter().sum::<f64>() / n as f64);
        offset += n;
    }
    Ok(PooledRanks {
        mean_ranks,
        sizes: groups.iter().map(|g| g.values.len()).collect(),
        total: pooled.len(),
        ties,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KruskalWallis {
    /// Tie-corrected H statistic.
    pub h: f64,
    pub df: usize,
    pub p: f64,
}

/// Kruskal-Wallis H test with tie correction; p from the χ² upper tail.
///
/// When every pooled value is identical the test is degenerate and reports
/// `H = 0`, `p = 1`.
pub fn kruskal_wallis(groups: &[SampleSet]) -> Result<KruskalWallis> {
    let pooled = pool(groups)?;
    let n = pooled.total as f64;
    let df = groups.len() - 1;
    let tie_sum: f64 = pooled.ties.iter().map(|&t| (t as f64).powi(3) - t as f64).sum();
    let correction = 1.0 - tie_sum / (n.powi(3) - n);
    if correction <= 0.0 || !correction.is_finite() {
        return Ok(KruskalWallis { h: 0.0, df, p: 1.0 });
    }
    let h_raw = 12.0 / (n * (n + 1.0))
        * pooled
            .mean_ranks
            .iter()
            .zip(&pooled.sizes)
            .map(|(r, &size)| size as f64 * r * r)
            .sum::<f64>()
        - 3.0 * (n + 1.0);
    let h = (h_raw / correction).max(0.0);
    let p = ChiSquared::new(df as f64)
        .map_err(|e| Error::InvalidInput(e.to_string()))?
        .sf(h);
    Ok(KruskalWallis { h, df, p: p.clamp(0.0, 1.0) })
}

/// Two-sided standard normal tail probability `P(|Z| ≥ |z|)`.
pub fn normal_two_sided_p(z: f64) -> f64 {
    erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DunnPair {
    pub a: usize,
    pub b: usize,
    pub label_a: String,
    pub label_b: String,
    /// `(R̄_a − R̄_b) / SE`.
    pub z: f64,
    pub p_unadjusted: f64,
    pub p_bonferroni: f64,
}

/// Dunn's pairwise test on pooled mid-ranks with tie-corrected variance.
///
/// Pairs are listed in index order `(0,1), (0,2), …, (k−2,k−1)`.
pub fn dunn_test(groups: &[SampleSet]) -> Result<Vec<DunnPair>> {
    let pooled = pool(groups)?;
    let n = pooled.total as f64;
    let tie_term: f64 = pooled
        .ties
        .iter()
        .map(|&t| {
            let t = t as f64;
            t * (t * t - 1.0)
        })
        .sum::<f64>()
        / (12.0 * (n - 1.0));
    let variance = n * (n + 1.0) / 12.0 - tie_term;
    let k = groups.len();
    let comparisons = (k * (k - 1) / 2) as f64;

    let mut pairs = Vec::with_capacity(k * (k - 1) / 2);
    for a in 0..k {
        for b in a + 1..k {
            let diff = pooled.mean_ranks[a] - pooled.mean_ranks[b];
            let se = (variance * (1.0 / pooled.sizes[a] as f64 + 1.0 / pooled.sizes[b] as f64)).sqrt();
            let z = if se > 0.0 && se.is_finite() { diff / se } else { 0.0 };
            let p = normal_two_sided_p(z);
            pairs.push(DunnPair {
                a,
                b,
                label_a: groups[a].label.clone(),
                label_b: groups[b].label.clone(),
                z,
                p_unadjusted: p,
                p_bonferroni: (p * comparisons).min(1.0),
            });
        }
    }
    Ok(pairs)
}

/// Omnibus and post-hoc results for one set of groups.
#[derive(Debug, Clone, PartialEq)]
pub struct TestReport {
    pub kruskal_wallis: KruskalWallis,
    pub pairwise: Vec<DunnPair>,
}

impl TestReport {
    pub fn new(groups: &[SampleSet]) -> Result<Self> {
        Ok(TestReport {
            kruskal_wallis: kruskal_wallis(groups)?,
            pairwise: dunn_test(groups)?,
        })
    }

    /// Looks a pair up by labels in either order.
    pub fn pair(&self, a: &str, b: &str) -> Option<&DunnPair> {
        self.pairwise
            .iter()
            .find(|p| (p.label_a == a && p.label_b == b) || (p.label_a == b && p.label_b == a))
    }
}
