//! Sample summaries and the Wilcoxon rank-sum test.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};

/// Samples up to this size on both sides use the exact null distribution.
pub const EXACT_LIMIT: usize = 8;

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub mean: f64,
    /// Minimum of the sample.
    pub best: f64,
    /// Sample standard deviation (n − 1 denominator); 0 for a single value.
    pub std: f64,
    pub n: usize,
}

pub fn summarize(samples: &[f64]) -> Result<SampleSummary> {
    let n = samples.len();
    if n == 0 {
        return Err(Error::EmptySample);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    let best = samples.iter().copied().fold(f64::INFINITY, f64::min);
    let std = if n == 1 {
        0.0
    } else {
        let ss: f64 = samples.iter().map(|x| (x - mean).powi(2)).sum();
        (ss / (n - 1) as f64).sqrt()
    };
    Ok(SampleSummary { mean, best, std, n })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Rank sum of the first sample.
    pub rank_sum_statistic: f64,
    /// Normal-approximation z; negative when the first sample tends to be
    /// smaller.
    pub z_value: f64,
    pub p_two_sided: f64,
    pub significant_at_95: bool,
    /// Whether `p_two_sided` comes from the exact null distribution.
    pub exact: bool,
}

/// Average ranks (1-based) of `values`, with ties sharing their mean rank.
pub fn midranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let mut ranks = vec![0.0; values.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && values[order[end]] == values[order[start]] {
            end += 1;
        }
        // Positions start..end hold ranks start+1..=end.
        let avg = (start + 1 + end) as f64 / 2.0;
        for &i in &order[start..end] {
            ranks[i] = avg;
        }
        start = end;
    }
    ranks
}

/// Two-sided Wilcoxon rank-sum test of `a` against `b`.
///
/// `z_value` always comes from the normal approximation (tie-corrected
/// variance, continuity correction 0.5). The p-value is exact when both
/// samples have at most [`EXACT_LIMIT`] values.
pub fn wilcoxon_rank_sum(a: &[f64], b: &[f64]) -> Result<WilcoxonResult> {
    let (n, m) = (a.len(), b.len());
    if n == 0 || m == 0 {
        return Err(Error::EmptySample);
    }
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let ranks = midranks(&pooled);
    let w: f64 = ranks[..n].iter().sum();
    let exact = n <= EXACT_LIMIT && m <= EXACT_LIMIT;

    if pooled.iter().all(|&x| x == pooled[0]) {
        return Ok(WilcoxonResult {
            rank_sum_statistic: w,
            z_value: 0.0,
            p_two_sided: 1.0,
            significant_at_95: false,
            exact,
        });
    }

    let z = normal_z(&pooled, &ranks, n);
    let p = if exact {
        exact_p(&ranks, n)
    } else {
        let standard = Normal::new(0.0, 1.0).expect("unit normal");
        (2.0 * standard.cdf(-z.abs())).clamp(f64::MIN_POSITIVE, 1.0)
    };
    Ok(WilcoxonResult {
        rank_sum_statistic: w,
        z_value: z,
        p_two_sided: p,
        significant_at_95: p < SIGNIFICANCE_LEVEL,
        exact,
    })
}

fn normal_z(pooled: &[f64], ranks: &[f64], n: usize) -> f64 {
    let total = pooled.len() as f64;
    let (nf, mf) = (n as f64, total - n as f64);
    let w: f64 = ranks[..n].iter().sum();
    let expected = nf * (total + 1.0) / 2.0;

    let mut sorted = pooled.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < sorted.len() {
        let j = sorted[i..].iter().take_while(|&&x| x == sorted[i]).count();
        let t = j as f64;
        tie_term += t * t * t - t;
        i += j;
    }
    let variance = nf * mf / 12.0 * ((total + 1.0) - tie_term / (total * (total - 1.0)));
    let diff = w - expected;
    if diff.abs() < 0.5 || variance <= 0.0 {
        return 0.0;
    }
    (diff - 0.5 * diff.signum()) / variance.sqrt()
}

/// Exact two-sided p-value `P(|W − E| ≥ |w − E|)` under random assignment of
/// the pooled ranks, counted over all `C(M, n)` subsets.
fn exact_p(ranks: &[f64], n: usize) -> f64 {
    // Doubled midranks are integers, so the subset-sum table is exact.
    let doubled: Vec<usize> = ranks.iter().map(|r| (2.0 * r).round() as usize).collect();
    let max_sum: usize = doubled.iter().sum();
    // ways[j][s]: subsets of size j with doubled rank sum s.
    let mut ways = vec![vec![0u64; max_sum + 1]; n + 1];
    ways[0][0] = 1;
    for &r in &doubled {
        for j in (1..=n).rev() {
            for s in (r..=max_sum).rev() {
                ways[j][s] += ways[j - 1][s - r];
            }
        }
    }
    let total_m = ranks.len();
    let centre = (n * (total_m + 1)) as i64;
    let observed: i64 = doubled[..n].iter().sum::<usize>() as i64;
    let threshold = (observed - centre).abs();
    let (mut hit, mut all) = (0u64, 0u64);
    for (s, &count) in ways[n].iter().enumerate() {
        all += count;
        if (s as i64 - centre).abs() >= threshold {
            hit += count;
        }
    }
    hit as f64 / all as f64
}
