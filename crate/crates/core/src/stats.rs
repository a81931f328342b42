//! Non-parametric comparisons of performance and judgment distributions.

use std::fmt;

use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::infotheory::gini_impurity;
use crate::seed;

#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("sample is empty")]
    EmptySample,
    #[error("need at least {min} values, got {got}")]
    TooFew { min: usize, got: usize },
    #[error("ordinal level {0} outside 0..=2")]
    BadLevel(u8),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Treatment {
    Correlation,
    Causal,
}

impl fmt::Display for Treatment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Treatment::Correlation => "correlation",
            Treatment::Causal => "causal",
        })
    }
}

/// Actual d2h of the rows chosen by one treatment over repeated runs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PerfDistribution {
    pub treatment: Treatment,
    pub dataset: String,
    pub values: Vec<f64>,
    pub seeds: Vec<u64>,
}

fn nonempty(a: &[f64]) -> Result<(), StatsError> {
    if a.is_empty() {
        Err(StatsError::EmptySample)
    } else {
        Ok(())
    }
}

fn sorted(a: &[f64]) -> Vec<f64> {
    let mut v = a.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

/// Two-sample Kolmogorov-Smirnov statistic `sup_x |F_a(x) - F_b(x)|`.
///
/// Both ECDFs are right-continuous steps, so the supremum is attained at a
/// pooled sample point after all tied values there have been consumed.
pub fn ks_statistic(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    nonempty(a)?;
    nonempty(b)?;
    let (a, b) = (sorted(a), sorted(b));
    let (n, m) = (a.len(), b.len());
    let (mut i, mut j) = (0, 0);
    let mut d: f64 = 0.0;
    while i < n && j < m {
        let x = if a[i] <= b[j] { a[i] } else { b[j] };
        while i < n && a[i] <= x {
            i += 1;
        }
        while j < m && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    Ok(d)
}

/// Classical asymptotic constant `c(alpha)` of the two-sample KS test.
pub fn ks_constant(alpha: f64) -> f64 {
    const TABLE: [(f64, f64); 6] = [
        (0.10, 1.224),
        (0.05, 1.358),
        (0.025, 1.480),
        (0.01, 1.628),
        (0.005, 1.731),
        (0.001, 1.949),
    ];
    TABLE
        .iter()
        .find(|(a, _)| (a - alpha).abs() < 1e-12)
        .map(|&(_, c)| c)
        .unwrap_or_else(|| (-(alpha / 2.0).ln() / 2.0).sqrt())
}

/// Critical KS distance `c(alpha) * sqrt((n + m) / (n m))`.
pub fn ks_threshold(n: usize, m: usize, alpha: f64) -> f64 {
    let (n, m) = (n as f64, m as f64);
    ks_constant(alpha) * ((n + m) / (n * m)).sqrt()
}

/// Cliff's delta: `(#{a_i > b_j} - #{a_i < b_j}) / (|a| |b|)`.
pub fn cliffs_delta(a: &[f64], b: &[f64]) -> Result<f64, StatsError> {
    nonempty(a)?;
    nonempty(b)?;
    let b = sorted(b);
    let mut net: i64 = 0;
    for &x in a {
        let below = b.partition_point(|&y| y < x);
        let not_above = b.partition_point(|&y| y <= x);
        net += below as i64 - (b.len() - not_above) as i64;
    }
    Ok(net as f64 / (a.len() * b.len()) as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DeltaBand {
    Negligible,
    Small,
    Medium,
    Large,
}

/// Upper edges (exclusive) of the negligible, small and medium bands of
/// `|delta|`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaBands {
    pub negligible: f64,
    pub small: f64,
    pub medium: f64,
}

impl Default for DeltaBands {
    fn default() -> Self {
        DeltaBands {
            negligible: 0.147,
            small: 0.33,
            medium: 0.474,
        }
    }
}

impl DeltaBands {
    pub fn band(&self, delta: f64) -> DeltaBand {
        let d = delta.abs();
        if d < self.negligible {
            DeltaBand::Negligible
        } else if d < self.small {
            DeltaBand::Small
        } else if d < self.medium {
            DeltaBand::Medium
        } else {
            DeltaBand::Large
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Indistinguishable,
    FirstBetter,
    SecondBetter,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonVerdict {
    pub ks_d: f64,
    pub ks_threshold: f64,
    pub cliffs_delta: f64,
    pub delta_band: DeltaBand,
    pub median_first: f64,
    pub median_second: f64,
    pub verdict: Verdict,
}

pub fn median(a: &[f64]) -> f64 {
    let s = sorted(a);
    let n = s.len();
    if n == 0 {
        return f64::NAN;
    }
    if n % 2 == 1 {
        s[n / 2]
    } else {
        (s[n / 2 - 1] + s[n / 2]) / 2.0
    }
}

/// Two samples are indistinguishable when the KS distance is below the
/// critical value and `|delta|` is not large. Otherwise the one with the
/// lower median d2h is better; equal medians fall back to the sign of
/// delta, and a zero delta leaves them indistinguishable.
pub fn compare_verdict(
    a: &[f64],
    b: &[f64],
    alpha: f64,
    bands: &DeltaBands,
) -> Result<ComparisonVerdict, StatsError> {
    let ks_d = ks_statistic(a, b)?;
    let threshold = ks_threshold(a.len(), b.len(), alpha);
    let delta = cliffs_delta(a, b)?;
    let band = bands.band(delta);
    let (ma, mb) = (median(a), median(b));
    let verdict = if ks_d < threshold && band != DeltaBand::Large {
        Verdict::Indistinguishable
    } else if ma < mb || (ma == mb && delta < 0.0) {
        Verdict::FirstBetter
    } else if mb < ma || (ma == mb && delta > 0.0) {
        Verdict::SecondBetter
    } else {
        Verdict::Indistinguishable
    };
    Ok(ComparisonVerdict {
        ks_d,
        ks_threshold: threshold,
        cliffs_delta: delta,
        delta_band: band,
        median_first: ma,
        median_second: mb,
        verdict,
    })
}

/// Unbiased sample variance (denominator `n - 1`).
pub fn sample_variance(a: &[f64]) -> f64 {
    let n = a.len() as f64;
    let mean = a.iter().sum::<f64>() / n;
    a.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceTest {
    pub var_first: f64,
    pub var_second: f64,
    /// `|ln(var_first / var_second)|`.
    pub statistic: f64,
    pub p_value: f64,
    pub permutations: usize,
    pub seed: u64,
    pub method: String,
}

pub const VARIANCE_TEST_METHOD: &str = "permutation-logratio";

fn log_ratio(va: f64, vb: f64) -> f64 {
    let r = (va / vb).ln().abs();
    if r.is_nan() {
        0.0
    } else {
        r
    }
}

/// Two-sided permutation test of equal variances on `|ln(var_a/var_b)|`.
/// Each relabeling draws from its own seed derived from `seed`, and the
/// p-value is `(1 + #{perm >= observed}) / (1 + n_perm)`.
pub fn variance_stability_test(
    a: &[f64],
    b: &[f64],
    seed: u64,
    n_perm: usize,
) -> Result<VarianceTest, StatsError> {
    for s in [a, b] {
        if s.len() < 2 {
            return Err(StatsError::TooFew {
                min: 2,
                got: s.len(),
            });
        }
    }
    let (va, vb) = (sample_variance(a), sample_variance(b));
    let observed = log_ratio(va, vb);
    let p_value = if va == 0.0 && vb == 0.0 {
        log::info!("variance test: both samples constant, p = 1");
        1.0
    } else {
        let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
        let na = a.len();
        let hits: usize = (0..n_perm)
            .into_par_iter()
            .map(|i| {
                let mut p = pooled.clone();
                p.shuffle(&mut seed::rng(seed::derive(
                    seed,
                    &[seed::stage::PERMUTATION, i as u64],
                )));
                let s = log_ratio(sample_variance(&p[..na]), sample_variance(&p[na..]));
                usize::from(s >= observed)
            })
            .sum();
        (1 + hits) as f64 / (1 + n_perm) as f64
    };
    Ok(VarianceTest {
        var_first: va,
        var_second: vb,
        statistic: observed,
        p_value,
        permutations: n_perm,
        seed,
        method: VARIANCE_TEST_METHOD.to_string(),
    })
}

/// Gini impurity of a set of ordinal levels in `{0, 1, 2}`.
pub fn gini_stability(levels: &[u8]) -> Result<f64, StatsError> {
    if levels.is_empty() {
        return Err(StatsError::EmptySample);
    }
    let mut h = [0usize; 3];
    for &l in levels {
        *h.get_mut(l as usize).ok_or(StatsError::BadLevel(l))? += 1;
    }
    Ok(gini_impurity(&h).expect("non-empty histogram"))
}

/// Population variance of ordinal levels, reported beside the Gini score.
pub fn ordinal_variance(levels: &[u8]) -> f64 {
    let n = levels.len() as f64;
    let mean = levels.iter().map(|&l| f64::from(l)).sum::<f64>() / n;
    levels
        .iter()
        .map(|&l| (f64::from(l) - mean).powi(2))
        .sum::<f64>()
        / n
}
