//! Backdoor pre-pruning: drop features whose association with the target
//! vanishes once some other single feature is conditioned on.
//!
//! A feature `X` is flagged when `I(X;Y) >= tau_flag * H(Y)`. A flagged `X`
//! is removed when some other feature `Z` of the original feature set gives
//! `I(X;Y|Z) < epsilon * I(X;Y)`. All decisions are made against the
//! original set and applied together, so evaluation order cannot matter.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::infotheory::{cond_mutual_info, entropy, mutual_info, Discretizer, JointCounts};

pub const DEFAULT_TAU_FLAG: f64 = 0.05;
pub const DEFAULT_EPSILON: f64 = 0.10;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FilterThresholds {
    pub tau_flag: f64,
    pub epsilon: f64,
}

impl Default for FilterThresholds {
    fn default() -> Self {
        FilterThresholds {
            tau_flag: DEFAULT_TAU_FLAG,
            epsilon: DEFAULT_EPSILON,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RemovedFeature {
    pub feature: String,
    pub explained_by: String,
    pub mi: f64,
    pub cmi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfounderReport {
    pub removed: Vec<RemovedFeature>,
    pub retained: Vec<String>,
    pub thresholds: FilterThresholds,
    /// `H(Y)` of the discretized target over the filtered rows.
    pub target_entropy: f64,
}

impl ConfounderReport {
    pub fn removed_names(&self) -> Vec<String> {
        self.removed.iter().map(|r| r.feature.clone()).collect()
    }
}

/// Runs the filter over every row of `d`. `target` holds each row's d2h and
/// `disc` supplies the feature and target bins.
pub fn filter_confounders(
    d: &Dataset,
    disc: &Discretizer,
    target: &[f64],
    thresholds: FilterThresholds,
) -> (Dataset, ConfounderReport) {
    let features = d.independent_indices();
    let name = |c: usize| d.columns()[c].name.clone();
    let y: Vec<Option<usize>> = target.iter().map(|&v| Some(disc.target_code(v))).collect();
    let ky = disc.target.n_bins();
    let hy = {
        let mut h = vec![0; ky];
        for code in y.iter().flatten() {
            h[*code] += 1;
        }
        entropy(&h).unwrap_or(0.0)
    };

    if features.len() < 2 {
        log::info!(
            "{}: fewer than two features, confounder filter skipped",
            d.source()
        );
        let mut retained: Vec<String> = features.iter().map(|&c| name(c)).collect();
        retained.sort();
        return (
            d.clone(),
            ConfounderReport {
                removed: Vec::new(),
                retained,
                thresholds,
                target_entropy: hy,
            },
        );
    }

    let codes: Vec<Vec<Option<usize>>> = features
        .iter()
        .map(|&c| d.rows().iter().map(|row| disc.code(c, &row[c])).collect())
        .collect();
    let dims: Vec<usize> = features.iter().map(|&c| disc.columns[c].n_bins()).collect();

    let mut removed: Vec<RemovedFeature> = (0..features.len())
        .into_par_iter()
        .filter_map(|xi| {
            let mi = mutual_info(&JointCounts::from_codes(&[dims[xi], ky], &[&codes[xi], &y]))
                .unwrap_or(0.0);
            if mi <= 0.0 || mi < thresholds.tau_flag * hy {
                return None;
            }
            (0..features.len())
                .filter(|&zi| zi != xi)
                .map(|zi| {
                    let j = JointCounts::from_codes(
                        &[dims[xi], ky, dims[zi]],
                        &[&codes[xi], &y, &codes[zi]],
                    );
                    (cond_mutual_info(&j).unwrap_or(0.0), name(features[zi]))
                })
                .filter(|(cmi, _)| *cmi < thresholds.epsilon * mi)
                .min_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
                .map(|(cmi, z)| RemovedFeature {
                    feature: name(features[xi]),
                    explained_by: z,
                    mi,
                    cmi,
                })
        })
        .collect();
    removed.sort_by(|a, b| a.feature.cmp(&b.feature));

    let removed_names: Vec<String> = removed.iter().map(|r| r.feature.clone()).collect();
    let mut retained: Vec<String> = features
        .iter()
        .map(|&c| name(c))
        .filter(|n| !removed_names.contains(n))
        .collect();
    retained.sort();
    for r in &removed {
        log::debug!(
            "{}: removed {} (I={:.4}, I|{}={:.4})",
            d.source(),
            r.feature,
            r.mi,
            r.explained_by,
            r.cmi
        );
    }
    (
        d.without_columns(&removed_names),
        ConfounderReport {
            removed,
            retained,
            thresholds,
            target_entropy: hy,
        },
    )
}
