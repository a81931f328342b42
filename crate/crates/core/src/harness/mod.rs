//! Experiment protocols and their reports.
//!
//! * [`run_rq1_model`]: bootstrap ensemble of correlation trees, per-feature
//!   ordinal impact levels and their Gini impurity.
//! * [`run_rq2`]: one split, `R` bootstrap trees per treatment, variance
//!   comparison of the selected rows' actual d2h.
//! * [`run_rq3`]: `R` fresh splits, one tree per treatment each, KS plus
//!   Cliff's delta verdict.
//!
//! Every random choice is drawn from a seed derived from the master seed,
//! the run index and (for tree builds) the treatment, and every reduction
//! is ordered by run index, so reports do not depend on thread count.

mod human;
mod io;
mod protocol;
mod summary;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::confound::{ConfounderReport, FilterThresholds};
use crate::dataset::{Dataset, DatasetError};
use crate::splitcrit::Criterion;
use crate::stats::{
    ComparisonVerdict, DeltaBands, PerfDistribution, StatsError, Treatment, VarianceTest,
};
use crate::tree::{FeatureImpact, Tree, TreeConfig, TreeError};

pub use human::{ingest_human, HumanJudgments, OrdinalJudgment, MIN_RESPONSES};
pub use io::{load_report, load_reports, write_report};
pub use protocol::{compare_rq1, run_rq1_model, run_rq2, run_rq3, run_seed_ensemble};
pub use summary::{load_manifest, summarize, Counts, Manifest, Summary, SummaryGroup, SummaryRow};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Dataset(#[from] DatasetError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed judgments file:\n{}", .0.iter().map(|(l, m)| format!("  line {l}: {m}")).collect::<Vec<_>>().join("\n"))]
    Ingest(Vec<(usize, String)>),
    #[error("comparison impossible: {0}")]
    Comparison(String),
}

impl HarnessError {
    /// 1 for usage, IO and format problems; 2 for protocol preconditions.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Precondition(_)
            | HarnessError::Comparison(_)
            | HarnessError::Stats(_)
            | HarnessError::Tree(_)
            | HarnessError::Dataset(DatasetError::TooSmall { .. }) => 2,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmConfig {
    pub treatment: Treatment,
    pub criterion: Criterion,
    pub confound_filter: bool,
}

/// How the trees of an ensemble differ from one another.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EnsembleMode {
    /// Each tree trains on a bootstrap resample.
    Bootstrap,
    /// Each tree trains on the same rows with its own seed (only the label
    /// budget subsample varies).
    Seed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub dataset: PathBuf,
    pub arms: [ArmConfig; 2],
    pub repeats: usize,
    pub split_fraction: f64,
    pub seed: u64,
    /// Shared tree settings; each arm substitutes its own criterion.
    pub tree: TreeConfig,
    pub filter: FilterThresholds,
    pub alpha: f64,
    pub delta_bands: DeltaBands,
    pub permutations: usize,
    pub ensemble_mode: EnsembleMode,
    pub top_split_depth: usize,
    pub certain_top_fraction: f64,
}

impl RunConfig {
    pub fn new(dataset: impl Into<PathBuf>) -> RunConfig {
        RunConfig {
            dataset: dataset.into(),
            arms: [
                ArmConfig {
                    treatment: Treatment::Correlation,
                    criterion: Criterion::Variance,
                    confound_filter: false,
                },
                ArmConfig {
                    treatment: Treatment::Causal,
                    criterion: Criterion::Causal,
                    confound_filter: true,
                },
            ],
            repeats: 20,
            split_fraction: 0.5,
            seed: 1,
            tree: TreeConfig::default(),
            filter: FilterThresholds::default(),
            alpha: 0.05,
            delta_bands: DeltaBands::default(),
            permutations: 10_000,
            ensemble_mode: EnsembleMode::Bootstrap,
            top_split_depth: crate::tree::TOP_SPLIT_DEPTH,
            certain_top_fraction: crate::tree::CERTAIN_TOP_FRACTION,
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.repeats < 2 {
            return Err(HarnessError::Precondition(format!(
                "repeats must be at least 2, got {}",
                self.repeats
            )));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(HarnessError::Precondition(format!(
                "alpha must lie in (0,1), got {}",
                self.alpha
            )));
        }
        Ok(())
    }

    pub fn arm_tree(&self, arm: &ArmConfig) -> TreeConfig {
        TreeConfig {
            criterion: arm.criterion,
            ..self.tree
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetInfo {
    pub id: String,
    pub rows: usize,
    pub x: usize,
    pub y: usize,
}

impl DatasetInfo {
    pub fn of(d: &Dataset) -> DatasetInfo {
        DatasetInfo {
            id: d.source().to_string(),
            rows: d.n_rows(),
            x: d.independent_indices().len(),
            y: d.objective_indices().len(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunKind {
    Rq1,
    Rq2,
    Rq3,
    Tree,
}

impl RunKind {
    pub fn id(self) -> &'static str {
        match self {
            RunKind::Rq1 => "rq1",
            RunKind::Rq2 => "rq2",
            RunKind::Rq3 => "rq3",
            RunKind::Tree => "tree",
        }
    }
}

/// Results of one treatment arm.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArmResult {
    pub arm: ArmConfig,
    pub distribution: PerfDistribution,
    pub wins: Vec<f64>,
    pub predicted: Vec<f64>,
    /// Parent-dataset index of each selected row.
    pub selected_rows: Vec<usize>,
    pub confounders: Vec<ConfounderReport>,
    pub rendered: Vec<String>,
    pub trees: Vec<Tree>,
    pub root_leaf_trees: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureStability {
    pub feature: String,
    pub objective: String,
    pub impact: FeatureImpact,
    pub levels: Vec<u8>,
    pub gini: f64,
    pub ordinal_variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rq1Model {
    pub features: Vec<FeatureStability>,
    pub gini_distribution: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairStability {
    pub feature: String,
    pub objective: String,
    pub responses: usize,
    pub gini: f64,
    pub ordinal_variance: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rq1Comparison {
    pub human: Vec<PairStability>,
    pub human_gini: Vec<f64>,
    pub model_gini: Vec<f64>,
    pub ks_d: f64,
    /// Positive when human impurities tend to exceed the model's.
    pub cliffs_delta: f64,
    pub experts: usize,
    pub below_min_responses: bool,
    pub method: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub kind: RunKind,
    pub dataset: DatasetInfo,
    pub config: RunConfig,
    pub arms: Vec<ArmResult>,
    pub variance_test: Option<VarianceTest>,
    pub comparison: Option<ComparisonVerdict>,
    pub rq1: Option<Rq1Model>,
    pub rq1_comparison: Option<Rq1Comparison>,
    pub notes: Vec<String>,
    pub wall_clock_ms: u64,
}

impl RunReport {
    pub fn arm(&self, t: Treatment) -> Option<&ArmResult> {
        self.arms.iter().find(|a| a.arm.treatment == t)
    }

    /// The report as JSON with the wall-clock field zeroed, for
    /// reproducibility comparisons.
    pub fn canonical_json(&self) -> String {
        let mut r = self.clone();
        r.wall_clock_ms = 0;
        serde_json::to_string(&r).expect("reports serialize")
    }
}
