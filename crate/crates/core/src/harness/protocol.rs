use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;

use super::{
    ArmConfig, ArmResult, DatasetInfo, EnsembleMode, FeatureStability, HarnessError,
    HumanJudgments, PairStability, Rq1Comparison, Rq1Model, RunConfig, RunKind, RunReport,
};
use crate::confound::{filter_confounders, ConfounderReport};
use crate::dataset::{bootstrap, load_csv, split, Dataset};
use crate::infotheory::fit_discretizer;
use crate::objectives::{d2h_all, WinScale};
use crate::seed::{derive, stage};
use crate::stats::{
    cliffs_delta, compare_verdict, gini_stability, ks_statistic, ordinal_variance,
    variance_stability_test, PerfDistribution, Treatment, VARIANCE_TEST_METHOD,
};
use crate::tree::{build, Tree};

const MIN_ROWS: usize = 8;

fn treatment_code(t: Treatment) -> u64 {
    match t {
        Treatment::Correlation => 0,
        Treatment::Causal => 1,
    }
}

fn tree_seed(cfg: &RunConfig, run: usize, t: Treatment) -> u64 {
    derive(cfg.seed, &[stage::TREE, run as u64, treatment_code(t)])
}

fn load(cfg: &RunConfig) -> Result<Dataset, HarnessError> {
    cfg.validate()?;
    let d = load_csv(&cfg.dataset)?;
    if d.n_rows() < MIN_ROWS {
        return Err(HarnessError::Precondition(format!(
            "{} has {} rows; the protocols need at least {MIN_ROWS}",
            d.source(),
            d.n_rows()
        )));
    }
    Ok(d)
}

/// Applies the arm's confounder filter to `train` when enabled.
fn prepare(
    train: &Dataset,
    arm: &ArmConfig,
    cfg: &RunConfig,
) -> Result<(Dataset, Option<ConfounderReport>), HarnessError> {
    if !arm.confound_filter {
        return Ok((train.clone(), None));
    }
    let target = d2h_all(train).map_err(crate::tree::TreeError::from)?;
    let rows: Vec<usize> = (0..train.n_rows()).collect();
    let disc = fit_discretizer(train, &rows, &target, cfg.tree.x_bins, cfg.tree.y_bins)
        .map_err(crate::tree::TreeError::from)?;
    let (filtered, report) = filter_confounders(train, &disc, &target, cfg.filter);
    Ok((filtered, Some(report)))
}

struct Run {
    tree: Tree,
    predicted: f64,
    actual: f64,
    selected: usize,
}

fn assemble(
    arm: ArmConfig,
    dataset: &str,
    runs: Vec<Run>,
    seeds: Vec<u64>,
    confounders: Vec<ConfounderReport>,
    scale: &WinScale,
) -> ArmResult {
    let values: Vec<f64> = runs.iter().map(|r| r.actual).collect();
    ArmResult {
        arm,
        wins: values.iter().map(|&v| scale.win(v)).collect(),
        predicted: runs.iter().map(|r| r.predicted).collect(),
        selected_rows: runs.iter().map(|r| r.selected).collect(),
        distribution: PerfDistribution {
            treatment: arm.treatment,
            dataset: dataset.to_string(),
            values,
            seeds,
        },
        confounders,
        rendered: runs.iter().map(|r| r.tree.render()).collect(),
        root_leaf_trees: runs.iter().filter(|r| r.tree.is_root_leaf()).count(),
        trees: runs.into_iter().map(|r| r.tree).collect(),
    }
}

fn degenerate_notes(arms: &[ArmResult], notes: &mut Vec<String>) {
    for a in arms {
        if a.root_leaf_trees == a.trees.len() {
            notes.push(format!(
                "degenerate ensemble: every {} tree is a single leaf",
                a.arm.treatment
            ));
        } else if a.root_leaf_trees > 0 {
            notes.push(format!(
                "{} of {} {} trees are a single leaf",
                a.root_leaf_trees,
                a.trees.len(),
                a.arm.treatment
            ));
        }
    }
}

fn base_notes(cfg: &RunConfig) -> Vec<String> {
    vec![
        format!(
            "ensemble_mode: {}",
            match cfg.ensemble_mode {
                EnsembleMode::Bootstrap => "bootstrap",
                EnsembleMode::Seed => "seed",
            }
        ),
        "win: computed from actual d2h of the selected row, scaled over the full dataset".into(),
    ]
}

/// Stability protocol: one split, `R` trees per arm on resamples of the
/// training half, all scored on the same test half.
pub fn run_rq2(cfg: &RunConfig) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    let data = load(cfg)?;
    let scale = WinScale::fit(&d2h_all(&data).map_err(crate::tree::TreeError::from)?);
    let pair = split(
        &data,
        cfg.split_fraction,
        derive(cfg.seed, &[stage::SPLIT, 0]),
    )?;

    let mut arms = Vec::new();
    for arm in cfg.arms {
        let (train, report) = prepare(&pair.train, &arm, cfg)?;
        let tcfg = cfg.arm_tree(&arm);
        let runs = (0..cfg.repeats)
            .into_par_iter()
            .map(|i| {
                let sample = match cfg.ensemble_mode {
                    EnsembleMode::Bootstrap => {
                        bootstrap(&train, derive(cfg.seed, &[stage::BOOTSTRAP, i as u64]))
                    }
                    EnsembleMode::Seed => train.clone(),
                };
                let tree = build(&sample, &tcfg, tree_seed(cfg, i, arm.treatment))?;
                let sel = tree.optimize(&pair.test)?;
                Ok(Run {
                    tree,
                    predicted: sel.predicted,
                    actual: sel.actual,
                    selected: pair.test_rows[sel.row],
                })
            })
            .collect::<Result<Vec<_>, HarnessError>>()?;
        let seeds = (0..cfg.repeats)
            .map(|i| tree_seed(cfg, i, arm.treatment))
            .collect();
        arms.push(assemble(
            arm,
            data.source(),
            runs,
            seeds,
            report.into_iter().collect(),
            &scale,
        ));
    }

    let variance_test = variance_stability_test(
        &arms[0].distribution.values,
        &arms[1].distribution.values,
        derive(cfg.seed, &[stage::PERMUTATION]),
        cfg.permutations,
    )?;
    let mut notes = base_notes(cfg);
    notes.push(format!("variance_test: {VARIANCE_TEST_METHOD}"));
    degenerate_notes(&arms, &mut notes);
    Ok(RunReport {
        kind: RunKind::Rq2,
        dataset: DatasetInfo::of(&data),
        config: cfg.clone(),
        arms,
        variance_test: Some(variance_test),
        comparison: None,
        rq1: None,
        rq1_comparison: None,
        notes,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

/// Performance protocol: `R` fresh splits, one tree per arm on each.
pub fn run_rq3(cfg: &RunConfig) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    let data = load(cfg)?;
    let scale = WinScale::fit(&d2h_all(&data).map_err(crate::tree::TreeError::from)?);

    let per_split = (0..cfg.repeats)
        .into_par_iter()
        .map(|i| {
            let pair = split(
                &data,
                cfg.split_fraction,
                derive(cfg.seed, &[stage::SPLIT, i as u64]),
            )?;
            cfg.arms
                .iter()
                .map(|arm| {
                    let (train, report) = prepare(&pair.train, arm, cfg)?;
                    let tree = build(&train, &cfg.arm_tree(arm), tree_seed(cfg, i, arm.treatment))?;
                    let sel = tree.optimize(&pair.test)?;
                    Ok((
                        Run {
                            tree,
                            predicted: sel.predicted,
                            actual: sel.actual,
                            selected: pair.test_rows[sel.row],
                        },
                        report,
                    ))
                })
                .collect::<Result<Vec<_>, HarnessError>>()
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;

    let mut columns: Vec<Vec<(Run, Option<ConfounderReport>)>> = vec![Vec::new(), Vec::new()];
    for split_runs in per_split {
        for (k, r) in split_runs.into_iter().enumerate() {
            columns[k].push(r);
        }
    }
    let arms: Vec<ArmResult> = cfg
        .arms
        .iter()
        .zip(columns)
        .map(|(arm, col)| {
            let (runs, reports): (Vec<Run>, Vec<Option<ConfounderReport>>) =
                col.into_iter().unzip();
            let seeds = (0..cfg.repeats)
                .map(|i| tree_seed(cfg, i, arm.treatment))
                .collect();
            assemble(
                *arm,
                data.source(),
                runs,
                seeds,
                reports.into_iter().flatten().collect(),
                &scale,
            )
        })
        .collect();

    let comparison = compare_verdict(
        &arms[0].distribution.values,
        &arms[1].distribution.values,
        cfg.alpha,
        &cfg.delta_bands,
    )?;
    let mut notes = base_notes(cfg);
    notes.push("verdict: first = arms[0], second = arms[1]; lower d2h is better".into());
    degenerate_notes(&arms, &mut notes);
    Ok(RunReport {
        kind: RunKind::Rq3,
        dataset: DatasetInfo::of(&data),
        config: cfg.clone(),
        arms,
        variance_test: None,
        comparison: Some(comparison),
        rq1: None,
        rq1_comparison: None,
        notes,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

fn impact_level(tree: &Tree, feature: &str, cfg: &RunConfig) -> u8 {
    let splits = tree.splits();
    if !splits.iter().any(|(f, _)| *f == feature) {
        0
    } else if splits
        .iter()
        .any(|(f, d)| *f == feature && *d <= cfg.top_split_depth)
    {
        2
    } else {
        1
    }
}

/// Model side of the human-vs-model stability study: a bootstrap ensemble
/// of first-arm trees over the whole dataset, each feature's ordinal impact
/// per tree, and the Gini impurity of those levels.
pub fn run_rq1_model(cfg: &RunConfig) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    cfg.validate()?;
    let data = load_csv(&cfg.dataset)?;
    let arm = cfg.arms[0];
    let tcfg = cfg.arm_tree(&arm);
    let scale = WinScale::fit(&d2h_all(&data).map_err(crate::tree::TreeError::from)?);
    let runs = (0..cfg.repeats)
        .into_par_iter()
        .map(|i| {
            let sample = match cfg.ensemble_mode {
                EnsembleMode::Bootstrap => {
                    bootstrap(&data, derive(cfg.seed, &[stage::BOOTSTRAP, i as u64]))
                }
                EnsembleMode::Seed => data.clone(),
            };
            let tree = build(&sample, &tcfg, tree_seed(cfg, i, arm.treatment))?;
            let sel = tree.optimize(&data)?;
            Ok(Run {
                tree,
                predicted: sel.predicted,
                actual: sel.actual,
                selected: sel.row,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let seeds = (0..cfg.repeats)
        .map(|i| tree_seed(cfg, i, arm.treatment))
        .collect();
    let result = assemble(arm, data.source(), runs, seeds, Vec::new(), &scale);

    let mut names: Vec<String> = data
        .independent_indices()
        .into_iter()
        .map(|c| data.columns()[c].name.clone())
        .collect();
    names.sort();
    let features: Vec<FeatureStability> = names
        .iter()
        .map(|f| {
            let levels: Vec<u8> = result
                .trees
                .iter()
                .map(|t| impact_level(t, f, cfg))
                .collect();
            Ok(FeatureStability {
                feature: f.clone(),
                objective: "d2h".into(),
                impact: ensemble_impact(&result.trees, f, cfg),
                gini: gini_stability(&levels)?,
                ordinal_variance: ordinal_variance(&levels),
                levels,
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let gini_distribution = features.iter().map(|f| f.gini).collect();

    let mut notes = base_notes(cfg);
    notes.push(format!(
        "impact levels: 0 = never split on, 2 = split at depth <= {}, 1 = otherwise; ensemble level 2 needs top fraction >= {}",
        cfg.top_split_depth, cfg.certain_top_fraction
    ));
    notes
        .push("stability: Gini impurity of per-tree levels; ordinal variance also reported".into());
    Ok(RunReport {
        kind: RunKind::Rq1,
        dataset: DatasetInfo::of(&data),
        config: cfg.clone(),
        arms: vec![result],
        variance_test: None,
        comparison: None,
        rq1: Some(Rq1Model {
            features,
            gini_distribution,
        }),
        rq1_comparison: None,
        notes,
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}

fn ensemble_impact(trees: &[Tree], feature: &str, cfg: &RunConfig) -> crate::tree::FeatureImpact {
    crate::tree::feature_impact_with(
        trees,
        feature,
        cfg.top_split_depth,
        cfg.certain_top_fraction,
    )
}

/// Adds the human-vs-model comparison to an RQ1 model report. Human
/// judgments are matched to the report's dataset id (case-insensitively)
/// and to its features; each `(feature, objective)` pair contributes one
/// Gini impurity.
pub fn compare_rq1(human: &HumanJudgments, model: &RunReport) -> Result<RunReport, HarnessError> {
    let rq1 = model
        .rq1
        .as_ref()
        .ok_or_else(|| HarnessError::Comparison("report carries no RQ1 model results".into()))?;
    let id = model.dataset.id.to_lowercase();
    let model_features: BTreeMap<&str, f64> = rq1
        .features
        .iter()
        .map(|f| (f.feature.as_str(), f.gini))
        .collect();

    let mut pairs: BTreeMap<(String, String), Vec<u8>> = BTreeMap::new();
    let mut experts = std::collections::BTreeSet::new();
    for j in human
        .judgments
        .iter()
        .filter(|j| j.dataset.to_lowercase() == id)
    {
        experts.insert(j.source.clone());
        if model_features.contains_key(j.feature.as_str()) {
            pairs
                .entry((j.feature.clone(), j.objective.clone()))
                .or_default()
                .push(j.level);
        }
    }
    if pairs.is_empty() {
        return Err(HarnessError::Comparison(format!(
            "no human judgments on features of {}",
            model.dataset.id
        )));
    }
    let human_pairs: Vec<PairStability> = pairs
        .into_iter()
        .map(|((feature, objective), levels)| {
            Ok(PairStability {
                responses: levels.len(),
                gini: gini_stability(&levels)?,
                ordinal_variance: ordinal_variance(&levels),
                feature,
                objective,
            })
        })
        .collect::<Result<_, HarnessError>>()?;
    let overlap: std::collections::BTreeSet<&str> =
        human_pairs.iter().map(|p| p.feature.as_str()).collect();
    let human_gini: Vec<f64> = human_pairs.iter().map(|p| p.gini).collect();
    let model_gini: Vec<f64> = overlap.iter().map(|f| model_features[f]).collect();

    let mut report = model.clone();
    report.rq1_comparison = Some(Rq1Comparison {
        ks_d: ks_statistic(&human_gini, &model_gini)?,
        cliffs_delta: cliffs_delta(&human_gini, &model_gini)?,
        human: human_pairs,
        human_gini,
        model_gini,
        experts: experts.len(),
        below_min_responses: human
            .below_min_responses
            .iter()
            .any(|d| d.to_lowercase() == id),
        method: "ks+cliffs-delta on per-pair Gini impurity".into(),
    });
    Ok(report)
}

/// Seed-only ensemble on one dataset: `R` trees, one per derived seed, for
/// the instability demonstration.
pub fn run_seed_ensemble(cfg: &RunConfig, arm: &ArmConfig) -> Result<RunReport, HarnessError> {
    let start = Instant::now();
    let data = load_csv(&cfg.dataset)?;
    let (train, report) = prepare(&data, arm, cfg)?;
    let tcfg = cfg.arm_tree(arm);
    let scale = WinScale::fit(&d2h_all(&data).map_err(crate::tree::TreeError::from)?);
    let seeds: Vec<u64> = (0..cfg.repeats)
        .map(|i| derive(cfg.seed, &[stage::ENSEMBLE, i as u64]))
        .collect();
    let runs = seeds
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let sample = match cfg.ensemble_mode {
                EnsembleMode::Bootstrap => {
                    bootstrap(&train, derive(cfg.seed, &[stage::BOOTSTRAP, i as u64]))
                }
                EnsembleMode::Seed => train.clone(),
            };
            let tree = build(&sample, &tcfg, s)?;
            let sel = tree.optimize(&data)?;
            Ok(Run {
                tree,
                predicted: sel.predicted,
                actual: sel.actual,
                selected: sel.row,
            })
        })
        .collect::<Result<Vec<_>, HarnessError>>()?;
    let result = assemble(
        *arm,
        data.source(),
        runs,
        seeds,
        report.into_iter().collect(),
        &scale,
    );
    Ok(RunReport {
        kind: RunKind::Tree,
        dataset: DatasetInfo::of(&data),
        config: cfg.clone(),
        arms: vec![result],
        variance_test: None,
        comparison: None,
        rq1: None,
        rq1_comparison: None,
        notes: base_notes(cfg),
        wall_clock_ms: start.elapsed().as_millis() as u64,
    })
}
