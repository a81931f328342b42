use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{HarnessError, RunKind, RunReport};
use crate::stats::Verdict;

/// Dataset id (file stem, case-insensitive) to category.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub categories: BTreeMap<String, String>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Manifest, HarnessError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        match lines.next() {
            Some((_, h)) if h.split(',').map(str::trim).eq(["dataset", "category"]) => {}
            _ => {
                return Err(HarnessError::Ingest(vec![(
                    1,
                    "header must be `dataset,category`".into(),
                )]))
            }
        }
        let mut categories = BTreeMap::new();
        let mut bad = Vec::new();
        for (i, line) in lines {
            match line.split_once(',') {
                Some((d, c)) if !d.trim().is_empty() && !c.trim().is_empty() => {
                    let id = d.trim().trim_end_matches(".csv").to_lowercase();
                    categories.insert(id, c.trim().to_string());
                }
                _ => bad.push((i + 1, "expected `dataset,category`".to_string())),
            }
        }
        if bad.is_empty() {
            Ok(Manifest { categories })
        } else {
            Err(HarnessError::Ingest(bad))
        }
    }

    pub fn category(&self, id: &str) -> &str {
        self.categories
            .get(&id.to_lowercase())
            .map(String::as_str)
            .unwrap_or("unknown")
    }
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<Manifest, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    Manifest::parse(&text)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub dataset: String,
    pub kind: RunKind,
    pub category: String,
    pub x: usize,
    pub y: usize,
    pub rows: usize,
    /// `first-better`, `second-better` or `indistinguishable`. For RQ2 the
    /// better arm is the one with lower variance when `p < alpha`.
    pub outcome: Verdict,
    /// KS D for RQ3, permutation p-value for RQ2.
    pub statistic: f64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub first_better: usize,
    pub second_better: usize,
    pub indistinguishable: usize,
}

impl Counts {
    fn add(&mut self, v: Verdict) {
        match v {
            Verdict::FirstBetter => self.first_better += 1,
            Verdict::SecondBetter => self.second_better += 1,
            Verdict::Indistinguishable => self.indistinguishable += 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SummaryGroup {
    pub kind: RunKind,
    /// `overall`, `category`, `x` or `y`.
    pub by: String,
    pub key: String,
    pub counts: Counts,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub rows: Vec<SummaryRow>,
    pub groups: Vec<SummaryGroup>,
}

pub fn x_bucket(x: usize) -> &'static str {
    match x {
        0..=9 => "1-9",
        10..=29 => "10-29",
        _ => "30+",
    }
}

pub fn y_bucket(y: usize) -> &'static str {
    match y {
        0 | 1 => "1",
        2 | 3 => "2-3",
        _ => "4+",
    }
}

fn outcome(r: &RunReport) -> Option<(Verdict, f64)> {
    match r.kind {
        RunKind::Rq3 => r.comparison.as_ref().map(|c| (c.verdict, c.ks_d)),
        RunKind::Rq2 => r.variance_test.as_ref().map(|t| {
            let v = if t.p_value >= r.config.alpha || t.var_first == t.var_second {
                Verdict::Indistinguishable
            } else if t.var_first < t.var_second {
                Verdict::FirstBetter
            } else {
                Verdict::SecondBetter
            };
            (v, t.p_value)
        }),
        RunKind::Rq1 | RunKind::Tree => None,
    }
}

/// Per-dataset rows and outcome counts. RQ1 and single-ensemble reports
/// carry no treatment comparison and are skipped.
pub fn summarize(reports: &[RunReport], manifest: &Manifest) -> Result<Summary, HarnessError> {
    if reports.is_empty() {
        return Err(HarnessError::Precondition("nothing to summarize".into()));
    }
    let mut rows: Vec<SummaryRow> = reports
        .iter()
        .filter_map(|r| {
            let (outcome, statistic) = outcome(r)?;
            Some(SummaryRow {
                dataset: r.dataset.id.clone(),
                kind: r.kind,
                category: manifest.category(&r.dataset.id).to_string(),
                x: r.dataset.x,
                y: r.dataset.y,
                rows: r.dataset.rows,
                outcome,
                statistic,
            })
        })
        .collect();
    rows.sort_by(|a, b| (a.kind.id(), &a.dataset).cmp(&(b.kind.id(), &b.dataset)));

    let mut acc: BTreeMap<(&str, &str, String), Counts> = BTreeMap::new();
    for r in &rows {
        for (by, key) in [
            ("overall", "all".to_string()),
            ("category", r.category.clone()),
            ("x", x_bucket(r.x).to_string()),
            ("y", y_bucket(r.y).to_string()),
        ] {
            acc.entry((r.kind.id(), by, key))
                .or_default()
                .add(r.outcome);
        }
    }
    let kind_of = |id: &str| match id {
        "rq2" => RunKind::Rq2,
        _ => RunKind::Rq3,
    };
    let groups = acc
        .into_iter()
        .map(|((kind, by, key), counts)| SummaryGroup {
            kind: kind_of(kind),
            by: by.to_string(),
            key,
            counts,
        })
        .collect();
    Ok(Summary { rows, groups })
}

impl Summary {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,dataset,category,x,y,rows,outcome,statistic\n");
        for r in &self.rows {
            let outcome = serde_json::to_value(r.outcome)
                .ok()
                .and_then(|v| v.as_str().map(String::from))
                .unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.kind.id(),
                r.dataset,
                r.category,
                r.x,
                r.y,
                r.rows,
                outcome,
                r.statistic
            );
        }
        out
    }
}
