use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;

/// Complete expert responses a dataset needs before its human stability
/// figures are taken at face value.
pub const MIN_RESPONSES: usize = 10;

const HEADER: [&str; 5] = ["dataset", "expert_id", "feature", "objective", "level"];

/// One impact judgment on the three-point scale (0 none, 1 mild, 2 certain).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrdinalJudgment {
    pub source: String,
    pub dataset: String,
    pub feature: String,
    pub objective: String,
    pub level: u8,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HumanJudgments {
    pub judgments: Vec<OrdinalJudgment>,
    /// Distinct experts per dataset.
    pub experts: BTreeMap<String, usize>,
    /// Datasets with fewer than [`MIN_RESPONSES`] experts. They are kept.
    pub below_min_responses: Vec<String>,
}

impl HumanJudgments {
    pub fn parse(text: &str) -> Result<HumanJudgments, HarnessError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let Some((_, header)) = lines.next() else {
            return Err(HarnessError::Ingest(vec![(1, "empty file".into())]));
        };
        let cols: Vec<&str> = header.split(',').map(str::trim).collect();
        if cols != HEADER {
            return Err(HarnessError::Ingest(vec![(
                1,
                format!("header must be `{}`", HEADER.join(",")),
            )]));
        }

        let mut judgments = Vec::new();
        let mut bad = Vec::new();
        for (i, line) in lines {
            let lineno = i + 1;
            let f: Vec<&str> = line.split(',').map(str::trim).collect();
            if f.len() != HEADER.len() {
                bad.push((
                    lineno,
                    format!("expected {} fields, found {}", HEADER.len(), f.len()),
                ));
                continue;
            }
            if let Some(k) = f[..4].iter().position(|s| s.is_empty()) {
                bad.push((lineno, format!("empty {}", HEADER[k])));
                continue;
            }
            match f[4].parse::<u8>() {
                Ok(level) if level <= 2 => judgments.push(OrdinalJudgment {
                    dataset: f[0].to_string(),
                    source: f[1].to_string(),
                    feature: f[2].to_string(),
                    objective: f[3].to_string(),
                    level,
                }),
                _ => bad.push((lineno, format!("level `{}` is not 0, 1 or 2", f[4]))),
            }
        }
        if !bad.is_empty() {
            return Err(HarnessError::Ingest(bad));
        }

        let mut who: BTreeMap<String, BTreeSet<&str>> = BTreeMap::new();
        for j in &judgments {
            who.entry(j.dataset.clone()).or_default().insert(&j.source);
        }
        let experts: BTreeMap<String, usize> = who.into_iter().map(|(d, s)| (d, s.len())).collect();
        let below_min_responses: Vec<String> = experts
            .iter()
            .filter(|(_, &n)| n < MIN_RESPONSES)
            .map(|(d, _)| d.clone())
            .collect();
        for d in &below_min_responses {
            log::warn!(
                "{d}: only {} expert responses (want {MIN_RESPONSES})",
                experts[d]
            );
        }
        Ok(HumanJudgments {
            judgments,
            experts,
            below_min_responses,
        })
    }
}

pub fn ingest_human(path: impl AsRef<Path>) -> Result<HumanJudgments, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| HarnessError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    })?;
    HumanJudgments::parse(&text)
}
