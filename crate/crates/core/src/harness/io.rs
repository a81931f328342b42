use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{HarnessError, RunKind, RunReport};

fn io_err(path: &Path, e: impl std::fmt::Display) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

/// Flat CSV extract: per-run values for rq2/rq3/tree reports, per-feature
/// Gini for rq1.
fn extract_csv(r: &RunReport) -> String {
    let mut out = String::new();
    if let Some(rq1) = &r.rq1 {
        out.push_str("feature,objective,level,gini,ordinal_variance\n");
        for f in &rq1.features {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                f.feature, f.objective, f.impact.level, f.gini, f.ordinal_variance
            );
        }
        return out;
    }
    out.push_str("treatment,run,seed,actual_d2h,predicted_d2h,win,selected_row\n");
    for a in &r.arms {
        let d = &a.distribution;
        for i in 0..d.values.len() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                a.arm.treatment,
                i,
                d.seeds[i],
                d.values[i],
                a.predicted[i],
                a.wins[i],
                a.selected_rows[i]
            );
        }
    }
    out
}

/// Writes `<dataset>-<kind>.json` and `<dataset>-<kind>.csv` into `dir`,
/// returning the JSON path.
pub fn write_report(report: &RunReport, dir: impl AsRef<Path>) -> Result<PathBuf, HarnessError> {
    let dir = dir.as_ref();
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
    let stem = format!("{}-{}", report.dataset.id, report.kind.id());
    let json = dir.join(format!("{stem}.json"));
    let text = serde_json::to_string_pretty(report).map_err(|e| io_err(&json, e))?;
    std::fs::write(&json, text).map_err(|e| io_err(&json, e))?;
    let csv = dir.join(format!("{stem}.csv"));
    std::fs::write(&csv, extract_csv(report)).map_err(|e| io_err(&csv, e))?;
    Ok(json)
}

pub fn load_report(path: impl AsRef<Path>) -> Result<RunReport, HarnessError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    serde_json::from_str(&text).map_err(|e| io_err(path, e))
}

/// Every `*.json` report in `dir`, ordered by file name. Single-tree
/// ensemble reports are skipped.
pub fn load_reports(dir: impl AsRef<Path>) -> Result<Vec<RunReport>, HarnessError> {
    let dir = dir.as_ref();
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| io_err(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let r = load_report(&p)?;
        if r.kind != RunKind::Tree {
            out.push(r);
        }
    }
    Ok(out)
}
