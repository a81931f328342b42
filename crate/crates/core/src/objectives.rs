//! Distance-to-heaven and win scores.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Dataset, Direction};

#[derive(Debug, Error, PartialEq)]
pub enum ScoreError {
    #[error("row {row}: objective {column} is missing")]
    MissingObjective { row: usize, column: String },
}

/// Ideal normalized value per objective: 0 for minimize, 1 for maximize.
#[derive(Clone, Debug, PartialEq)]
pub struct HeavenPoint {
    pub columns: Vec<usize>,
    pub ideal: Vec<f64>,
}

impl HeavenPoint {
    pub fn of(d: &Dataset) -> HeavenPoint {
        let columns = d.objective_indices();
        let ideal = columns
            .iter()
            .map(|&c| match d.columns()[c].direction {
                Direction::Maximize => 1.0,
                _ => 0.0,
            })
            .collect();
        HeavenPoint { columns, ideal }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScoredRow {
    pub row: usize,
    pub d2h: f64,
    pub win: f64,
}

/// Root-mean-square distance of a row's min-max normalized objectives from
/// the heaven point. Lies in `[0, 1]`; objectives with `hi == lo` add 0.
pub fn d2h(d: &Dataset, row: usize) -> Result<f64, ScoreError> {
    d2h_with(d, &HeavenPoint::of(d), row)
}

pub fn d2h_with(d: &Dataset, heaven: &HeavenPoint, row: usize) -> Result<f64, ScoreError> {
    let cells = d.row(row);
    let mut sum = 0.0;
    for (&c, &ideal) in heaven.columns.iter().zip(&heaven.ideal) {
        let spec = &d.columns()[c];
        let y = cells[c]
            .as_num()
            .ok_or_else(|| ScoreError::MissingObjective {
                row,
                column: spec.name.clone(),
            })?;
        let (lo, hi) = spec.bounds.unwrap_or((y, y));
        if hi > lo {
            let norm = ((y - lo) / (hi - lo)).clamp(0.0, 1.0);
            sum += (norm - ideal).powi(2);
        }
    }
    Ok((sum / heaven.columns.len() as f64).sqrt())
}

/// d2h of every row, in row order.
pub fn d2h_all(d: &Dataset) -> Result<Vec<f64>, ScoreError> {
    let heaven = HeavenPoint::of(d);
    (0..d.n_rows()).map(|r| d2h_with(d, &heaven, r)).collect()
}

/// Maps d2h onto 0..100 anchored at the dataset's best row (100) and its
/// mean d2h (0), clamped.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WinScale {
    pub d2h_min: f64,
    pub d2h_mean: f64,
}

impl WinScale {
    pub fn new(d2h_min: f64, d2h_mean: f64) -> WinScale {
        WinScale { d2h_min, d2h_mean }
    }

    pub fn fit(d2hs: &[f64]) -> WinScale {
        let min = d2hs.iter().copied().fold(f64::INFINITY, f64::min);
        let mean = d2hs.iter().sum::<f64>() / d2hs.len() as f64;
        WinScale::new(min, mean)
    }

    pub fn win(&self, d2h: f64) -> f64 {
        let span = self.d2h_mean - self.d2h_min;
        if span <= 0.0 {
            return 100.0;
        }
        (100.0 * (1.0 - (d2h - self.d2h_min) / span)).clamp(0.0, 100.0)
    }
}

pub fn win(d: &Dataset, row: usize) -> Result<f64, ScoreError> {
    let all = d2h_all(d)?;
    Ok(WinScale::fit(&all).win(all[row]))
}

pub fn score_all(d: &Dataset) -> Result<Vec<ScoredRow>, ScoreError> {
    let all = d2h_all(d)?;
    let scale = WinScale::fit(&all);
    Ok(all
        .iter()
        .enumerate()
        .map(|(row, &d2h)| ScoredRow {
            row,
            d2h,
            win: scale.win(d2h),
        })
        .collect())
}
