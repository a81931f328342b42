//! Equal-frequency discretization and plug-in information estimators.
//!
//! All entropies are in bits. Estimators work on dense contingency tables so
//! that summation order, and therefore every floating-point result, is a
//! function of the counts alone.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::{Cell, Dataset, Kind};

#[derive(Debug, Error, PartialEq)]
pub enum EstimationError {
    #[error("empty histogram")]
    Empty,
    #[error("expected a {expected}-way table, got {got}-way")]
    Arity { expected: usize, got: usize },
    #[error("bin count must be at least 2, got {0}")]
    TooFewBins(usize),
}

/// Interior cut points of one numeric variable. A value `v` falls in bin
/// `#{e in edges : e < v}`, so bin 0 holds `v <= edges[0]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinEdges {
    pub edges: Vec<f64>,
}

impl BinEdges {
    /// Equal-frequency edges over the finite values in `values`. Duplicate
    /// edges are merged and edges at the maximum are dropped, so every bin
    /// is populated on the fitting sample and fewer than `bins` bins may
    /// result.
    pub fn fit(values: &[f64], bins: usize) -> BinEdges {
        let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
        if sorted.is_empty() {
            return BinEdges { edges: Vec::new() };
        }
        sorted.sort_by(f64::total_cmp);
        let n = sorted.len();
        let max = sorted[n - 1];
        let mut edges: Vec<f64> = Vec::with_capacity(bins.saturating_sub(1));
        for k in 1..bins {
            let pos = (k * n) / bins;
            if pos == 0 {
                continue;
            }
            let e = sorted[pos - 1];
            if e < max && edges.last().is_none_or(|&last| e > last) {
                edges.push(e);
            }
        }
        BinEdges { edges }
    }

    pub fn n_bins(&self) -> usize {
        self.edges.len() + 1
    }

    pub fn bin(&self, v: f64) -> usize {
        self.edges.partition_point(|&e| e < v)
    }
}

/// How one column maps onto discrete codes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ColumnBins {
    Numeric(BinEdges),
    /// Sorted distinct symbols; the code of a symbol is its position.
    Symbolic {
        symbols: Vec<String>,
    },
    /// Not discretized (objective or ignored columns).
    Skip,
}

impl ColumnBins {
    pub fn n_bins(&self) -> usize {
        match self {
            ColumnBins::Numeric(e) => e.n_bins(),
            ColumnBins::Symbolic { symbols } => symbols.len().max(1),
            ColumnBins::Skip => 0,
        }
    }

    /// Code of a cell; `None` for missing cells or unseen symbols.
    pub fn code(&self, cell: &Cell) -> Option<usize> {
        match (self, cell) {
            (ColumnBins::Numeric(e), Cell::Num(v)) => Some(e.bin(*v)),
            (ColumnBins::Symbolic { symbols }, Cell::Sym(s)) => {
                symbols.binary_search_by(|x| x.as_str().cmp(s)).ok()
            }
            _ => None,
        }
    }
}

/// Per-column bins for the independent features plus bins for the d2h
/// target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretizer {
    pub x_bins: usize,
    pub y_bins: usize,
    pub columns: Vec<ColumnBins>,
    pub target: BinEdges,
}

impl Discretizer {
    pub fn code(&self, col: usize, cell: &Cell) -> Option<usize> {
        self.columns[col].code(cell)
    }

    pub fn target_code(&self, d2h: f64) -> usize {
        self.target.bin(d2h)
    }
}

/// Fits equal-frequency bins for every independent column of `d` (over the
/// rows at `rows`) and for the supplied target values.
pub fn fit_discretizer(
    d: &Dataset,
    rows: &[usize],
    target: &[f64],
    x_bins: usize,
    y_bins: usize,
) -> Result<Discretizer, EstimationError> {
    if x_bins < 2 {
        return Err(EstimationError::TooFewBins(x_bins));
    }
    if y_bins < 2 {
        return Err(EstimationError::TooFewBins(y_bins));
    }
    let columns = d
        .columns()
        .iter()
        .enumerate()
        .map(|(c, spec)| {
            if !spec.is_independent() {
                return ColumnBins::Skip;
            }
            match spec.kind {
                Kind::Numeric => {
                    let values: Vec<f64> =
                        rows.iter().filter_map(|&r| d.row(r)[c].as_num()).collect();
                    if values.is_empty() {
                        log::info!("column {} is entirely missing; using one bin", spec.name);
                    }
                    ColumnBins::Numeric(BinEdges::fit(&values, x_bins))
                }
                Kind::Symbolic => {
                    let mut symbols: Vec<String> = rows
                        .iter()
                        .filter_map(|&r| d.row(r)[c].as_sym().map(str::to_string))
                        .collect();
                    symbols.sort();
                    symbols.dedup();
                    ColumnBins::Symbolic { symbols }
                }
            }
        })
        .collect();
    let target_values: Vec<f64> = rows.iter().map(|&r| target[r]).collect();
    Ok(Discretizer {
        x_bins,
        y_bins,
        columns,
        target: BinEdges::fit(&target_values, y_bins),
    })
}

/// Dense contingency table over one to three discrete variables.
#[derive(Clone, Debug, PartialEq)]
pub struct JointCounts {
    dims: Vec<usize>,
    counts: Vec<usize>,
    total: usize,
}

impl JointCounts {
    pub fn new(dims: &[usize]) -> JointCounts {
        assert!((1..=3).contains(&dims.len()), "1 to 3 variables");
        JointCounts {
            dims: dims.to_vec(),
            counts: vec![0; dims.iter().product()],
            total: 0,
        }
    }

    /// Builds a 2-way table from a row-major `[[x0y0, x0y1, ..], ..]` grid.
    pub fn from_grid(grid: &[Vec<usize>]) -> JointCounts {
        let kx = grid.len();
        let ky = grid.first().map_or(0, Vec::len);
        let mut j = JointCounts::new(&[kx, ky]);
        for (x, row) in grid.iter().enumerate() {
            for (y, &c) in row.iter().enumerate() {
                j.add_n(&[x, y], c);
            }
        }
        j
    }

    /// Tallies paired code sequences; pairs containing `None` are skipped.
    pub fn from_codes(dims: &[usize], codes: &[&[Option<usize>]]) -> JointCounts {
        let mut j = JointCounts::new(dims);
        let n = codes[0].len();
        let mut key = vec![0; dims.len()];
        'rows: for r in 0..n {
            for (k, seq) in codes.iter().enumerate() {
                match seq[r] {
                    Some(c) => key[k] = c,
                    None => continue 'rows,
                }
            }
            j.add(&key);
        }
        j
    }

    fn offset(&self, key: &[usize]) -> usize {
        key.iter().zip(&self.dims).fold(0, |acc, (&k, &d)| {
            debug_assert!(k < d);
            acc * d + k
        })
    }

    pub fn add(&mut self, key: &[usize]) {
        self.add_n(key, 1);
    }

    pub fn add_n(&mut self, key: &[usize], n: usize) {
        let o = self.offset(key);
        self.counts[o] += n;
        self.total += n;
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn get(&self, key: &[usize]) -> usize {
        self.counts[self.offset(key)]
    }

    /// Marginal histogram of variable `axis`.
    pub fn marginal(&self, axis: usize) -> Vec<usize> {
        let mut out = vec![0; self.dims[axis]];
        let stride: usize = self.dims[axis + 1..].iter().product();
        for (i, &c) in self.counts.iter().enumerate() {
            out[(i / stride) % self.dims[axis]] += c;
        }
        out
    }

    /// H(last axis | all other axes). For a 2-way `(X, Y)` table this is
    /// `H(Y|X)`; for `(X, Z, Y)` it is `H(Y|X,Z)`.
    fn cond_entropy_last(&self) -> f64 {
        let ky = *self.dims.last().unwrap();
        let n = self.total as f64;
        self.counts
            .chunks(ky)
            .filter_map(|cell| {
                let nx: usize = cell.iter().sum();
                (nx > 0).then(|| nx as f64 / n * entropy_unchecked(cell))
            })
            .sum()
    }

    fn project(&self, keep: &[usize]) -> JointCounts {
        let dims: Vec<usize> = keep.iter().map(|&a| self.dims[a]).collect();
        let mut out = JointCounts::new(&dims);
        let mut key = vec![0; self.dims.len()];
        for (i, &c) in self.counts.iter().enumerate() {
            let mut rest = i;
            for a in (0..self.dims.len()).rev() {
                key[a] = rest % self.dims[a];
                rest /= self.dims[a];
            }
            if c > 0 {
                let sub: Vec<usize> = keep.iter().map(|&a| key[a]).collect();
                out.add_n(&sub, c);
            }
        }
        out
    }
}

fn entropy_unchecked(counts: &[usize]) -> f64 {
    let n: usize = counts.iter().sum();
    let n = n as f64;
    -counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            p * p.log2()
        })
        .sum::<f64>()
}

/// Shannon entropy (bits) of a histogram.
pub fn entropy(counts: &[usize]) -> Result<f64, EstimationError> {
    if counts.iter().sum::<usize>() == 0 {
        return Err(EstimationError::Empty);
    }
    Ok(entropy_unchecked(counts).max(0.0))
}

fn require(j: &JointCounts, ways: usize) -> Result<(), EstimationError> {
    if j.dims.len() != ways {
        return Err(EstimationError::Arity {
            expected: ways,
            got: j.dims.len(),
        });
    }
    if j.total == 0 {
        return Err(EstimationError::Empty);
    }
    Ok(())
}

/// `H(Y|X)` for a table over `(X, Y)`.
pub fn cond_entropy(j: &JointCounts) -> Result<f64, EstimationError> {
    require(j, 2)?;
    Ok(j.cond_entropy_last().max(0.0))
}

/// `I(X;Y) = H(Y) - H(Y|X)` for a table over `(X, Y)`, clamped at 0.
pub fn mutual_info(j: &JointCounts) -> Result<f64, EstimationError> {
    require(j, 2)?;
    let hy = entropy_unchecked(&j.marginal(1));
    Ok((hy - j.cond_entropy_last()).max(0.0))
}

/// `I(X;Y|Z) = H(Y|Z) - H(Y|X,Z)` for a table over `(X, Y, Z)`, clamped at 0.
pub fn cond_mutual_info(j: &JointCounts) -> Result<f64, EstimationError> {
    require(j, 3)?;
    let zy = j.project(&[2, 1]);
    let xzy = j.project(&[0, 2, 1]);
    Ok((zy.cond_entropy_last() - xzy.cond_entropy_last()).max(0.0))
}

/// `1 - sum p_k^2`.
pub fn gini_impurity(counts: &[usize]) -> Result<f64, EstimationError> {
    let n: usize = counts.iter().sum();
    if n == 0 {
        return Err(EstimationError::Empty);
    }
    let n = n as f64;
    Ok(1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>())
}
