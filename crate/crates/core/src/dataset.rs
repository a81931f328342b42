//! Typed tabular data loaded from MOOT-style CSV files.
//!
//! Column roles come from the header names:
//!
//! * first character uppercase: numeric, otherwise symbolic
//! * trailing `+` / `-`: objective to maximize / minimize
//! * trailing `X`: ignored
//! * anything else: independent feature
//!
//! The literal `?` is a missing value. A [`Dataset`] is immutable; every
//! operation that changes rows or columns returns a new value.

use std::fmt;
use std::fs;
use std::path::Path;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("missing header row")]
    MissingHeader,
    #[error("line {line} (data row {row}): {msg}")]
    Format {
        line: usize,
        row: usize,
        msg: String,
    },
    #[error("no data rows")]
    NoDataRows,
    #[error("schema error: {0}")]
    Schema(String),
    #[error("dataset too small: {n} rows, need at least {min}")]
    TooSmall { n: usize, min: usize },
    #[error("split fraction must lie strictly between 0 and 1, got {0}")]
    BadFraction(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Numeric,
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Independent,
    Objective,
    Ignored,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub name: String,
    pub kind: Kind,
    pub role: Role,
    pub direction: Direction,
    /// Observed `(lo, hi)` over non-missing cells; `None` for symbolic or
    /// all-missing columns.
    pub bounds: Option<(f64, f64)>,
}

impl ColumnSpec {
    /// Infers kind, role and direction from a MOOT header name.
    pub fn from_header(name: &str) -> Result<ColumnSpec, DatasetError> {
        let first = name
            .chars()
            .next()
            .ok_or_else(|| DatasetError::Schema("empty column name".into()))?;
        let kind = if first.is_uppercase() {
            Kind::Numeric
        } else {
            Kind::Symbolic
        };
        let (role, direction) = if name.ends_with('X') {
            (Role::Ignored, Direction::None)
        } else if name.ends_with('+') {
            (Role::Objective, Direction::Maximize)
        } else if name.ends_with('-') {
            (Role::Objective, Direction::Minimize)
        } else {
            (Role::Independent, Direction::None)
        };
        ColumnSpec::new(name, kind, role, direction)
    }

    pub fn new(
        name: &str,
        kind: Kind,
        role: Role,
        direction: Direction,
    ) -> Result<ColumnSpec, DatasetError> {
        if (role == Role::Objective) != (direction != Direction::None) {
            return Err(DatasetError::Schema(format!(
                "column {name}: direction must be set exactly for objectives"
            )));
        }
        if role == Role::Objective && kind != Kind::Numeric {
            return Err(DatasetError::Schema(format!(
                "objective column {name} must be numeric (uppercase first letter)"
            )));
        }
        Ok(ColumnSpec {
            name: name.to_string(),
            kind,
            role,
            direction,
            bounds: None,
        })
    }

    pub fn lo(&self) -> Option<f64> {
        self.bounds.map(|b| b.0)
    }

    pub fn hi(&self) -> Option<f64> {
        self.bounds.map(|b| b.1)
    }

    pub fn is_objective(&self) -> bool {
        self.role == Role::Objective
    }

    pub fn is_independent(&self) -> bool {
        self.role == Role::Independent
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Sym(String),
    Missing,
}

impl Cell {
    pub fn as_num(&self) -> Option<f64> {
        match self {
            Cell::Num(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_sym(&self) -> Option<&str> {
        match self {
            Cell::Sym(s) => Some(s),
            _ => None,
        }
    }

    pub fn is_missing(&self) -> bool {
        matches!(self, Cell::Missing)
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Num(v) => write!(f, "{v}"),
            Cell::Sym(s) => f.write_str(s),
            Cell::Missing => f.write_str("?"),
        }
    }
}

pub type Row = Arc<[Cell]>;

#[derive(Clone, Debug)]
pub struct Dataset {
    columns: Arc<[ColumnSpec]>,
    rows: Vec<Row>,
    source: String,
}

impl Dataset {
    /// Builds a dataset from parts, validating shape and cell kinds and
    /// computing each numeric column's bounds from `rows`.
    pub fn new(
        source: &str,
        mut columns: Vec<ColumnSpec>,
        rows: Vec<Vec<Cell>>,
    ) -> Result<Dataset, DatasetError> {
        check_schema(&columns)?;
        for (r, row) in rows.iter().enumerate() {
            if row.len() != columns.len() {
                return Err(DatasetError::Format {
                    line: r + 2,
                    row: r,
                    msg: format!("expected {} cells, found {}", columns.len(), row.len()),
                });
            }
            for (c, cell) in row.iter().enumerate() {
                let ok = match (columns[c].kind, cell) {
                    (_, Cell::Missing) => true,
                    (Kind::Numeric, Cell::Num(v)) => v.is_finite(),
                    (Kind::Symbolic, Cell::Sym(_)) => true,
                    _ => false,
                };
                if !ok {
                    return Err(DatasetError::Format {
                        line: r + 2,
                        row: r,
                        msg: format!("cell {cell} does not fit column {}", columns[c].name),
                    });
                }
            }
        }
        for (c, col) in columns.iter_mut().enumerate() {
            col.bounds = match col.kind {
                Kind::Symbolic => None,
                Kind::Numeric => {
                    rows.iter()
                        .filter_map(|row| row[c].as_num())
                        .fold(None, |acc, v| match acc {
                            None => Some((v, v)),
                            Some((lo, hi)) => Some((f64::min(lo, v), f64::max(hi, v))),
                        })
                }
            };
        }
        Ok(Dataset {
            columns: columns.into(),
            rows: rows.into_iter().map(Row::from).collect(),
            source: source.to_string(),
        })
    }

    /// Parses MOOT-format CSV text. Rows with a missing objective value are
    /// dropped (and counted in the log).
    pub fn parse_csv(text: &str, source: &str) -> Result<Dataset, DatasetError> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines.next().ok_or(DatasetError::MissingHeader)?;
        let names = split_fields(header).map_err(|msg| DatasetError::Format {
            line: 1,
            row: 0,
            msg,
        })?;
        let columns = names
            .iter()
            .map(|n| ColumnSpec::from_header(n))
            .collect::<Result<Vec<_>, _>>()?;
        check_schema(&columns)?;

        let mut rows = Vec::new();
        let mut dropped = 0usize;
        for (row_idx, (line_idx, line)) in lines.enumerate() {
            let line_no = line_idx + 1;
            let fields = split_fields(line).map_err(|msg| DatasetError::Format {
                line: line_no,
                row: row_idx,
                msg,
            })?;
            if fields.len() != columns.len() {
                return Err(DatasetError::Format {
                    line: line_no,
                    row: row_idx,
                    msg: format!(
                        "ragged row: expected {} cells, found {}",
                        columns.len(),
                        fields.len()
                    ),
                });
            }
            let mut row = Vec::with_capacity(fields.len());
            for (field, col) in fields.iter().zip(&columns) {
                let cell = if *field == "?" {
                    Cell::Missing
                } else if col.kind == Kind::Numeric {
                    match field.parse::<f64>() {
                        Ok(v) if v.is_finite() => Cell::Num(v),
                        _ => {
                            return Err(DatasetError::Format {
                                line: line_no,
                                row: row_idx,
                                msg: format!("column {}: {field:?} is not a number", col.name),
                            })
                        }
                    }
                } else {
                    Cell::Sym(field.to_string())
                };
                row.push(cell);
            }
            let objective_missing = columns
                .iter()
                .zip(&row)
                .any(|(c, v)| c.is_objective() && v.is_missing());
            if objective_missing {
                dropped += 1;
                continue;
            }
            rows.push(row);
        }
        if dropped > 0 {
            log::warn!("{source}: dropped {dropped} rows with missing objective values");
        }
        if rows.is_empty() {
            return Err(DatasetError::NoDataRows);
        }
        Dataset::new(source, columns, rows)
    }

    pub fn columns(&self) -> &[ColumnSpec] {
        &self.columns
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[Cell] {
        &self.rows[i]
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    pub fn objective_indices(&self) -> Vec<usize> {
        self.role_indices(Role::Objective)
    }

    pub fn independent_indices(&self) -> Vec<usize> {
        self.role_indices(Role::Independent)
    }

    fn role_indices(&self, role: Role) -> Vec<usize> {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.role == role)
            .map(|(i, _)| i)
            .collect()
    }

    /// Same columns (bounds included), different rows.
    pub fn with_rows(&self, rows: Vec<Row>) -> Dataset {
        Dataset {
            columns: Arc::clone(&self.columns),
            rows,
            source: self.source.clone(),
        }
    }

    /// Rows at `indices`, in that order, keeping this dataset's bounds.
    pub fn select_rows(&self, indices: &[usize]) -> Dataset {
        self.with_rows(indices.iter().map(|&i| Arc::clone(&self.rows[i])).collect())
    }

    /// Drops the named columns. Remaining column specs keep their bounds.
    pub fn without_columns(&self, names: &[String]) -> Dataset {
        let keep: Vec<usize> = (0..self.columns.len())
            .filter(|&i| !names.contains(&self.columns[i].name))
            .collect();
        let columns: Vec<ColumnSpec> = keep.iter().map(|&i| self.columns[i].clone()).collect();
        let rows = self
            .rows
            .iter()
            .map(|row| keep.iter().map(|&i| row[i].clone()).collect::<Row>())
            .collect();
        Dataset {
            columns: columns.into(),
            rows,
            source: self.source.clone(),
        }
    }
}

fn check_schema(columns: &[ColumnSpec]) -> Result<(), DatasetError> {
    if !columns.iter().any(ColumnSpec::is_objective) {
        return Err(DatasetError::Schema("no objective columns".into()));
    }
    if !columns.iter().any(ColumnSpec::is_independent) {
        return Err(DatasetError::Schema("no independent columns".into()));
    }
    for (i, c) in columns.iter().enumerate() {
        if columns[..i].iter().any(|o| o.name == c.name) {
            return Err(DatasetError::Schema(format!("duplicate column {}", c.name)));
        }
    }
    Ok(())
}

fn split_fields(line: &str) -> Result<Vec<&str>, String> {
    let fields: Vec<&str> = line.split(',').map(str::trim).collect();
    if fields.iter().any(|f| f.contains('"')) {
        return Err("quoted fields are not supported".into());
    }
    Ok(fields)
}

pub fn load_csv(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    Dataset::parse_csv(&text, &id)
}

/// A seeded train/test partition. Both halves keep the parent's bounds.
#[derive(Clone, Debug)]
pub struct SplitPair {
    pub train: Dataset,
    pub test: Dataset,
    pub seed: u64,
    /// Parent row indices of each half, in half order.
    pub train_rows: Vec<usize>,
    pub test_rows: Vec<usize>,
}

pub fn split(d: &Dataset, fraction: f64, seed: u64) -> Result<SplitPair, DatasetError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(DatasetError::BadFraction(fraction));
    }
    let n = d.n_rows();
    if n < 4 {
        return Err(DatasetError::TooSmall { n, min: 4 });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut seed::rng(seed));
    let cut = ((fraction * n as f64).round() as usize).clamp(1, n - 1);
    let test_rows = order.split_off(cut);
    Ok(SplitPair {
        train: d.select_rows(&order),
        test: d.select_rows(&test_rows),
        seed,
        train_rows: order,
        test_rows,
    })
}

/// Same-size resample with replacement.
pub fn bootstrap(d: &Dataset, seed: u64) -> Dataset {
    d.select_rows(&bootstrap_indices(d.n_rows(), seed))
}

pub fn bootstrap_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = seed::rng(seed);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}
