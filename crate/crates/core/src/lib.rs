//! Symbolic decision trees for multi-objective optimization tables.
//!
//! Two split criteria are provided: variance reduction over distance-to-heaven
//! (the correlational baseline) and normalized conditional entropy
//! `H(Y|X)/H(Y)` with an optional confounder pre-filter based on conditional
//! mutual information. The [`harness`] module runs the stability and
//! performance protocols that compare the two, using the estimators in
//! [`stats`].

pub mod confound;
pub mod dataset;
pub mod harness;
pub mod infotheory;
pub mod objectives;
pub mod seed;
pub mod splitcrit;
pub mod stats;
pub mod tree;

pub use dataset::{load_csv, Cell, ColumnSpec, Dataset, Direction, Kind, Role, SplitPair};
pub use splitcrit::Criterion;
pub use tree::{Tree, TreeConfig};
