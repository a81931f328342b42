//! Binary split candidates and the criteria that rank them.
//!
//! | criterion   | score                         | better  |
//! |-------------|-------------------------------|---------|
//! | `var`       | weighted child d2h variance   | lower   |
//! | `causal`    | `H(Y|X) / H(Y)`               | lower   |
//! | `gain`      | `H(Y) - H(Y|X)`               | higher  |
//! | `gainratio` | gain / split information      | higher  |
//!
//! `Y` is the discretized d2h of each row and `X` the binary indicator of a
//! candidate test. Ties are broken by feature name, then by the cut rendered
//! as text, so the chosen split never depends on iteration order.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dataset::{Cell, Dataset};
use crate::infotheory::{cond_entropy, entropy, ColumnBins, Discretizer, JointCounts};

/// Smallest improvement over the no-split score that justifies a split.
pub const MIN_IMPROVEMENT: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    #[serde(rename = "var")]
    Variance,
    #[serde(rename = "causal")]
    Causal,
    #[serde(rename = "gain")]
    InfoGain,
    #[serde(rename = "gainratio")]
    GainRatio,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Goal {
    Minimize,
    Maximize,
}

impl Criterion {
    pub fn goal(self) -> Goal {
        match self {
            Criterion::Variance | Criterion::Causal => Goal::Minimize,
            Criterion::InfoGain | Criterion::GainRatio => Goal::Maximize,
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Criterion::Variance => "var",
            Criterion::Causal => "causal",
            Criterion::InfoGain => "gain",
            Criterion::GainRatio => "gainratio",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Criterion {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "var" => Ok(Criterion::Variance),
            "causal" => Ok(Criterion::Causal),
            "gain" => Ok(Criterion::InfoGain),
            "gainratio" => Ok(Criterion::GainRatio),
            other => Err(format!(
                "unknown criterion {other:?} (var|causal|gain|gainratio)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionConfig {
    pub criterion: Criterion,
    /// Candidates leaving fewer rows than this in either child are skipped.
    pub min_child: usize,
}

impl CriterionConfig {
    pub fn new(criterion: Criterion) -> CriterionConfig {
        CriterionConfig {
            criterion,
            min_child: 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", content = "cut")]
pub enum SplitTest {
    /// Numeric threshold: left when `value <= cut`.
    #[serde(rename = "<=")]
    AtMost(f64),
    /// Symbolic equality: left when `value == cut`.
    #[serde(rename = "=")]
    Equals(String),
}

impl SplitTest {
    /// `None` when the cell is missing or of the other kind.
    pub fn goes_left(&self, cell: &Cell) -> Option<bool> {
        match (self, cell) {
            (SplitTest::AtMost(cut), Cell::Num(v)) => Some(v <= cut),
            (SplitTest::Equals(s), Cell::Sym(v)) => Some(v == s),
            _ => None,
        }
    }

    pub fn cut_text(&self) -> String {
        match self {
            SplitTest::AtMost(cut) => format!("{cut}"),
            SplitTest::Equals(s) => s.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitCandidate {
    pub feature: String,
    /// Column index in the dataset the candidate was enumerated on.
    #[serde(skip)]
    pub column: usize,
    pub test: SplitTest,
    pub score: f64,
    pub criterion: Option<Criterion>,
}

impl SplitCandidate {
    fn tie_key(&self) -> (&str, String) {
        (&self.feature, self.test.cut_text())
    }
}

/// Per-row regression target (d2h) and its discretized code, indexed by
/// dataset row.
#[derive(Clone, Debug, PartialEq)]
pub struct Targets {
    pub d2h: Vec<f64>,
    pub y: Vec<usize>,
    pub y_bins: usize,
}

impl Targets {
    pub fn new(d2h: Vec<f64>, disc: &Discretizer) -> Targets {
        let y = d2h.iter().map(|&v| disc.target_code(v)).collect();
        Targets {
            d2h,
            y,
            y_bins: disc.target.n_bins(),
        }
    }
}

/// The rows reaching one tree node.
#[derive(Clone, Copy, Debug)]
pub struct Node<'a> {
    pub data: &'a Dataset,
    pub rows: &'a [usize],
    pub targets: &'a Targets,
}

impl Node<'_> {
    pub fn y_histogram(&self) -> Vec<usize> {
        let mut h = vec![0; self.targets.y_bins];
        for &r in self.rows {
            h[self.targets.y[r]] += 1;
        }
        h
    }

    pub fn target_entropy(&self) -> f64 {
        entropy(&self.y_histogram()).unwrap_or(0.0)
    }

    pub fn d2h_variance(&self) -> f64 {
        variance(self.rows.iter().map(|&r| self.targets.d2h[r]))
    }

    /// Side of each row under `test`, with rows missing the feature sent to
    /// the side holding more non-missing rows (left on ties).
    pub fn sides(&self, column: usize, test: &SplitTest) -> (Vec<bool>, bool) {
        let raw: Vec<Option<bool>> = self
            .rows
            .iter()
            .map(|&r| test.goes_left(&self.data.row(r)[column]))
            .collect();
        let left = raw.iter().filter(|s| **s == Some(true)).count();
        let right = raw.iter().filter(|s| **s == Some(false)).count();
        let missing_left = left >= right;
        (
            raw.into_iter().map(|s| s.unwrap_or(missing_left)).collect(),
            missing_left,
        )
    }

    /// Splits this node's rows into `(left, right)` under a candidate.
    pub fn partition(&self, c: &SplitCandidate) -> (Vec<usize>, Vec<usize>, bool) {
        let (sides, missing_left) = self.sides(c.column, &c.test);
        let (mut left, mut right) = (Vec::new(), Vec::new());
        for (&r, s) in self.rows.iter().zip(sides) {
            if s {
                left.push(r)
            } else {
                right.push(r)
            }
        }
        (left, right, missing_left)
    }

    fn child_tables(&self, c: &SplitCandidate) -> ChildStats {
        let (sides, _) = self.sides(c.column, &c.test);
        let mut j = JointCounts::new(&[2, self.targets.y_bins]);
        let mut d2h: [Vec<f64>; 2] = [Vec::new(), Vec::new()];
        for (&r, left) in self.rows.iter().zip(sides) {
            let x = usize::from(!left);
            j.add(&[x, self.targets.y[r]]);
            d2h[x].push(self.targets.d2h[r]);
        }
        ChildStats { joint: j, d2h }
    }
}

struct ChildStats {
    joint: JointCounts,
    d2h: [Vec<f64>; 2],
}

impl ChildStats {
    fn sizes(&self) -> [usize; 2] {
        [self.d2h[0].len(), self.d2h[1].len()]
    }
}

fn variance(values: impl Iterator<Item = f64> + Clone) -> f64 {
    let (n, sum) = values
        .clone()
        .fold((0usize, 0.0), |(n, s), v| (n + 1, s + v));
    if n == 0 {
        return 0.0;
    }
    let mean = sum / n as f64;
    values.map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64
}

/// All binary tests on the independent features: one `<= edge` test per
/// interior bin edge of a numeric column and one `= symbol` test per symbol
/// of a symbolic column. Tests that leave a child empty are dropped.
/// Scores are `NaN` until a criterion scores them.
pub fn enumerate_candidates(node: &Node<'_>, disc: &Discretizer) -> Vec<SplitCandidate> {
    let mut out = Vec::new();
    if node.rows.len() < 2 {
        return out;
    }
    for c in node.data.independent_indices() {
        let tests: Vec<SplitTest> = match &disc.columns[c] {
            ColumnBins::Numeric(e) => e.edges.iter().map(|&v| SplitTest::AtMost(v)).collect(),
            ColumnBins::Symbolic { symbols } => symbols
                .iter()
                .map(|s| SplitTest::Equals(s.clone()))
                .collect(),
            ColumnBins::Skip => Vec::new(),
        };
        for test in tests {
            let (sides, _) = node.sides(c, &test);
            let left = sides.iter().filter(|&&s| s).count();
            if left == 0 || left == sides.len() {
                continue;
            }
            out.push(SplitCandidate {
                feature: node.data.columns()[c].name.clone(),
                column: c,
                test,
                score: f64::NAN,
                criterion: None,
            });
        }
    }
    out
}

/// Weighted child variance of d2h, `sum_v (n_v / n) Var(d2h_v)`.
pub fn score_variance(node: &Node<'_>, c: &SplitCandidate) -> f64 {
    weighted_variance(&node.child_tables(c))
}

fn weighted_variance(s: &ChildStats) -> f64 {
    let n = (s.d2h[0].len() + s.d2h[1].len()) as f64;
    s.d2h
        .iter()
        .map(|v| v.len() as f64 / n * variance(v.iter().copied()))
        .sum()
}

/// `H(Y|X) / H(Y)`; 1.0 on a pure node.
pub fn score_causal(node: &Node<'_>, c: &SplitCandidate) -> f64 {
    causal_from(node.target_entropy(), &node.child_tables(c))
}

fn causal_from(hy: f64, s: &ChildStats) -> f64 {
    if hy <= 0.0 {
        return 1.0;
    }
    cond_entropy(&s.joint).unwrap_or(0.0) / hy
}

/// `H(Y) - sum_v (|Y_v|/|Y|) H(Y_v)`.
pub fn score_info_gain(node: &Node<'_>, c: &SplitCandidate) -> f64 {
    gain_from(node.target_entropy(), &node.child_tables(c))
}

fn gain_from(hy: f64, s: &ChildStats) -> f64 {
    hy - cond_entropy(&s.joint).unwrap_or(0.0)
}

/// Info gain divided by split information; `None` when the split
/// information is zero.
pub fn score_gain_ratio(node: &Node<'_>, c: &SplitCandidate) -> Option<f64> {
    gain_ratio_from(node.target_entropy(), &node.child_tables(c))
}

fn gain_ratio_from(hy: f64, s: &ChildStats) -> Option<f64> {
    let split_info = entropy(&s.sizes()).unwrap_or(0.0);
    (split_info > 0.0).then(|| gain_from(hy, s) / split_info)
}

fn better(goal: Goal, a: f64, b: f64) -> Ordering {
    match goal {
        Goal::Minimize => a.total_cmp(&b),
        Goal::Maximize => b.total_cmp(&a),
    }
}

/// Scores every candidate under `cfg` and returns the best one, or `None`
/// when no candidate beats the no-split score by [`MIN_IMPROVEMENT`].
pub fn best_split(
    node: &Node<'_>,
    disc: &Discretizer,
    cfg: &CriterionConfig,
) -> Option<SplitCandidate> {
    let hy = node.target_entropy();
    let parent_var = node.d2h_variance();
    let mut scored: Vec<SplitCandidate> = enumerate_candidates(node, disc)
        .into_iter()
        .filter_map(|mut c| {
            let stats = node.child_tables(&c);
            if stats.sizes().iter().any(|&n| n < cfg.min_child.max(1)) {
                return None;
            }
            c.score = match cfg.criterion {
                Criterion::Variance => weighted_variance(&stats),
                Criterion::Causal => causal_from(hy, &stats),
                Criterion::InfoGain => gain_from(hy, &stats),
                Criterion::GainRatio => gain_ratio_from(hy, &stats)?,
            };
            c.criterion = Some(cfg.criterion);
            Some(c)
        })
        .collect();
    let goal = cfg.criterion.goal();
    scored
        .sort_by(|a, b| better(goal, a.score, b.score).then_with(|| a.tie_key().cmp(&b.tie_key())));
    let best = scored.into_iter().next()?;
    let improvement = match cfg.criterion {
        Criterion::Variance => parent_var - best.score,
        Criterion::Causal => 1.0 - best.score,
        Criterion::InfoGain | Criterion::GainRatio => best.score,
    };
    (improvement >= MIN_IMPROVEMENT).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::infotheory::{fit_discretizer, BinEdges};

    struct Fixture {
        data: Dataset,
        targets: Targets,
        disc: Discretizer,
        rows: Vec<usize>,
    }

    impl Fixture {
        fn node(&self) -> Node<'_> {
            Node {
                data: &self.data,
                rows: &self.rows,
                targets: &self.targets,
            }
        }
    }

    /// One numeric feature `A`, one symbolic `b`, target d2h given directly.
    fn fixture(a: &[f64], b: &[&str], d2h: &[f64], bins: usize) -> Fixture {
        let text: String = std::iter::once("A,b,Y-\n".to_string())
            .chain((0..a.len()).map(|i| format!("{},{},{}\n", a[i], b[i], d2h[i])))
            .collect();
        let data = Dataset::parse_csv(&text, "t").unwrap();
        let rows: Vec<usize> = (0..a.len()).collect();
        let disc = fit_discretizer(&data, &rows, d2h, bins, 2).unwrap();
        Fixture {
            targets: Targets::new(d2h.to_vec(), &disc),
            data,
            disc,
            rows,
        }
    }

    fn cand(f: &Fixture, name: &str, test: SplitTest) -> SplitCandidate {
        SplitCandidate {
            feature: name.into(),
            column: f.data.column_index(name).unwrap(),
            test,
            score: f64::NAN,
            criterion: None,
        }
    }

    #[test]
    fn numeric_candidates_follow_edges() {
        let a: Vec<f64> = (1..=8).map(f64::from).collect();
        let f = fixture(&a, &["x"; 8], &[0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7], 4);
        let c = enumerate_candidates(&f.node(), &f.disc);
        assert_eq!(c.len(), 3);
        assert!(c.iter().all(|c| c.feature == "A"));
    }

    #[test]
    fn symbolic_candidates_one_per_symbol() {
        let f = fixture(&[1.0; 4], &["a", "b", "a", "b"], &[0.0, 1.0, 0.0, 1.0], 4);
        let c = enumerate_candidates(&f.node(), &f.disc);
        assert_eq!(c.len(), 2);
        assert_eq!(c[0].test, SplitTest::Equals("a".into()));
        assert_eq!(c[1].test, SplitTest::Equals("b".into()));
    }

    #[test]
    fn constant_feature_yields_nothing() {
        let f = fixture(&[2.0; 6], &["z"; 6], &[0.0, 1.0, 0.0, 1.0, 0.5, 0.5], 4);
        assert!(enumerate_candidates(&f.node(), &f.disc).is_empty());
    }

    #[test]
    fn variance_scores() {
        let f = fixture(
            &[1.0, 2.0, 3.0, 4.0],
            &["p", "q", "p", "q"],
            &[0.0, 0.0, 1.0, 1.0],
            4,
        );
        let n = f.node();
        assert_eq!(
            score_variance(&n, &cand(&f, "A", SplitTest::AtMost(2.0))),
            0.0
        );
        let mixed = score_variance(&n, &cand(&f, "b", SplitTest::Equals("p".into())));
        assert!((mixed - 0.25).abs() < 1e-12);
        assert!((n.d2h_variance() - 0.25).abs() < 1e-12);
    }

    #[test]
    fn causal_scores() {
        let f = fixture(
            &[1.0, 2.0, 3.0, 4.0],
            &["p", "q", "p", "q"],
            &[0.0, 0.0, 1.0, 1.0],
            4,
        );
        let n = f.node();
        assert_eq!(
            score_causal(&n, &cand(&f, "A", SplitTest::AtMost(2.0))),
            0.0
        );
        assert!(
            (score_causal(&n, &cand(&f, "b", SplitTest::Equals("p".into()))) - 1.0).abs() < 1e-12
        );

        let pure = fixture(&[1.0, 2.0, 3.0, 4.0], &["p"; 4], &[0.5; 4], 4);
        let c = cand(&pure, "A", SplitTest::AtMost(2.0));
        assert_eq!(score_causal(&pure.node(), &c), 1.0);
    }

    #[test]
    fn gain_and_ratio() {
        let f = fixture(
            &[1.0, 2.0, 3.0, 4.0],
            &["p", "q", "p", "q"],
            &[0.0, 0.0, 1.0, 1.0],
            4,
        );
        let n = f.node();
        let perfect = cand(&f, "A", SplitTest::AtMost(2.0));
        assert!((score_info_gain(&n, &perfect) - 1.0).abs() < 1e-12);
        let useless = cand(&f, "b", SplitTest::Equals("p".into()));
        assert!(score_info_gain(&n, &useless).abs() < 1e-12);
        // Balanced split: split info is exactly 1 bit.
        assert_eq!(
            score_gain_ratio(&n, &perfect),
            Some(score_info_gain(&n, &perfect))
        );
    }

    #[test]
    fn causal_and_gain_pick_the_same_split() {
        let a = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0];
        let b = ["p", "q", "p", "q", "p", "p", "q", "q"];
        let y = [0.1, 0.2, 0.1, 0.9, 0.8, 0.9, 0.3, 0.7];
        let f = fixture(&a, &b, &y, 4);
        let causal =
            best_split(&f.node(), &f.disc, &CriterionConfig::new(Criterion::Causal)).unwrap();
        let gain = best_split(
            &f.node(),
            &f.disc,
            &CriterionConfig::new(Criterion::InfoGain),
        )
        .unwrap();
        assert_eq!(
            (causal.feature.as_str(), causal.test.clone()),
            (gain.feature.as_str(), gain.test.clone())
        );
        // Exhaustive check that the pick is extremal.
        for c in enumerate_candidates(&f.node(), &f.disc) {
            assert!(score_causal(&f.node(), &c) >= causal.score);
        }
    }

    #[test]
    fn single_candidate_is_chosen() {
        let f = fixture(&[1.0, 1.0, 2.0, 2.0], &["p"; 4], &[0.0, 0.0, 1.0, 1.0], 4);
        let cands = enumerate_candidates(&f.node(), &f.disc);
        assert_eq!(cands.len(), 1);
        let best = best_split(
            &f.node(),
            &f.disc,
            &CriterionConfig::new(Criterion::Variance),
        )
        .unwrap();
        assert_eq!(best.test, cands[0].test);
    }

    #[test]
    fn ties_break_lexicographically() {
        // `A` and `B` carry identical information, so every criterion ties;
        // the smaller feature name wins.
        let text = "B,A,Y-\n1,1,0\n1,1,0\n2,2,1\n2,2,1\n";
        let data = Dataset::parse_csv(text, "t").unwrap();
        let rows = vec![0, 1, 2, 3];
        let d2h = vec![0.0, 0.0, 1.0, 1.0];
        let disc = fit_discretizer(&data, &rows, &d2h, 4, 2).unwrap();
        let targets = Targets::new(d2h, &disc);
        let node = Node {
            data: &data,
            rows: &rows,
            targets: &targets,
        };
        for crit in [
            Criterion::Variance,
            Criterion::Causal,
            Criterion::InfoGain,
            Criterion::GainRatio,
        ] {
            let best = best_split(&node, &disc, &CriterionConfig::new(crit)).unwrap();
            assert_eq!(best.feature, "A", "{crit}");
        }
    }

    #[test]
    fn pure_node_never_splits() {
        let f = fixture(&[1.0, 2.0, 3.0, 4.0], &["p", "q", "p", "q"], &[0.3; 4], 4);
        for crit in [
            Criterion::Variance,
            Criterion::Causal,
            Criterion::InfoGain,
            Criterion::GainRatio,
        ] {
            assert!(best_split(&f.node(), &f.disc, &CriterionConfig::new(crit)).is_none());
        }
    }

    #[test]
    fn missing_values_follow_the_larger_side() {
        let data = Dataset::parse_csv("A,Y-\n1,0\n2,0\n3,1\n?,1\n5,1\n", "t").unwrap();
        let rows = vec![0, 1, 2, 3, 4];
        let d2h = vec![0.0, 0.0, 1.0, 1.0, 1.0];
        let mut disc = fit_discretizer(&data, &rows, &d2h, 4, 2).unwrap();
        disc.columns[0] = ColumnBins::Numeric(BinEdges { edges: vec![1.0] });
        let targets = Targets::new(d2h, &disc);
        let node = Node {
            data: &data,
            rows: &rows,
            targets: &targets,
        };
        let c = SplitCandidate {
            feature: "A".into(),
            column: 0,
            test: SplitTest::AtMost(1.0),
            score: f64::NAN,
            criterion: None,
        };
        let (left, right, missing_left) = node.partition(&c);
        assert_eq!(left, vec![0]);
        assert_eq!(right, vec![1, 2, 3, 4]);
        assert!(!missing_left);
    }

    #[test]
    fn criterion_ids_round_trip() {
        for c in [
            Criterion::Variance,
            Criterion::Causal,
            Criterion::InfoGain,
            Criterion::GainRatio,
        ] {
            assert_eq!(c.id().parse::<Criterion>().unwrap(), c);
            assert_eq!(
                serde_json::to_string(&c).unwrap(),
                format!("\"{}\"", c.id())
            );
        }
        assert!("entropy".parse::<Criterion>().is_err());
    }
}
