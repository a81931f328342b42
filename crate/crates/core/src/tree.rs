//! Recursive binary tree induction, prediction, optimization and rendering.

use std::fmt::Write as _;

use rand::seq::index;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::Dataset;
use crate::infotheory::{fit_discretizer, EstimationError};
use crate::objectives::{d2h_all, ScoreError};
use crate::seed;
use crate::splitcrit::{
    best_split, Criterion, CriterionConfig, Node, SplitCandidate, SplitTest, Targets,
};

#[derive(Debug, Error)]
pub enum TreeError {
    #[error("cannot build a tree from an empty dataset")]
    EmptyTrain,
    #[error("cannot optimize over an empty test set")]
    EmptyTest,
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error(transparent)]
    Estimation(#[from] EstimationError),
    #[error("rendered tree line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    pub criterion: Criterion,
    pub x_bins: usize,
    pub y_bins: usize,
    pub min_leaf: usize,
    pub max_depth: usize,
    /// Number of training rows used; `None` means all of them.
    pub budget: Option<usize>,
}

impl TreeConfig {
    pub fn new(criterion: Criterion) -> TreeConfig {
        TreeConfig {
            criterion,
            ..TreeConfig::default()
        }
    }
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            criterion: Criterion::Variance,
            x_bins: 7,
            y_bins: 7,
            min_leaf: 4,
            max_depth: 4,
            budget: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    Split {
        split: SplitCandidate,
        /// Rows missing the split feature follow the larger child.
        missing_left: bool,
        n: usize,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    },
    Leaf {
        n: usize,
        mean: f64,
        sd: f64,
    },
}

impl TreeNode {
    pub fn n(&self) -> usize {
        match self {
            TreeNode::Split { n, .. } | TreeNode::Leaf { n, .. } => *n,
        }
    }

    fn visit<'a>(&'a self, depth: usize, f: &mut impl FnMut(&'a TreeNode, usize)) {
        f(self, depth);
        if let TreeNode::Split { left, right, .. } = self {
            left.visit(depth + 1, f);
            right.visit(depth + 1, f);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    pub root: TreeNode,
    pub criterion: Criterion,
    pub seed: u64,
    pub config: TreeConfig,
}

/// The row a tree picks from a test set.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    pub row: usize,
    pub predicted: f64,
    pub actual: f64,
}

fn leaf(rows: &[usize], targets: &Targets) -> TreeNode {
    let n = rows.len();
    let mean = rows.iter().map(|&r| targets.d2h[r]).sum::<f64>() / n as f64;
    let sd = if n > 1 {
        (rows
            .iter()
            .map(|&r| (targets.d2h[r] - mean).powi(2))
            .sum::<f64>()
            / (n - 1) as f64)
            .sqrt()
    } else {
        0.0
    };
    TreeNode::Leaf { n, mean, sd }
}

/// Builds a tree on `train`. When a budget smaller than the data is set, a
/// uniform subsample of that many rows (drawn under `seed`) is used.
pub fn build(train: &Dataset, cfg: &TreeConfig, seed: u64) -> Result<Tree, TreeError> {
    let n = train.n_rows();
    if n == 0 {
        return Err(TreeError::EmptyTrain);
    }
    let rows: Vec<usize> = match cfg.budget {
        Some(b) if b < n => {
            let mut picked = index::sample(&mut seed::rng(seed), n, b.max(1)).into_vec();
            picked.sort_unstable();
            picked
        }
        _ => (0..n).collect(),
    };
    let d2h = d2h_all(train)?;
    let disc = fit_discretizer(train, &rows, &d2h, cfg.x_bins, cfg.y_bins)?;
    let targets = Targets::new(d2h, &disc);
    let crit = CriterionConfig {
        criterion: cfg.criterion,
        min_child: cfg.min_leaf.max(1),
    };

    fn grow(
        data: &Dataset,
        rows: &[usize],
        depth: usize,
        targets: &Targets,
        disc: &crate::infotheory::Discretizer,
        crit: &CriterionConfig,
        cfg: &TreeConfig,
    ) -> TreeNode {
        if depth >= cfg.max_depth || rows.len() < 2 * cfg.min_leaf.max(1) {
            return leaf(rows, targets);
        }
        let node = Node {
            data,
            rows,
            targets,
        };
        let Some(split) = best_split(&node, disc, crit) else {
            return leaf(rows, targets);
        };
        let (l, r, missing_left) = node.partition(&split);
        TreeNode::Split {
            split,
            missing_left,
            n: rows.len(),
            left: Box::new(grow(data, &l, depth + 1, targets, disc, crit, cfg)),
            right: Box::new(grow(data, &r, depth + 1, targets, disc, crit, cfg)),
        }
    }

    Ok(Tree {
        root: grow(train, &rows, 0, &targets, &disc, &crit, cfg),
        criterion: cfg.criterion,
        seed,
        config: *cfg,
    })
}

impl Tree {
    /// Leaf mean d2h reached by `row` of `d`. Features are looked up by
    /// name, so `d` may have more (or reordered) columns than the training
    /// data; an absent column counts as missing.
    pub fn predict_d2h(&self, d: &Dataset, row: usize) -> f64 {
        let cells = d.row(row);
        let mut node = &self.root;
        loop {
            match node {
                TreeNode::Leaf { mean, .. } => return *mean,
                TreeNode::Split {
                    split,
                    missing_left,
                    left,
                    right,
                    ..
                } => {
                    let side = d
                        .column_index(&split.feature)
                        .and_then(|c| split.test.goes_left(&cells[c]))
                        .unwrap_or(*missing_left);
                    node = if side { left } else { right };
                }
            }
        }
    }

    /// Lowest predicted d2h over `test` (first row wins ties), reported
    /// with that row's actual d2h.
    pub fn optimize(&self, test: &Dataset) -> Result<Selection, TreeError> {
        if test.n_rows() == 0 {
            return Err(TreeError::EmptyTest);
        }
        let (row, predicted) = (0..test.n_rows())
            .map(|r| (r, self.predict_d2h(test, r)))
            .fold(
                (0, f64::INFINITY),
                |best, cur| if cur.1 < best.1 { cur } else { best },
            );
        let actual = crate::objectives::d2h(test, row)?;
        Ok(Selection {
            row,
            predicted,
            actual,
        })
    }

    pub fn is_root_leaf(&self) -> bool {
        matches!(self.root, TreeNode::Leaf { .. })
    }

    pub fn leaves(&self) -> Vec<&TreeNode> {
        let mut out = Vec::new();
        self.root.visit(0, &mut |n, _| {
            if matches!(n, TreeNode::Leaf { .. }) {
                out.push(n)
            }
        });
        out
    }

    /// `(feature, depth)` of every split, root at depth 0.
    pub fn splits(&self) -> Vec<(&str, usize)> {
        let mut out = Vec::new();
        self.root.visit(0, &mut |n, depth| {
            if let TreeNode::Split { split, .. } = n {
                out.push((split.feature.as_str(), depth))
            }
        });
        out
    }

    pub fn shape(&self) -> Shape {
        fn go(n: &TreeNode) -> Shape {
            match n {
                TreeNode::Leaf { .. } => Shape::Leaf,
                TreeNode::Split {
                    split, left, right, ..
                } => Shape::Split {
                    feature: split.feature.clone(),
                    test: split.test.clone(),
                    left: Box::new(go(left)),
                    right: Box::new(go(right)),
                },
            }
        }
        go(&self.root)
    }

    pub fn render(&self) -> String {
        render(self)
    }
}

/// Indented text form: one `if` line per branch, `|  ` per level of
/// nesting, leaves closed with `;` followed by their row count, mean and
/// standard deviation of d2h.
pub fn render(t: &Tree) -> String {
    fn stats(n: &TreeNode) -> String {
        match n {
            TreeNode::Leaf { n, mean, sd } => format!(";  n={n} mu={mean:.4} sd={sd:.4}"),
            TreeNode::Split { .. } => String::new(),
        }
    }
    fn go(node: &TreeNode, depth: usize, out: &mut String) {
        let TreeNode::Split {
            split, left, right, ..
        } = node
        else {
            return;
        };
        let (l_op, r_op) = match split.test {
            SplitTest::AtMost(_) => ("<=", ">"),
            SplitTest::Equals(_) => ("=", "!="),
        };
        let cut = split.test.cut_text();
        for (op, child) in [(l_op, left), (r_op, right)] {
            let _ = writeln!(
                out,
                "{}if {} {} {}{}",
                "|  ".repeat(depth),
                split.feature,
                op,
                cut,
                stats(child)
            );
            go(child, depth + 1, out);
        }
    }
    let mut out = String::new();
    match &t.root {
        TreeNode::Leaf { .. } => {
            let _ = writeln!(out, "{}", stats(&t.root));
        }
        root => go(root, 0, &mut out),
    }
    out
}

/// Structure of a tree without leaf statistics.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Leaf,
    Split {
        feature: String,
        test: SplitTest,
        left: Box<Shape>,
        right: Box<Shape>,
    },
}

struct Branch {
    depth: usize,
    feature: String,
    op: String,
    cut: String,
    leaf: bool,
}

fn parse_line(line: &str, no: usize) -> Result<Branch, TreeError> {
    let err = |msg: &str| TreeError::Parse {
        line: no,
        msg: msg.to_string(),
    };
    let mut rest = line;
    let mut depth = 0;
    while let Some(r) = rest.strip_prefix("|  ") {
        depth += 1;
        rest = r;
    }
    let body = rest
        .strip_prefix("if ")
        .ok_or_else(|| err("expected `if`"))?;
    let (body, leaf) = match body.split_once(';') {
        Some((b, _)) => (b, true),
        None => (body, false),
    };
    let mut parts = body.splitn(3, ' ');
    let feature = parts
        .next()
        .filter(|s| !s.is_empty())
        .ok_or_else(|| err("missing feature"))?;
    let op = parts.next().ok_or_else(|| err("missing operator"))?;
    let cut = parts.next().ok_or_else(|| err("missing cut"))?;
    Ok(Branch {
        depth,
        feature: feature.to_string(),
        op: op.to_string(),
        cut: cut.trim_end().to_string(),
        leaf,
    })
}

/// Rebuilds the [`Shape`] of a tree from its [`render`] output, checking
/// that indentation and paired branches are consistent.
pub fn parse_rendered(text: &str) -> Result<Shape, TreeError> {
    let lines: Vec<&str> = text.lines().filter(|l| !l.trim().is_empty()).collect();
    if lines.len() == 1 && lines[0].starts_with(';') {
        return Ok(Shape::Leaf);
    }
    let branches = lines
        .iter()
        .enumerate()
        .map(|(i, l)| parse_line(l, i + 1))
        .collect::<Result<Vec<_>, _>>()?;

    fn node(b: &[Branch], pos: &mut usize, depth: usize) -> Result<Shape, TreeError> {
        let err = |at: usize, msg: &str| TreeError::Parse {
            line: at + 1,
            msg: msg.to_string(),
        };
        let child = |pos: &mut usize| -> Result<(usize, Shape), TreeError> {
            let at = *pos;
            let br = b.get(at).ok_or_else(|| err(at, "unexpected end of tree"))?;
            if br.depth != depth {
                return Err(err(at, "inconsistent indentation"));
            }
            *pos += 1;
            let sub = if br.leaf {
                Shape::Leaf
            } else {
                node(b, pos, depth + 1)?
            };
            Ok((at, sub))
        };
        let (li, left) = child(pos)?;
        let (ri, right) = child(pos)?;
        let (l, r) = (&b[li], &b[ri]);
        if l.feature != r.feature || l.cut != r.cut {
            return Err(err(ri, "sibling branches test different conditions"));
        }
        let test = match (l.op.as_str(), r.op.as_str()) {
            ("<=", ">") => {
                SplitTest::AtMost(l.cut.parse().map_err(|_| err(li, "numeric cut expected"))?)
            }
            ("=", "!=") => SplitTest::Equals(l.cut.clone()),
            _ => return Err(err(ri, "mismatched operators")),
        };
        Ok(Shape::Split {
            feature: l.feature.clone(),
            test,
            left: Box::new(left),
            right: Box::new(right),
        })
    }

    let mut pos = 0;
    let shape = node(&branches, &mut pos, 0)?;
    if pos != branches.len() {
        return Err(TreeError::Parse {
            line: pos + 1,
            msg: "trailing lines".into(),
        });
    }
    Ok(shape)
}

/// Ordinal impact of a feature on the target, read off an ensemble.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FeatureImpact {
    pub feature: String,
    /// 0 = no impact, 1 = mild, 2 = certain.
    pub level: u8,
    /// Fraction of trees splitting on the feature anywhere.
    pub appearance: f64,
    /// Fraction of trees splitting on it at depth <= [`TOP_SPLIT_DEPTH`].
    pub top: f64,
}

pub const TOP_SPLIT_DEPTH: usize = 1;
pub const CERTAIN_TOP_FRACTION: f64 = 0.5;

/// Level 0 if the feature never appears, 2 if it sits in a top split of at
/// least half the trees, 1 otherwise.
pub fn feature_impact(trees: &[Tree], feature: &str) -> FeatureImpact {
    feature_impact_with(trees, feature, TOP_SPLIT_DEPTH, CERTAIN_TOP_FRACTION)
}

/// [`feature_impact`] with explicit "top split" depth and fraction.
pub fn feature_impact_with(
    trees: &[Tree],
    feature: &str,
    top_depth: usize,
    certain_fraction: f64,
) -> FeatureImpact {
    let n = trees.len().max(1) as f64;
    let (mut any, mut top) = (0usize, 0usize);
    for t in trees {
        let splits = t.splits();
        if splits.iter().any(|(f, _)| *f == feature) {
            any += 1;
        }
        if splits.iter().any(|(f, d)| *f == feature && *d <= top_depth) {
            top += 1;
        }
    }
    let appearance = any as f64 / n;
    let top = top as f64 / n;
    let level = if any == 0 {
        0
    } else if top >= certain_fraction {
        2
    } else {
        1
    };
    FeatureImpact {
        feature: feature.to_string(),
        level,
        appearance,
        top,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Cell;
    use crate::objectives::d2h;

    fn root_cell<'a>(t: &Tree, d: &'a Dataset, row: usize) -> Option<&'a Cell> {
        match &t.root {
            TreeNode::Split { split, .. } => d.column_index(&split.feature).map(|c| &d.row(row)[c]),
            TreeNode::Leaf { .. } => None,
        }
    }

    fn separable() -> Dataset {
        // `A` separates good from bad rows perfectly; `N` is noise.
        let mut text = String::from("A,N,Y-\n");
        for i in 0..40 {
            let good = i % 2 == 0;
            let a = if good { 1 + i % 3 } else { 10 + i % 4 };
            let y = if good { 1 } else { 9 };
            text += &format!("{a},{},{y}\n", (i * 7) % 11);
        }
        Dataset::parse_csv(&text, "sep").unwrap()
    }

    #[test]
    fn constant_target_gives_single_leaf() {
        let d =
            Dataset::parse_csv("A,Y-\n1,3\n2,3\n3,3\n4,3\n5,3\n6,3\n7,3\n8,3\n9,3\n", "t").unwrap();
        for crit in [Criterion::Variance, Criterion::Causal] {
            let t = build(&d, &TreeConfig::new(crit), 0).unwrap();
            assert!(t.is_root_leaf());
            assert_eq!(t.predict_d2h(&d, 3), 0.0);
        }
    }

    #[test]
    fn empty_train_is_an_error() {
        let d = Dataset::parse_csv("A,Y-\n1,2\n", "t")
            .unwrap()
            .select_rows(&[]);
        assert!(matches!(
            build(&d, &TreeConfig::default(), 0),
            Err(TreeError::EmptyTrain)
        ));
    }

    #[test]
    fn separating_feature_at_root_under_both_criteria() {
        let d = separable();
        for crit in [Criterion::Variance, Criterion::Causal, Criterion::InfoGain] {
            let t = build(&d, &TreeConfig::new(crit), 0).unwrap();
            match &t.root {
                TreeNode::Split { split, .. } => assert_eq!(split.feature, "A", "{crit}"),
                _ => panic!("expected a split"),
            }
        }
    }

    #[test]
    fn build_is_deterministic() {
        let d = separable();
        let cfg = TreeConfig {
            budget: Some(25),
            ..TreeConfig::default()
        };
        assert_eq!(
            build(&d, &cfg, 4).unwrap().render(),
            build(&d, &cfg, 4).unwrap().render()
        );
    }

    #[test]
    fn pure_leaf_predicts_own_d2h() {
        let d = separable();
        let t = build(&d, &TreeConfig::default(), 0).unwrap();
        for r in 0..d.n_rows() {
            assert!((t.predict_d2h(&d, r) - d2h(&d, r).unwrap()).abs() < 1e-12);
        }
    }

    #[test]
    fn routing_follows_root_test() {
        let d = separable();
        let t = build(&d, &TreeConfig::default(), 0).unwrap();
        let TreeNode::Split { split, left, .. } = &t.root else {
            panic!()
        };
        let r = (0..d.n_rows())
            .find(|&r| split.test.goes_left(root_cell(&t, &d, r).unwrap()) == Some(true))
            .unwrap();
        let TreeNode::Leaf { mean, .. } = **left else {
            panic!("left is a leaf here")
        };
        assert_eq!(t.predict_d2h(&d, r), mean);
    }

    #[test]
    fn leaves_cover_training_rows() {
        let d = separable();
        let t = build(
            &d,
            &TreeConfig {
                min_leaf: 2,
                ..TreeConfig::default()
            },
            0,
        )
        .unwrap();
        assert_eq!(t.leaves().iter().map(|l| l.n()).sum::<usize>(), d.n_rows());
    }

    #[test]
    fn optimize_prefers_lowest_prediction_then_first_row() {
        let d = separable();
        let t = build(&d, &TreeConfig::default(), 0).unwrap();
        let sel = t.optimize(&d).unwrap();
        assert_eq!(sel.row, 0);
        assert_eq!(sel.actual, 0.0);

        let single = Tree {
            root: TreeNode::Leaf {
                n: 1,
                mean: 0.4,
                sd: 0.0,
            },
            criterion: Criterion::Variance,
            seed: 0,
            config: TreeConfig::default(),
        };
        let s = single.optimize(&d).unwrap();
        assert_eq!((s.row, s.predicted), (0, 0.4));
        assert!(matches!(
            single.optimize(&d.select_rows(&[])),
            Err(TreeError::EmptyTest)
        ));
        assert_eq!(single.optimize(&d.select_rows(&[7])).unwrap().row, 0);
    }

    #[test]
    fn missing_feature_goes_to_larger_child() {
        let d = separable();
        let t = build(&d, &TreeConfig::default(), 0).unwrap();
        let probe = Dataset::parse_csv("N,Y-\n3,5\n", "probe").unwrap();
        let TreeNode::Split {
            missing_left,
            left,
            right,
            ..
        } = &t.root
        else {
            panic!()
        };
        let expected = if *missing_left { left } else { right };
        let TreeNode::Leaf { mean, .. } = **expected else {
            panic!()
        };
        assert_eq!(t.predict_d2h(&probe, 0), mean);
        assert_eq!(*missing_left, left.n() >= right.n());
    }

    #[test]
    fn render_single_leaf() {
        let t = Tree {
            root: TreeNode::Leaf {
                n: 3,
                mean: 0.25,
                sd: 0.0,
            },
            criterion: Criterion::Variance,
            seed: 0,
            config: TreeConfig::default(),
        };
        let text = t.render();
        assert!(text.starts_with(';'));
        assert_eq!(text.lines().count(), 1);
        assert_eq!(parse_rendered(&text).unwrap(), Shape::Leaf);
    }

    #[test]
    fn render_depth_one() {
        let d = separable();
        let t = build(&d, &TreeConfig::default(), 0).unwrap();
        let text = t.render();
        assert_eq!(text.lines().count(), 2);
        assert!(text.lines().all(|l| l.starts_with("if A ")));
        assert_eq!(parse_rendered(&text).unwrap(), t.shape());
    }

    fn leafy(mean: f64) -> Box<TreeNode> {
        Box::new(TreeNode::Leaf {
            n: 4,
            mean,
            sd: 0.0,
        })
    }

    fn split(
        feature: &str,
        test: SplitTest,
        left: Box<TreeNode>,
        right: Box<TreeNode>,
    ) -> Box<TreeNode> {
        Box::new(TreeNode::Split {
            split: SplitCandidate {
                feature: feature.into(),
                column: 0,
                test,
                score: 0.0,
                criterion: Some(Criterion::Variance),
            },
            missing_left: true,
            n: left.n() + right.n(),
            left,
            right,
        })
    }

    #[test]
    fn nested_tree_round_trips() {
        // if TIME <= 4 / | if STOR <= 4 / | | if ACAP > 3; ...
        let root = split(
            "TIME",
            SplitTest::AtMost(4.0),
            split(
                "STOR",
                SplitTest::AtMost(4.0),
                split(
                    "ACAP",
                    SplitTest::AtMost(3.0),
                    split("TOOL", SplitTest::AtMost(3.0), leafy(0.1), leafy(0.2)),
                    leafy(0.3),
                ),
                leafy(0.4),
            ),
            split(
                "RUSE",
                SplitTest::AtMost(4.0),
                split(
                    "mode",
                    SplitTest::Equals("embedded".into()),
                    leafy(0.5),
                    leafy(0.6),
                ),
                leafy(0.7),
            ),
        );
        let t = Tree {
            root: *root,
            criterion: Criterion::Variance,
            seed: 1,
            config: TreeConfig::default(),
        };
        let text = t.render();
        assert!(text.starts_with(
            "if TIME <= 4\n|  if STOR <= 4\n|  |  if ACAP <= 3\n|  |  |  if TOOL <= 3;"
        ));
        assert!(text.contains("|  |  if mode != embedded;"));
        assert_eq!(parse_rendered(&text).unwrap(), t.shape());
    }

    #[test]
    fn parse_rejects_bad_indentation() {
        let bad = "if A <= 1\n|  |  if B <= 2;\n|  |  if B > 2;\nif A > 1;\n";
        assert!(parse_rendered(bad).is_err());
        let unpaired = "if A <= 1;\nif B > 1;\n";
        assert!(parse_rendered(unpaired).is_err());
    }

    fn with_splits(splits: &[(&str, usize)]) -> Tree {
        // Chain of splits down the left spine, feature at each given depth.
        let mut depth_map: Vec<&str> = vec!["PAD"; 5];
        for (f, d) in splits {
            depth_map[*d] = f;
        }
        let max = splits.iter().map(|s| s.1).max().unwrap_or(0);
        let mut node = leafy(0.0);
        for d in (0..=max).rev() {
            node = split(depth_map[d], SplitTest::AtMost(1.0), node, leafy(1.0));
        }
        Tree {
            root: *node,
            criterion: Criterion::Variance,
            seed: 0,
            config: TreeConfig::default(),
        }
    }

    #[test]
    fn impact_levels() {
        let absent: Vec<Tree> = (0..20).map(|_| with_splits(&[("B", 0)])).collect();
        assert_eq!(feature_impact(&absent, "A").level, 0);

        let rooted: Vec<Tree> = (0..20).map(|_| with_splits(&[("A", 0)])).collect();
        let fi = feature_impact(&rooted, "A");
        assert_eq!((fi.level, fi.appearance, fi.top), (2, 1.0, 1.0));

        let mut mixed: Vec<Tree> = (0..8).map(|_| with_splits(&[("A", 3)])).collect();
        mixed.extend((0..12).map(|_| with_splits(&[("B", 0)])));
        let fi = feature_impact(&mixed, "A");
        assert_eq!((fi.level, fi.appearance, fi.top), (1, 0.4, 0.0));
    }

    #[test]
    fn tree_serializes_to_json() {
        let t = build(&separable(), &TreeConfig::default(), 0).unwrap();
        let json = serde_json::to_value(&t).unwrap();
        assert_eq!(json["root"]["node"], "split");
        assert_eq!(json["root"]["split"]["feature"], "A");
        assert_eq!(json["criterion"], "var");
    }
}
