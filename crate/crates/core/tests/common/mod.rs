#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use causatree::confound::{filter_confounders, ConfounderReport, FilterThresholds};
use causatree::infotheory::{fit_discretizer, Discretizer};
use causatree::objectives::d2h_all;
use causatree::Dataset;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

pub fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> Dataset {
    let mut text = format!("{header}\n");
    for r in rows {
        text.push_str(&r);
        text.push('\n');
    }
    Dataset::parse_csv(&text, "fixture").unwrap()
}

/// A small table with 1-10 features (numeric with heavy ties, symbolic, a
/// few missing cells) and one or two objectives.
pub fn random_table(rng: &mut ChaCha8Rng) -> Dataset {
    let n = rng.random_range(2..=200);
    let k = rng.random_range(1..=10);
    let symbolic: Vec<bool> = (0..k).map(|_| rng.random_bool(0.3)).collect();
    let levels: Vec<u32> = (0..k).map(|_| rng.random_range(1..=8)).collect();
    let two_y = rng.random_bool(0.5);
    let mut header: Vec<String> = (0..k)
        .map(|i| {
            if symbolic[i] {
                format!("s{i}")
            } else {
                format!("F{i}")
            }
        })
        .collect();
    header.push("Cost-".into());
    if two_y {
        header.push("Gain+".into());
    }
    let rows = (0..n).map(|_| {
        let mut cells: Vec<String> = (0..k)
            .map(|i| {
                if rng.random_bool(0.03) {
                    "?".to_string()
                } else if symbolic[i] {
                    format!("v{}", rng.random_range(0..levels[i]))
                } else {
                    rng.random_range(0..=levels[i]).to_string()
                }
            })
            .collect();
        cells.push(rng.random_range(0..50).to_string());
        if two_y {
            cells.push(format!("{:.2}", rng.random_range(0.0..10.0)));
        }
        cells.join(",")
    });
    csv(&header.join(","), rows)
}

/// `Z` drives both the proxy `Xp` and the objective; `W` is noise.
pub fn planted_confounder(seed: u64) -> Dataset {
    let mut rng = causatree::seed::rng(seed);
    let noise = Normal::new(0.0, 15.0).unwrap();
    csv(
        "Z,Xp,W,Y-",
        (0..2000).map(|_| {
            let z: f64 = rng.random_range(0.0..100.0);
            let x = z + noise.sample(&mut rng);
            let w: f64 = rng.random_range(0.0..100.0);
            format!("{z:.4},{x:.4},{w:.4},{:.4}", z * z)
        }),
    )
}

/// Every feature independent of the objective.
pub fn independent_fixture(seed: u64) -> Dataset {
    let mut rng = causatree::seed::rng(seed);
    csv(
        "A,B,C,Y-",
        (0..2000).map(|_| {
            format!(
                "{},{},{},{}",
                rng.random_range(0..100),
                rng.random_range(0..100),
                rng.random_range(0..100),
                rng.random_range(0..100)
            )
        }),
    )
}

pub fn discretize(d: &Dataset) -> (Discretizer, Vec<f64>) {
    let target = d2h_all(d).unwrap();
    let rows: Vec<usize> = (0..d.n_rows()).collect();
    (fit_discretizer(d, &rows, &target, 7, 7).unwrap(), target)
}

pub fn run_filter(d: &Dataset) -> (Dataset, ConfounderReport) {
    let (disc, target) = discretize(d);
    filter_confounders(d, &disc, &target, FilterThresholds::default())
}

/// `sum p(x,y) log2(p(x,y) / (p(x) p(y)))` straight from a hash map.
pub fn brute_mi(x: &[usize], y: &[usize]) -> f64 {
    let n = x.len() as f64;
    let mut xy: HashMap<(usize, usize), f64> = HashMap::new();
    let mut px: HashMap<usize, f64> = HashMap::new();
    let mut py: HashMap<usize, f64> = HashMap::new();
    for i in 0..x.len() {
        *xy.entry((x[i], y[i])).or_default() += 1.0;
        *px.entry(x[i]).or_default() += 1.0;
        *py.entry(y[i]).or_default() += 1.0;
    }
    xy.iter()
        .map(|(&(a, b), &c)| c / n * ((c * n) / (px[&a] * py[&b])).log2())
        .sum()
}

/// `sum p(x,y,z) log2(p(z) p(x,y,z) / (p(x,z) p(y,z)))`.
pub fn brute_cmi(x: &[usize], y: &[usize], z: &[usize]) -> f64 {
    let n = x.len() as f64;
    let mut xyz: HashMap<(usize, usize, usize), f64> = HashMap::new();
    let mut xz: HashMap<(usize, usize), f64> = HashMap::new();
    let mut yz: HashMap<(usize, usize), f64> = HashMap::new();
    let mut pz: HashMap<usize, f64> = HashMap::new();
    for i in 0..x.len() {
        *xyz.entry((x[i], y[i], z[i])).or_default() += 1.0;
        *xz.entry((x[i], z[i])).or_default() += 1.0;
        *yz.entry((y[i], z[i])).or_default() += 1.0;
        *pz.entry(z[i]).or_default() += 1.0;
    }
    xyz.iter()
        .map(|(&(a, b, c), &k)| k / n * ((pz[&c] * k) / (xz[&(a, c)] * yz[&(b, c)])).log2())
        .sum::<f64>()
        .max(0.0)
}

pub fn brute_entropy(y: &[usize]) -> f64 {
    let n = y.len() as f64;
    let mut h: HashMap<usize, f64> = HashMap::new();
    for &v in y {
        *h.entry(v).or_default() += 1.0;
    }
    h.values().map(|&c| -(c / n) * (c / n).log2()).sum()
}

/// Names the filter should remove, decided from hash-map counts alone.
pub fn brute_removals(d: &Dataset) -> Vec<String> {
    let (disc, target) = discretize(d);
    let y: Vec<usize> = target.iter().map(|&t| disc.target_code(t)).collect();
    let feats = d.independent_indices();
    let codes: Vec<Vec<usize>> = feats
        .iter()
        .map(|&c| {
            d.rows()
                .iter()
                .map(|r| disc.code(c, &r[c]).unwrap())
                .collect()
        })
        .collect();
    let th = FilterThresholds::default();
    let hy = brute_entropy(&y);
    let mut out: Vec<String> = (0..feats.len())
        .filter(|&xi| {
            let mi = brute_mi(&codes[xi], &y);
            mi > 0.0
                && mi >= th.tau_flag * hy
                && (0..feats.len())
                    .filter(|&zi| zi != xi)
                    .any(|zi| brute_cmi(&codes[xi], &y, &codes[zi]) < th.epsilon * mi)
        })
        .map(|xi| d.columns()[feats[xi]].name.clone())
        .collect();
    out.sort();
    out
}

/// O(n m) KS: evaluate both ECDFs at every pooled point.
pub fn brute_ks(a: &[f64], b: &[f64]) -> f64 {
    let ecdf = |s: &[f64], x: f64| s.iter().filter(|&&v| v <= x).count() as f64 / s.len() as f64;
    a.iter()
        .chain(b)
        .map(|&x| (ecdf(a, x) - ecdf(b, x)).abs())
        .fold(0.0, f64::max)
}

pub fn brute_delta(a: &[f64], b: &[f64]) -> f64 {
    let mut net = 0i64;
    for &x in a {
        for &y in b {
            net += (x > y) as i64 - (x < y) as i64;
        }
    }
    net as f64 / (a.len() * b.len()) as f64
}

/// Rewrites `d` as CSV text with its columns in `order`.
pub fn to_csv(d: &Dataset, order: &[usize]) -> String {
    let cell = |c: &causatree::Cell| match c {
        causatree::Cell::Num(v) => v.to_string(),
        causatree::Cell::Sym(s) => s.clone(),
        causatree::Cell::Missing => "?".into(),
    };
    let mut out: String = order
        .iter()
        .map(|&c| d.columns()[c].name.as_str())
        .collect::<Vec<_>>()
        .join(",");
    out.push('\n');
    for r in d.rows() {
        out.push_str(
            &order
                .iter()
                .map(|&c| cell(&r[c]))
                .collect::<Vec<_>>()
                .join(","),
        );
        out.push('\n');
    }
    out
}

/// Features that are noisy copies of one another and of the target, so
/// the confounder filter has real decisions to make.
pub fn tangled_table(seed: u64) -> Dataset {
    let mut rng = causatree::seed::rng(seed);
    let k = rng.random_range(2..=5);
    let n = rng.random_range(200..=600);
    let header: Vec<String> = (0..k)
        .map(|i| format!("F{i}"))
        .chain(["Y-".to_string()])
        .collect();
    let noise: Vec<f64> = (0..k).map(|_| rng.random_range(0.0..40.0)).collect();
    let rows: Vec<String> = (0..n)
        .map(|_| {
            let z: f64 = rng.random_range(0.0..100.0);
            let mut cells: Vec<String> = noise
                .iter()
                .map(|&s| format!("{:.3}", z + rng.random_range(-s - 0.1..s + 0.1)))
                .collect();
            cells.push(format!("{:.3}", z + rng.random_range(-5.0..5.0)));
            cells.join(",")
        })
        .collect();
    csv(&header.join(","), rows)
}
