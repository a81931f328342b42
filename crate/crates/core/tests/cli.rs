mod common;

use std::fs;
use std::process::{Command, Output};

use common::data;

fn causatree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_causatree"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn arg(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn load_prints_shape() {
    let o = causatree(&["load", arg(&data("coc1000.csv"))]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "coc1000: rows=1001 x=20 y=5");
}

#[test]
fn usage_errors_exit_one_and_help_exits_zero() {
    assert_eq!(causatree(&["rq3"]).status.code(), Some(1));
    assert_eq!(
        causatree(&["rq3", "x.csv", "--confound-filter", "maybe"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(causatree(&["--help"]).status.code(), Some(0));
    assert_eq!(
        causatree(&["load", "/no/such/file.csv"]).status.code(),
        Some(1)
    );
}

#[test]
fn precondition_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("tiny.csv");
    fs::write(&p, "A,Y-\n1,1\n2,2\n3,3\n").unwrap();
    assert_eq!(causatree(&["rq3", arg(&p)]).status.code(), Some(2));
    assert_eq!(
        causatree(&["rq2", arg(&data("auto93.csv")), "--repeats", "1"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn tree_render_prints_four_trees() {
    let o = causatree(&[
        "tree",
        arg(&data("coc1000.csv")),
        "--criterion",
        "causal",
        "--repeats",
        "4",
        "--budget",
        "100",
        "--render",
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("# tree")).count(), 4);
    assert!(text.lines().any(|l| l.starts_with("|  if ")));
    assert!(text.contains(";  n="));
}

#[test]
fn rq3_then_summarize() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("reports");
    for name in ["auto93.csv", "nasa93dem.csv"] {
        let o = causatree(&[
            "rq3",
            arg(&data(name)),
            "--repeats",
            "5",
            "--out",
            arg(&out),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert!(out.join("auto93-rq3.json").exists());
    assert!(out.join("auto93-rq3.csv").exists());
    let csv = fs::read_to_string(out.join("auto93-rq3.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 2 * 5);

    let o = causatree(&[
        "summarize",
        arg(&out),
        "--manifest",
        arg(&data("categories.csv")),
    ]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("kind,dataset,category"));
    assert!(text.contains("rq3,auto93,Miscellaneous,5,3,205,"));
    assert!(text.contains("rq3,nasa93dem,Software Process Model,24,3,93,"));
}

#[test]
fn rq1_rejects_bad_judgment_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h.csv");
    fs::write(
        &p,
        "dataset,expert_id,feature,objective,level\nauto93,e1,Hp,Mpg+,5\n",
    )
    .unwrap();
    let o = causatree(&[
        "rq1",
        arg(&data("auto93.csv")),
        "--human",
        arg(&p),
        "--repeats",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn rq1_with_human_file_reports_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("h.csv");
    let mut text = String::from("dataset,expert_id,feature,objective,level\n");
    for e in 0..4 {
        text.push_str(&format!("auto93,e{e},Hp,Mpg+,{}\n", e % 3));
        text.push_str(&format!("auto93,e{e},Volume,Lbs-,2\n"));
    }
    fs::write(&p, text).unwrap();
    let o = causatree(&[
        "rq1",
        arg(&data("auto93.csv")),
        "--human",
        arg(&p),
        "--repeats",
        "4",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let cmp = &report["rq1_comparison"];
    assert_eq!(cmp["experts"], 4);
    assert_eq!(cmp["below_min_responses"], true);
    assert_eq!(cmp["human_gini"].as_array().unwrap().len(), 2);
}
