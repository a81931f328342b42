use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use causatree::harness::{
    compare_rq1, ingest_human, load_manifest, load_reports, run_rq1_model, run_rq2, run_rq3,
    run_seed_ensemble, summarize, write_report, ArmConfig, EnsembleMode, HarnessError, RunConfig,
    RunReport,
};
use causatree::stats::Treatment;
use causatree::{load_csv, Criterion};

#[derive(Parser)]
#[command(
    name = "causatree",
    version,
    about = "Correlation vs causal split criteria on MOOT-style optimization tables"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a dataset and print its shape.
    Load { csv: PathBuf },
    /// Build one or more trees and print them.
    Tree {
        csv: PathBuf,
        #[arg(long, default_value = "var")]
        criterion: Criterion,
        #[arg(long)]
        render: bool,
        #[arg(long, value_enum, default_value = "seed")]
        ensemble_mode: Mode,
        #[command(flatten)]
        shared: Shared,
    },
    /// Model-side feature-impact stability, optionally against human judgments.
    Rq1 {
        csv: PathBuf,
        #[arg(long)]
        human: Option<PathBuf>,
        #[command(flatten)]
        shared: Shared,
    },
    /// Variance stability of the two treatments on one split.
    Rq2 {
        csv: PathBuf,
        #[command(flatten)]
        shared: Shared,
    },
    /// Performance comparison of the two treatments over repeated splits.
    Rq3 {
        csv: PathBuf,
        #[command(flatten)]
        shared: Shared,
    },
    /// Count outcomes over a directory of reports.
    Summarize {
        dir: PathBuf,
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Bootstrap,
    Seed,
}

#[derive(Clone, Copy, ValueEnum)]
enum OnOff {
    On,
    Off,
}

#[derive(Args)]
struct Shared {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    repeats: Option<usize>,
    /// Equal-frequency bins per numeric feature.
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long)]
    y_bins: Option<usize>,
    #[arg(long)]
    min_leaf: Option<usize>,
    #[arg(long)]
    max_depth: Option<usize>,
    /// Rows each tree may label.
    #[arg(long)]
    budget: Option<usize>,
    /// Confounder filter on the causal arm (or on the tree command's arm).
    #[arg(long, value_enum)]
    confound_filter: Option<OnOff>,
    #[arg(long)]
    tau_flag: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    permutations: Option<usize>,
    /// Criterion of the first (correlation) arm.
    #[arg(long)]
    first_criterion: Option<Criterion>,
    /// Criterion of the second (causal) arm.
    #[arg(long)]
    second_criterion: Option<Criterion>,
    /// Output directory for the JSON report and CSV extract.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Shared {
    fn config(&self, csv: &Path) -> RunConfig {
        let mut c = RunConfig::new(csv);
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.repeats {
            c.repeats = v;
        }
        if let Some(v) = self.bins {
            c.tree.x_bins = v;
        }
        if let Some(v) = self.y_bins {
            c.tree.y_bins = v;
        }
        if let Some(v) = self.min_leaf {
            c.tree.min_leaf = v;
        }
        if let Some(v) = self.max_depth {
            c.tree.max_depth = v;
        }
        if self.budget.is_some() {
            c.tree.budget = self.budget;
        }
        if let Some(f) = self.confound_filter {
            c.arms[1].confound_filter = matches!(f, OnOff::On);
        }
        if let Some(v) = self.tau_flag {
            c.filter.tau_flag = v;
        }
        if let Some(v) = self.epsilon {
            c.filter.epsilon = v;
        }
        if let Some(v) = self.alpha {
            c.alpha = v;
        }
        if let Some(v) = self.permutations {
            c.permutations = v;
        }
        if let Some(v) = self.first_criterion {
            c.arms[0].criterion = v;
        }
        if let Some(v) = self.second_criterion {
            c.arms[1].criterion = v;
        }
        c
    }
}

fn emit(report: &RunReport, out: Option<&Path>) -> Result<(), HarnessError> {
    match out {
        Some(dir) => {
            let path = write_report(report, dir)?;
            println!("{}", path.display());
        }
        None => println!(
            "{}",
            serde_json::to_string_pretty(report).expect("reports serialize")
        ),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    match cli.command {
        Command::Load { csv } => {
            let d = load_csv(&csv)?;
            println!(
                "{}: rows={} x={} y={}",
                d.source(),
                d.n_rows(),
                d.independent_indices().len(),
                d.objective_indices().len()
            );
        }
        Command::Tree {
            csv,
            criterion,
            render,
            ensemble_mode,
            shared,
        } => {
            let mut cfg = shared.config(&csv);
            if shared.repeats.is_none() {
                cfg.repeats = 1;
            }
            cfg.ensemble_mode = match ensemble_mode {
                Mode::Bootstrap => EnsembleMode::Bootstrap,
                Mode::Seed => EnsembleMode::Seed,
            };
            let arm = ArmConfig {
                treatment: if criterion == Criterion::Variance {
                    Treatment::Correlation
                } else {
                    Treatment::Causal
                },
                criterion,
                confound_filter: matches!(shared.confound_filter, Some(OnOff::On)),
            };
            let report = run_seed_ensemble(&cfg, &arm)?;
            if render {
                let a = &report.arms[0];
                for (i, text) in a.rendered.iter().enumerate() {
                    println!("# tree {} seed {}", i + 1, a.distribution.seeds[i]);
                    print!("{text}");
                }
                if let Some(dir) = &shared.out {
                    write_report(&report, dir)?;
                }
            } else {
                emit(&report, shared.out.as_deref())?;
            }
        }
        Command::Rq1 { csv, human, shared } => {
            let mut report = run_rq1_model(&shared.config(&csv))?;
            if let Some(h) = human {
                report = compare_rq1(&ingest_human(h)?, &report)?;
            }
            emit(&report, shared.out.as_deref())?;
        }
        Command::Rq2 { csv, shared } => {
            emit(&run_rq2(&shared.config(&csv))?, shared.out.as_deref())?
        }
        Command::Rq3 { csv, shared } => {
            emit(&run_rq3(&shared.config(&csv))?, shared.out.as_deref())?
        }
        Command::Summarize { dir, manifest, out } => {
            let summary = summarize(&load_reports(&dir)?, &load_manifest(&manifest)?)?;
            print!("{}", summary.to_csv());
            if let Some(out) = out {
                let json = serde_json::to_string_pretty(&summary).expect("summaries serialize");
                std::fs::write(&out, json).map_err(|e| HarnessError::Io {
                    path: out.display().to_string(),
                    msg: e.to_string(),
                })?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
