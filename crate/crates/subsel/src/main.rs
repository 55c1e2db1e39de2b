//! Thin CLI over the experiment runner: parses a config file plus overrides,
//! runs the selected protocol, and writes the report artifacts.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use subsel::experiment::{self, ExperimentConfig, RunOutput};

#[derive(Parser)]
#[command(
    name = "subsel",
    version,
    about = "Ensemble selection in random subspaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment described by a config file (CLI flags override it).
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Config file of `key = value` lines.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Selection mode: free | based.
    #[arg(long)]
    mode: Option<String>,
    /// Search algorithm: ga | moga.
    #[arg(long)]
    search: Option<String>,
    /// Diversity index: wallace1 | wallace2 | fm | rand | jacard | mirkin.
    #[arg(long)]
    diversity: Option<String>,
    /// Error objective for classifier-based selection: me | mve.
    #[arg(long)]
    objective: Option<String>,
    /// Training CSV (test portion carved out unless test-data is given).
    #[arg(long)]
    data: Option<PathBuf>,
    /// Separate test CSV.
    #[arg(long)]
    test_data: Option<PathBuf>,
    /// Label column name or 0-based index.
    #[arg(long)]
    label_column: Option<String>,
    /// Optimization/archive/evaluation fractions, e.g. 0.7,0.15,0.15.
    #[arg(long)]
    split: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    replications: Option<usize>,
    /// Output directory for report.json, report.csv, pool.json and
    /// per-replication history files.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn build_config(args: &RunArgs) -> Result<ExperimentConfig, experiment::ExperimentError> {
    let mut config = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let overrides: [(&str, Option<String>); 9] = [
        ("mode", args.mode.clone()),
        ("search", args.search.clone()),
        ("diversity", args.diversity.clone()),
        ("objective", args.objective.clone()),
        ("data", args.data.as_ref().map(|p| p.display().to_string())),
        (
            "test_data",
            args.test_data.as_ref().map(|p| p.display().to_string()),
        ),
        ("label_column", args.label_column.clone()),
        ("split", args.split.clone()),
        ("seed", args.seed.map(|s| s.to_string())),
    ];
    for (key, value) in overrides {
        if let Some(value) = value {
            config.set(key, &value)?;
        }
    }
    if let Some(replications) = args.replications {
        config.set("replications", &replications.to_string())?;
    }
    Ok(config)
}

fn write_outputs(output: &RunOutput, out_dir: &PathBuf) -> std::io::Result<()> {
    fs::create_dir_all(out_dir)?;
    fs::write(out_dir.join("report.json"), output.report.to_json())?;
    fs::write(out_dir.join("report.csv"), output.report.to_csv())?;
    // A serialized pool copy lets the search be replayed without re-sampling.
    fs::write(out_dir.join("pool.json"), output.pool.to_json())?;

    for (replication, history) in output.histories.iter().enumerate() {
        if history.is_empty() {
            continue;
        }
        let mut lines = String::new();
        for record in history {
            lines.push_str(&serde_json::to_string(record).expect("record serializes"));
            lines.push('\n');
        }
        fs::write(
            out_dir.join(format!("history_rep{replication:03}.jsonl")),
            lines,
        )?;
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::Run(args) => {
            let config = match build_config(&args) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            let output = match experiment::run(&config) {
                Ok(o) => o,
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::FAILURE;
                }
            };
            if let Some(out_dir) = &args.out {
                if let Err(e) = write_outputs(&output, out_dir) {
                    eprintln!("error writing outputs: {e}");
                    return ExitCode::FAILURE;
                }
            }
            let report = &output.report;
            println!(
                "selected: {:.2}% +/- {:.2}% (size {:.2} +/- {:.2}, n={})",
                100.0 * report.aggregates.accuracy_mean,
                100.0 * report.aggregates.accuracy_std,
                report.aggregates.size_mean,
                report.aggregates.size_std,
                report.aggregates.effective_n
            );
            println!(
                "all ({}): {:.2}%   oracle: {:.2}%",
                report.baseline.all_size,
                100.0 * report.baseline.all_accuracy,
                100.0 * report.baseline.oracle_rate
            );
            if let Some(p) = report.significance.p_value_vs_all {
                println!("{} vs all: p = {:.4}", report.significance.test, p);
            }
            if !report.failures.is_empty() {
                eprintln!("{} replication(s) failed", report.failures.len());
            }
            ExitCode::SUCCESS
        }
    }
}
