use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use coeba_core::harness::{
    self, compare_scenario, find_scenario, ConfigOverrides, FullReport, InstanceLibrary,
    SolverKind, DEFAULT_BUDGET,
};

#[derive(Parser)]
#[command(
    name = "coeba",
    version,
    about = "Run and compare multitasking TSP solvers"
)]
struct Cli {
    /// Directory holding manifest.csv and the .tsp files [default: $COEBA_DATA_DIR or data/tsplib]
    #[arg(long, global = true)]
    data: Option<PathBuf>,

    /// Increase log verbosity (-v info, -vv debug)
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one solver on a scenario for a list of seeds
    Run(RunArgs),
    /// Compare COEBA and MFEA runs on one scenario
    Compare {
        #[arg(long)]
        scenario: String,
        /// Results directory written by `run`
        #[arg(long = "in")]
        input: PathBuf,
    },
    /// Show the built-in scenarios
    Scenarios {
        /// List every scenario with its instances
        #[arg(long)]
        list: bool,
    },
    /// Compare every scenario with results and write report.{txt,json,csv}
    Report {
        /// Include all built-in scenarios
        #[arg(long)]
        all: bool,
        #[arg(long = "in")]
        input: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: String,
    /// coeba or mfea
    #[arg(long)]
    solver: SolverKind,
    /// Seeds, e.g. `1..20`, `7` or `1,3,5`
    #[arg(long, default_value = "1..20")]
    seeds: String,
    /// Objective evaluations per run
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: u64,
    /// TOML file with solver parameter overrides
    #[arg(long)]
    config: Option<PathBuf>,
    /// Results directory
    #[arg(long)]
    out: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    if let Err(e) = execute(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn library(data: &Option<PathBuf>) -> Result<InstanceLibrary> {
    let dir = data.clone().unwrap_or_else(harness::default_data_dir);
    InstanceLibrary::open(&dir).with_context(|| format!("opening data directory {}", dir.display()))
}

/// The library only supplies optima to reports, so a missing one is not fatal.
fn optional_library(data: &Option<PathBuf>) -> Option<InstanceLibrary> {
    library(data)
        .map_err(|e| log::warn!("no optima available: {e:#}"))
        .ok()
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run(args) => run(&cli.data, args),
        Command::Compare { scenario, input } => {
            let lib = optional_library(&cli.data);
            let report = compare_scenario(&input, &scenario, lib.as_ref())?;
            let json_path = input.join(&scenario).join("comparison.json");
            std::fs::write(&json_path, report.to_json())
                .with_context(|| format!("writing {}", json_path.display()))?;
            print!("{}", report.to_text());
            println!("wrote {}", json_path.display());
            Ok(())
        }
        Command::Scenarios { list } => {
            for s in harness::builtin_scenarios() {
                if list {
                    println!("{:<16} {}", s.name, s.instance_names.join(" "));
                } else {
                    println!("{}", s.name);
                }
            }
            Ok(())
        }
        Command::Report { all, input } => {
            if !all {
                bail!("only `report --all` is supported; use `compare` for one scenario");
            }
            let lib = optional_library(&cli.data);
            let report = FullReport::build(&input, lib.as_ref())?;
            if report.comparisons.is_empty() {
                bail!(
                    "no scenario under {} has runs of both solvers",
                    input.display()
                );
            }
            report.write(&input)?;
            print!("{}", report.to_text());
            Ok(())
        }
    }
}

fn run(data: &Option<PathBuf>, args: RunArgs) -> Result<()> {
    let lib = library(data)?;
    let scenario = find_scenario(&args.scenario)?;
    let seeds = harness::parse_seeds(&args.seeds)?;
    let overrides = match &args.config {
        Some(path) => ConfigOverrides::load(path)?,
        None => ConfigOverrides::default(),
    };
    let records = harness::run_experiment(
        &lib,
        &scenario,
        args.solver,
        &seeds,
        args.budget,
        &overrides,
        Some(Path::new(&args.out)),
    )?;
    for r in &records {
        let cells: Vec<String> = r
            .results
            .iter()
            .map(|t| format!("{}={}", t.instance, t.fitness))
            .collect();
        println!(
            "{} {} seed {}: {}",
            r.scenario,
            r.solver,
            r.seed,
            cells.join(" ")
        );
    }
    println!("wrote {} records to {}", records.len(), args.out.display());
    Ok(())
}
