//! Command-line front end: run an experiment config, emit reports.
//!
//! Exit codes: 0 when every experiment passed, 1 when any bound failed or
//! an experiment errored, 2 for usage or config problems.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use sublab::report::{emit, run, EmitFormat, ExperimentConfig};
use sublab::scenarios::list_scenarios;
use sublab::Error;

#[derive(Parser)]
#[command(name = "sublab", version, about = "Numerical laboratory for Riemannian submersions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiments in a config file and write reports.
    Run {
        /// Path to a TOML experiment config.
        #[arg(required_unless_present = "list_scenarios")]
        config: Option<PathBuf>,
        /// Output directory; overrides the config's `output.dir`.
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
        /// Worker count; 0 picks one per CPU. Overrides SUBLAB_JOBS.
        #[arg(long, value_name = "N")]
        jobs: Option<usize>,
        /// Emit format; overrides the config's `output.formats`.
        #[arg(long, value_parser = ["struct", "table", "all"])]
        format: Option<String>,
        /// List registered scenarios with their parameters, then exit.
        #[arg(long)]
        list_scenarios: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { config, out, jobs, format, list_scenarios } => {
            if list_scenarios {
                print_scenarios();
                return ExitCode::SUCCESS;
            }
            let config = config.expect("clap requires the config path");
            match run_command(&config, out, jobs, format) {
                Ok(true) => ExitCode::SUCCESS,
                Ok(false) => ExitCode::from(1),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
    }
}

fn print_scenarios() {
    for spec in list_scenarios() {
        println!("{}  {}", spec.name, spec.doc);
        for p in spec.params {
            let hi_bracket = if p.hi_inclusive { ']' } else { ')' };
            println!(
                "    {} = {} in [{}, {}{}  {}",
                p.name, p.default, p.lo, p.hi, hi_bracket, p.doc
            );
        }
    }
}

fn run_command(
    config_path: &Path,
    out: Option<PathBuf>,
    jobs: Option<usize>,
    format: Option<String>,
) -> sublab::Result<bool> {
    let config = ExperimentConfig::load(config_path)?;

    let jobs = match jobs {
        Some(n) => n,
        None => match std::env::var("SUBLAB_JOBS") {
            Ok(v) => v
                .parse()
                .map_err(|_| Error::Config(format!("SUBLAB_JOBS must be an integer, got {v:?}")))?,
            Err(_) => 0,
        },
    };

    let report = run(&config, jobs)?;

    let out_dir = out
        .or_else(|| config.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("sublab_out"));
    let formats: Vec<EmitFormat> = match format {
        Some(f) => vec![f.parse()?],
        None if config.output.formats.is_empty() => vec![EmitFormat::All],
        None => {
            config.output.formats.iter().map(|f| f.parse()).collect::<sublab::Result<_>>()?
        }
    };
    let mut written = Vec::new();
    for f in formats {
        written.extend(emit(&report, f, &out_dir)?);
    }

    for e in &report.experiments {
        match &e.error {
            Some(msg) => println!("{}  ERROR  {msg}", e.name),
            None => {
                let passed = e.bounds.iter().filter(|b| b.pass).count();
                let verdict = if e.pass() { "ok" } else { "FAIL" };
                println!("{}  {verdict}  bounds {passed}/{}", e.name, e.bounds.len());
            }
        }
    }
    println!("{}  ({:.2}s)", if report.all_pass { "PASS" } else { "FAIL" }, report.wall_time_seconds);
    for p in &written {
        println!("wrote {}", p.display());
    }
    Ok(report.all_pass)
}
