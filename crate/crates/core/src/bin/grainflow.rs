use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use grainflow::error::RunError;
use grainflow::io::{diagnose_dir, export_plots, run_to_dir, RunConfig, Scenario, SCENARIO_KINDS};

const CONFIG_ERROR: u8 = 1;
const ABORTED: u8 = 2;
const DIAGNOSTIC_FAILURE: u8 = 3;

/// Multi-phase mean curvature flow of labeled planar networks.
#[derive(Parser)]
#[command(version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a flow from a TOML config and store the trajectory.
    Run {
        config: PathBuf,
        /// Output directory, overriding `output.dir` of the config.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a stored trajectory and write report.txt next to it.
    Diagnose { trajdir: PathBuf },
    /// List the built-in initial networks.
    Scenarios,
    /// Write radius, mass and residual tables under <trajdir>/plots.
    ExportPlots { trajdir: PathBuf },
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Run { config, out } => {
            let (cfg, text) = match RunConfig::load(&config) {
                Ok(x) => x,
                Err(e) => {
                    eprintln!("config error: {e}");
                    return ExitCode::from(CONFIG_ERROR);
                }
            };
            let out = out.unwrap_or_else(|| cfg.output.dir.clone());
            match run_to_dir(&cfg, &text, &out) {
                Ok(s) => {
                    println!(
                        "{}: {:?} at t = {} after {} epochs",
                        out.display(),
                        s.run.termination,
                        s.run.t,
                        s.run.epochs
                    );
                    ExitCode::SUCCESS
                }
                Err(e @ (RunError::Config(_) | RunError::Io(_))) => {
                    eprintln!("error: {e}");
                    ExitCode::from(CONFIG_ERROR)
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    if let RunError::Aborted { dump: Some(p), .. } = &e {
                        eprintln!("last state written to {}", p.display());
                    }
                    ExitCode::from(ABORTED)
                }
            }
        }
        Command::Diagnose { trajdir } => match diagnose_dir(&trajdir) {
            Ok(report) => {
                for a in &report.assertions {
                    println!(
                        "{:<18} {}  {}",
                        a.name,
                        if a.pass { "PASS" } else { "FAIL" },
                        a.detail
                    );
                }
                if report.passed() {
                    ExitCode::SUCCESS
                } else {
                    ExitCode::from(DIAGNOSTIC_FAILURE)
                }
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(CONFIG_ERROR)
            }
        },
        Command::Scenarios => {
            for kind in SCENARIO_KINDS {
                let sc = Scenario::by_name(kind).expect("listed scenario");
                let n = sc
                    .label_count()
                    .map_or("any".to_string(), |n| n.to_string());
                println!("{kind:<18} N = {n:<4} {}", sc.description());
            }
            ExitCode::SUCCESS
        }
        Command::ExportPlots { trajdir } => match export_plots(&trajdir) {
            Ok(files) => {
                for f in files {
                    println!("{}", f.display());
                }
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(CONFIG_ERROR)
            }
        },
    }
}
