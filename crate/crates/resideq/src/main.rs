use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use resideq::output::{write_trajectory, write_tvd_report};
use resideq::presets::PRESETS;
use resideq::{parse_config_with, simulate, thread_cap, RunError, RunOutput};

#[derive(Parser)]
#[command(name = "resideq", version, about = "Steady-state preserving scheme experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a key=value config file.
    Run {
        config: PathBuf,
        /// Write results here instead of the config's output_dir.
        #[arg(long)]
        output_dir: Option<PathBuf>,
        /// Extra key=value pairs applied after the file.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// List the available presets and their schemes.
    Presets,
}

const EXIT_FAILURE: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_TVD: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = thread_cap(std::env::var("RESIDEQ_THREADS").ok().as_deref()) {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_CONFIG);
    }
    match cli.command {
        Command::Presets => {
            for p in PRESETS {
                println!("{}/{}  [{}]  {}", p.model, p.test, p.schemes.join(", "), p.summary);
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            config,
            output_dir,
            overrides,
        } => {
            let text = match std::fs::read_to_string(&config) {
                Ok(t) => t,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            let mut cfg = match parse_config_with(&text, &overrides) {
                Ok(c) => c,
                Err(e) => {
                    eprintln!("error: {}: {e}", config.display());
                    return ExitCode::from(EXIT_CONFIG);
                }
            };
            if let Some(d) = output_dir {
                cfg.output_dir = d;
            }
            match run(&cfg) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    match e {
                        RunError::Config(_) => ExitCode::from(EXIT_CONFIG),
                        RunError::TvdViolation { .. } => ExitCode::from(EXIT_TVD),
                        _ => ExitCode::from(EXIT_FAILURE),
                    }
                }
            }
        }
    }
}

fn run(cfg: &resideq::RunConfig) -> Result<(), RunError> {
    resideq::output::prepare_dir(&cfg.output_dir)?;
    match simulate(cfg)? {
        RunOutput::Trajectory(tr) => {
            for p in write_trajectory(&cfg.output_dir, &tr)? {
                println!("wrote {}", p.display());
            }
            if let Some(last) = tr.records.last() {
                println!("t = {}  l1_error = {:e}", last.t, last.l1_error);
            }
            Ok(())
        }
        RunOutput::Tvd(report) => {
            let path = write_tvd_report(&cfg.output_dir, &report)?;
            println!("wrote {}", path.display());
            println!(
                "dt = {:e}  nu = {:e}  steps checked = {}  max increase = {:e}",
                report.dt,
                report.nu,
                report.records.iter().filter(|r| r.checked).count(),
                report.max_increase
            );
            if report.passed() {
                Ok(())
            } else {
                Err(RunError::TvdViolation {
                    violations: report.violations,
                    max_increase: report.max_increase,
                })
            }
        }
    }
}
