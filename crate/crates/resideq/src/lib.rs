//! Configuration, presets, file output and the command-line runner for the
//! `resideq-core` experiments.

pub mod config;
pub mod output;
pub mod presets;
pub mod runner;

pub use config::{parse_config, parse_config_with, ConfigError, Init, Model, RunConfig, TimeStep};
pub use runner::{build_experiment, integrate, simulate, Experiment, RunError, RunOutput, Trajectory};

/// Thread cap from `RESIDEQ_THREADS` (default 1). The solvers are
/// sequential, so the value is only validated.
pub fn thread_cap(value: Option<&str>) -> Result<usize, String> {
    match value {
        None => Ok(1),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("RESIDEQ_THREADS must be a positive integer, got `{v}`")),
        },
    }
}
