//! Scenario runner: configs, trajectories, diagnostics files, checkpoints and plots.

pub mod config;
pub mod hn;
pub mod model;
pub mod output;
pub mod plot;
pub mod run;
pub mod vort;

pub use config::{validate_config, ConfigError, ScenarioConfig, SCHEMA_VERSION};
pub use output::{KindSummary, RunManifest};
pub use plot::emit_plots;
pub use run::{run_scenario, verify_run, RunError, RunOptions};

use std::path::Path;

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "FLUXLAB_OUT";

pub const EXIT_OK: i32 = 0;
pub const EXIT_BOUND: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_INSTABILITY: i32 = 3;

/// Read and validate a config file, then apply a seed override.
pub fn load_config(path: &Path, seed: Option<u64>) -> Result<ScenarioConfig, RunError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| RunError::Input(format!("cannot read {}: {e}", path.display())))?;
    let mut cfg = validate_config(&text).map_err(RunError::Config)?;
    if seed.is_some() {
        cfg.seed = seed;
        let errs = config::check(&cfg);
        if !errs.is_empty() {
            return Err(RunError::Config(errs));
        }
    }
    Ok(cfg)
}

/// Exit code of a finished run.
pub fn manifest_exit(m: &RunManifest) -> i32 {
    if m.passed {
        EXIT_OK
    } else {
        EXIT_BOUND
    }
}
