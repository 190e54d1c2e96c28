//! Scenario execution: stepping, checkpoints, outputs and the manifest.

use crate::config::{check, steps_in, ConfigError, ScenarioConfig};
use crate::output::{list_files, now, KindSummary, RunManifest, MANIFEST};
use crate::{model, vort};
use fluxlab_core::grids::{ScalarField, Snapshot};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub const CHECKPOINT: &str = "checkpoint.bin";
pub const CONFIG_COPY: &str = "config.toml";
pub const FINAL_SNAPSHOT: &str = "final.flx";

#[derive(Debug, thiserror::Error)]
pub enum RunError {
    #[error("invalid configuration:\n  {}", .0.iter().map(|e| e.to_string()).collect::<Vec<_>>().join("\n  "))]
    Config(Vec<ConfigError>),
    #[error("numerical instability: {0}")]
    Instability(String),
    #[error("{0}")]
    Input(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Instability(_) => 3,
            RunError::Config(_) | RunError::Input(_) => 2,
        }
    }
}

impl From<fluxlab_core::Error> for RunError {
    fn from(e: fluxlab_core::Error) -> Self {
        use fluxlab_core::Error as E;
        match e {
            E::Instability { .. } | E::Overflow(_) | E::Quadrature(_) | E::Corridor { .. } => {
                RunError::Instability(e.to_string())
            }
            _ => RunError::Input(e.to_string()),
        }
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Input(format!("i/o: {e}"))
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub out_root: PathBuf,
    pub resume: bool,
}

impl RunOptions {
    pub fn new(out_root: impl Into<PathBuf>) -> Self {
        Self {
            out_root: out_root.into(),
            resume: false,
        }
    }
}

pub fn run_dir(cfg: &ScenarioConfig, opts: &RunOptions) -> PathBuf {
    match &cfg.output.dir {
        Some(d) => PathBuf::from(d),
        None => opts.out_root.join(&cfg.name),
    }
}

/// Diagnostics of a finished trajectory, not yet written.
#[derive(Debug, Default)]
pub struct Outputs {
    /// (relative path, contents)
    pub files: Vec<(String, String)>,
    pub summary: BTreeMap<String, KindSummary>,
}

impl Outputs {
    pub fn file(&mut self, path: &str, text: &str) {
        self.files.push((path.to_string(), text.to_string()));
    }

    pub fn kind(&mut self, name: &str, asymptotic: bool) -> &mut KindSummary {
        let s = self.summary.entry(name.to_string()).or_default();
        s.asymptotic = asymptotic;
        s
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub enum Progress {
    Model(model::ModelProgress),
    Vorticity(vort::VortProgress),
}

impl Progress {
    pub fn step(&self) -> u64 {
        match self {
            Progress::Model(p) => p.step,
            Progress::Vorticity(p) => p.step,
        }
    }

    fn trajectory(&self) -> &str {
        match self {
            Progress::Model(p) => &p.trajectory,
            Progress::Vorticity(p) => &p.trajectory,
        }
    }
}

pub fn save_checkpoint(dir: &Path, p: &Progress) -> RunResult<()> {
    let mut bytes = Vec::new();
    ciborium::into_writer(p, &mut bytes).map_err(|e| RunError::Input(format!("checkpoint: {e}")))?;
    let tmp = dir.join(format!("{CHECKPOINT}.tmp"));
    std::fs::write(&tmp, bytes)?;
    std::fs::rename(tmp, dir.join(CHECKPOINT))?;
    Ok(())
}

pub fn load_checkpoint(dir: &Path) -> RunResult<Progress> {
    let bytes = std::fs::read(dir.join(CHECKPOINT))
        .map_err(|e| RunError::Input(format!("cannot read {}: {e}", dir.join(CHECKPOINT).display())))?;
    ciborium::from_reader(bytes.as_slice()).map_err(|e| RunError::Input(format!("corrupt checkpoint: {e}")))
}

pub fn save_snapshot(path: &Path, names: &[&str], fields: &[&ScalarField]) -> RunResult<()> {
    let named: Vec<(&str, &ScalarField)> = names.iter().copied().zip(fields.iter().copied()).collect();
    Snapshot::new(&named)?.save(path)?;
    Ok(())
}

/// Step counts shared by both trajectory kinds.
#[derive(Debug, Clone, Copy)]
pub struct Cadence {
    pub total: u64,
    pub record: u64,
    pub checkpoint: Option<u64>,
    pub snapshot: Option<u64>,
}

impl Cadence {
    pub fn new(cfg: &ScenarioConfig) -> Self {
        let dt = cfg.time.dt;
        Self {
            total: steps_in(cfg.time.t_final, dt),
            record: steps_in(cfg.record_every(), dt),
            checkpoint: cfg.time.checkpoint_every.map(|c| steps_in(c, dt)),
            snapshot: cfg.time.snapshot_every.map(|c| steps_in(c, dt)),
        }
    }

    pub fn records(&self, step: u64) -> bool {
        step % self.record == 0
    }

    pub fn checkpoints(&self, step: u64) -> bool {
        self.checkpoint.is_some_and(|c| step % c == 0)
    }

    pub fn snapshots(&self, step: u64) -> bool {
        self.snapshot.is_some_and(|c| step % c == 0)
    }
}

pub fn snapshot_name(step: u64) -> String {
    format!("snapshots/step_{step:010}.flx")
}

/// Empty or create the run directory; only previous run directories are cleared.
fn prepare_dir(dir: &Path) -> RunResult<()> {
    if dir.exists() {
        let entries: Vec<_> = std::fs::read_dir(dir)?.collect::<Result<_, _>>()?;
        if !entries.is_empty() {
            let is_run = dir.join(MANIFEST).exists()
                || dir.join(CHECKPOINT).exists()
                || dir.join(CONFIG_COPY).exists();
            if !is_run {
                return Err(RunError::Input(format!(
                    "{} exists and is not a run directory; refusing to overwrite",
                    dir.display()
                )));
            }
            std::fs::remove_dir_all(dir)?;
        }
    }
    std::fs::create_dir_all(dir.join("snapshots"))?;
    Ok(())
}

/// Validate, step to t_final (resuming if asked), emit outputs and the manifest.
pub fn run_scenario(cfg: &ScenarioConfig, opts: &RunOptions) -> RunResult<RunManifest> {
    let errs = check(cfg);
    if !errs.is_empty() {
        return Err(RunError::Config(errs));
    }
    let started = now();
    let dir = run_dir(cfg, opts);
    let resumed = if opts.resume && dir.join(CHECKPOINT).exists() {
        let p = load_checkpoint(&dir)?;
        if p.trajectory() != cfg.trajectory_hash() {
            return Err(RunError::Input(format!(
                "checkpoint in {} belongs to a different trajectory",
                dir.display()
            )));
        }
        if p.step() > Cadence::new(cfg).total {
            return Err(RunError::Input(format!(
                "checkpoint is past t_final ({} steps > {})",
                p.step(),
                Cadence::new(cfg).total
            )));
        }
        Some(p)
    } else {
        if opts.resume {
            return Err(RunError::Input(format!(
                "--resume given but {} has no checkpoint",
                dir.display()
            )));
        }
        prepare_dir(&dir)?;
        None
    };
    std::fs::create_dir_all(dir.join("snapshots"))?;
    std::fs::write(
        dir.join(CONFIG_COPY),
        toml::to_string(cfg).map_err(|e| RunError::Input(e.to_string()))?,
    )?;

    let progress = match (cfg.is_vorticity(), resumed) {
        (false, Some(Progress::Model(p))) => Progress::Model(model::advance(cfg, &dir, p)?),
        (false, None) => Progress::Model(model::advance(cfg, &dir, model::start(cfg)?)?),
        (true, Some(Progress::Vorticity(p))) => Progress::Vorticity(vort::advance(cfg, &dir, p)?),
        (true, None) => Progress::Vorticity(vort::advance(cfg, &dir, vort::start(cfg)?)?),
        _ => {
            return Err(RunError::Input(
                "checkpoint kind does not match the scenario".into(),
            ))
        }
    };
    save_checkpoint(&dir, &progress)?;
    let out = diagnose(cfg, &progress)?;
    for (path, text) in &out.files {
        std::fs::write(dir.join(path), text)?;
    }
    finish(cfg, &dir, out.summary, started)
}

pub fn diagnose(cfg: &ScenarioConfig, p: &Progress) -> RunResult<Outputs> {
    match p {
        Progress::Model(p) => model::outputs(cfg, p),
        Progress::Vorticity(p) => vort::outputs(cfg, p),
    }
}

fn finish(
    cfg: &ScenarioConfig,
    dir: &Path,
    summary: BTreeMap<String, KindSummary>,
    started: f64,
) -> RunResult<RunManifest> {
    let passed = summary.values().all(|s| s.asymptotic || s.failed == 0);
    let m = RunManifest {
        name: cfg.name.clone(),
        config_hash: cfg.hash(),
        code_version: env!("CARGO_PKG_VERSION").to_string(),
        seed: cfg.effective_seed(),
        started,
        finished: now(),
        files: list_files(dir)?,
        summary,
        passed,
    };
    m.save(dir)?;
    Ok(m)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub summary: BTreeMap<String, KindSummary>,
    /// regenerated outputs whose digest differs from the manifest
    pub mismatched: Vec<String>,
    /// manifest entries whose file changed on disk
    pub stale: Vec<String>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.mismatched.is_empty()
            && self.stale.is_empty()
            && self.summary.values().all(|s| s.asymptotic || s.failed == 0)
    }
}

/// Recompute every diagnostic from the recorded history in `dir`.
pub fn verify_run(dir: &Path) -> RunResult<VerifyReport> {
    let text = std::fs::read_to_string(dir.join(CONFIG_COPY))
        .map_err(|e| RunError::Input(format!("missing {CONFIG_COPY} in {}: {e}", dir.display())))?;
    let cfg = crate::config::validate_config(&text).map_err(RunError::Config)?;
    let manifest = RunManifest::load(dir)
        .map_err(|e| RunError::Input(format!("missing {MANIFEST} in {}: {e}", dir.display())))?;
    let progress = load_checkpoint(dir)?;
    let out = diagnose(&cfg, &progress)?;
    let mut mismatched = Vec::new();
    for (path, text) in &out.files {
        let digest = hex::encode(<sha2::Sha256 as sha2::Digest>::digest(text.as_bytes()));
        if manifest.file(path).map(|f| &f.sha256) != Some(&digest) {
            mismatched.push(path.clone());
        }
    }
    Ok(VerifyReport {
        summary: out.summary,
        mismatched,
        stale: manifest.stale_files(dir),
    })
}
