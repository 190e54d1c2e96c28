//! CSV emission, file digests and the run manifest.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;
use std::path::{Path, PathBuf};

pub const MANIFEST: &str = "manifest.json";

/// 12 significant digits, scientific, independent of locale.
pub fn num(v: f64) -> String {
    format!("{v:.11e}")
}

/// Rows of preformatted cells under a fixed header.
pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            text: header.join(",") + "\n",
        }
    }

    pub fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }

    pub fn write(&self, path: &Path) -> io::Result<()> {
        std::fs::write(path, &self.text)
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }
}

pub fn sha256_file(path: &Path) -> io::Result<String> {
    Ok(hex::encode(Sha256::digest(std::fs::read(path)?)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileEntry {
    /// relative to the run directory, `/`-separated
    pub path: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct KindSummary {
    pub checked: usize,
    pub failed: usize,
    /// limsup statements evaluated at finite horizon; never fatal
    pub asymptotic: bool,
    /// smallest rhs − lhs seen
    pub worst_margin: Option<f64>,
}

impl KindSummary {
    pub fn add(&mut self, passed: bool, margin: f64) {
        self.checked += 1;
        if !passed {
            self.failed += 1;
        }
        self.worst_margin = Some(self.worst_margin.map_or(margin, |m| m.min(margin)));
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub name: String,
    pub config_hash: String,
    pub code_version: String,
    pub seed: Option<u64>,
    /// seconds since the Unix epoch
    pub started: f64,
    pub finished: f64,
    pub files: Vec<FileEntry>,
    pub summary: BTreeMap<String, KindSummary>,
    /// every non-asymptotic check passed
    pub passed: bool,
}

impl RunManifest {
    pub fn failed_kinds(&self) -> Vec<&str> {
        self.summary
            .iter()
            .filter(|(_, s)| s.failed > 0 && !s.asymptotic)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Copy with the wall times zeroed, for comparisons.
    pub fn without_times(&self) -> Self {
        Self {
            started: 0.0,
            finished: 0.0,
            ..self.clone()
        }
    }

    pub fn file(&self, path: &str) -> Option<&FileEntry> {
        self.files.iter().find(|f| f.path == path)
    }

    pub fn load(dir: &Path) -> io::Result<Self> {
        let text = std::fs::read_to_string(dir.join(MANIFEST))?;
        serde_json::from_str(&text).map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))
    }

    pub fn save(&self, dir: &Path) -> io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(dir.join(MANIFEST), text + "\n")
    }

    /// Files whose digest no longer matches what is on disk.
    pub fn stale_files(&self, dir: &Path) -> Vec<String> {
        self.files
            .iter()
            .filter(|f| sha256_file(&dir.join(&f.path)).ok().as_deref() != Some(&f.sha256))
            .map(|f| f.path.clone())
            .collect()
    }
}

/// Every file under `dir` except the manifest, sorted, with digests.
pub fn list_files(dir: &Path) -> io::Result<Vec<FileEntry>> {
    let mut paths = Vec::new();
    walk(dir, &mut paths)?;
    paths.sort();
    let mut out = Vec::new();
    for p in paths {
        let rel = p
            .strip_prefix(dir)
            .expect("walked below dir")
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        if rel == MANIFEST {
            continue;
        }
        out.push(FileEntry {
            bytes: std::fs::metadata(&p)?.len(),
            sha256: sha256_file(&p)?,
            path: rel,
        });
    }
    Ok(out)
}

fn walk(dir: &Path, out: &mut Vec<PathBuf>) -> io::Result<()> {
    for entry in std::fs::read_dir(dir)? {
        let p = entry?.path();
        if p.is_dir() {
            walk(&p, out)?;
        } else {
            out.push(p);
        }
    }
    Ok(())
}

pub fn now() -> f64 {
    std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs_f64())
        .unwrap_or(0.0)
}
