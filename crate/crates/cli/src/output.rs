//! Output directory handling: hashed writes, a manifest, and cleanup of
//! everything written when an experiment does not finish.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use mhdlab::diagnostics::{DiagnosticsRecord, CSV_HEADER};

pub const MANIFEST: &str = "manifest.json";

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    seed: Option<u64>,
    files: &'a BTreeMap<String, String>,
}

/// Files written under one directory. Unless [`OutputDir::commit`] runs,
/// dropping the value deletes every file it wrote and any directory it
/// created.
pub struct OutputDir {
    root: PathBuf,
    created_dirs: Vec<PathBuf>,
    files: Vec<PathBuf>,
    hashes: BTreeMap<String, String>,
    committed: bool,
}

impl OutputDir {
    pub fn create(root: &Path) -> Result<Self> {
        let mut out = Self {
            root: root.to_path_buf(),
            created_dirs: Vec::new(),
            files: Vec::new(),
            hashes: BTreeMap::new(),
            committed: false,
        };
        out.ensure_dir(root)?;
        Ok(out)
    }

    fn ensure_dir(&mut self, dir: &Path) -> Result<()> {
        let mut missing = Vec::new();
        let mut cur = Some(dir);
        while let Some(d) = cur {
            if d.as_os_str().is_empty() || d.exists() {
                break;
            }
            missing.push(d.to_path_buf());
            cur = d.parent();
        }
        for d in missing.into_iter().rev() {
            fs::create_dir(&d).with_context(|| format!("creating directory {}", d.display()))?;
            self.created_dirs.push(d);
        }
        Ok(())
    }

    /// Writes `bytes` to `name` (a `/`-separated path relative to the root).
    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(name);
        if let Some(parent) = path.parent() {
            self.ensure_dir(parent)?;
        }
        fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))?;
        self.files.push(path);
        self.hashes
            .insert(name.to_owned(), hex::encode(Sha256::digest(bytes)));
        Ok(())
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(name, text.as_bytes())
    }

    pub fn write_timeseries(&mut self, name: &str, history: &[DiagnosticsRecord]) -> Result<()> {
        self.write(name, timeseries_csv(history).as_bytes())
    }

    /// Writes the manifest and keeps all files.
    pub fn commit(mut self, seed: Option<u64>) -> Result<()> {
        let hashes = std::mem::take(&mut self.hashes);
        let manifest = Manifest {
            tool: "mhdlab",
            version: env!("CARGO_PKG_VERSION"),
            seed,
            files: &hashes,
        };
        self.write_json(MANIFEST, &manifest)?;
        self.committed = true;
        Ok(())
    }
}

impl Drop for OutputDir {
    fn drop(&mut self) {
        if self.committed {
            return;
        }
        for f in &self.files {
            let _ = fs::remove_file(f);
        }
        for d in self.created_dirs.iter().rev() {
            let _ = fs::remove_dir(d);
        }
    }
}

pub fn timeseries_csv(history: &[DiagnosticsRecord]) -> String {
    let mut text = String::with_capacity(history.len() * 20 * 24 + CSV_HEADER.len() + 1);
    text.push_str(CSV_HEADER);
    text.push('\n');
    for r in history {
        text.push_str(&r.csv_row());
        text.push('\n');
    }
    text
}
