//! Run manifest: resolved configuration, seed, version, and a checksum for
//! every file the command wrote.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

#[derive(Serialize)]
struct OutputRecord {
    path: String,
    sha256: String,
    bytes: u64,
}

#[derive(Serialize)]
struct Manifest<'a> {
    command: String,
    version: &'static str,
    seed: u64,
    config: &'a RunConfig,
    timing_ms: u128,
    outputs: Vec<OutputRecord>,
}

pub struct ManifestBuilder {
    command: String,
    started: Instant,
    outputs: Vec<PathBuf>,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            started: Instant::now(),
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    /// Writes `manifest.json` next to the outputs.
    pub fn write(self, cfg: &RunConfig) -> Result<PathBuf> {
        let mut outputs = Vec::with_capacity(self.outputs.len());
        for path in &self.outputs {
            let bytes = std::fs::read(path)
                .with_context(|| format!("cannot hash output {}", path.display()))?;
            let mut hasher = Sha256::new();
            hasher.update(&bytes);
            let digest = hasher.finalize();
            outputs.push(OutputRecord {
                path: path
                    .file_name()
                    .map(|n| n.to_string_lossy().into_owned())
                    .unwrap_or_else(|| path.display().to_string()),
                sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
                bytes: bytes.len() as u64,
            });
        }
        let manifest = Manifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION"),
            seed: cfg.seed,
            config: cfg,
            timing_ms: self.started.elapsed().as_millis(),
            outputs,
        };
        let path = cfg.out.join("manifest.json");
        let json = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, json).with_context(|| format!("cannot write {}", path.display()))?;
        Ok(path)
    }
}
