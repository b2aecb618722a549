//! On-disk result cache keyed by a SHA-256 of the crate version, the command
//! and the canonical job configuration.

use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::{CliError, CliOutput, JobConfig};

/// Overrides `--cache-dir` when set.
pub const CACHE_ENV: &str = "HBPS_CACHE_DIR";

pub fn cache_key(command: &str, cfg: &JobConfig) -> Result<String, CliError> {
    let mut h = Sha256::new();
    h.update(env!("CARGO_PKG_VERSION").as_bytes());
    h.update([0]);
    h.update(command.as_bytes());
    h.update([0]);
    h.update(serde_json::to_vec(cfg)?);
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    /// The environment variable wins over the flag; neither means no cache.
    pub fn from_option(flag: Option<PathBuf>) -> Option<Self> {
        match std::env::var_os(CACHE_ENV) {
            Some(v) if !v.is_empty() => Some(Cache::new(v)),
            _ => flag.map(Cache::new),
        }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<CliOutput>, CliError> {
        match fs::read(self.path(key)) {
            Ok(bytes) => match serde_json::from_slice(&bytes) {
                Ok(out) => Ok(Some(out)),
                // a truncated or foreign file is treated as a miss and overwritten
                Err(_) => Ok(None),
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(e.into()),
        }
    }

    /// Write through a temporary file so concurrent readers never see a partial entry.
    pub fn store(&self, key: &str, out: &CliOutput) -> Result<(), CliError> {
        fs::create_dir_all(&self.dir)?;
        let tmp = self.dir.join(format!("{key}.{}.tmp", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(out)?)?;
        fs::rename(&tmp, self.path(key))?;
        Ok(())
    }
}
