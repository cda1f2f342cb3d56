//! Output directory layout and the resolved-input cache.
//!
//! A run is keyed by the content of everything that can change its output:
//! the command name, the fully resolved configuration, and the bytes of the
//! line catalog it reads. Artifacts are stored under `cache/<key>/` inside
//! the output directory; a later run with the same key copies them back out
//! instead of recomputing, which is byte-identical by construction.

use std::fs;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

/// An artifact file name plus its content.
pub type Artifact = (String, Vec<u8>);

pub struct Workspace {
    command: &'static str,
    out_dir: PathBuf,
    cache_enabled: bool,
    want_svg: bool,
    key: String,
}

impl Workspace {
    /// Prepares the output directory, echoes the resolved config into it and
    /// derives the cache key.
    pub fn new(command: &'static str, config: &RunConfig, catalog_bytes: &[u8]) -> Result<Self> {
        let out_dir = PathBuf::from(&config.output.dir);
        fs::create_dir_all(&out_dir).map_err(|e| CliError::io(&out_dir, e))?;

        let echo = config.to_toml();
        let echo_path = out_dir.join(format!("{command}.config.toml"));
        fs::write(&echo_path, &echo).map_err(|e| CliError::io(&echo_path, e))?;

        let mut hasher = Sha256::new();
        for part in [command.as_bytes(), echo.as_bytes(), catalog_bytes] {
            hasher.update((part.len() as u64).to_le_bytes());
            hasher.update(part);
        }
        let digest = hasher.finalize();
        let key: String = digest[..16].iter().map(|b| format!("{b:02x}")).collect();

        Ok(Self {
            command,
            out_dir,
            cache_enabled: config.output.cache,
            want_svg: config.output.svg,
            key,
        })
    }

    /// File names this run is expected to produce.
    pub fn artifact_names(&self) -> Vec<String> {
        let mut names = vec![format!("{}.csv", self.command)];
        if self.want_svg {
            names.push(format!("{}.svg", self.command));
        }
        names
    }

    fn cache_dir(&self) -> PathBuf {
        self.out_dir.join("cache").join(&self.key)
    }

    /// Artifacts recorded by a previous run with the same key, if the cache
    /// holds every expected file.
    pub fn restore(&self) -> Option<Vec<Artifact>> {
        if !self.cache_enabled {
            return None;
        }
        let dir = self.cache_dir();
        let mut found = Vec::new();
        for name in self.artifact_names() {
            match fs::read(dir.join(&name)) {
                Ok(bytes) => found.push((name, bytes)),
                Err(_) => return None,
            }
        }
        Some(found)
    }

    /// Writes artifacts into the output directory and, when asked, records
    /// them under the run key. Returns the written paths in order.
    pub fn publish(&self, artifacts: &[Artifact], record: bool) -> Result<Vec<PathBuf>> {
        let mut written = Vec::with_capacity(artifacts.len());
        for (name, bytes) in artifacts {
            let path = self.out_dir.join(name);
            fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        if record && self.cache_enabled {
            let dir = self.cache_dir();
            fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
            for (name, bytes) in artifacts {
                let path = dir.join(name);
                fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
            }
        }
        Ok(written)
    }
}
