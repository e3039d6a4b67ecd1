//! Content-addressed report cache: key = hash of (canonical GCM form,
//! operation, parameters, convention version); value = the rendered report
//! bytes. Writes are atomic (temp file then rename), hits reproduce output
//! byte for byte.

use anyhow::{anyhow, Context, Result};
use kmstab::gcm::Gcm;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::{Path, PathBuf};

/// Hash of the canonical serialization: nodes sorted ascending, entries
/// sorted by (i, j). Invariant under node-list reordering, sensitive to
/// any entry change. Labeled-graph isomorphism is deliberately NOT
/// quotiented out.
pub fn canonical_hash(g: &Gcm) -> String {
    let canonical = g
        .restrict(&g.node_set())
        .expect("restriction to the full node set cannot fail");
    let mut hasher = Sha256::new();
    hasher.update(canonical.to_json().as_bytes());
    hex::encode(hasher.finalize())
}

pub fn cache_key(gcm_hash: &str, operation: &str, params: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(gcm_hash.as_bytes());
    hasher.update(b"|");
    hasher.update(operation.as_bytes());
    hasher.update(b"|");
    hasher.update(params.as_bytes());
    hasher.update(b"|");
    hasher.update(kmstab::CONVENTION_VERSION.as_bytes());
    hex::encode(hasher.finalize())
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    /// `dir = None` disables caching entirely.
    pub fn new(dir: Option<PathBuf>) -> Cache {
        Cache { dir }
    }

    pub fn lookup(&self, key: &str) -> Result<Option<String>> {
        let Some(dir) = &self.dir else { return Ok(None) };
        let path = dir.join(key);
        if !path.exists() {
            return Ok(None);
        }
        let bytes = fs::read(&path)
            .with_context(|| format!("cache entry {} is unreadable", path.display()))?;
        let text = String::from_utf8(bytes)
            .map_err(|_| anyhow!("cache entry {} is corrupt (not UTF-8)", path.display()))?;
        Ok(Some(text))
    }

    pub fn store(&self, key: &str, value: &str) -> Result<()> {
        let Some(dir) = &self.dir else { return Ok(()) };
        fs::create_dir_all(dir)
            .with_context(|| format!("cannot create cache directory {}", dir.display()))?;
        let tmp = dir.join(format!("{key}.tmp"));
        fs::write(&tmp, value.as_bytes())
            .with_context(|| format!("cannot write cache entry {}", tmp.display()))?;
        fs::rename(&tmp, dir.join(key)).context("cannot finalize cache entry")?;
        Ok(())
    }
}

pub fn default_cache_dir() -> PathBuf {
    if let Ok(dir) = std::env::var("KMSTAB_CACHE_DIR") {
        return PathBuf::from(dir);
    }
    Path::new(".kmstab-cache").to_path_buf()
}
