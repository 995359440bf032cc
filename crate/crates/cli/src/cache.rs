//! On-disk result cache. One JSON file per key; an entry is reused only if
//! its key, tool version and payload hash all match.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CacheEntry {
    key: String,
    tool_version: String,
    sha256: String,
    payload: Value,
}

fn digest(payload: &Value) -> String {
    hex::encode(Sha256::digest(payload.to_string().as_bytes()))
}

/// File name for a key: keep `[a-z0-9]`, turn everything else into `-`.
fn file_name(key: &str) -> String {
    let stem: String = key
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
        .collect();
    format!("{stem}.json")
}

pub struct Cache {
    dir: Option<PathBuf>,
}

impl Cache {
    pub fn new(dir: Option<PathBuf>) -> Self {
        Cache { dir }
    }

    pub fn disabled() -> Self {
        Cache { dir: None }
    }

    fn path(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(file_name(key)))
    }

    fn load(path: &Path, key: &str) -> Option<Value> {
        let text = fs::read_to_string(path).ok()?;
        let entry: CacheEntry = serde_json::from_str(&text).ok()?;
        let valid = entry.key == key && entry.tool_version == TOOL_VERSION && entry.sha256 == digest(&entry.payload);
        valid.then_some(entry.payload)
    }

    fn store(path: &Path, key: &str, payload: &Value) -> io::Result<()> {
        let entry = CacheEntry {
            key: key.to_string(),
            tool_version: TOOL_VERSION.to_string(),
            sha256: digest(payload),
            payload: payload.clone(),
        };
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_string(&entry)?)?;
        fs::rename(tmp, path)
    }

    /// Cached payload for `key`, or the result of `compute`, stored for next time.
    /// Unreadable or stale entries are recomputed and overwritten.
    pub fn get_or_compute<E>(&self, key: &str, compute: impl FnOnce() -> Result<Value, E>) -> Result<Value, E> {
        let Some(path) = self.path(key) else {
            return compute();
        };
        if let Some(v) = Self::load(&path, key) {
            return Ok(v);
        }
        let v = compute()?;
        if let Err(e) = Self::store(&path, key, &v) {
            eprintln!("warning: could not write cache file {}: {e}", path.display());
        }
        Ok(v)
    }
}
