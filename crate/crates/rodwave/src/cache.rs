//! JSON pole caches keyed by `(a, b, N, tol)`.

use std::fs;
use std::path::{Path, PathBuf};

use rodwave_core::poles::build_pole_set;
use rodwave_core::{MaterialParams, PoleSet, RootConfig};
use serde::{Deserialize, Serialize};

use crate::RunResult;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CacheKey {
    pub a: f64,
    pub b: f64,
    pub n: usize,
    pub tol: f64,
}

impl CacheKey {
    pub fn new(params: &MaterialParams, n: usize, roots: &RootConfig) -> Self {
        Self { a: params.a(), b: params.b(), n, tol: roots.tol }
    }

    /// File name built from the exact bit patterns, so distinct keys never collide.
    pub fn file_name(&self) -> String {
        format!("poles-{:016x}-{:016x}-{}-{:016x}.json", self.a.to_bits(), self.b.to_bits(), self.n, self.tol.to_bits())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoleCache {
    pub key: CacheKey,
    pub poles: PoleSet,
}

impl PoleCache {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("pole sets serialize")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

pub fn cache_path(dir: &Path, key: &CacheKey) -> PathBuf {
    dir.join(key.file_name())
}

/// Poles for `params`, read from `dir` when a matching cache exists and stored
/// there otherwise. Unreadable or mismatched cache files are rebuilt.
pub fn load_or_build(
    params: &MaterialParams,
    n: usize,
    roots: &RootConfig,
    dir: Option<&Path>,
) -> RunResult<PoleSet> {
    let key = CacheKey::new(params, n, roots);
    if let Some(dir) = dir {
        let path = cache_path(dir, &key);
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(c) = PoleCache::from_json(&text) {
                if c.key == key && c.poles.len() == n && c.poles.params == *params {
                    return Ok(c.poles);
                }
            }
        }
    }
    let poles = build_pole_set(n, params, roots)?;
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
        let cache = PoleCache { key, poles };
        fs::write(cache_path(dir, &key), cache.to_json())?;
        return Ok(cache.poles);
    }
    Ok(poles)
}
