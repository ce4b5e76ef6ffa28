use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use sha2::{Digest, Sha256};

use super::{FractalSignature, Method1Params};
use crate::error::Result;

type Slot = Arc<Mutex<Option<Arc<FractalSignature>>>>;

/// Counters reported by [`SignatureCache::stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CacheStats {
    /// Signatures actually computed.
    pub computed: usize,
    pub memory_hits: usize,
    pub disk_hits: usize,
}

/// Memoizes fractal signatures by `(key, params)`.
///
/// Each entry has its own lock, so concurrent requests for the same key
/// compute it once while other keys proceed in parallel. With a directory
/// attached, entries also persist as JSON files across runs.
#[derive(Default)]
pub struct SignatureCache {
    dir: Option<PathBuf>,
    slots: Mutex<HashMap<(String, String), Slot>>,
    computed: AtomicUsize,
    memory_hits: AtomicUsize,
    disk_hits: AtomicUsize,
}

/// Hex SHA-256 of the canonical JSON of `params`.
pub fn params_digest(params: &Method1Params) -> String {
    let json = serde_json::to_vec(params).expect("params are always serializable");
    hex(&Sha256::digest(json))
}

/// Hex SHA-256 of arbitrary bytes, used to key local files by content.
pub fn content_digest(bytes: &[u8]) -> String {
    hex(&Sha256::digest(bytes))
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn safe_key(key: &str) -> String {
    key.chars().map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' }).collect()
}

impl SignatureCache {
    pub fn in_memory() -> Self {
        Self::default()
    }

    /// Persists entries under `dir/signatures/`.
    pub fn with_dir(dir: impl AsRef<Path>) -> Self {
        Self { dir: Some(dir.as_ref().join("signatures")), ..Self::default() }
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            computed: self.computed.load(Ordering::Relaxed),
            memory_hits: self.memory_hits.load(Ordering::Relaxed),
            disk_hits: self.disk_hits.load(Ordering::Relaxed),
        }
    }

    fn disk_path(&self, key: &str, digest: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}-{}.json", safe_key(key), &digest[..16])))
    }

    fn load(&self, path: &Path, params: &Method1Params) -> Option<FractalSignature> {
        let text = fs::read_to_string(path).ok()?;
        let sig: FractalSignature = serde_json::from_str(&text).ok()?;
        (sig.params == *params).then_some(sig)
    }

    fn store(&self, path: &Path, sig: &FractalSignature) -> Result<()> {
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent)?;
        }
        let tmp = path.with_extension(format!("tmp{}", std::process::id()));
        fs::write(&tmp, serde_json::to_vec(sig)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    /// Returns the cached signature for `(key, params)`, running `compute`
    /// at most once per key across threads.
    pub fn get_or_compute(
        &self,
        key: &str,
        params: &Method1Params,
        compute: impl FnOnce() -> Result<FractalSignature>,
    ) -> Result<Arc<FractalSignature>> {
        let digest = params_digest(params);
        let slot = {
            let mut slots = self.slots.lock().expect("cache lock poisoned");
            slots.entry((key.to_string(), digest.clone())).or_default().clone()
        };
        let mut entry = slot.lock().expect("cache slot poisoned");
        if let Some(sig) = entry.as_ref() {
            self.memory_hits.fetch_add(1, Ordering::Relaxed);
            return Ok(sig.clone());
        }
        let path = self.disk_path(key, &digest);
        if let Some(sig) = path.as_deref().and_then(|p| self.load(p, params)) {
            self.disk_hits.fetch_add(1, Ordering::Relaxed);
            let sig = Arc::new(sig);
            *entry = Some(sig.clone());
            return Ok(sig);
        }
        let sig = Arc::new(compute()?);
        self.computed.fetch_add(1, Ordering::Relaxed);
        if let Some(path) = path {
            self.store(&path, &sig)?;
        }
        *entry = Some(sig.clone());
        Ok(sig)
    }
}
