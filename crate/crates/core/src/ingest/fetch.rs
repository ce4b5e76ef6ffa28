//! Download-once cache for PDB entries.

use std::collections::HashMap;
use std::env;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};

/// `{id}` is replaced by the lower-case id, `{ID}` by the upper-case id.
pub const DEFAULT_URL_TEMPLATE: &str = "https://files.rcsb.org/download/{ID}.pdb";

/// Environment variable that overrides the cache directory.
pub const CACHE_ENV: &str = "MORPHOPROT_CACHE";

/// Outcome of a single transport request.
#[derive(Debug)]
pub enum TransportError {
    NotFound,
    Unavailable(String),
}

/// Fetches raw bytes for a URL. Implemented over HTTP by [`HttpTransport`];
/// tests substitute their own.
pub trait Transport: Send + Sync {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError>;
}

#[derive(Debug, Clone)]
pub struct HttpTransport {
    agent: ureq::Agent,
}

impl HttpTransport {
    pub fn new() -> Self {
        Self { agent: ureq::AgentBuilder::new().timeout(std::time::Duration::from_secs(60)).build() }
    }
}

impl Default for HttpTransport {
    fn default() -> Self {
        Self::new()
    }
}

impl Transport for HttpTransport {
    fn get(&self, url: &str) -> Result<Vec<u8>, TransportError> {
        match self.agent.get(url).call() {
            Ok(resp) => {
                let mut buf = Vec::new();
                resp.into_reader()
                    .read_to_end(&mut buf)
                    .map_err(|e| TransportError::Unavailable(e.to_string()))?;
                Ok(buf)
            }
            Err(ureq::Error::Status(404, _)) => Err(TransportError::NotFound),
            Err(ureq::Error::Status(code, _)) => {
                Err(TransportError::Unavailable(format!("HTTP status {code}")))
            }
            Err(e) => Err(TransportError::Unavailable(e.to_string())),
        }
    }
}

/// Checks the `[0-9][A-Za-z0-9]{3}` shape of a PDB id.
pub fn is_valid_pdb_id(id: &str) -> bool {
    let b = id.as_bytes();
    b.len() == 4 && b[0].is_ascii_digit() && b[1..].iter().all(u8::is_ascii_alphanumeric)
}

/// `$MORPHOPROT_CACHE`, else `$HOME/.cache/morphoprot`, else `./.morphoprot-cache`.
pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(dir);
    }
    match env::var_os("HOME").filter(|v| !v.is_empty()) {
        Some(home) => Path::new(&home).join(".cache").join("morphoprot"),
        None => PathBuf::from(".morphoprot-cache"),
    }
}

/// Whether a fetch was served from disk or downloaded.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FetchSource {
    Cache,
    Network,
}

pub struct Fetcher {
    cache_dir: PathBuf,
    url_template: String,
    transport: Box<dyn Transport>,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

impl Fetcher {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        Self::with_transport(cache_dir, HttpTransport::new())
    }

    pub fn with_transport(cache_dir: impl Into<PathBuf>, transport: impl Transport + 'static) -> Self {
        Self {
            cache_dir: cache_dir.into(),
            url_template: DEFAULT_URL_TEMPLATE.to_string(),
            transport: Box::new(transport),
            locks: Mutex::new(HashMap::new()),
        }
    }

    pub fn url_template(mut self, template: impl Into<String>) -> Self {
        self.url_template = template.into();
        self
    }

    pub fn cache_dir(&self) -> &Path {
        &self.cache_dir
    }

    pub fn cache_path(&self, pdb_id: &str) -> PathBuf {
        self.cache_dir.join(format!("{}.pdb", pdb_id.to_ascii_lowercase()))
    }

    pub fn url_for(&self, pdb_id: &str) -> String {
        self.url_template
            .replace("{id}", &pdb_id.to_ascii_lowercase())
            .replace("{ID}", &pdb_id.to_ascii_uppercase())
    }

    fn lock_for(&self, id: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(id.to_string()).or_default().clone()
    }

    /// Returns the PDB text for `pdb_id`, downloading it only on a cache miss.
    pub fn fetch(&self, pdb_id: &str) -> Result<String> {
        self.fetch_with_source(pdb_id).map(|(text, _)| text)
    }

    pub fn fetch_with_source(&self, pdb_id: &str) -> Result<(String, FetchSource)> {
        if !is_valid_pdb_id(pdb_id) {
            return Err(Error::InvalidId(pdb_id.to_string()));
        }
        let id = pdb_id.to_ascii_lowercase();
        let path = self.cache_path(&id);
        let lock = self.lock_for(&id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());

        match fs::read(&path) {
            Ok(bytes) => return Ok((String::from_utf8_lossy(&bytes).into_owned(), FetchSource::Cache)),
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(e) => return Err(e.into()),
        }

        let bytes = self.transport.get(&self.url_for(&id)).map_err(|e| match e {
            TransportError::NotFound => Error::NotFound(id.clone()),
            TransportError::Unavailable(reason) => Error::NetworkUnavailable { id: id.clone(), reason },
        })?;
        fs::create_dir_all(&self.cache_dir)?;
        // write-then-rename so readers never observe a partial file
        let tmp = self.cache_dir.join(format!(".{id}.pdb.part"));
        fs::write(&tmp, &bytes)?;
        fs::rename(&tmp, &path)?;
        Ok((String::from_utf8_lossy(&bytes).into_owned(), FetchSource::Network))
    }
}

/// One-shot fetch over HTTP with the default URL template.
pub fn fetch_structure(pdb_id: &str, cache_dir: impl AsRef<Path>) -> Result<String> {
    Fetcher::new(cache_dir.as_ref()).fetch(pdb_id)
}
