//! Local PDB cache backed by an HTTP download.

use std::collections::HashMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex};

use log::{debug, info};

use super::pdb::{parse_pdb, PdbId, Structure};
use crate::{Error, Result};

/// Environment variable naming the cache directory.
pub const CACHE_DIR_ENV: &str = "BSS_CACHE_DIR";
pub const DEFAULT_BASE_URL: &str = "https://files.rcsb.org/download";
/// `{base}` is the base URL, `{ID}` the upper-case id, `{id}` the lower-case id.
pub const DEFAULT_URL_TEMPLATE: &str = "{base}/{ID}.pdb";

#[derive(Debug, Clone)]
pub struct FetchConfig {
    pub cache_dir: PathBuf,
    pub base_url: String,
    pub url_template: String,
    pub offline: bool,
}

impl FetchConfig {
    pub fn new(cache_dir: impl Into<PathBuf>) -> Self {
        FetchConfig {
            cache_dir: cache_dir.into(),
            base_url: DEFAULT_BASE_URL.to_string(),
            url_template: DEFAULT_URL_TEMPLATE.to_string(),
            offline: false,
        }
    }

    pub fn offline(mut self, offline: bool) -> Self {
        self.offline = offline;
        self
    }

    pub fn url_for(&self, id: &PdbId) -> String {
        self.url_template
            .replace("{base}", self.base_url.trim_end_matches('/'))
            .replace("{ID}", &id.as_str().to_ascii_uppercase())
            .replace("{id}", id.as_str())
    }

    pub fn cache_path(&self, id: &PdbId) -> PathBuf {
        self.cache_dir.join(format!("{id}.pdb"))
    }
}

/// Return the cached file for `id`, downloading it first on a miss.
/// Returns the path and whether a network request was made.
pub fn fetch_structure(id: &PdbId, config: &FetchConfig) -> Result<(PathBuf, bool)> {
    let path = config.cache_path(id);
    if path.is_file() {
        debug!("{id}: cache hit at {}", path.display());
        return Ok((path, false));
    }
    let failed = |reason: String| Error::FetchFailed {
        id: id.to_string(),
        reason,
    };
    if config.offline {
        return Err(failed("offline and not cached".into()));
    }

    let url = config.url_for(id);
    info!("{id}: downloading {url}");
    let body = match ureq::get(&url).call() {
        Ok(mut response) => response
            .body_mut()
            .with_config()
            .limit(512 * 1024 * 1024)
            .read_to_vec()
            .map_err(|e| failed(e.to_string()))?,
        Err(ureq::Error::StatusCode(404)) => return Err(Error::UnknownPdbId(id.to_string())),
        Err(e) => return Err(failed(e.to_string())),
    };
    write_atomically(&config.cache_dir, &path, &body)?;
    Ok((path, true))
}

fn write_atomically(dir: &Path, path: &Path, bytes: &[u8]) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| Error::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| Error::io(tmp.path(), e))?;
    tmp.persist(path).map_err(|e| Error::io(path, e.error))?;
    Ok(())
}

/// Shared structure source for a run. Concurrent requests for the same id
/// perform one download and one parse.
#[derive(Debug)]
pub struct StructureStore {
    config: FetchConfig,
    locks: Mutex<HashMap<PdbId, Arc<Mutex<()>>>>,
    parsed: Mutex<HashMap<PdbId, Arc<Structure>>>,
    downloads: AtomicUsize,
}

impl StructureStore {
    pub fn new(config: FetchConfig) -> Self {
        StructureStore {
            config,
            locks: Mutex::new(HashMap::new()),
            parsed: Mutex::new(HashMap::new()),
            downloads: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &FetchConfig {
        &self.config
    }

    /// Number of network downloads this store has performed.
    pub fn downloads(&self) -> usize {
        self.downloads.load(Ordering::SeqCst)
    }

    fn lock_for(&self, id: &PdbId) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(id.clone()).or_default().clone()
    }

    pub fn fetch(&self, id: &PdbId) -> Result<PathBuf> {
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        let (path, downloaded) = fetch_structure(id, &self.config)?;
        if downloaded {
            self.downloads.fetch_add(1, Ordering::SeqCst);
        }
        Ok(path)
    }

    pub fn load(&self, id: &PdbId) -> Result<Arc<Structure>> {
        if let Some(s) = self.cached(id) {
            return Ok(s);
        }
        let lock = self.lock_for(id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        if let Some(s) = self.cached(id) {
            return Ok(s);
        }
        let (path, downloaded) = fetch_structure(id, &self.config)?;
        if downloaded {
            self.downloads.fetch_add(1, Ordering::SeqCst);
        }
        let text = std::fs::read_to_string(&path).map_err(|e| Error::io(&path, e))?;
        let structure = Arc::new(parse_pdb(id, &text)?);
        self.parsed
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .insert(id.clone(), structure.clone());
        Ok(structure)
    }

    fn cached(&self, id: &PdbId) -> Option<Arc<Structure>> {
        self.parsed
            .lock()
            .unwrap_or_else(|e| e.into_inner())
            .get(id)
            .cloned()
    }
}
