//! On-disk atlas cache. One JSON file per key; writes go to a temporary
//! file in the same directory and are renamed into place, so concurrent
//! runs never see a partial entry.

use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use relgor::homcalc::{enumerate_indecomposables, Atlas, AtlasData, HomcalcError, Method};
use relgor::quiver::Algebra;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Bumped whenever the atlas format or the enumeration changes.
pub const ENGINE_VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "+atlas.2");

/// Default cache directory when `--cache` is not given.
pub const CACHE_DIR_ENV: &str = "RELGOR_CACHE_DIR";

#[derive(Serialize, Deserialize)]
struct Entry {
    engine: String,
    key: String,
    /// sha256 of the serialized atlas.
    digest: String,
    atlas: AtlasData,
}

fn digest(atlas: &AtlasData) -> String {
    hex::encode(Sha256::digest(serde_json::to_vec(atlas).expect("atlas serializes")))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CacheEvent {
    Hit,
    /// Computed and stored.
    Stored,
    /// Computed; nothing was stored.
    Uncached,
}

/// Content hash of the canonical algebra JSON, the characteristic and the
/// engine version.
pub fn cache_key(alg: &Algebra) -> String {
    let canonical = serde_json::to_string(&alg.description()).expect("description serializes");
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    h.update(format!("\np={}\nengine={ENGINE_VERSION}", alg.field().characteristic()).as_bytes());
    hex::encode(h.finalize())
}

pub struct AtlasCache {
    dir: PathBuf,
}

impl AtlasCache {
    pub fn new(dir: impl Into<PathBuf>) -> AtlasCache {
        AtlasCache { dir: dir.into() }
    }

    /// `--cache`, else the environment variable, else none.
    pub fn from_flag(flag: Option<&Path>) -> Option<AtlasCache> {
        flag.map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CACHE_DIR_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
            .map(AtlasCache::new)
    }

    pub fn path_for(&self, alg: &Algebra) -> PathBuf {
        self.dir.join(format!("atlas-{}.json", cache_key(alg)))
    }

    /// A stored atlas, if present and sound. Anything unreadable is removed
    /// with a warning.
    pub fn load(&self, alg: &Arc<Algebra>, warnings: &mut Vec<String>) -> Option<Atlas> {
        let path = self.path_for(alg);
        let bytes = match fs::read(&path) {
            Ok(b) => b,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return None,
            Err(e) => {
                warnings.push(format!("cache entry {} unreadable ({e}); recomputing", path.display()));
                return None;
            }
        };
        let key = cache_key(alg);
        let parsed = serde_json::from_slice::<Entry>(&bytes)
            .map_err(|e| e.to_string())
            .and_then(|entry| {
                if entry.key != key || entry.engine != ENGINE_VERSION {
                    return Err("key or engine version mismatch".to_string());
                }
                if entry.digest != digest(&entry.atlas) {
                    return Err("digest mismatch".to_string());
                }
                Atlas::from_data(alg, &entry.atlas)
            });
        match parsed {
            Ok(atlas) => Some(atlas),
            Err(e) => {
                warnings.push(format!("discarding corrupted cache entry {} ({e}); recomputing", path.display()));
                let _ = fs::remove_file(&path);
                None
            }
        }
    }

    pub fn store(&self, alg: &Algebra, atlas: &Atlas, warnings: &mut Vec<String>) -> bool {
        let data = atlas.to_data();
        let entry = Entry {
            engine: ENGINE_VERSION.to_string(),
            key: cache_key(alg),
            digest: digest(&data),
            atlas: data,
        };
        let bytes = serde_json::to_vec(&entry).expect("atlas serializes");
        let path = self.path_for(alg);
        match write_atomic(&self.dir, &path, &bytes) {
            Ok(()) => true,
            Err(e) => {
                warnings.push(format!("cache directory {} not writable ({e}); continuing uncached", self.dir.display()));
                false
            }
        }
    }
}

static TMP_COUNTER: AtomicUsize = AtomicUsize::new(0);

fn write_atomic(dir: &Path, path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.{}.{}.tmp",
        path.file_name().and_then(|n| n.to_str()).unwrap_or("entry"),
        std::process::id(),
        TMP_COUNTER.fetch_add(1, Ordering::Relaxed)
    ));
    let result = fs::write(&tmp, bytes).and_then(|()| fs::rename(&tmp, path));
    if result.is_err() {
        let _ = fs::remove_file(&tmp);
    }
    result
}

/// The atlas of `alg`, from the cache when possible.
pub fn obtain_atlas(
    alg: &Arc<Algebra>,
    cache: Option<&AtlasCache>,
    warnings: &mut Vec<String>,
) -> Result<(Atlas, CacheEvent), HomcalcError> {
    if let Some(atlas) = cache.and_then(|c| c.load(alg, warnings)) {
        return Ok((atlas, CacheEvent::Hit));
    }
    let atlas = enumerate_indecomposables(alg, &Method::default())?;
    let event = match cache {
        Some(c) if c.store(alg, &atlas, warnings) => CacheEvent::Stored,
        _ => CacheEvent::Uncached,
    };
    Ok((atlas, event))
}
