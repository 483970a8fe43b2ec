//! Append-only JSON-lines store of computed invariants.

use std::fs::OpenOptions;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use refined_tropical::analysis::Engine;
use refined_tropical::RefinedPoly;
use serde::{Deserialize, Serialize};

pub const ENV_VAR: &str = "REFINED_COUNT_CACHE";
pub const DEFAULT_PATH: &str = ".gcache.jsonl";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheKey {
    pub spec: String,
    pub genus: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub engine: Engine,
    pub value: RefinedPoly,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

pub struct Cache {
    path: PathBuf,
    entries: Vec<CacheEntry>,
}

impl Cache {
    pub fn default_path() -> PathBuf {
        std::env::var_os(ENV_VAR).map_or_else(|| PathBuf::from(DEFAULT_PATH), PathBuf::from)
    }

    /// Loads the cache, skipping unreadable lines with a warning.
    pub fn open(path: &Path) -> io::Result<Self> {
        let text = match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == io::ErrorKind::NotFound => String::new(),
            Err(e) => return Err(e),
        };
        let mut entries = Vec::new();
        for (i, line) in text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty())
        {
            match serde_json::from_str::<CacheEntry>(line) {
                Ok(e) => entries.push(e),
                Err(err) => eprintln!(
                    "warning: {}:{}: skipping corrupt cache line: {err}",
                    path.display(),
                    i + 1
                ),
            }
        }
        Ok(Cache {
            path: path.to_path_buf(),
            entries,
        })
    }

    /// The most recent value stored for this key and engine.
    pub fn get(&self, key: &CacheKey, engine: Engine) -> Option<&RefinedPoly> {
        self.entries
            .iter()
            .rev()
            .find(|e| e.key == *key && e.engine == engine)
            .map(|e| &e.value)
    }

    pub fn put(&mut self, key: CacheKey, engine: Engine, value: RefinedPoly) -> io::Result<()> {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        let entry = CacheEntry {
            key,
            engine,
            value,
            timestamp,
        };
        let mut line = serde_json::to_string(&entry).map_err(io::Error::other)?;
        line.push('\n');
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&self.path)?;
        file.write_all(line.as_bytes())?;
        self.entries.push(entry);
        Ok(())
    }
}
