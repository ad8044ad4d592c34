//! Append-only JSON-lines result cache keyed by a content hash.

use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::Result;
use crate::space::CodeParams;

/// Environment variable naming the default cache file.
pub const CACHE_ENV: &str = "HAMMING_CENSUS_CACHE";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheEntry {
    pub key: String,
    pub q: u32,
    pub n: u32,
    pub t: u32,
    pub operation: String,
    pub arguments_hash: String,
    /// The exact output text, replayed verbatim on a hit.
    pub payload: String,
    pub version: String,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
}

fn sha256_hex(s: &str) -> String {
    hex::encode(Sha256::digest(s.as_bytes()))
}

/// Hash of everything that determines a result.
pub fn cache_key(params: &CodeParams, operation: &str, arguments: &str) -> (String, String) {
    let arguments_hash = sha256_hex(arguments);
    let key = sha256_hex(&format!(
        "{}|{}|{}|{}|{}",
        params.q, params.n, params.t, operation, arguments_hash
    ));
    (key, arguments_hash)
}

pub struct Cache {
    path: PathBuf,
    entries: HashMap<String, String>,
}

impl Cache {
    /// Loads `path` if it exists; lines that do not parse are skipped.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut entries = HashMap::new();
        if path.exists() {
            for line in BufReader::new(File::open(&path)?).lines() {
                if let Ok(entry) = serde_json::from_str::<CacheEntry>(&line?) {
                    entries.entry(entry.key).or_insert(entry.payload);
                }
            }
        }
        Ok(Cache { path, entries })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    /// Appends an entry unless its key is already present.
    pub fn insert(&mut self, params: &CodeParams, operation: &str, arguments: &str, payload: &str) -> Result<()> {
        let (key, arguments_hash) = cache_key(params, operation, arguments);
        if self.entries.contains_key(&key) {
            return Ok(());
        }
        let entry = CacheEntry {
            key: key.clone(),
            q: params.q,
            n: params.n,
            t: params.t,
            operation: operation.to_string(),
            arguments_hash,
            payload: payload.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        };
        let mut file = OpenOptions::new().create(true).append(true).open(&self.path)?;
        writeln!(file, "{}", serde_json::to_string(&entry)?)?;
        self.entries.insert(key, payload.to_string());
        Ok(())
    }

    pub fn lookup(&self, params: &CodeParams, operation: &str, arguments: &str) -> Option<&str> {
        self.get(&cache_key(params, operation, arguments).0)
    }
}
