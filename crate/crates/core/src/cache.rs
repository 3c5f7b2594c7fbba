//! Content-addressed on-disk cache of volumes.
//!
//! Layout: `<dir>/<h[0..2]>/<h>.json`, where `h` is the SHA-256 of the
//! canonical weight-system JSON, the engine version and a caller tag.
//! Entries are written once through a temporary file and an atomic rename;
//! an existing entry is never overwritten.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::json::{function_from_json, function_to_json, weight_system_to_string, FunctionJson};
use crate::quotient::WeightSystem;
use crate::{Rational, RationalFunction};

/// Bumped whenever a change could alter computed values.
pub const ENGINE_VERSION: &str = concat!("equivol-", env!("CARGO_PKG_VERSION"), "+engine.1");

#[derive(Clone, Debug)]
pub struct Cache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Entry {
    key: String,
    engine: String,
    value: FunctionJson,
}

impl Cache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Cache { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn key(ws: &WeightSystem<Rational>, tag: &str) -> String {
        let mut h = Sha256::new();
        h.update(weight_system_to_string(ws).as_bytes());
        h.update(b"\0");
        h.update(ENGINE_VERSION.as_bytes());
        h.update(b"\0");
        h.update(tag.as_bytes());
        hex::encode(h.finalize())
    }

    pub fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.json"))
    }

    /// A readable entry for `key`; unreadable or foreign entries count as misses.
    pub fn get(&self, key: &str) -> Option<RationalFunction> {
        let text = fs::read_to_string(self.path(key)).ok()?;
        let e: Entry = serde_json::from_str(&text).ok()?;
        if e.key != key || e.engine != ENGINE_VERSION {
            return None;
        }
        function_from_json(&e.value).ok()
    }

    pub fn put(&self, key: &str, value: &RationalFunction) -> std::io::Result<()> {
        let path = self.path(key);
        if path.exists() {
            return Ok(());
        }
        let parent = path.parent().expect("entry has a parent directory");
        fs::create_dir_all(parent)?;
        let entry = Entry { key: key.into(), engine: ENGINE_VERSION.into(), value: function_to_json(value) };
        let mut tmp = tempfile::NamedTempFile::new_in(parent)?;
        tmp.write_all(serde_json::to_string_pretty(&entry).expect("serializable").as_bytes())?;
        tmp.flush()?;
        match tmp.persist_noclobber(&path) {
            Ok(_) => Ok(()),
            Err(e) if path.exists() => {
                drop(e);
                Ok(())
            }
            Err(e) => Err(e.error),
        }
    }
}
