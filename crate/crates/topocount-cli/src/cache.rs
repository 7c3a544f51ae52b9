//! The persistent result cache: one JSON document holding every count the
//! tool has computed, keyed by sequence and n.
//!
//! Entries are never silently overwritten with a different value. If a
//! recomputation disagrees with a stored entry, something is corrupt (or a
//! bug crept in) and the command aborts with a cache error.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Section {
    T,
    T0,
    K,
}

impl fmt::Display for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Section::T => write!(f, "T"),
            Section::T0 => write!(f, "T0"),
            Section::K => write!(f, "k"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CacheEntry {
    pub value: u64,
    pub method: String,
    /// ISO-8601 UTC timestamp of first computation.
    pub at: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct CacheFile {
    pub schema_version: u32,
    #[serde(rename = "T", default)]
    pub t: BTreeMap<u64, CacheEntry>,
    #[serde(rename = "T0", default)]
    pub t0: BTreeMap<u64, CacheEntry>,
    #[serde(default)]
    pub k: BTreeMap<u64, CacheEntry>,
}

impl CacheFile {
    fn empty() -> Self {
        CacheFile {
            schema_version: SCHEMA_VERSION,
            t: BTreeMap::new(),
            t0: BTreeMap::new(),
            k: BTreeMap::new(),
        }
    }
}

#[derive(Debug)]
pub enum CacheError {
    Io { path: PathBuf, source: std::io::Error },
    Corrupt { path: PathBuf, detail: String },
    BadSchema { path: PathBuf, found: u32 },
    Mismatch { section: Section, n: u64, cached: u64, computed: u64 },
}

impl fmt::Display for CacheError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CacheError::Io { path, source } => {
                write!(f, "cache io failure at {}: {source}", path.display())
            }
            CacheError::Corrupt { path, detail } => {
                write!(f, "cache at {} is not readable: {detail}", path.display())
            }
            CacheError::BadSchema { path, found } => write!(
                f,
                "cache at {} has schema_version {found}, this build reads {SCHEMA_VERSION}",
                path.display()
            ),
            CacheError::Mismatch { section, n, cached, computed } => write!(
                f,
                "cache mismatch for {section}({n}): cached {cached}, recomputed {computed} \
                 (corrupted cache or a counting bug)"
            ),
        }
    }
}

impl std::error::Error for CacheError {}

pub struct Cache {
    path: PathBuf,
    data: CacheFile,
    dirty: bool,
}

impl Cache {
    pub fn load(path: &Path) -> Result<Cache, CacheError> {
        let data = if path.exists() {
            let raw = fs::read_to_string(path)
                .map_err(|source| CacheError::Io { path: path.to_owned(), source })?;
            let data: CacheFile = serde_json::from_str(&raw).map_err(|e| CacheError::Corrupt {
                path: path.to_owned(),
                detail: e.to_string(),
            })?;
            if data.schema_version != SCHEMA_VERSION {
                return Err(CacheError::BadSchema {
                    path: path.to_owned(),
                    found: data.schema_version,
                });
            }
            data
        } else {
            CacheFile::empty()
        };
        Ok(Cache { path: path.to_owned(), data, dirty: false })
    }

    fn section(&self, section: Section) -> &BTreeMap<u64, CacheEntry> {
        match section {
            Section::T => &self.data.t,
            Section::T0 => &self.data.t0,
            Section::K => &self.data.k,
        }
    }

    fn section_mut(&mut self, section: Section) -> &mut BTreeMap<u64, CacheEntry> {
        match section {
            Section::T => &mut self.data.t,
            Section::T0 => &mut self.data.t0,
            Section::K => &mut self.data.k,
        }
    }

    pub fn lookup(&self, section: Section, n: usize) -> Option<u64> {
        self.section(section).get(&(n as u64)).map(|e| e.value)
    }

    /// Write-through with mismatch detection. An existing matching entry is
    /// left untouched (its provenance and timestamp stand); a conflicting
    /// value is a hard error.
    pub fn record(
        &mut self,
        section: Section,
        n: usize,
        value: u64,
        method: &str,
    ) -> Result<(), CacheError> {
        let key = n as u64;
        if let Some(existing) = self.section(section).get(&key) {
            if existing.value != value {
                return Err(CacheError::Mismatch {
                    section,
                    n: key,
                    cached: existing.value,
                    computed: value,
                });
            }
            return Ok(());
        }
        let entry = CacheEntry {
            value,
            method: method.to_string(),
            at: chrono::Utc::now().format("%Y-%m-%dT%H:%M:%SZ").to_string(),
        };
        self.section_mut(section).insert(key, entry);
        self.dirty = true;
        Ok(())
    }

    /// Persists the cache when anything changed.
    pub fn save(&mut self) -> Result<(), CacheError> {
        if !self.dirty {
            return Ok(());
        }
        let mut body = serde_json::to_string_pretty(&self.data).expect("cache serializes");
        body.push('\n');
        fs::write(&self.path, body)
            .map_err(|source| CacheError::Io { path: self.path.clone(), source })?;
        self.dirty = false;
        Ok(())
    }

    pub fn file(&self) -> &CacheFile {
        &self.data
    }

    pub fn remove(path: &Path) -> Result<bool, CacheError> {
        match fs::remove_file(path) {
            Ok(()) => Ok(true),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(false),
            Err(source) => Err(CacheError::Io { path: path.to_owned(), source }),
        }
    }
}
