//! On-disk cache of admissible bases.
//!
//! Layout: `<root>/n<N>/d<D>/<tag>.txt`. The file holds a versioned header
//! line followed by one monomial per line, so two runs of the same command
//! write byte-identical files. Wall time and solver version go to a sidecar
//! `<tag>.meta.json`. A `<tag>.lock` file admits one writer per key.

use std::fs::{self, OpenOptions};
use std::io::ErrorKind;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use peterson::f2poly::Monomial;
use peterson::HitError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const SCHEMA_VERSION: u32 = 1;
pub const CACHE_DIR_ENV: &str = "PETERSON_CACHE_DIR";
const MAGIC: &str = "peterson-cache";
const LOCK_WAIT: Duration = Duration::from_secs(600);

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CacheKey {
    pub n: usize,
    pub d: u32,
    /// Subspace tag: `all`, `zero`, `plus`, or `weight-<omega>-<part>`.
    pub tag: String,
}

impl CacheKey {
    pub fn new(n: usize, d: u32, tag: impl Into<String>) -> Self {
        CacheKey { n, d, tag: tag.into() }
    }

    fn dir(&self, root: &Path) -> PathBuf {
        root.join(format!("n{}", self.n)).join(format!("d{}", self.d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CacheEntry {
    pub key: CacheKey,
    pub dim: usize,
    pub basis: Vec<Monomial>,
    pub digest: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheMeta {
    pub schema: u32,
    pub solver_version: String,
    pub wall_ms: u64,
}

/// Monomials one per line, each followed by a newline.
pub fn canonical_text(basis: &[Monomial]) -> String {
    let mut out = String::new();
    for m in basis {
        out.push_str(&m.to_string());
        out.push('\n');
    }
    out
}

pub fn digest(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn header(key: &CacheKey, dim: usize, digest: &str) -> String {
    format!("{MAGIC} v{SCHEMA_VERSION} n={} d={} tag={} dim={dim} sha256={digest}", key.n, key.d, key.tag)
}

fn corrupt(path: &Path, why: impl std::fmt::Display) -> CliError {
    CliError::Hit(HitError::Cache(format!("{}: {why}", path.display())))
}

struct LockGuard(PathBuf);

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.0);
    }
}

#[derive(Clone, Debug)]
pub struct Cache {
    root: PathBuf,
}

impl Cache {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Cache { root: root.into() }
    }

    /// `$PETERSON_CACHE_DIR`, else `$XDG_CACHE_HOME/peterson`, else
    /// `$HOME/.cache/peterson`.
    pub fn default_root() -> Option<PathBuf> {
        if let Some(dir) = std::env::var_os(CACHE_DIR_ENV) {
            return Some(PathBuf::from(dir));
        }
        if let Some(dir) = std::env::var_os("XDG_CACHE_HOME") {
            return Some(PathBuf::from(dir).join("peterson"));
        }
        std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("peterson"))
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path(&self, key: &CacheKey) -> PathBuf {
        key.dir(&self.root).join(format!("{}.txt", key.tag))
    }

    fn meta_path(&self, key: &CacheKey) -> PathBuf {
        key.dir(&self.root).join(format!("{}.meta.json", key.tag))
    }

    fn lock_path(&self, key: &CacheKey) -> PathBuf {
        key.dir(&self.root).join(format!("{}.lock", key.tag))
    }

    /// Reads and verifies an entry; `None` when absent.
    pub fn load(&self, key: &CacheKey) -> CliResult<Option<CacheEntry>> {
        let path = self.path(key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(CliError::io(&path, e)),
        };
        let (head, body) = text.split_once('\n').ok_or_else(|| corrupt(&path, "missing header"))?;
        let fields: Vec<&str> = head.split(' ').collect();
        if fields.len() != 7 || fields[0] != MAGIC {
            return Err(corrupt(&path, "malformed header"));
        }
        if fields[1] != format!("v{SCHEMA_VERSION}") {
            // other schema versions are treated as absent
            return Ok(None);
        }
        let field = |i: usize, name: &str| {
            fields[i].strip_prefix(name).and_then(|v| v.strip_prefix('=')).ok_or_else(|| corrupt(&path, format!("expected {name}")))
        };
        if field(2, "n")? != key.n.to_string() || field(3, "d")? != key.d.to_string() || field(4, "tag")? != key.tag {
            return Err(corrupt(&path, "header names a different key"));
        }
        let dim: usize = field(5, "dim")?.parse().map_err(|e| corrupt(&path, e))?;
        let stored = field(6, "sha256")?.to_string();
        if digest(body) != stored {
            return Err(corrupt(&path, "digest mismatch"));
        }
        let basis = body
            .lines()
            .map(|l| l.parse::<Monomial>().map_err(|e| corrupt(&path, e)))
            .collect::<CliResult<Vec<_>>>()?;
        if basis.len() != dim {
            return Err(corrupt(&path, format!("header says {dim} monomials, found {}", basis.len())));
        }
        Ok(Some(CacheEntry { key: key.clone(), dim, basis, digest: stored }))
    }

    fn lock(&self, key: &CacheKey) -> CliResult<LockGuard> {
        let path = self.lock_path(key);
        let start = Instant::now();
        loop {
            match OpenOptions::new().write(true).create_new(true).open(&path) {
                Ok(_) => return Ok(LockGuard(path)),
                Err(e) if e.kind() == ErrorKind::AlreadyExists => {
                    if start.elapsed() > LOCK_WAIT {
                        return Err(corrupt(&path, "lock held too long; remove it if no writer is running"));
                    }
                    std::thread::sleep(Duration::from_millis(50));
                }
                Err(e) => return Err(CliError::io(&path, e)),
            }
        }
    }

    /// Writes an entry under the key's lock, replacing the file atomically.
    pub fn store(&self, key: &CacheKey, basis: &[Monomial], wall_ms: u64) -> CliResult<CacheEntry> {
        let dir = key.dir(&self.root);
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let _guard = self.lock(key)?;
        self.write_locked(key, basis, wall_ms)
    }

    fn write_locked(&self, key: &CacheKey, basis: &[Monomial], wall_ms: u64) -> CliResult<CacheEntry> {
        let body = canonical_text(basis);
        let sum = digest(&body);
        let path = self.path(key);
        let tmp = path.with_extension("txt.tmp");
        let text = format!("{}\n{body}", header(key, basis.len(), &sum));
        fs::write(&tmp, text).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;
        let meta = CacheMeta { schema: SCHEMA_VERSION, solver_version: env!("CARGO_PKG_VERSION").into(), wall_ms };
        let meta_path = self.meta_path(key);
        fs::write(&meta_path, serde_json::to_string_pretty(&meta)?).map_err(|e| CliError::io(&meta_path, e))?;
        Ok(CacheEntry { key: key.clone(), dim: basis.len(), basis: basis.to_vec(), digest: sum })
    }

    /// Loads the entry, or computes and stores it. The flag reports a hit.
    pub fn get_or_compute(
        &self,
        key: &CacheKey,
        compute: impl FnOnce() -> CliResult<Vec<Monomial>>,
    ) -> CliResult<(CacheEntry, bool)> {
        if let Some(e) = self.load(key)? {
            return Ok((e, true));
        }
        let dir = key.dir(&self.root);
        fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
        let _guard = self.lock(key)?;
        // another writer may have finished while we waited
        if let Some(e) = self.load(key)? {
            return Ok((e, true));
        }
        let start = Instant::now();
        let basis = compute()?;
        let entry = self.write_locked(key, &basis, start.elapsed().as_millis() as u64)?;
        Ok((entry, false))
    }

    pub fn meta(&self, key: &CacheKey) -> CliResult<Option<CacheMeta>> {
        let path = self.meta_path(key);
        match fs::read_to_string(&path) {
            Ok(t) => Ok(Some(serde_json::from_str(&t)?)),
            Err(e) if e.kind() == ErrorKind::NotFound => Ok(None),
            Err(e) => Err(CliError::io(&path, e)),
        }
    }
}
