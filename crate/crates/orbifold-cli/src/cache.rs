use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use orbifold_core::duval::FamilySpec;
use serde_json::Value;
use tempfile::NamedTempFile;

use crate::error::CliError;

/// Result cache: one JSON file per (kind, family, parameters, conductor).
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn open(dir: &Path) -> Result<Cache, CliError> {
        fs::create_dir_all(dir)?;
        Ok(Cache { dir: dir.to_path_buf() })
    }

    fn path(&self, kind: &str, spec: &FamilySpec, conductor: u32) -> PathBuf {
        let name = format!("{kind}-{}-m{}-n{}-r{}-s{}-c{conductor}.json", spec.family, spec.m, spec.n, spec.r, spec.s);
        self.dir.join(name)
    }

    fn load(&self, path: &Path) -> Option<Value> {
        let text = fs::read_to_string(path).ok()?;
        serde_json::from_str(&text).ok()
    }

    /// Writes to a temporary file in the cache directory, then renames it into place.
    fn store(&self, path: &Path, value: &Value) -> Result<(), CliError> {
        let mut tmp = NamedTempFile::new_in(&self.dir)?;
        tmp.write_all(serde_json::to_string(value)?.as_bytes())?;
        tmp.persist(path).map_err(|e| CliError::Cache(e.error))?;
        Ok(())
    }
}

pub fn cached(
    cache: Option<&Cache>,
    kind: &str,
    spec: &FamilySpec,
    conductor: u32,
    compute: impl FnOnce() -> Result<Value, CliError>,
) -> Result<Value, CliError> {
    let Some(cache) = cache else { return compute() };
    let path = cache.path(kind, spec, conductor);
    if let Some(v) = cache.load(&path) {
        return Ok(v);
    }
    let v = compute()?;
    cache.store(&path, &v)?;
    Ok(v)
}
