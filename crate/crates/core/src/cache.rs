//! On-disk JSON cache for series and fitted polynomials.
//!
//! The directory comes from `PILLOWVOL_CACHE_DIR`, else the user cache
//! directory. Entries carry a schema tag; unreadable, corrupt or
//! out-of-date entries count as misses.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::Result;

pub const ENV_VAR: &str = "PILLOWVOL_CACHE_DIR";

/// Bumped whenever cached content could change meaning.
pub const SCHEMA: &str = concat!("pillowvol-", env!("CARGO_PKG_VERSION"), "-s1");

#[derive(Clone, Debug)]
pub struct DiskCache {
    dir: PathBuf,
}

#[derive(Serialize, Deserialize)]
struct Envelope<T> {
    schema: String,
    key: String,
    value: T,
}

impl DiskCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    /// `$PILLOWVOL_CACHE_DIR`, else `<user cache dir>/pillowvol`.
    pub fn default_dir() -> Option<PathBuf> {
        match std::env::var_os(ENV_VAR) {
            Some(d) if !d.is_empty() => Some(PathBuf::from(d)),
            _ => dirs::cache_dir().map(|d| d.join("pillowvol")),
        }
    }

    pub fn from_env() -> Option<Self> {
        Self::default_dir().map(Self::new)
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, key: &str) -> PathBuf {
        let name: String = key
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '_' })
            .collect();
        // distinct keys can sanitize alike; the stored key disambiguates
        let hash = key.bytes().fold(0xcbf29ce484222325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100000001b3));
        self.dir.join(format!("{name}-{hash:016x}.json"))
    }

    pub fn get<T: DeserializeOwned>(&self, key: &str) -> Option<T> {
        let bytes = std::fs::read(self.path(key)).ok()?;
        let env: Envelope<T> = serde_json::from_slice(&bytes).ok()?;
        (env.schema == SCHEMA && env.key == key).then_some(env.value)
    }

    pub fn put<T: Serialize>(&self, key: &str, value: &T) -> Result<()> {
        std::fs::create_dir_all(&self.dir)?;
        let env = Envelope { schema: SCHEMA.to_string(), key: key.to_string(), value };
        let tmp = self.path(key).with_extension("tmp");
        std::fs::write(&tmp, serde_json::to_vec(&env)?)?;
        std::fs::rename(tmp, self.path(key))?;
        Ok(())
    }

    /// Removes every cache entry; returns how many files went away.
    pub fn clear(&self) -> Result<usize> {
        let Ok(rd) = std::fs::read_dir(&self.dir) else {
            return Ok(0);
        };
        let mut n = 0;
        for e in rd.flatten() {
            if e.path().extension().is_some_and(|x| x == "json") {
                std::fs::remove_file(e.path())?;
                n += 1;
            }
        }
        Ok(n)
    }

    pub fn len(&self) -> usize {
        std::fs::read_dir(&self.dir)
            .map(|rd| rd.flatten().filter(|e| e.path().extension().is_some_and(|x| x == "json")).count())
            .unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_corruption() {
        let dir = tempfile::tempdir().unwrap();
        let c = DiskCache::new(dir.path());
        assert_eq!(c.get::<Vec<String>>("k([2],[1,1])"), None);
        c.put("k([2],[1,1])", &vec!["1/2".to_string()]).unwrap();
        assert_eq!(c.get::<Vec<String>>("k([2],[1,1])"), Some(vec!["1/2".to_string()]));
        assert_eq!(c.len(), 1);
        std::fs::write(c.path("k([2],[1,1])"), b"{ not json").unwrap();
        assert_eq!(c.get::<Vec<String>>("k([2],[1,1])"), None);
        assert_eq!(c.clear().unwrap(), 1);
        assert!(c.is_empty());
    }
}
