//! Coefficient tables on disk, one file per convention string, named by its SHA-256.

use std::fs;
use std::path::{Path, PathBuf};

use qrenorm_core::arithmetic::{CoeffTable, TableKind};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub struct OracleCache {
    dir: PathBuf,
}

impl OracleCache {
    pub fn new(dir: &Path) -> Self {
        OracleCache { dir: dir.to_path_buf() }
    }

    pub fn key(kind: TableKind, order_d: Option<i64>, conventions: &str) -> String {
        let mut h = Sha256::new();
        h.update(format!("{}|{}|{}", kind.as_str(), order_d.map_or("-".to_string(), |d| d.to_string()), conventions));
        format!("{:x}", h.finalize())
    }

    fn path(&self, kind: TableKind, order_d: Option<i64>, conventions: &str) -> PathBuf {
        self.dir.join(format!("{}.table", Self::key(kind, order_d, conventions)))
    }

    pub fn load(&self, kind: TableKind, order_d: Option<i64>, conventions: &str) -> Result<Option<CoeffTable>, CliError> {
        let p = self.path(kind, order_d, conventions);
        if !p.exists() {
            return Ok(None);
        }
        let t = CoeffTable::from_columnar(&fs::read_to_string(&p)?)?;
        // a hash collision or a hand-edited file must not leak foreign values
        if t.kind != kind || t.order_d != order_d || t.conventions != conventions {
            return Ok(None);
        }
        Ok(Some(t))
    }

    /// Looks `i` up, computing and storing it on a miss.
    pub fn get_or_compute(
        &self,
        kind: TableKind,
        order_d: Option<i64>,
        conventions: &str,
        i: i64,
        compute: impl Fn(i64) -> qrenorm_core::Result<i64>,
    ) -> Result<(i64, bool), CliError> {
        let existing = self.load(kind, order_d, conventions)?;
        if let Some(v) = existing.as_ref().and_then(|t| t.get(i)) {
            return Ok((v, true));
        }
        let value = compute(i)?;
        let mut indices: Vec<i64> = existing.as_ref().map(|t| t.entries().keys().copied().collect()).unwrap_or_default();
        indices.push(i);
        let table = CoeffTable::from_fn(kind, order_d, conventions, indices, |j| {
            if j == i {
                Ok(value)
            } else {
                Ok(existing.as_ref().and_then(|t| t.get(j)).expect("index comes from the table"))
            }
        })?;
        fs::create_dir_all(&self.dir)?;
        let tmp = self.path(kind, order_d, conventions).with_extension("tmp");
        fs::write(&tmp, table.to_columnar())?;
        fs::rename(&tmp, self.path(kind, order_d, conventions))?;
        Ok((value, false))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miss_then_hit() {
        let dir = tempfile::tempdir().unwrap();
        let cache = OracleCache::new(dir.path());
        let f = |m: i64| Ok(m * 2);
        assert_eq!(cache.get_or_compute(TableKind::TwPos, Some(2), "test", 7, f).unwrap(), (14, false));
        assert_eq!(cache.get_or_compute(TableKind::TwPos, Some(2), "test", 7, f).unwrap(), (14, true));
        assert_eq!(cache.get_or_compute(TableKind::TwPos, Some(2), "test", 9, f).unwrap(), (18, false));
        let t = cache.load(TableKind::TwPos, Some(2), "test").unwrap().unwrap();
        assert_eq!(t.len(), 2);
        assert!(cache.load(TableKind::TwPos, Some(2), "other").unwrap().is_none());
    }

    #[test]
    fn keys_depend_on_conventions() {
        assert_ne!(OracleCache::key(TableKind::TSigma, Some(6), "a"), OracleCache::key(TableKind::TSigma, Some(6), "b"));
        assert_eq!(OracleCache::key(TableKind::TSigma, Some(6), "a").len(), 64);
    }
}
