//! Persistent store for computed counts.
//!
//! One record per line: `v1<TAB>k<TAB>d;m1,...,mk<TAB>N`, with `m` in
//! non-increasing order. Files are replaced atomically (temp file + rename).
//! Malformed or implausible lines are reported and skipped.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_bigint::{BigInt, Sign};

use super::GwEngine;
use crate::error::{Error, Result};
use crate::lattice::{DivisorClass, SurfaceModel};

pub const CACHE_VERSION: &str = "v1";

/// Environment variable naming the cache file.
pub const CACHE_ENV: &str = "DPCOUNT_CACHE";

#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct CacheLoadReport {
    pub loaded: usize,
    /// `(line number, reason)` for each skipped line.
    pub rejected: Vec<(usize, String)>,
}

pub fn format_record(class: &DivisorClass, value: &BigInt) -> String {
    format!("{CACHE_VERSION}\t{}\t{class}\t{value}", class.k())
}

/// Parses one record; the error string says why the line is unusable.
pub fn parse_record(line: &str) -> std::result::Result<(DivisorClass, BigInt), String> {
    let fields: Vec<&str> = line.split('\t').collect();
    let [version, k, class, value] = fields.as_slice() else {
        return Err(format!("expected 4 tab-separated fields, found {}", fields.len()));
    };
    if *version != CACHE_VERSION {
        return Err(format!("unknown record version `{version}`"));
    }
    let k: usize = k.parse().map_err(|_| format!("bad k `{k}`"))?;
    let class: DivisorClass = class.parse().map_err(|e: Error| e.to_string())?;
    SurfaceModel::new(k).map_err(|e| e.to_string())?;
    if class.k() != k {
        return Err(format!("class {class} does not have k = {k} entries"));
    }
    if !class.is_canonical() {
        return Err(format!("class {class} is not in canonical order"));
    }
    let value: BigInt = value.parse().map_err(|_| format!("bad count `{value}`"))?;
    if value.sign() == Sign::Minus {
        return Err(format!("negative count {value}"));
    }
    Ok((class, value))
}

impl GwEngine {
    /// Merges a cache file into the memo table. A missing file is an empty cache.
    pub fn load_cache(&self, path: &Path) -> Result<CacheLoadReport> {
        let text = match fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(CacheLoadReport::default()),
            Err(source) => {
                return Err(Error::Cache {
                    path: path.display().to_string(),
                    source,
                })
            }
        };
        let mut report = CacheLoadReport::default();
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            match parse_record(line).and_then(|(class, value)| self.admit(class, value)) {
                Ok(()) => report.loaded += 1,
                Err(reason) => report.rejected.push((i + 1, reason)),
            }
        }
        Ok(report)
    }

    /// Seeds and filtered classes are never stored; a record for one must agree with them.
    fn admit(&self, class: DivisorClass, value: BigInt) -> std::result::Result<(), String> {
        let surface = SurfaceModel::of(&class).map_err(|e| e.to_string())?;
        if let Some(seed) = self.seed_value(&surface, &class) {
            return if value == BigInt::from(seed) {
                Ok(())
            } else {
                Err(format!("{class} is a seed with N = {seed}, cache says {value}"))
            };
        }
        if self.quick_vanishing(&surface, &class) {
            return if value == BigInt::from(0) {
                Ok(())
            } else {
                Err(format!("{class} certainly vanishes, cache says {value}"))
            };
        }
        if let Some(prev) = self.memo_get(&class) {
            if prev != value {
                return Err(format!("{class} = {value} conflicts with an earlier value {prev}"));
            }
        }
        self.memo_insert(class, value);
        Ok(())
    }

    /// Writes every memoized value, replacing `path` atomically.
    pub fn save_cache(&self, path: &Path) -> Result<usize> {
        let io_err = |source| Error::Cache {
            path: path.display().to_string(),
            source,
        };
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p,
            _ => Path::new("."),
        };
        let entries = self.memo_entries();
        let tmp = tempfile::NamedTempFile::new_in(dir).map_err(io_err)?;
        {
            let mut w = BufWriter::new(tmp.as_file());
            for (class, value) in &entries {
                writeln!(w, "{}", format_record(class, value)).map_err(io_err)?;
            }
            w.flush().map_err(io_err)?;
        }
        tmp.as_file().sync_all().map_err(io_err)?;
        tmp.persist(path).map_err(|e| io_err(e.error))?;
        Ok(entries.len())
    }
}
