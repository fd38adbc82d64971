//! Append-only JSON-lines catalog of certified frames.

use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::frame::FrameRecord;
use crate::io::{canonical_json, FieldSpec, FrameJson, MatrixJson, ParamsJson};

pub const CATALOG_ENV: &str = "FFFRAMES_CATALOG";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    /// SHA-256 of the canonical Gram serialization.
    pub id: String,
    pub params: ParamsJson,
    pub construction: serde_json::Value,
    pub field: FieldSpec,
    pub frame: FrameJson,
    /// Seconds since the Unix epoch.
    pub timestamp: u64,
    pub tool_version: String,
}

/// Hex SHA-256 of the compact Gram matrix JSON.
pub fn gram_id(fr: &FrameRecord) -> String {
    let text = canonical_json(&MatrixJson::of(&fr.gram()));
    hex::encode(Sha256::digest(text.as_bytes()))
}

impl CatalogEntry {
    pub fn new(fr: &FrameRecord, construction: serde_json::Value) -> CatalogEntry {
        let timestamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map_or(0, |d| d.as_secs());
        CatalogEntry {
            id: gram_id(fr),
            params: ParamsJson::of(&fr.classify(), fr.field()),
            construction,
            field: FieldSpec::of(fr.field()),
            frame: FrameJson::of(fr, false),
            timestamp,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// Rebuilds the frame and checks that both the id and the parameters
    /// are reproduced.
    pub fn reverify(&self) -> Result<bool> {
        let fr = self.frame.to_frame()?;
        Ok(gram_id(&fr) == self.id && ParamsJson::of(&fr.classify(), fr.field()) == self.params)
    }
}

/// `explicit`, else `$FFFRAMES_CATALOG`.
pub fn catalog_path(explicit: Option<&Path>) -> Option<PathBuf> {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(CATALOG_ENV).map(PathBuf::from))
}

/// Appends one line under an exclusive file lock.
pub fn append(path: &Path, entry: &CatalogEntry) -> Result<()> {
    let mut line = canonical_json(entry);
    line.push('\n');
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    file.lock()?;
    let res = file.write_all(line.as_bytes()).and_then(|_| file.flush());
    file.unlock()?;
    res.map_err(Error::from)
}

pub fn read_catalog(path: &Path) -> Result<Vec<CatalogEntry>> {
    let file = File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let entry = serde_json::from_str(&line).map_err(|e| Error::Parse {
            line: idx + 1,
            column: e.column(),
            msg: e.to_string(),
        })?;
        out.push(entry);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::exemplar;

    #[test]
    fn append_read_reverify() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.jsonl");
        for name in ["5x16", "mb-f25"] {
            let fr = exemplar(name).unwrap();
            let e = CatalogEntry::new(&fr, serde_json::json!({"kind": "exemplar", "name": name}));
            append(&path, &e).unwrap();
        }
        let entries = read_catalog(&path).unwrap();
        assert_eq!(entries.len(), 2);
        for e in &entries {
            assert!(e.reverify().unwrap());
        }
        assert_eq!(entries[0].id, gram_id(&exemplar("5x16").unwrap()));
        let mut tampered = entries[1].clone();
        tampered.params.d += 1;
        assert!(!tampered.reverify().unwrap());
    }

    #[test]
    fn bad_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cat.jsonl");
        let fr = exemplar("mb-f11").unwrap();
        append(&path, &CatalogEntry::new(&fr, serde_json::Value::Null)).unwrap();
        std::fs::OpenOptions::new()
            .append(true)
            .open(&path)
            .unwrap()
            .write_all(b"{not json}\n")
            .unwrap();
        assert!(matches!(read_catalog(&path), Err(Error::Parse { line: 2, .. })));
    }
}
