use std::collections::HashMap;
use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// One oracle call and its parsed answer. Retries of the same question have
/// increasing `attempt`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryRecord {
    pub dataset: String,
    pub model: String,
    pub source: String,
    pub target: String,
    pub source_index: usize,
    pub target_index: usize,
    pub verb: String,
    pub template_hash: String,
    #[serde(default)]
    pub attempt: u32,
    pub raw_response: String,
    /// `None` when the reply could not be parsed.
    pub parsed: Option<bool>,
    pub timestamp: u64,
}

impl QueryRecord {
    pub fn key(&self) -> CacheKey {
        CacheKey {
            dataset: self.dataset.clone(),
            model: self.model.clone(),
            source: self.source.clone(),
            target: self.target.clone(),
            verb: self.verb.clone(),
            template_hash: self.template_hash.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CacheKey {
    pub dataset: String,
    pub model: String,
    pub source: String,
    pub target: String,
    pub verb: String,
    pub template_hash: String,
}

impl std::fmt::Display for CacheKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "dataset={} model={} {} -> {} verb={:?} template={}",
            self.dataset, self.model, self.source, self.target, self.verb, self.template_hash
        )
    }
}

/// Append-only JSON-lines store of query records, indexed by key.
///
/// Appends for different keys may come from several threads. Each record is
/// written as one line and flushed, so an interrupted run loses at most the
/// line being written; a truncated final line is ignored on load.
#[derive(Debug)]
pub struct ResponseCache {
    path: Option<PathBuf>,
    inner: Mutex<CacheInner>,
}

#[derive(Debug, Default)]
struct CacheInner {
    file: Option<File>,
    index: HashMap<CacheKey, Vec<QueryRecord>>,
    order: Vec<CacheKey>,
}

impl ResponseCache {
    /// Cache that lives only in memory.
    pub fn in_memory() -> Self {
        Self {
            path: None,
            inner: Mutex::new(CacheInner::default()),
        }
    }

    /// Opens (creating if needed) a cache file and loads its records.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut inner = CacheInner::default();
        if path.exists() {
            let f = File::open(&path)
                .map_err(|e| Error::io(format!("opening cache {}", path.display()), e))?;
            let lines: Vec<String> = BufReader::new(f)
                .lines()
                .collect::<std::io::Result<_>>()
                .map_err(|e| Error::io(format!("reading cache {}", path.display()), e))?;
            let last = lines.len().saturating_sub(1);
            for (n, line) in lines.iter().enumerate() {
                if line.trim().is_empty() {
                    continue;
                }
                match serde_json::from_str::<QueryRecord>(line) {
                    Ok(rec) => inner.insert(rec),
                    Err(_) if n == last => {}
                    Err(e) => return Err(Error::json(format!("{}:{}", path.display(), n + 1), e)),
                }
            }
            ensure_trailing_newline(&path)?;
        }
        let file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&path)
            .map_err(|e| Error::io(format!("opening cache {}", path.display()), e))?;
        inner.file = Some(file);
        Ok(Self {
            path: Some(path),
            inner: Mutex::new(inner),
        })
    }

    pub fn path(&self) -> Option<&Path> {
        self.path.as_deref()
    }

    /// Records for `key`, in attempt order.
    pub fn get(&self, key: &CacheKey) -> Vec<QueryRecord> {
        let inner = self.inner.lock().expect("cache lock poisoned");
        let mut recs = inner.index.get(key).cloned().unwrap_or_default();
        recs.sort_by_key(|r| r.attempt);
        recs
    }

    pub fn append(&self, record: QueryRecord) -> Result<()> {
        let mut inner = self.inner.lock().expect("cache lock poisoned");
        if let Some(file) = inner.file.as_mut() {
            let mut line = serde_json::to_string(&record)
                .map_err(|e| Error::json("serializing query record", e))?;
            line.push('\n');
            file.write_all(line.as_bytes())
                .and_then(|_| file.flush())
                .map_err(|e| Error::io("appending to cache", e))?;
        }
        inner.insert(record);
        Ok(())
    }

    pub fn len(&self) -> usize {
        let inner = self.inner.lock().expect("cache lock poisoned");
        inner.index.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All records, grouped by key in first-seen order.
    pub fn records(&self) -> Vec<QueryRecord> {
        let inner = self.inner.lock().expect("cache lock poisoned");
        inner
            .order
            .iter()
            .flat_map(|k| inner.index[k].iter().cloned())
            .collect()
    }
}

impl CacheInner {
    fn insert(&mut self, rec: QueryRecord) {
        let key = rec.key();
        let slot = self.index.entry(key.clone()).or_insert_with(|| {
            self.order.push(key);
            Vec::new()
        });
        slot.push(rec);
    }
}

// A truncated last line would otherwise glue onto the next append.
fn ensure_trailing_newline(path: &Path) -> Result<()> {
    let bytes = std::fs::read(path).map_err(|e| Error::io("reading cache", e))?;
    if !bytes.is_empty() && !bytes.ends_with(b"\n") {
        let keep = bytes.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1);
        std::fs::write(path, &bytes[..keep]).map_err(|e| Error::io("repairing cache", e))?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn record(
        source: &str,
        target: &str,
        verb: &str,
        attempt: u32,
        raw: &str,
    ) -> QueryRecord {
        QueryRecord {
            dataset: "d".into(),
            model: "m".into(),
            source: source.into(),
            target: target.into(),
            source_index: 0,
            target_index: 1,
            verb: verb.into(),
            template_hash: "h".into(),
            attempt,
            raw_response: raw.into(),
            parsed: super::super::parse_answer(raw),
            timestamp: 0,
        }
    }

    #[test]
    fn reload_keeps_records_and_drops_truncated_tail() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        {
            let cache = ResponseCache::open(&path).unwrap();
            cache.append(record("a", "b", "cause", 0, "maybe")).unwrap();
            cache.append(record("a", "b", "cause", 1, "True")).unwrap();
            cache.append(record("b", "a", "cause", 0, "False")).unwrap();
        }
        let mut text = std::fs::read_to_string(&path).unwrap();
        text.push_str("{\"dataset\":\"d\",\"mod");
        std::fs::write(&path, text).unwrap();

        let cache = ResponseCache::open(&path).unwrap();
        assert_eq!(cache.len(), 3);
        let recs = cache.get(&record("a", "b", "cause", 0, "").key());
        assert_eq!(
            recs.iter().map(|r| r.attempt).collect::<Vec<_>>(),
            vec![0, 1]
        );
        cache.append(record("b", "a", "affect", 0, "true")).unwrap();
        drop(cache);
        assert_eq!(ResponseCache::open(&path).unwrap().len(), 4);
    }

    #[test]
    fn corrupt_middle_line_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("cache.jsonl");
        let good = serde_json::to_string(&record("a", "b", "cause", 0, "True")).unwrap();
        std::fs::write(&path, format!("{good}\nnot json\n{good}\n")).unwrap();
        assert!(ResponseCache::open(&path).is_err());
    }
}
