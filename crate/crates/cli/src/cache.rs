// SPDX-License-Identifier: Apache-2.0

//! Append-only newline-delimited JSON cache of 3-torsion data.

use std::collections::HashMap;
use std::fs::{self, File, OpenOptions};
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use anyhow::{bail, Context};
use mordell_core::arith::log3_exact;
use mordell_core::{class_group_summary, ClassGroupSummary, SummarySource};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheEntry {
    pub delta: i64,
    pub h: u64,
    pub three_torsion: u64,
}

impl CacheEntry {
    pub fn from_summary(s: &ClassGroupSummary) -> Self {
        Self { delta: s.delta, h: s.class_number, three_torsion: s.three_torsion }
    }

    /// Structural invariants only; a well-formed entry may still be wrong.
    pub fn check(&self) -> Result<u32, String> {
        if self.h == 0 {
            return Err("h = 0".into());
        }
        let rank = log3_exact(self.three_torsion)
            .ok_or_else(|| format!("three_torsion {} is not a power of 3", self.three_torsion))?;
        if self.h % self.three_torsion != 0 {
            return Err(format!("three_torsion {} does not divide h {}", self.three_torsion, self.h));
        }
        Ok(rank)
    }

    pub fn summary(&self) -> ClassGroupSummary {
        let three_rank = log3_exact(self.three_torsion).unwrap_or(0);
        ClassGroupSummary {
            delta: self.delta,
            class_number: self.h,
            three_torsion: self.three_torsion,
            three_rank,
        }
    }
}

/// One unreadable line of a cache file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BadLine {
    /// 1-based; 0 for entries that parsed but failed an audit.
    pub line: usize,
    pub text: String,
    pub reason: String,
}

/// Every line of a cache file, split into entries and rejects.
#[derive(Debug, Default)]
pub struct Parsed {
    pub entries: Vec<CacheEntry>,
    pub bad: Vec<BadLine>,
}

pub fn parse_file(path: &Path) -> io::Result<Parsed> {
    let mut parsed = Parsed::default();
    let file = match File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(parsed),
        Err(e) => return Err(e),
    };
    let mut seen: HashMap<i64, CacheEntry> = HashMap::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let text = line?;
        if text.trim().is_empty() {
            continue;
        }
        let reject = |reason: String| BadLine { line: i + 1, text: text.clone(), reason };
        match serde_json::from_str::<CacheEntry>(&text) {
            Err(e) => parsed.bad.push(reject(e.to_string())),
            Ok(entry) => match entry.check() {
                Err(reason) => parsed.bad.push(reject(reason)),
                Ok(_) => match seen.get(&entry.delta) {
                    Some(prev) if prev != &entry => {
                        parsed.bad.push(reject(format!("conflicts with an earlier entry for {}", entry.delta)))
                    }
                    Some(_) => {}
                    None => {
                        seen.insert(entry.delta, entry);
                        parsed.entries.push(entry);
                    }
                },
            },
        }
    }
    Ok(parsed)
}

/// A snapshot of the cache file taken at startup plus entries computed since.
#[derive(Debug)]
pub struct Cache {
    path: PathBuf,
    known: HashMap<i64, CacheEntry>,
    fresh: Mutex<Vec<CacheEntry>>,
    hits: AtomicU64,
    misses: AtomicU64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheStats {
    pub loaded: u64,
    pub hits: u64,
    pub misses: u64,
}

impl Cache {
    /// Loads `path`, which need not exist. Any bad line is an error.
    pub fn open(path: impl Into<PathBuf>) -> anyhow::Result<Self> {
        let path = path.into();
        let parsed = parse_file(&path).with_context(|| format!("reading cache {}", path.display()))?;
        if let Some(bad) = parsed.bad.first() {
            bail!(
                "corrupted cache {} at line {}: {} (run `verify --cache` to quarantine)",
                path.display(),
                bad.line,
                bad.reason
            );
        }
        let known = parsed.entries.into_iter().map(|e| (e.delta, e)).collect();
        Ok(Self { path, known, fresh: Mutex::new(Vec::new()), hits: AtomicU64::new(0), misses: AtomicU64::new(0) })
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats {
            loaded: self.known.len() as u64,
            hits: self.hits.load(Ordering::Relaxed),
            misses: self.misses.load(Ordering::Relaxed),
        }
    }

    /// Appends the entries computed since loading, sorted by `delta`, by
    /// writing the old contents plus the new lines to a temporary file beside
    /// the cache and renaming it into place. Returns the number appended.
    pub fn flush(&self) -> anyhow::Result<usize> {
        let mut fresh = std::mem::take(&mut *self.fresh.lock().expect("cache lock poisoned"));
        fresh.sort_by_key(|e| e.delta);
        fresh.dedup_by_key(|e| e.delta);
        if fresh.is_empty() {
            return Ok(0);
        }
        let mut lines = Vec::new();
        for e in &fresh {
            serde_json::to_writer(&mut lines, e)?;
            lines.push(b'\n');
        }
        append_atomically(&self.path, &lines)?;
        Ok(fresh.len())
    }
}

impl SummarySource for Cache {
    fn summary(&self, delta: i64) -> mordell_core::Result<ClassGroupSummary> {
        if let Some(e) = self.known.get(&delta) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(e.summary());
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let s = class_group_summary(delta)?;
        self.fresh.lock().expect("cache lock poisoned").push(CacheEntry::from_summary(&s));
        Ok(s)
    }
}

fn temp_beside(path: &Path) -> anyhow::Result<tempfile::NamedTempFile> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    fs::create_dir_all(&dir)?;
    Ok(tempfile::NamedTempFile::new_in(dir)?)
}

fn append_atomically(path: &Path, extra: &[u8]) -> anyhow::Result<()> {
    let old = match fs::read(path) {
        Ok(bytes) => bytes,
        Err(e) if e.kind() == io::ErrorKind::NotFound => Vec::new(),
        Err(e) => return Err(e.into()),
    };
    let mut tmp = temp_beside(path)?;
    tmp.write_all(&old)?;
    // a file cut off mid-line must not swallow the first new entry
    if old.last().is_some_and(|&b| b != b'\n') {
        tmp.write_all(b"\n")?;
    }
    tmp.write_all(extra)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("replacing cache {}", path.display()))?;
    Ok(())
}

/// Moves every bad line of `path`, and every entry rejected by `audit`, to
/// `<path>.quarantine` (appending) and rewrites the cache with what remains.
/// Returns the quarantined lines.
pub fn quarantine<F>(path: &Path, audit: F) -> anyhow::Result<Vec<BadLine>>
where
    F: Fn(&CacheEntry) -> Result<(), String>,
{
    let parsed = parse_file(path)?;
    let mut bad = parsed.bad;
    let mut kept = Vec::with_capacity(parsed.entries.len());
    for e in parsed.entries {
        match audit(&e) {
            Ok(()) => kept.push(e),
            Err(reason) => bad.push(BadLine { line: 0, text: serde_json::to_string(&e)?, reason }),
        }
    }
    if bad.is_empty() {
        return Ok(bad);
    }
    let mut qpath = path.as_os_str().to_owned();
    qpath.push(".quarantine");
    let mut q = OpenOptions::new().create(true).append(true).open(PathBuf::from(qpath))?;
    for b in &bad {
        writeln!(q, "{}", b.text)?;
    }
    q.sync_all()?;

    let mut tmp = temp_beside(path)?;
    for e in &kept {
        serde_json::to_writer(&mut tmp, e)?;
        tmp.write_all(b"\n")?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path)?;
    Ok(bad)
}
