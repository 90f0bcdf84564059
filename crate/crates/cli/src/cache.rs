//! Change-point cache: one JSON object per line, replaced atomically on write.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sigma_lab::ChangePointRecord;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacheLine {
    pub index: u64,
    pub n_i: u64,
    pub sigma_at: u64,
    pub bits_used: u32,
}

impl From<&ChangePointRecord> for CacheLine {
    fn from(r: &ChangePointRecord) -> Self {
        CacheLine {
            index: r.index,
            n_i: r.n_i,
            sigma_at: r.sigma_at,
            bits_used: r.bits_used,
        }
    }
}

impl CacheLine {
    pub fn to_record(&self) -> ChangePointRecord {
        let mut r = ChangePointRecord::bare(self.index, self.n_i, self.bits_used);
        r.sigma_at = self.sigma_at;
        r
    }
}

/// Reads a cache file; a missing file is an empty cache.
pub fn read(path: &Path) -> Result<Vec<CacheLine>> {
    let file = match fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e).with_context(|| format!("opening cache {}", path.display())),
    };
    let mut lines = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: CacheLine = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}: malformed cache line", path.display(), k + 1))?;
        lines.push(parsed);
    }
    lines.sort_by_key(|l| l.index);
    for (k, l) in lines.iter().enumerate() {
        if l.index != k as u64 + 1 {
            bail!("{}: cache indices are not 1, 2, 3, ...", path.display());
        }
    }
    Ok(lines)
}

/// Writes to a temporary file beside `path`, then renames over it.
pub fn write(path: &Path, lines: &[CacheLine]) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("creating temporary file in {}", dir.display()))?;
    for l in lines {
        serde_json::to_writer(&mut tmp, l)?;
        tmp.write_all(b"\n")?;
    }
    tmp.as_file().sync_all()?;
    tmp.persist(path)
        .with_context(|| format!("replacing cache {}", path.display()))?;
    Ok(())
}

/// Union of the cached lines and fresh records, by index.
pub fn merge(cached: &[CacheLine], fresh: &[ChangePointRecord]) -> Vec<CacheLine> {
    let mut out: Vec<CacheLine> = cached.to_vec();
    for r in fresh {
        if !out.iter().any(|l| l.index == r.index) {
            out.push(r.into());
        }
    }
    out.sort_by_key(|l| l.index);
    out
}
