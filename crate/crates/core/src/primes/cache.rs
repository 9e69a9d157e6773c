//! On-disk prime table cache.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! b"SVLB1" | limit: u64 | bitset words: u64 * ceil(ceil(limit/2)/64) | count: u64
//! ```
//!
//! The trailing count is the checksum: the loader recomputes it from the bitset.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use super::sieve::PrimeTable;
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 5] = b"SVLB1";

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "SIEVELAB_CACHE";

pub fn write_table<W: Write>(table: &PrimeTable, mut w: W) -> Result<()> {
    w.write_all(MAGIC)?;
    w.write_all(&table.limit().to_le_bytes())?;
    for word in table.words() {
        w.write_all(&word.to_le_bytes())?;
    }
    w.write_all(&table.count().to_le_bytes())?;
    w.flush()?;
    Ok(())
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    let mut buf = [0u8; 8];
    r.read_exact(&mut buf)
        .map_err(|e| Error::Cache(format!("truncated file: {e}")))?;
    Ok(u64::from_le_bytes(buf))
}

pub fn read_table<R: Read>(mut r: R) -> Result<PrimeTable> {
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)
        .map_err(|_| Error::Cache("missing header".into()))?;
    if &magic != MAGIC {
        return Err(Error::Cache(format!("bad magic {magic:?}")));
    }
    let limit = read_u64(&mut r)?;
    if !(2..=super::SIEVE_CEILING).contains(&limit) {
        return Err(Error::Cache(format!("implausible limit {limit}")));
    }
    let nwords = ((limit + 1) / 2).div_ceil(64) as usize;
    let mut bits = Vec::with_capacity(nwords);
    for _ in 0..nwords {
        bits.push(read_u64(&mut r)?);
    }
    let stored = read_u64(&mut r)?;
    let mut rest = Vec::new();
    r.read_to_end(&mut rest)?;
    if !rest.is_empty() {
        return Err(Error::Cache(format!("{} trailing bytes", rest.len())));
    }
    let before: u64 = bits.iter().map(|w| w.count_ones() as u64).sum();
    let table = PrimeTable::from_raw(limit, bits);
    let after = table.count() - 1;
    if before != after {
        return Err(Error::Cache("bits set outside the odd range".into()));
    }
    if table.count() != stored {
        return Err(Error::Cache(format!(
            "count mismatch: stored {stored}, recomputed {}",
            table.count()
        )));
    }
    Ok(table)
}

pub fn save(table: &PrimeTable, path: &Path) -> Result<()> {
    write_table(table, BufWriter::new(File::create(path)?))
}

pub fn load(path: &Path) -> Result<PrimeTable> {
    read_table(BufReader::new(File::open(path)?))
}

pub fn cache_path(dir: &Path, limit: u64) -> PathBuf {
    dir.join(format!("primes-{limit}.svlb"))
}

/// Loads the table for `limit` from `dir`, sieving and storing it on a miss.
/// A corrupt cache file is replaced.
pub fn load_or_sieve(dir: &Path, limit: u64) -> Result<PrimeTable> {
    let path = cache_path(dir, limit);
    if path.exists() {
        if let Ok(t) = load(&path) {
            if t.limit() == limit {
                return Ok(t);
            }
        }
    }
    let table = PrimeTable::sieve(limit)?;
    std::fs::create_dir_all(dir)?;
    save(&table, &path)?;
    Ok(table)
}

/// Sieves up to `limit`, going through the cache directory in `SIEVELAB_CACHE` when set.
pub fn table_from_env(limit: u64) -> Result<PrimeTable> {
    match std::env::var_os(CACHE_ENV) {
        Some(dir) if !dir.is_empty() => load_or_sieve(Path::new(&dir), limit),
        _ => PrimeTable::sieve(limit),
    }
}
