//! On-disk sieve cache.
//!
//! Layout: magic `ESSV1`, limit (u64 LE), block size (u64 LE), then a bitset
//! of u64 LE words where bit i (LSB first) is set iff i is prime.

use crate::error::{Error, Result};
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

const MAGIC: &[u8; 5] = b"ESSV1";

/// Primes ≤ `limit` from the cache, or `None` if the file covers less.
pub(super) fn load(path: &Path, limit: u64) -> Result<Option<Vec<u32>>> {
    let mut r = BufReader::new(File::open(path)?);
    let mut magic = [0u8; 5];
    r.read_exact(&mut magic)?;
    if &magic != MAGIC {
        return Err(Error::Cache(format!("{}: bad magic", path.display())));
    }
    let mut word = [0u8; 8];
    r.read_exact(&mut word)?;
    let cached_limit = u64::from_le_bytes(word);
    r.read_exact(&mut word)?;
    if cached_limit < limit {
        return Ok(None);
    }
    let nwords = (limit / 64 + 1) as usize;
    let mut primes = Vec::new();
    for w in 0..nwords {
        r.read_exact(&mut word)
            .map_err(|e| Error::Cache(format!("{}: truncated bitset ({e})", path.display())))?;
        let mut bits = u64::from_le_bytes(word);
        while bits != 0 {
            let i = w as u64 * 64 + bits.trailing_zeros() as u64;
            if i > limit {
                break;
            }
            primes.push(i as u32);
            bits &= bits - 1;
        }
    }
    Ok(Some(primes))
}

pub(super) fn save(path: &Path, limit: u64, block_size: u64, primes: &[u32]) -> Result<()> {
    let nwords = (limit / 64 + 1) as usize;
    let mut bits = vec![0u64; nwords];
    for &p in primes {
        bits[p as usize / 64] |= 1 << (p % 64);
    }
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(MAGIC)?;
    w.write_all(&limit.to_le_bytes())?;
    w.write_all(&block_size.to_le_bytes())?;
    for b in bits {
        w.write_all(&b.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}
