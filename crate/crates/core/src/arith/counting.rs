use crate::error::{Error, Result};
use crate::primes::{small_primes, PrimeTable};
use rayon::prelude::*;

/// Cap on the number of recursion nodes in [`smooth_count`].
pub const DEFAULT_SMOOTH_BUDGET: u64 = 100_000_000;
/// Longest window [`sifted_count`] will sieve.
pub const MAX_SIFT_WINDOW: u64 = 1_000_000_000;

const SIFT_CHUNK: u64 = 1 << 22;

/// Ψ(z, t): the number of n ≤ z with every prime factor ≤ t (n = 1 included).
///
/// `table` must contain every prime ≤ min(z, t).
pub fn smooth_count(table: &PrimeTable, z: f64, t: f64) -> Result<u64> {
    if !(t >= 2.0 && t <= z) || !z.is_finite() {
        return Err(Error::pre(format!("smooth_count requires 2 <= t <= z, got z={z}, t={t}")));
    }
    let zf = z.floor() as u64;
    let allowed = table.primes_up_to(t)?;
    let mut nodes = 0u64;
    count_smooth(zf, allowed, table.primes(), &mut nodes)
}

/// Integers ≤ m whose prime factors all lie in `allowed` (a prefix of `all`).
fn count_smooth(m: u64, allowed: &[u32], all: &[u32], nodes: &mut u64) -> Result<u64> {
    *nodes += 1;
    if *nodes > DEFAULT_SMOOTH_BUDGET {
        return Err(Error::Resource(format!(
            "smooth-number enumeration exceeded {DEFAULT_SMOOTH_BUDGET} nodes"
        )));
    }
    // Every integer ≤ m qualifies once no prime ≤ m is excluded.
    let next_excluded = all.get(allowed.len()).map(|&p| p as u64);
    match next_excluded {
        Some(q) if q > m => return Ok(m),
        None if allowed.last().is_some_and(|&p| p as u64 >= m) => return Ok(m),
        _ => {}
    }
    let mut total = 1; // n = 1
    for (j, &p) in allowed.iter().enumerate() {
        let p = p as u64;
        if p > m {
            break;
        }
        // n with largest prime factor p: p times a p-smooth number ≤ m/p.
        total += count_smooth(m / p, &allowed[..=j], all, nodes)?;
    }
    Ok(total)
}

/// #{x − y < n ≤ x : P⁻(n) > z}, counting n = 1 when it lies in the window.
pub fn sifted_count(x: f64, y: f64, z: f64) -> Result<u64> {
    if !(y >= 2.0 && y <= x && z >= 2.0 && z * z <= y) || !x.is_finite() {
        return Err(Error::pre(format!(
            "sifted_count requires 2 <= y <= x and 2 <= z <= sqrt(y), got x={x}, y={y}, z={z}"
        )));
    }
    let hi = x.floor() as u64;
    let lo = (x - y).floor() as u64; // window is (lo, hi]
    if hi - lo > MAX_SIFT_WINDOW {
        return Err(Error::Resource(format!(
            "sifting window of {} integers exceeds {MAX_SIFT_WINDOW}",
            hi - lo
        )));
    }
    let owned;
    let table = if z <= small_primes().limit() as f64 {
        small_primes()
    } else {
        owned = PrimeTable::build(z.floor() as u64)?;
        &owned
    };
    let primes = table.primes_up_to(z)?;
    let chunks: Vec<(u64, u64)> = (lo + 1..=hi)
        .step_by(SIFT_CHUNK as usize)
        .map(|a| (a, (a + SIFT_CHUNK - 1).min(hi)))
        .collect();
    Ok(chunks
        .into_par_iter()
        .map(|(a, b)| sift_chunk(a, b, primes))
        .sum())
}

/// Survivors in [a, b].
fn sift_chunk(a: u64, b: u64, primes: &[u32]) -> u64 {
    let mut hit = vec![false; (b - a + 1) as usize];
    for &p in primes {
        let p = p as u64;
        let mut m = a.div_ceil(p) * p;
        while m <= b {
            hit[(m - a) as usize] = true;
            m += p;
        }
    }
    hit.iter().filter(|&&h| !h).count() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    #[test]
    fn smooth_examples() {
        let t = small_primes();
        assert_eq!(smooth_count(t, 100.0, 5.0).unwrap(), 34);
        assert_eq!(smooth_count(t, 10.0, 2.0).unwrap(), 4);
        assert_eq!(smooth_count(t, 1000.5, 1000.5).unwrap(), 1000);
        assert!(smooth_count(t, 10.0, 20.0).is_err());
    }

    #[test]
    fn smooth_matches_filter() {
        let tab = small_primes();
        let lpf: Vec<u64> = (0..=100_000u64)
            .map(|n| if n == 0 { 0 } else { factorize(n).unwrap().largest_prime() })
            .collect();
        for &z in &[50u64, 999, 10_000, 100_000] {
            for &t in &[2u64, 3, 7, 30, 97, 316, 1000, 5000] {
                if t > z {
                    continue;
                }
                let expected = (1..=z).filter(|&n| lpf[n as usize] <= t).count() as u64;
                assert_eq!(smooth_count(tab, z as f64, t as f64).unwrap(), expected, "z={z} t={t}");
            }
        }
    }

    #[test]
    fn smooth_budget() {
        let err = smooth_count(small_primes(), 1e18, 1e6).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn sifted_examples() {
        let direct = (51..=100u64)
            .filter(|&n| factorize(n).unwrap().smallest_prime().is_none_or(|p| p > 7))
            .count() as u64;
        assert_eq!(sifted_count(100.0, 50.0, 7.0).unwrap(), direct);
        assert_eq!(direct, 10); // primes 53..97
        // Full sifting leaves 1 and the primes in (√x, x].
        let x = 10_000.0;
        let full = sifted_count(x, x, 100.0).unwrap();
        assert_eq!(full, 1 + 1229 - 25);
        assert!(sifted_count(100.0, 50.0, 8.0).is_err());
    }
}
