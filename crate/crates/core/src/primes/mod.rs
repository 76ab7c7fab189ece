//! Prime tables and prime-indexed sums.

mod cache;
mod sums;
mod tail;

pub use sums::{
    mertens_sum, prime_constant_sums, prime_constant_sums_split, prime_log_power_sum,
    prime_power_sum, tau_abs_prime_sum, PrimeConstantSums, S1_REFERENCE_CUTOFF,
    S2_REFERENCE_CUTOFF,
};
pub use tail::{
    ramare_tail, PowerWeight, S1Weight, S2Weight, TailBoundSpec, TailWeight, RAMARE_C1,
};

use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use rayon::prelude::*;
use std::path::PathBuf;
use std::sync::OnceLock;

/// Default ceiling on the sieve limit.
pub const DEFAULT_SIEVE_BUDGET: u64 = 1_000_000_000;
/// Numbers per sieve segment.
pub const DEFAULT_BLOCK_SIZE: u64 = 1 << 20;

const CHECKPOINT_STRIDE: usize = 64;

#[derive(Debug, Clone)]
pub struct SieveOptions {
    pub budget: u64,
    pub block_size: u64,
    /// Read the table from this file if it covers the limit, otherwise sieve
    /// and write it.
    pub cache: Option<PathBuf>,
}

impl Default for SieveOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_SIEVE_BUDGET,
            block_size: DEFAULT_BLOCK_SIZE,
            cache: None,
        }
    }
}

/// All primes up to a limit, with prefix data for π and θ.
///
/// θ is stored at checkpoints every 64 primes; `theta` adds the remainder.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u32>,
    theta_checkpoints: Vec<f64>,
}

impl PrimeTable {
    pub fn build(limit: u64) -> Result<Self> {
        Self::build_with(limit, &SieveOptions::default())
    }

    pub fn build_with(limit: u64, opts: &SieveOptions) -> Result<Self> {
        if limit < 2 {
            return Err(Error::pre(format!("sieve limit must be at least 2, got {limit}")));
        }
        if limit > opts.budget {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds budget {}",
                opts.budget
            )));
        }
        if limit > u32::MAX as u64 {
            return Err(Error::Resource(format!(
                "sieve limit {limit} exceeds 32-bit prime storage"
            )));
        }
        if let Some(path) = &opts.cache {
            if path.exists() {
                if let Some(primes) = cache::load(path, limit)? {
                    return Ok(Self::from_primes(limit, primes));
                }
            }
            let primes = segmented_sieve(limit, opts.block_size.max(64));
            cache::save(path, limit, opts.block_size, &primes)?;
            return Ok(Self::from_primes(limit, primes));
        }
        Ok(Self::from_primes(
            limit,
            segmented_sieve(limit, opts.block_size.max(64)),
        ))
    }

    fn from_primes(limit: u64, primes: Vec<u32>) -> Self {
        let mut theta_checkpoints = Vec::with_capacity(primes.len() / CHECKPOINT_STRIDE + 1);
        let mut acc = CompensatedSum::new();
        for (i, &p) in primes.iter().enumerate() {
            if i % CHECKPOINT_STRIDE == 0 {
                theta_checkpoints.push(acc.value());
            }
            acc.add((p as f64).ln());
        }
        Self {
            limit,
            primes,
            theta_checkpoints,
        }
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }

    /// The n-th prime, 1-based.
    pub fn nth(&self, n: usize) -> Option<u64> {
        n.checked_sub(1)
            .and_then(|i| self.primes.get(i))
            .map(|&p| p as u64)
    }

    /// Primes p ≤ x. Fails if x lies beyond the table.
    pub fn primes_up_to(&self, x: f64) -> Result<&[u32]> {
        let n = self.count_checked(x)?;
        Ok(&self.primes[..n])
    }

    /// π(x).
    pub fn pi(&self, x: f64) -> Result<u64> {
        self.count_checked(x).map(|n| n as u64)
    }

    /// θ(x) = Σ_{p ≤ x} log p.
    pub fn theta(&self, x: f64) -> Result<f64> {
        let n = self.count_checked(x)?;
        let j = n / CHECKPOINT_STRIDE;
        let mut acc = CompensatedSum::new();
        let start = if j < self.theta_checkpoints.len() {
            acc.add(self.theta_checkpoints[j]);
            j * CHECKPOINT_STRIDE
        } else {
            0
        };
        acc.extend(self.primes[start..n].iter().map(|&p| (p as f64).ln()));
        Ok(acc.value())
    }

    fn count_checked(&self, x: f64) -> Result<usize> {
        if x.is_nan() {
            return Err(Error::pre("x is NaN"));
        }
        if x > self.limit as f64 {
            return Err(Error::Range {
                value: x,
                limit: self.limit,
            });
        }
        if x < 2.0 {
            return Ok(0);
        }
        let xf = x.floor() as u64;
        Ok(self.primes.partition_point(|&p| (p as u64) <= xf))
    }
}

/// Shared table of primes below 2^20, enough for trial division up to ~1.1e12.
pub fn small_primes() -> &'static PrimeTable {
    static TABLE: OnceLock<PrimeTable> = OnceLock::new();
    TABLE.get_or_init(|| PrimeTable::from_primes(1 << 20, segmented_sieve(1 << 20, DEFAULT_BLOCK_SIZE)))
}

/// Plain sieve of Eratosthenes for the base primes.
pub(crate) fn simple_sieve(n: u64) -> Vec<u32> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u32);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn segmented_sieve(limit: u64, block: u64) -> Vec<u32> {
    let root = (limit as f64).sqrt() as u64 + 1;
    let base = simple_sieve(root);
    let nblocks = limit.div_ceil(block);
    let segments: Vec<Vec<u32>> = (0..nblocks)
        .into_par_iter()
        .map(|b| {
            let lo = b * block;
            let hi = ((b + 1) * block).min(limit + 1);
            sieve_segment(lo, hi, &base)
        })
        .collect();
    let total = segments.iter().map(Vec::len).sum();
    let mut primes = Vec::with_capacity(total);
    for s in segments {
        primes.extend(s);
    }
    primes
}

/// Primes in [lo, hi).
fn sieve_segment(lo: u64, hi: u64, base: &[u32]) -> Vec<u32> {
    let len = (hi - lo) as usize;
    let mut composite = vec![false; len];
    for &p in base {
        let p = p as u64;
        if p * p >= hi {
            break;
        }
        let mut m = (p * p).max(lo.div_ceil(p) * p);
        while m < hi {
            composite[(m - lo) as usize] = true;
            m += p;
        }
    }
    (0..len)
        .filter(|&i| !composite[i] && lo + i as u64 >= 2)
        .map(|i| (lo + i as u64) as u32)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_prime_trial(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
    }

    #[test]
    fn small_tables() {
        assert_eq!(PrimeTable::build(10).unwrap().primes(), &[2, 3, 5, 7]);
        assert_eq!(PrimeTable::build(2).unwrap().primes(), &[2]);
        assert!(PrimeTable::build(1).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let opts = SieveOptions {
            budget: 1000,
            ..Default::default()
        };
        let err = PrimeTable::build_with(1001, &opts).unwrap_err();
        assert!(err.is_resource());
    }

    #[test]
    fn pi_and_theta_match_trial_division() {
        // Small blocks to exercise segment boundaries.
        let opts = SieveOptions {
            block_size: 1000,
            ..Default::default()
        };
        let t = PrimeTable::build_with(100_000, &opts).unwrap();
        let mut count = 0u64;
        let mut theta = CompensatedSum::new();
        for n in 1..=100_000u64 {
            if is_prime_trial(n) {
                count += 1;
                theta.add((n as f64).ln());
            }
            if n % 997 == 0 || n == 100_000 {
                assert_eq!(t.pi(n as f64).unwrap(), count, "pi({n})");
                let th = t.theta((n as f64 + 0.5).min(100_000.0)).unwrap();
                assert!((th - theta.value()).abs() <= 1e-9 * theta.value().max(1.0));
            }
        }
        assert_eq!(t.pi(1e4).unwrap(), 1229);
    }

    #[test]
    fn table_structure() {
        let t = PrimeTable::build(50_000).unwrap();
        assert_eq!(t.nth(1), Some(2));
        assert!(t.primes().windows(2).all(|w| w[0] < w[1]));
        assert!(t.pi(60_000.0).is_err());
        assert_eq!(t.pi(1.9).unwrap(), 0);
        assert_eq!(t.theta(1.0).unwrap(), 0.0);
    }

    #[test]
    fn small_primes_reach_2_pow_20() {
        let sp = small_primes();
        assert_eq!(sp.pi(1_048_576.0).unwrap(), 82_025);
    }
}
