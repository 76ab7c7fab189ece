use super::tail::{ramare_tail, S1Weight, S2Weight, TailBoundSpec, TailWeight};
use super::PrimeTable;
use crate::compensated::compensated_sum;
use crate::error::{Error, Result};
use serde::Serialize;

/// Σ_{p ≤ x} 1/p.
pub fn mertens_sum(table: &PrimeTable, x: f64) -> Result<f64> {
    let ps = table.primes_up_to(x)?;
    Ok(compensated_sum(ps.iter().map(|&p| 1.0 / p as f64)))
}

/// Σ_{p ≤ x} (log p)^(−α), α ≥ 3.
pub fn prime_log_power_sum(table: &PrimeTable, x: f64, alpha: f64) -> Result<f64> {
    if !(alpha >= 3.0) {
        return Err(Error::pre(format!("alpha must be >= 3, got {alpha}")));
    }
    let ps = table.primes_up_to(x)?;
    Ok(compensated_sum(
        ps.iter().map(|&p| (p as f64).ln().powf(-alpha)),
    ))
}

/// Σ_{p ≤ x} p^(−α), α ∈ [0, 1).
pub fn prime_power_sum(table: &PrimeTable, x: f64, alpha: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&alpha) {
        return Err(Error::pre(format!("alpha must lie in [0, 1), got {alpha}")));
    }
    let ps = table.primes_up_to(x)?;
    Ok(compensated_sum(ps.iter().map(|&p| (p as f64).powf(-alpha))))
}

/// Σ_{p ≤ x} |τ(p; v)| / p with |τ(p; v)| = 2|cos(v log p / 2)|.
pub fn tau_abs_prime_sum(table: &PrimeTable, x: f64, v: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&v) {
        return Err(Error::pre(format!("v must lie in [0, 1], got {v}")));
    }
    let ps = table.primes_up_to(x)?;
    Ok(compensated_sum(ps.iter().map(|&p| {
        let p = p as f64;
        2.0 * (0.5 * v * p.ln()).cos().abs() / p
    })))
}

pub const S1_REFERENCE_CUTOFF: u64 = 10_000;
pub const S2_REFERENCE_CUTOFF: u64 = 1_000_000;

/// Partial sums of the two prime-power constants plus tail bounds for the rest.
#[derive(Debug, Clone, Serialize)]
pub struct PrimeConstantSums {
    pub s1_cutoff: u64,
    pub s2_cutoff: u64,
    /// Σ_{p ≤ s1_cutoff} (3p−2)/(p(p−1)²)
    pub s1: f64,
    /// Σ_{p ≤ s2_cutoff} 2(3p²−3p+1) log p/(p(p−1)³)
    pub s2: f64,
    pub s1_tail: f64,
    pub s2_tail: f64,
    /// Set when a cutoff is below the reference cutoffs 10^4 / 10^6.
    pub below_reference_cutoff: bool,
    pub s1_majorant: String,
    pub s2_majorant: String,
}

impl PrimeConstantSums {
    pub fn s1_total(&self) -> f64 {
        self.s1 + self.s1_tail
    }
    pub fn s2_total(&self) -> f64 {
        self.s2 + self.s2_tail
    }
}

pub fn prime_constant_sums(table: &PrimeTable, cutoff: u64) -> Result<PrimeConstantSums> {
    prime_constant_sums_split(table, cutoff, cutoff)
}

/// As [`prime_constant_sums`] with separate cutoffs for the two sums.
pub fn prime_constant_sums_split(
    table: &PrimeTable,
    s1_cutoff: u64,
    s2_cutoff: u64,
) -> Result<PrimeConstantSums> {
    if s1_cutoff < 2 || s2_cutoff < 2 {
        return Err(Error::pre("cutoffs must be at least 2"));
    }
    let s1 = compensated_sum(table.primes_up_to(s1_cutoff as f64)?.iter().map(|&p| {
        let p = p as f64;
        (3.0 * p - 2.0) / (p * (p - 1.0) * (p - 1.0))
    }));
    let s2 = compensated_sum(table.primes_up_to(s2_cutoff as f64)?.iter().map(|&p| {
        let p = p as f64;
        2.0 * (3.0 * p * p - 3.0 * p + 1.0) * p.ln() / (p * (p - 1.0).powi(3))
    }));
    let s1_tail = ramare_tail(&TailBoundSpec::new(&S1Weight, s1_cutoff as f64))?;
    let s2_tail = ramare_tail(&TailBoundSpec::new(&S2Weight, s2_cutoff as f64))?;
    Ok(PrimeConstantSums {
        s1_cutoff,
        s2_cutoff,
        s1,
        s2,
        s1_tail,
        s2_tail,
        below_reference_cutoff: s1_cutoff < S1_REFERENCE_CUTOFF || s2_cutoff < S2_REFERENCE_CUTOFF,
        s1_majorant: S1Weight.majorant().to_string(),
        s2_majorant: S2Weight.majorant().to_string(),
    })
}
