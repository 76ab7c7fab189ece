use super::factor::{factorize, DivisorSet, Factorization};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use serde::Serialize;
use std::sync::OnceLock;

/// Cap on τ(n)^(k−1) for [`delta_k`].
pub const DELTA_K_BUDGET: u64 = 100_000_000;

/// Below this log-scale gap the float comparison is re-done exactly.
const LOG_GUARD: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaProfile {
    pub n: u64,
    pub value: u64,
    /// Smallest divisor d whose window (d/e, d] attains the maximum.
    pub witness: u64,
    /// The window (log d − 1, log d].
    pub window: (f64, f64),
}

/// Δ(n) = max_u #{d | n : e^u < d ≤ e^(u+1)}.
pub fn delta(n: u64) -> Result<DeltaProfile> {
    delta_of(&factorize(n)?)
}

pub fn delta_of(f: &Factorization) -> Result<DeltaProfile> {
    let ds = f.divisors()?;
    let starts = window_starts(&ds);
    let mut best = (0u64, 0usize);
    for (i, &s) in starts.iter().enumerate() {
        let count = (i + 1 - s) as u64;
        if count > best.0 {
            best = (count, i);
        }
    }
    let d = ds.divisors()[best.1];
    let ld = ds.logs()[best.1];
    Ok(DeltaProfile {
        n: f.n(),
        value: best.0,
        witness: d,
        window: (ld - 1.0, ld),
    })
}

/// For each divisor index i, the first index j with d_j > d_i / e.
fn window_starts(ds: &DivisorSet) -> Vec<usize> {
    let (d, l) = (ds.divisors(), ds.logs());
    let mut starts = Vec::with_capacity(d.len());
    let mut j = 0;
    for i in 0..d.len() {
        while !exceeds_over_e(d[j], l[j], d[i], l[i]) {
            j += 1;
        }
        starts.push(j);
    }
    starts
}

/// Whether a > b/e, i.e. log a > log b − 1.
fn exceeds_over_e(a: u64, la: f64, b: u64, lb: f64) -> bool {
    let gap = la - lb + 1.0;
    if gap.abs() > LOG_GUARD {
        return gap > 0.0;
    }
    exact_exceeds_over_e(a, b)
}

/// Exact test of e·a > b using e ∈ (N/K!, (N·K+1)/(K!·K)), N = Σ_{j≤K} K!/j!.
fn exact_exceeds_over_e(a: u64, b: u64) -> bool {
    const K: u32 = 60;
    static BOUNDS: OnceLock<(BigUint, BigUint, BigUint)> = OnceLock::new();
    let (num, den, num_hi_scaled) = BOUNDS.get_or_init(|| {
        let mut fact = BigUint::from(1u32);
        for j in 1..=K {
            fact *= j;
        }
        let mut num = BigUint::from(0u32);
        let mut term = fact.clone();
        num += &term;
        for j in 1..=K {
            term /= j;
            num += &term;
        }
        let hi = &num * K + 1u32;
        (num, fact, hi)
    });
    let (a, b) = (BigUint::from(a), BigUint::from(b));
    if &a * num > &b * den {
        return true;
    }
    if &a * num_hi_scaled < &b * den * K {
        return false;
    }
    unreachable!("interval for e is too wide to separate {a}·e from {b}")
}

/// Δ_k(n) for k ∈ {2, 3, 4}, by scanning all candidate windows.
pub fn delta_k(n: u64, k: u32) -> Result<u64> {
    if !(2..=4).contains(&k) {
        return Err(Error::pre(format!("delta_k supports k in 2..=4, got {k}")));
    }
    let f = factorize(n)?;
    if k == 2 {
        return Ok(delta_of(&f)?.value);
    }
    let tau = f.tau();
    let cost = tau.checked_pow(k - 1).unwrap_or(u64::MAX);
    if cost > DELTA_K_BUDGET {
        return Err(Error::Resource(format!(
            "τ({n})^{} = {cost} exceeds the tuple budget {DELTA_K_BUDGET}",
            k - 1
        )));
    }
    let ds = f.divisors()?;
    let starts = window_starts(&ds);
    let windows: Vec<&[u64]> = starts
        .iter()
        .enumerate()
        .map(|(i, &s)| &ds.divisors()[s..=i])
        .collect();

    // The count is symmetric in the windows, so nondecreasing index tuples suffice.
    let mut best = 0;
    let mut idx = vec![0usize; (k - 1) as usize];
    loop {
        let chosen: Vec<&[u64]> = idx.iter().map(|&i| windows[i]).collect();
        best = best.max(count_tuples(n, &chosen));
        // advance to next nondecreasing tuple
        let mut pos = idx.len();
        loop {
            if pos == 0 {
                return Ok(best);
            }
            pos -= 1;
            if idx[pos] + 1 < windows.len() {
                idx[pos] += 1;
                for q in pos + 1..idx.len() {
                    idx[q] = idx[pos];
                }
                break;
            }
        }
    }
}

/// #{(e_1, …) : e_i ∈ windows[i], e_1⋯ | rem}
fn count_tuples(rem: u64, windows: &[&[u64]]) -> u64 {
    match windows.split_first() {
        None => 1,
        Some((w, rest)) => w
            .iter()
            .filter(|&&e| rem % e == 0)
            .map(|&e| count_tuples(rem / e, rest))
            .sum(),
    }
}
