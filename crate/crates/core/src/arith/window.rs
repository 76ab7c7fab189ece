use super::delta::delta_of;
use super::divisor_fns::tau_k_u64;
use super::factor::{Factorization, MAX_FACTORIZABLE};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::primes::small_primes;
use rayon::prelude::*;
use serde::Serialize;
use std::fmt;
use std::str::FromStr;

/// Longest window accepted by [`short_sum`] and [`delta_moments`].
pub const MAX_SHORT_WINDOW: u64 = 10_000_000;

const CHUNK: u64 = 1 << 15;

/// Arithmetic functions that can be summed over windows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ArithFn {
    TauK(u32),
    Delta,
    /// Δ(n) when ω(n) ≤ j, else 0.
    DeltaOmegaLe(u32),
}

impl ArithFn {
    pub fn eval(&self, f: &Factorization) -> Result<u64> {
        match *self {
            ArithFn::TauK(k) => tau_k_u64(f, k)
                .ok_or_else(|| Error::Overflow(format!("tau_{k}({}) exceeds 64 bits", f.n()))),
            ArithFn::Delta => Ok(delta_of(f)?.value),
            ArithFn::DeltaOmegaLe(j) => {
                if f.omega() <= j {
                    Ok(delta_of(f)?.value)
                } else {
                    Ok(0)
                }
            }
        }
    }

    /// The k with f(mn) ≤ τ_k(m) f(n).
    pub fn submultiplicative_k(&self) -> u32 {
        match *self {
            ArithFn::TauK(k) => k,
            ArithFn::Delta | ArithFn::DeltaOmegaLe(_) => 2,
        }
    }
}

impl fmt::Display for ArithFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithFn::TauK(k) => write!(f, "tau{k}"),
            ArithFn::Delta => write!(f, "delta"),
            ArithFn::DeltaOmegaLe(j) => write!(f, "delta_omega_le{j}"),
        }
    }
}

impl FromStr for ArithFn {
    type Err = Error;

    /// Accepts `tau2`, `tau_k(3)`, `delta`, `delta_omega_le2`, `delta_omega_le(2)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Usage(format!("unknown function id `{s}`"));
        let arg = |rest: &str| -> Result<u32> {
            let rest = rest.strip_prefix('(').and_then(|r| r.strip_suffix(')')).unwrap_or(rest);
            rest.parse().map_err(|_| bad())
        };
        let s_l = s.trim().to_ascii_lowercase();
        if s_l == "delta" {
            return Ok(ArithFn::Delta);
        }
        if let Some(rest) = s_l.strip_prefix("delta_omega_le") {
            return Ok(ArithFn::DeltaOmegaLe(arg(rest)?));
        }
        if let Some(rest) = s_l.strip_prefix("tau_k").or_else(|| s_l.strip_prefix("tau")) {
            let k = arg(rest)?;
            if k == 0 {
                return Err(bad());
            }
            return Ok(ArithFn::TauK(k));
        }
        Err(bad())
    }
}

/// Factors every n in [a, b] with a sieve, then maps each chunk of
/// factorizations through `f`. Results come back in ascending order.
pub fn for_each_factored<T, F>(a: u64, b: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&[Factorization]) -> Result<T> + Sync,
{
    if a == 0 || a > b {
        return Err(Error::pre(format!("invalid range [{a}, {b}]")));
    }
    if b >= MAX_FACTORIZABLE {
        return Err(Error::pre(format!("{b} is beyond the factorization range")));
    }
    let starts: Vec<u64> = (a..=b).step_by(CHUNK as usize).collect();
    starts
        .into_par_iter()
        .map(|lo| {
            let hi = (lo + CHUNK - 1).min(b);
            f(&factor_chunk(lo, hi))
        })
        .collect()
}

fn factor_chunk(a: u64, b: u64) -> Vec<Factorization> {
    let len = (b - a + 1) as usize;
    let mut rem: Vec<u64> = (a..=b).collect();
    let mut factors: Vec<Vec<(u64, u32)>> = vec![Vec::new(); len];
    for &p in small_primes().primes() {
        let p = p as u64;
        if p * p > b {
            break;
        }
        let mut m = a.div_ceil(p) * p;
        while m <= b {
            let i = (m - a) as usize;
            let mut e = 0;
            while rem[i] % p == 0 {
                rem[i] /= p;
                e += 1;
            }
            factors[i].push((p, e));
            m += p;
        }
    }
    factors
        .into_iter()
        .zip(rem)
        .enumerate()
        .map(|(i, (mut fs, r))| {
            if r > 1 {
                fs.push((r, 1));
            }
            Factorization::from_parts(a + i as u64, fs)
        })
        .collect()
}

/// Integer endpoints (lo, hi] of the window (x − y, x].
pub(crate) fn window_bounds(x: f64, y: f64) -> Result<(u64, u64)> {
    if !(y >= 0.0 && y <= x) || !x.is_finite() {
        return Err(Error::pre(format!("window requires 0 <= y <= x, got x={x}, y={y}")));
    }
    let hi = x.floor() as u64;
    let lo = (x - y).floor() as u64;
    if hi - lo > MAX_SHORT_WINDOW {
        return Err(Error::Resource(format!(
            "window of {} integers exceeds {MAX_SHORT_WINDOW}",
            hi - lo
        )));
    }
    Ok((lo, hi))
}

/// Σ_{x−y < n ≤ x} f(n), exactly.
pub fn short_sum(f: ArithFn, x: f64, y: f64) -> Result<u128> {
    let (lo, hi) = window_bounds(x, y)?;
    if lo == hi {
        return Ok(0);
    }
    let parts = for_each_factored(lo + 1, hi, |chunk| {
        chunk.iter().try_fold(0u128, |acc, fz| Ok(acc + f.eval(fz)? as u128))
    })?;
    Ok(parts.into_iter().sum())
}

/// Σ_{n≤x} Δ(n) and Σ_{n≤x} Δ(n)/n split by ω(n), so that the weighted
/// sums Σ t^ω(n) Δ(n) can be formed for any t without recomputing Δ.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaMoments {
    pub x: u64,
    /// Index w holds Σ_{ω(n)=w} Δ(n).
    pub delta_sum: Vec<u128>,
    /// Index w holds Σ_{ω(n)=w} Δ(n)/n.
    pub delta_over_n: Vec<f64>,
}

impl DeltaMoments {
    /// (Σ t^ω(n) Δ(n), Σ t^ω(n) Δ(n)/n), with 0^0 = 1.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let mut s = CompensatedSum::new();
        let mut sh = CompensatedSum::new();
        for (w, (&a, &b)) in self.delta_sum.iter().zip(&self.delta_over_n).enumerate() {
            let tw = t.powi(w as i32);
            s.add(tw * a as f64);
            sh.add(tw * b);
        }
        (s.value(), sh.value())
    }
}

pub fn delta_moments(x: f64) -> Result<DeltaMoments> {
    if !(x >= 1.0) || !x.is_finite() {
        return Err(Error::pre(format!("delta_moments requires x >= 1, got {x}")));
    }
    let xf = x.floor() as u64;
    if xf > MAX_SHORT_WINDOW {
        return Err(Error::Resource(format!(
            "weighted Δ sums up to {xf} exceed {MAX_SHORT_WINDOW}"
        )));
    }
    const W: usize = 16; // ω(n) ≤ 8 for n ≤ 10^7
    let parts = for_each_factored(1, xf, |chunk| {
        let mut a = [0u128; W];
        let mut b = [CompensatedSum::new(); W];
        for fz in chunk {
            let d = delta_of(fz)?.value;
            let w = fz.omega() as usize;
            a[w] += d as u128;
            b[w].add(d as f64 / fz.n() as f64);
        }
        Ok((a, b))
    })?;
    let mut a = [0u128; W];
    let mut b = [CompensatedSum::new(); W];
    for (pa, pb) in parts {
        for w in 0..W {
            a[w] += pa[w];
            b[w].merge(&pb[w]);
        }
    }
    let used = (0..W).rev().find(|&w| a[w] != 0).map_or(1, |w| w + 1);
    Ok(DeltaMoments {
        x: xf,
        delta_sum: a[..used].to_vec(),
        delta_over_n: b[..used].iter().map(CompensatedSum::value).collect(),
    })
}

/// (Σ_{n≤x} t^ω(n) Δ(n), Σ_{n≤x} t^ω(n) Δ(n)/n).
pub fn weighted_delta_sums(x: f64, t: f64) -> Result<(f64, f64)> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::pre(format!("t must lie in [0, 1], got {t}")));
    }
    Ok(delta_moments(x)?.eval(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{delta, factorize};

    #[test]
    fn sieve_factorizations_match_trial_division() {
        let chunks = for_each_factored(999_000, 1_001_000, |c| Ok(c.to_vec())).unwrap();
        for fz in chunks.into_iter().flatten() {
            assert_eq!(fz, factorize(fz.n()).unwrap());
        }
    }

    #[test]
    fn short_sum_examples() {
        assert_eq!(short_sum(ArithFn::TauK(2), 10.0, 5.0).unwrap(), 17);
        assert_eq!(short_sum(ArithFn::Delta, 2.0, 1.0).unwrap(), 2);
        assert_eq!(short_sum(ArithFn::Delta, 10.0, 0.0).unwrap(), 0);
        assert!(short_sum(ArithFn::Delta, 5.0, 6.0).is_err());
        assert!(short_sum(ArithFn::Delta, 1e9, 2e7).unwrap_err().is_resource());
    }

    #[test]
    fn omega_filter_is_monotone() {
        let all = short_sum(ArithFn::Delta, 1e6, 1e3).unwrap();
        let le2 = short_sum(ArithFn::DeltaOmegaLe(2), 1e6, 1e3).unwrap();
        let le1 = short_sum(ArithFn::DeltaOmegaLe(1), 1e6, 1e3).unwrap();
        assert!(le1 <= le2 && le2 <= all);
    }

    #[test]
    fn parse_function_ids() {
        assert_eq!("tau2".parse::<ArithFn>().unwrap(), ArithFn::TauK(2));
        assert_eq!("tau_k(3)".parse::<ArithFn>().unwrap(), ArithFn::TauK(3));
        assert_eq!("delta".parse::<ArithFn>().unwrap(), ArithFn::Delta);
        assert_eq!("delta_omega_le(2)".parse::<ArithFn>().unwrap(), ArithFn::DeltaOmegaLe(2));
        for f in [ArithFn::TauK(4), ArithFn::Delta, ArithFn::DeltaOmegaLe(3)] {
            assert_eq!(f.to_string().parse::<ArithFn>().unwrap(), f);
        }
        assert!(matches!("sigma".parse::<ArithFn>(), Err(Error::Usage(_))));
        assert!("tau0".parse::<ArithFn>().is_err());
    }

    #[test]
    fn weighted_sums() {
        assert_eq!(weighted_delta_sums(1.0, 0.3).unwrap(), (1.0, 1.0));
        assert_eq!(weighted_delta_sums(10.0, 0.0).unwrap().0, 1.0);
        let direct: u64 = (1..=10).map(|n| delta(n).unwrap().value).sum();
        assert_eq!(weighted_delta_sums(10.0, 1.0).unwrap().0, direct as f64);
        let t = 0.37;
        let (s, sh) = weighted_delta_sums(3000.0, t).unwrap();
        let (mut ds, mut dsh) = (0.0, 0.0);
        for n in 1..=3000u64 {
            let f = factorize(n).unwrap();
            let w = t.powi(f.omega() as i32) * delta(n).unwrap().value as f64;
            ds += w;
            dsh += w / n as f64;
        }
        assert!((s - ds).abs() < 1e-9 * ds && (sh - dsh).abs() < 1e-12 * dsh);
    }
}
