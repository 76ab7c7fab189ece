use crate::error::{Error, Result};
use crate::primes::small_primes;
use serde::Serialize;

/// Largest n guaranteed to factor completely by trial division with the
/// shared small-prime table: every composite cofactor left over would need
/// two prime factors above 2^20.
pub const MAX_FACTORIZABLE: u64 = 1 << 40;

/// Default cap on τ(n) when materializing divisors.
pub const DIVISOR_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Factorization {
    n: u64,
    factors: Vec<(u64, u32)>,
}

impl Factorization {
    /// Builds from ascending (prime, exponent) pairs. No primality check.
    pub fn from_factors(factors: Vec<(u64, u32)>) -> Self {
        let n = factors.iter().map(|&(p, e)| p.pow(e)).product();
        Self { n, factors }
    }

    pub(crate) fn from_parts(n: u64, factors: Vec<(u64, u32)>) -> Self {
        Self { n, factors }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    /// ω(n)
    pub fn omega(&self) -> u32 {
        self.factors.len() as u32
    }

    /// Ω(n)
    pub fn big_omega(&self) -> u32 {
        self.factors.iter().map(|&(_, e)| e).sum()
    }

    /// P⁺(n), with P⁺(1) = 1.
    pub fn largest_prime(&self) -> u64 {
        self.factors.last().map_or(1, |&(p, _)| p)
    }

    /// P⁻(n), or `None` for n = 1 (read as +∞).
    pub fn smallest_prime(&self) -> Option<u64> {
        self.factors.first().map(|&(p, _)| p)
    }

    /// τ(n) = Π (e+1).
    pub fn tau(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64 + 1).product()
    }

    pub fn divisors(&self) -> Result<DivisorSet> {
        DivisorSet::new(self, DIVISOR_BUDGET)
    }
}

/// Factors n ≤ 2^40 by trial division.
pub fn factorize(n: u64) -> Result<Factorization> {
    if n == 0 {
        return Err(Error::pre("cannot factorize 0"));
    }
    let mut m = n;
    let mut factors = Vec::new();
    for &p in small_primes().primes() {
        let p = p as u64;
        if p * p > m {
            break;
        }
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
    }
    if m > 1 {
        if m >= MAX_FACTORIZABLE {
            return Err(Error::IncompleteFactorization { n, cofactor: m });
        }
        factors.push((m, 1));
    }
    Ok(Factorization { n, factors })
}

/// Sorted divisors of n with their natural logs.
#[derive(Debug, Clone, PartialEq)]
pub struct DivisorSet {
    n: u64,
    divisors: Vec<u64>,
    logs: Vec<f64>,
}

impl DivisorSet {
    pub fn new(f: &Factorization, budget: u64) -> Result<Self> {
        let tau = f.tau();
        if tau > budget {
            return Err(Error::Resource(format!(
                "τ({}) = {tau} exceeds the divisor budget {budget}",
                f.n
            )));
        }
        let mut divisors = Vec::with_capacity(tau as usize);
        divisors.push(1u64);
        for &(p, e) in &f.factors {
            let len = divisors.len();
            let mut pk = 1;
            for _ in 0..e {
                pk *= p;
                for i in 0..len {
                    divisors.push(divisors[i] * pk);
                }
            }
        }
        divisors.sort_unstable();
        let logs = divisors.iter().map(|&d| (d as f64).ln()).collect();
        Ok(Self {
            n: f.n,
            divisors,
            logs,
        })
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn divisors(&self) -> &[u64] {
        &self.divisors
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn examples() {
        assert!(factorize(1).unwrap().factors().is_empty());
        assert_eq!(factorize(12).unwrap().factors(), &[(2, 2), (3, 1)]);
        let f = factorize(1_000_000_000_000).unwrap();
        assert_eq!(f.factors(), &[(2, 12), (5, 12)]);
        assert_eq!(Factorization::from_factors(f.factors().to_vec()).n(), 1_000_000_000_000);
        assert!(factorize(0).is_err());
    }

    #[test]
    fn large_prime_cofactor() {
        // 999983 * 1000003, both above the trial bound's square root split
        let n = 999_983u64 * 1_000_003;
        assert_eq!(factorize(n).unwrap().factors(), &[(999_983, 1), (1_000_003, 1)]);
        // A prime just below 2^40.
        let p = 1_099_511_627_689u64;
        assert_eq!(factorize(p).unwrap().factors(), &[(p, 1)]);
    }

    #[test]
    fn beyond_range_is_reported() {
        // Two primes just above 2^20: no trial divisor, cofactor above 2^40.
        let n = 1_048_583u64 * 1_048_589;
        let err = factorize(n).unwrap_err();
        assert!(matches!(err, Error::IncompleteFactorization { .. }));
    }

    #[test]
    fn divisor_set() {
        let d = factorize(12).unwrap().divisors().unwrap();
        assert_eq!(d.divisors(), &[1, 2, 3, 4, 6, 12]);
        assert!(d.logs().windows(2).all(|w| w[0] < w[1]));
        let f = factorize(720_720).unwrap();
        assert!(DivisorSet::new(&f, 10).unwrap_err().is_resource());
    }

    proptest! {
        #[test]
        fn factorization_invariants(n in 1u64..5_000_000_000) {
            let f = factorize(n).unwrap();
            let product: u64 = f.factors().iter().map(|&(p, e)| p.pow(e)).product();
            prop_assert_eq!(product, n);
            prop_assert!(f.factors().windows(2).all(|w| w[0].0 < w[1].0));
            prop_assert_eq!(f.omega() as usize, f.factors().len());
            let d = f.divisors().unwrap();
            prop_assert_eq!(d.len() as u64, f.tau());
        }
    }
}
