//! Benchmark fixtures shared by the criterion targets.

/// `n` integers spread geometrically over [lo, hi], deduplicated.
pub fn spread(lo: u64, hi: u64, n: usize) -> Vec<u64> {
    assert!(lo >= 1 && lo < hi && n >= 2);
    let (a, b) = ((lo as f64).ln(), (hi as f64).ln());
    let mut v: Vec<u64> = (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp().round() as u64)
        .collect();
    v.dedup();
    v
}

/// Highly composite numbers, where Δ has the most divisors to scan.
pub const HIGHLY_COMPOSITE: [u64; 5] = [720_720, 3_603_600, 61_261_200, 963_761_198_400, 866_421_317_361_600];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_hits_ends() {
        let v = spread(10, 1_000_000, 7);
        assert_eq!((v[0], *v.last().unwrap()), (10, 1_000_000));
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }
}
