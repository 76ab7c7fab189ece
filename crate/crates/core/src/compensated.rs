//! Compensated floating-point summation.

use std::iter::Sum;

/// Neumaier's variant of Kahan summation.
///
/// Keeps a running compensation term so that sums of 10^8 terms of mixed
/// magnitude retain close to full double precision.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub const fn new() -> Self {
        Self { sum: 0.0, comp: 0.0 }
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    /// Folds another partial sum in, keeping both compensation terms.
    pub fn merge(&mut self, other: &CompensatedSum) {
        self.add(other.sum);
        self.add(other.comp);
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        s.extend(iter);
        s
    }
}

impl Sum<f64> for CompensatedSum {
    fn sum<I: Iterator<Item = f64>>(iter: I) -> Self {
        iter.collect()
    }
}

/// Compensated sum of an iterator of doubles.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cancels_catastrophic_naive_error() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(xs), 2.0);
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
    }

    #[test]
    fn harmonic_sum_keeps_twelve_digits() {
        // H_n = ln n + gamma + 1/(2n) - 1/(12 n^2) + ...
        let n = 10_000_000u64;
        let h = compensated_sum((1..=n).rev().map(|k| 1.0 / k as f64));
        let nf = n as f64;
        let asym = nf.ln() + 0.577_215_664_901_532_9 + 0.5 / nf - 1.0 / (12.0 * nf * nf);
        assert!((h - asym).abs() < 1e-12 * asym);
    }

    proptest! {
        #[test]
        fn merge_matches_sequential(xs in prop::collection::vec(-1e6f64..1e6, 0..200), split in 0usize..200) {
            let split = split.min(xs.len());
            let whole = compensated_sum(xs.iter().copied());
            let mut left: CompensatedSum = xs[..split].iter().copied().collect();
            let right: CompensatedSum = xs[split..].iter().copied().collect();
            left.merge(&right);
            prop_assert!((left.value() - whole).abs() <= 1e-9 * (1.0 + whole.abs()));
        }
    }
}
