use super::report::{MarginTracker, Relation, Sample};
use super::{Outcome, VerifyContext};
use crate::arith::{for_each_factored, short_sum, window_bounds, ArithFn, Factorization};
use crate::error::{Error, Result};
use rand::Rng;
use serde::Serialize;
use std::fmt;

/// Largest window [`classify_window`] accepts.
pub const MAX_CLASSIFY_WINDOW: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassTag {
    I,
    II,
    III,
    IV,
}

impl ClassTag {
    pub const ALL: [ClassTag; 4] = [ClassTag::I, ClassTag::II, ClassTag::III, ClassTag::IV];

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for ClassTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassifiedInteger {
    pub n: u64,
    pub class: ClassTag,
    /// Largest prefix of the increasing-prime factorization that is ≤ z.
    pub a: u64,
    pub b: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WindowClassification {
    pub x: f64,
    pub y: f64,
    /// y^(1/3)
    pub z: f64,
    pub members: Vec<ClassifiedInteger>,
    /// Σ f(n) per class, indexed I..IV.
    pub sums: [u128; 4],
    pub counts: [u64; 4],
}

impl WindowClassification {
    pub fn total(&self) -> u128 {
        self.sums.iter().sum()
    }
}

/// Thresholds of the split, in exact integer form.
struct Cuts {
    /// ⌊y⌋: a ≤ z ⇔ a³ ≤ ⌊y⌋
    y_floor: u128,
    /// ⌈y⌉: p ≥ z^(1/2) ⇔ p⁶ ≥ ⌈y⌉
    y_ceil: u128,
    /// log x · log log x
    small: f64,
}

fn pow_sat(b: u64, e: u32) -> u128 {
    (b as u128).checked_pow(e).unwrap_or(u128::MAX)
}

fn classify_one(f: &Factorization, cuts: &Cuts) -> ClassifiedInteger {
    let mut a: u64 = 1;
    let mut rest = f.factors();
    while let Some(&(p, e)) = rest.first() {
        let next = a.saturating_mul(p.saturating_pow(e));
        if pow_sat(next, 3) > cuts.y_floor {
            break;
        }
        a = next;
        rest = &rest[1..];
    }
    let b = f.n() / a;
    let class = match rest.first().map(|&(p, _)| p) {
        None => ClassTag::I,
        Some(p) if pow_sat(p, 6) >= cuts.y_ceil => ClassTag::I,
        Some(_) if pow_sat(a, 6) <= cuts.y_floor => ClassTag::II,
        Some(p) if (p as f64) <= cuts.small => ClassTag::III,
        Some(_) => ClassTag::IV,
    };
    ClassifiedInteger { n: f.n(), class, a, b }
}

/// Splits each n in (x − y, x] as n = a·b and sorts it into Classes I–IV,
/// with per-class sums of f.
pub fn classify_window(x: f64, y: f64, f: ArithFn) -> Result<WindowClassification> {
    if !(y >= 8.0) {
        return Err(Error::pre(format!("classification needs y ≥ 8, got {y}")));
    }
    let (lo, hi) = window_bounds(x, y)?;
    if hi - lo > MAX_CLASSIFY_WINDOW {
        return Err(Error::Resource(format!(
            "window of {} integers exceeds {MAX_CLASSIFY_WINDOW}",
            hi - lo
        )));
    }
    let lx = x.ln();
    let cuts = Cuts {
        y_floor: y.floor() as u128,
        y_ceil: y.ceil() as u128,
        small: lx * lx.ln(),
    };
    let parts = if lo == hi {
        Vec::new()
    } else {
        for_each_factored(lo + 1, hi, |chunk| {
            chunk
                .iter()
                .map(|fz| Ok((classify_one(fz, &cuts), f.eval(fz)?)))
                .collect::<Result<Vec<_>>>()
        })?
    };
    let mut members = Vec::with_capacity((hi - lo) as usize);
    let mut sums = [0u128; 4];
    let mut counts = [0u64; 4];
    for (m, v) in parts.into_iter().flatten() {
        let i = m.class.index();
        sums[i] += v as u128;
        counts[i] += 1;
        members.push(m);
    }
    Ok(WindowClassification {
        x,
        y,
        z: y.cbrt(),
        members,
        sums,
        counts,
    })
}

/// Class sums recombine to the short sum, and class sizes to the window size,
/// over seeded windows.
pub(crate) fn class_partition(ctx: &VerifyContext) -> Result<Outcome> {
    let windows = ctx.axis("windows", vec![20.0])[0] as usize;
    let mut rng = ctx.rng("CLASS");
    let fns = [ArithFn::TauK(2), ArithFn::Delta];
    ctx.charge("CLASS", windows as u64 * 2 * 100_000)?;
    let mut t = MarginTracker::new("CLASS");
    for _ in 0..windows {
        let x = rng.random_range(3f64.ln() * 2.0..=(1e8f64).ln()).exp();
        let y = rng.random_range(8f64.ln()..=x.min(1e5).ln()).exp();
        for (fi, &f) in fns.iter().enumerate() {
            let c = classify_window(x, y, f)?;
            let direct = short_sum(f, x, y)?;
            let (lo, hi) = window_bounds(x, y)?;
            let point = |part: f64| vec![("x", x), ("y", y), ("f", fi as f64), ("part", part)];
            let diff = c.total().abs_diff(direct) as f64;
            t.push(Sample::new(point(0.0), diff, 0.0, Relation::Le))?;
            let size: u64 = c.counts.iter().sum();
            t.push(Sample::new(point(1.0), size.abs_diff(hi - lo) as f64, 0.0, Relation::Le))?;
        }
    }
    Ok(Outcome::new(
        format!("{windows} seeded windows, x log-uniform in [9, 1e8], y log-uniform in [8, min(x, 1e5)]; f 0 τ₂, 1 Δ; part 0 sums, 1 sizes"),
        t,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;

    fn cuts(x: f64, y: f64) -> Cuts {
        Cuts {
            y_floor: y.floor() as u128,
            y_ceil: y.ceil() as u128,
            small: x.ln() * x.ln().ln(),
        }
    }

    #[test]
    fn prime_is_class_one() {
        let c = classify_one(&factorize(100_003).unwrap(), &cuts(1e5 + 10.0, 1e3));
        assert_eq!((c.a, c.b, c.class), (1, 100_003, ClassTag::I));
    }

    #[test]
    fn prefix_split() {
        // z = 10: 2·3 = 6 ≤ 10 < 6·5, so a = 6 and b = 5·7 = 35
        let c = classify_one(&factorize(210).unwrap(), &cuts(1e5, 1000.0));
        assert_eq!((c.a, c.b), (6, 35));
        // P⁻(b) = 5 ≥ √10
        assert_eq!(c.class, ClassTag::I);
        // 2·3·3: a = 2·9 = 18 > 10 fails, so a = 2, b = 9, P⁻(b) = 3 < √10, a ≤ √10
        let c = classify_one(&factorize(18).unwrap(), &cuts(1e5, 1000.0));
        assert_eq!((c.a, c.b, c.class), (2, 9, ClassTag::II));
    }

    #[test]
    fn classes_three_and_four() {
        // z = 100, √z = 10; x = 1e6 gives log x log log x ≈ 36.2 > 10 so only III
        let c = classify_one(&factorize(16 * 3 * 1009).unwrap(), &cuts(1e6, 1e6));
        assert_eq!((c.a, c.b, c.class), (48, 1009, ClassTag::I));
        let c = classify_one(&factorize(64 * 3 * 1009).unwrap(), &cuts(1e6, 1e6));
        assert_eq!((c.a, c.b, c.class), (64, 3 * 1009, ClassTag::III));
        // y = 1e12: z = 1e4, √z = 100; x = 1e13 gives log x log log x ≈ 102.7
        let c = classify_one(&factorize(2048 * 97 * 101).unwrap(), &cuts(1e13, 1e12));
        assert_eq!((c.a, c.b, c.class), (2048, 97 * 101, ClassTag::III));
        let c = classify_one(&factorize(2048 * 97 * 101).unwrap(), &cuts(1e6, 1e12));
        assert_eq!(c.class, ClassTag::IV);
    }

    #[test]
    fn window_example() {
        let c = classify_window(1e5, 1e3, ArithFn::Delta).unwrap();
        assert_eq!(c.members.len(), 1000);
        assert_eq!(c.total(), short_sum(ArithFn::Delta, 1e5, 1e3).unwrap());
        let top = (0..4).max_by_key(|&i| c.sums[i]).unwrap();
        assert_eq!(top, 0);
        for m in &c.members {
            assert_eq!(m.a * m.b, m.n);
            assert!(m.a.pow(3) as f64 <= 1e3);
        }
    }

    #[test]
    fn preconditions() {
        assert!(classify_window(1e5, 7.0, ArithFn::Delta).is_err());
        assert!(classify_window(1e8, 2e6, ArithFn::Delta).unwrap_err().is_resource());
    }
}
