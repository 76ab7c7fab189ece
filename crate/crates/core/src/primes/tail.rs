//! Upper bounds for Σ_{p > x} f(p) log p from an explicit θ(t) bound.

use crate::error::{Error, Result};
use crate::specialfun::e1;

/// c₁ in θ(t) ≤ c₁ t.
pub const RAMARE_C1: f64 = 1.0 + 1.94e-8;

/// A positive decreasing weight with a known bound for its tail integral.
pub trait TailWeight: Sync {
    fn name(&self) -> String;
    fn value(&self, t: f64) -> f64;
    /// An upper bound for ∫_x^∞ f(t) dt, or `None` if none is available.
    fn tail_integral(&self, x: f64) -> Option<f64>;
    /// Human-readable description of the bound used by `tail_integral`.
    fn majorant(&self) -> &'static str {
        "exact antiderivative"
    }
}

pub struct TailBoundSpec<'a> {
    pub weight: &'a dyn TailWeight,
    pub x: f64,
}

impl<'a> TailBoundSpec<'a> {
    pub fn new(weight: &'a dyn TailWeight, x: f64) -> Self {
        Self { weight, x }
    }

    /// Samples the weight on a geometric grid and rejects weights that are
    /// not positive, strictly decreasing, or with t·f(t) failing to shrink.
    fn validate(&self) -> Result<()> {
        if !(self.x >= 2.0) || !self.x.is_finite() {
            return Err(Error::pre(format!("tail cutoff must be >= 2, got {}", self.x)));
        }
        let f = self.weight;
        let mut prev = f.value(self.x);
        let mut t = self.x;
        let tf0 = t * prev;
        for _ in 0..40 {
            let next_t = t * 2.0;
            let v = f.value(next_t);
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::pre(format!("{} is not positive at t={next_t}", f.name())));
            }
            if !(v < prev) {
                return Err(Error::pre(format!("{} is not decreasing at t={next_t}", f.name())));
            }
            prev = v;
            t = next_t;
        }
        if !(t * prev <= 0.5 * tf0) {
            return Err(Error::pre(format!("t·{}(t) does not tend to 0", f.name())));
        }
        Ok(())
    }
}

/// c₁∫_x^∞ f + (c₁−1)·x·f(x) + 4x·f(x)/(log x)².
pub fn ramare_tail(spec: &TailBoundSpec<'_>) -> Result<f64> {
    spec.validate()?;
    let x = spec.x;
    let integral = spec
        .weight
        .tail_integral(x)
        .ok_or_else(|| Error::UnsupportedWeight(spec.weight.name()))?;
    let fx = spec.weight.value(x);
    let lx = x.ln();
    Ok(RAMARE_C1 * integral + (RAMARE_C1 - 1.0) * x * fx + 4.0 * x * fx / (lx * lx))
}

/// f(t) = t^(−s), s > 1.
pub struct PowerWeight(pub f64);

impl TailWeight for PowerWeight {
    fn name(&self) -> String {
        format!("t^-{}", self.0)
    }
    fn value(&self, t: f64) -> f64 {
        t.powf(-self.0)
    }
    fn tail_integral(&self, x: f64) -> Option<f64> {
        (self.0 > 1.0).then(|| x.powf(1.0 - self.0) / (self.0 - 1.0))
    }
}

/// f(t) = (3t−2)/(t(t−1)² log t), so f(p) log p is the first prime constant's summand.
///
/// Writing (3t−2)/(t(t−1)²) = 3/t² + g(t) with g ≥ 0, the 3/t² part
/// integrates to 3·E1(log x) and the g part is bounded by (1/log x)∫g.
pub struct S1Weight;

impl TailWeight for S1Weight {
    fn name(&self) -> String {
        "(3t-2)/(t(t-1)^2 log t)".into()
    }
    fn value(&self, t: f64) -> f64 {
        (3.0 * t - 2.0) / (t * (t - 1.0) * (t - 1.0) * t.ln())
    }
    fn tail_integral(&self, x: f64) -> Option<f64> {
        // ∫_x^∞ (3t−2)/(t(t−1)²) dt = −2 ln(1 − 1/x) + 1/(x−1)
        let rational = -2.0 * (-1.0 / x).ln_1p() + 1.0 / (x - 1.0);
        let g = rational - 3.0 / x;
        Some(3.0 * e1(x.ln()).ok()? + g / x.ln())
    }
    fn majorant(&self) -> &'static str {
        "3·E1(log x) + (∫_x^∞ ((3t−2)/(t(t−1)²) − 3/t²) dt)/log x"
    }
}

/// f(t) = 2(3t²−3t+1)/(t(t−1)³); f(p) log p is the second prime constant's summand.
pub struct S2Weight;

impl TailWeight for S2Weight {
    fn name(&self) -> String {
        "2(3t^2-3t+1)/(t(t-1)^3)".into()
    }
    fn value(&self, t: f64) -> f64 {
        2.0 * (3.0 * t * t - 3.0 * t + 1.0) / (t * (t - 1.0).powi(3))
    }
    fn tail_integral(&self, x: f64) -> Option<f64> {
        let xm = x - 1.0;
        Some(-2.0 * (-1.0 / x).ln_1p() + 4.0 / xm + 1.0 / (xm * xm))
    }
    fn majorant(&self) -> &'static str {
        "exact: −2 ln(1 − 1/x) + 4/(x−1) + 1/(x−1)²"
    }
}
