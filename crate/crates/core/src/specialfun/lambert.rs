use crate::error::{Error, Result};
use std::f64::consts::E;

const INV_E: f64 = 1.0 / E;
const MAX_ITER: usize = 64;

/// Principal branch W₀ on [−1/e, ∞).
pub fn lambert_w0(x: f64) -> Result<f64> {
    if x.is_nan() || x < -INV_E {
        return Err(Error::pre(format!("W0 is undefined at {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    if x.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let p2 = 2.0 * (E * x + 1.0);
    if p2 < 0.25 {
        return Ok(halley_direct(x, branch_series(p2.max(0.0).sqrt()), -1.0));
    }
    if x > E {
        // Solve w + ln w = ln x, which stays well scaled for huge x.
        let l1 = x.ln();
        let l2 = l1.ln();
        let seed = l1 - l2 + l2 / l1;
        return Ok(halley_log(x.ln(), seed, |w| w.ln()));
    }
    // Winitzki's approximation.
    let l = x.ln_1p();
    let seed = l * (1.0 - l.ln_1p() / (2.0 + l));
    Ok(halley_direct(x, seed, -1.0))
}

/// Lower branch W₋₁ on [−1/e, 0), taking values ≤ −1.
pub fn lambert_wm1(x: f64) -> Result<f64> {
    if x.is_nan() || !(-INV_E..0.0).contains(&x) {
        return Err(Error::pre(format!("W-1 is undefined at {x}")));
    }
    let p2 = 2.0 * (E * x + 1.0);
    if p2 < 0.25 {
        let w = halley_direct(x, branch_series(-p2.max(0.0).sqrt()), f64::NEG_INFINITY);
        return Ok(w.min(-1.0));
    }
    // w + ln(−w) = ln(−x), seeded below the root by c·ln(−x).
    let c = E / (E - 1.0);
    let seed = c * (-x).ln();
    Ok(halley_log((-x).ln(), seed, |w| (-w).ln()).min(-1.0))
}

/// Series in p = ±√(2(ex+1)) about the branch point.
fn branch_series(p: f64) -> f64 {
    const C: [f64; 10] = [
        -1.0,
        1.0,
        -1.0 / 3.0,
        11.0 / 72.0,
        -43.0 / 540.0,
        769.0 / 17280.0,
        -221.0 / 8505.0,
        680863.0 / 43545600.0,
        -1963.0 / 204120.0,
        226287557.0 / 37623398400.0,
    ];
    C.iter().rev().fold(0.0, |acc, &c| acc * p + c)
}

/// Halley on w·e^w − x, keeping iterates on one side of `floor`.
fn halley_direct(x: f64, mut w: f64, floor: f64) -> f64 {
    for _ in 0..MAX_ITER {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 || f == 0.0 {
            break;
        }
        let denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
        let step = f / denom;
        let next = w - step;
        let next = if floor.is_finite() && next < floor { 0.5 * (w + floor) } else { next };
        if (next - w).abs() <= 4.0 * f64::EPSILON * w.abs().max(1e-300) {
            return next;
        }
        w = next;
    }
    w
}

/// Halley on w + lg(w) − target with lg = ln or ln(−·).
fn halley_log(target: f64, mut w: f64, lg: impl Fn(f64) -> f64) -> f64 {
    for _ in 0..MAX_ITER {
        let g = w + lg(w) - target;
        let g1 = 1.0 + 1.0 / w;
        let g2 = -1.0 / (w * w);
        let step = g / (g1 - 0.5 * g * g2 / g1);
        let next = w - step;
        if (next - w).abs() <= 4.0 * f64::EPSILON * w.abs() {
            return next;
        }
        w = next;
    }
    w
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(w: f64, x: f64) -> f64 {
        ((w * w.exp() - x) / x).abs()
    }

    #[test]
    fn w0_special_values() {
        assert_eq!(lambert_w0(0.0).unwrap(), 0.0);
        assert!((lambert_w0(E).unwrap() - 1.0).abs() < 1e-15);
        assert!((lambert_w0(-INV_E).unwrap() + 1.0).abs() < 1e-8);
        assert!(lambert_w0(-0.4).is_err());
    }

    #[test]
    fn wm1_special_values() {
        assert!((lambert_wm1(-INV_E).unwrap() + 1.0).abs() < 1e-8);
        let w = lambert_wm1(-0.1).unwrap();
        assert!(w < -1.0);
        assert!(residual(w, -0.1) < 1e-12);
        // Reference value -3.577152063957297...
        assert!((w + 3.577_152_063_957_297).abs() < 1e-13);
        assert!(lambert_wm1(0.0).is_err());
        assert!(lambert_wm1(-0.5).is_err());
    }

    #[test]
    fn identity_on_log_grids() {
        for i in 0..=400 {
            let x = 10f64.powf(-12.0 + i as f64 * 0.07);
            let w = lambert_w0(x).unwrap();
            assert!(residual(w, x) < 1e-12, "W0({x})");
            let lb = x.ln() - x.ln().ln();
            if x >= E {
                assert!(w >= lb - 1e-12 && lb >= 0.5 * x.ln() - 1e-12);
            }
        }
        for i in 1..=400 {
            // -1/e * (1 - s) and -1/e * 10^-k
            let s = 10f64.powf(-12.0 + i as f64 * 0.03);
            let x = if s < 1.0 { -INV_E * (1.0 - s) } else { -INV_E / s };
            if x >= 0.0 || x < -INV_E {
                continue;
            }
            let w0 = lambert_w0(x).unwrap();
            let wm = lambert_wm1(x).unwrap();
            assert!(residual(w0, x) < 1e-12, "W0({x}) = {w0}");
            assert!(residual(wm, x) < 1e-12, "W-1({x}) = {wm}");
            assert!(wm <= -1.0 && w0 >= -1.0);
            assert!(wm >= E / (E - 1.0) * (-x).ln() - 1e-12);
        }
    }
}
