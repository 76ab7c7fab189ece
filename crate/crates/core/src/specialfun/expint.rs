use super::EULER_GAMMA;
use crate::error::{Error, Result};

/// Exponential integral Ei(x) for real x ≠ 0 (principal value for x > 0).
pub fn ei(x: f64) -> Result<f64> {
    if x == 0.0 || x.is_nan() {
        return Err(Error::pre(format!("Ei is undefined at {x}")));
    }
    if x < 0.0 {
        return e1(-x).map(|v| -v);
    }
    if x <= 40.0 {
        // γ + ln x + Σ x^k/(k·k!)
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..500 {
            term *= x / k as f64;
            let t = term / k as f64;
            sum += t;
            if t < 1e-17 * sum {
                break;
            }
        }
        return Ok(EULER_GAMMA + x.ln() + sum);
    }
    // e^x/x Σ k!/x^k, stopped at the smallest term.
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..100 {
        let next = term * k as f64 / x;
        if next > term || next < 1e-17 {
            break;
        }
        term = next;
        sum += term;
    }
    Ok(x.exp() / x * sum)
}

/// E1(x) = ∫_x^∞ e^(−t)/t dt for x > 0.
pub fn e1(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::pre(format!("E1 requires x > 0, got {x}")));
    }
    if x <= 1.0 {
        let mut term = 1.0;
        let mut sum = 0.0;
        for k in 1..100 {
            term *= -x / k as f64;
            let t = term / k as f64;
            sum += t;
            if t.abs() < 1e-17 {
                break;
            }
        }
        return Ok(-EULER_GAMMA - x.ln() - sum);
    }
    // Modified Lentz on the continued fraction.
    const TINY: f64 = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..10_000 {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (an * d + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).abs() < 1e-16 {
            return Ok(h * (-x).exp());
        }
    }
    Err(Error::NoConvergence {
        estimate: h * (-x).exp(),
        error: f64::NAN,
        evaluations: 10_000,
    })
}

/// Logarithmic integral li(x) = Ei(ln x), x > 1.
pub fn li(x: f64) -> Result<f64> {
    if !(x > 1.0) {
        return Err(Error::pre(format!("li requires x > 1, got {x}")));
    }
    ei(x.ln())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn li_reference_values() {
        assert!((li(2.0).unwrap() - 1.045_163_780_117_492_8).abs() < 1e-14);
        // li(10^6) = 78627.549159462181919...
        assert!((li(1e6).unwrap() / 78_627.549_159_462_18 - 1.0).abs() < 1e-13);
        // li(10^20) = 2220819602783663483.54...
        assert!((li(1e20).unwrap() / 2.220_819_602_783_663_5e18 - 1.0).abs() < 1e-12);
        assert!(li(10.0).unwrap() > li(2.0).unwrap());
        assert!(li(1.0).is_err());
    }

    #[test]
    fn soldner_root() {
        // Bisection on the implementation locates the zero.
        let (mut lo, mut hi) = (1.2, 2.0);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if li(mid).unwrap() < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert!((lo - 1.451_369_234_883_381).abs() < 1e-13);
    }

    #[test]
    fn e1_branches_meet() {
        // E1(1) = 0.21938393439552027...
        assert!((e1(1.0).unwrap() - 0.219_383_934_395_520_27).abs() < 1e-15);
        assert!((e1(1.0 + 1e-12).unwrap() - e1(1.0).unwrap()).abs() < 1e-12);
        // E1(10) = 4.156968929685324e-06
        assert!((e1(10.0).unwrap() / 4.156_968_929_685_324e-6 - 1.0).abs() < 1e-13);
        assert!((ei(-1.0).unwrap() + e1(1.0).unwrap()).abs() < 1e-16);
    }

    #[test]
    fn ei_reference_values_across_switch() {
        for (x, v) in [
            (1e-3, -6.329_539_364_025_038),
            (5.0, 40.185_275_355_803_177),
            (39.9, 5.479_032_048_901_893_5e15),
            (40.0, 6.039_718_263_611_241_6e15),
            (40.1, 6.657_825_191_607_100_0e15),
            (60.0, 1.936_182_213_929_276_5e24),
        ] {
            assert!((ei(x).unwrap() / v - 1.0).abs() < 1e-13, "Ei({x})");
        }
    }
}
