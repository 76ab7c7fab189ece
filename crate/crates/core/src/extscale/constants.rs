use super::ext::ExtReal;
use crate::error::{Error, Result};
use serde::Serialize;
use std::f64::consts::{E, LN_2, PI};

/// ζ(2) = π²/6.
pub const ZETA2: f64 = 1.644_934_066_848_226_4;

/// Multiplier turning Λ(2, ℓ) into the Δ corollary constant.
pub const COROLLARY_FACTOR: f64 = 16748.0;

/// The Main Theorem constants for one (k, ℓ).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantBundle {
    pub k: u32,
    pub ell: f64,
    /// 125^k · 1092 / k³
    pub a: f64,
    /// ½ e^(4/e) k^(20ℓ)
    pub b: f64,
    /// (10ℓ(k−1))^(k^(16ℓ)(k−1))
    pub c: ExtReal,
    pub d: ExtReal,
    /// A·max(A, 2k^(5ℓA)), the first summand of D.
    pub d_main: ExtReal,
    /// (2A)^(−A/4) e^(B/e) k^(5ℓB), present when A < B.
    pub d_tail: Option<ExtReal>,
    pub lambda: ExtReal,
    pub ln_x_threshold: ExtReal,
    /// A < B
    pub delta_flag: bool,
}

fn finite(term: &str, v: ExtReal) -> Result<ExtReal> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow(term.to_string()))
    }
}

fn sum(term: &str, parts: &[ExtReal]) -> Result<ExtReal> {
    let mut acc = ExtReal::ZERO;
    for p in parts {
        acc = acc.add(p).value; // all summands are positive
    }
    finite(term, acc)
}

pub fn constants(k: u32, ell: f64) -> Result<ConstantBundle> {
    if !(2..=10).contains(&k) {
        return Err(Error::pre(format!("k must lie in 2..=10, got {k}")));
    }
    if !(1.0..=10.0).contains(&ell) {
        return Err(Error::pre(format!("ℓ must lie in [1, 10], got {ell}")));
    }
    let kf = k as f64;
    let lnk = kf.ln();
    let a = 125f64.powi(k as i32) * 1092.0 / (kf * kf * kf);
    let b = 0.5 * (4.0 / E).exp() * kf.powf(20.0 * ell);

    let c = finite(
        "C",
        ExtReal::from_ln(kf.powf(16.0 * ell) * (kf - 1.0) * (10.0 * ell * (kf - 1.0)).ln()),
    )?;

    let ln_two_pow = LN_2 + 5.0 * ell * a * lnk;
    let d_main = finite("A·max(A, 2k^(5ℓA))", ExtReal::from_ln(a.ln() + a.ln().max(ln_two_pow)))?;
    let delta_flag = a < b;
    let d_tail = if delta_flag {
        let ln = -(a / 4.0) * (2.0 * a).ln() + b / E + 5.0 * ell * b * lnk;
        Some(finite("(2A)^(-A/4) e^(B/e) k^(5ℓB)", ExtReal::from_ln(ln))?)
    } else {
        None
    };
    let five = ExtReal::from_f64(5.0);
    let d = match d_tail {
        Some(t) => sum("D", &[d_main, t, five])?,
        None => sum("D", &[d_main, five])?,
    };

    let lambda = sum(
        "Λ",
        &[
            ExtReal::from_ln((12.0 * ell).ln() + 6.0 * ell * lnk),
            c * (5.0 * ell),
            d * (9.0 * ell),
        ],
    )?;

    Ok(ConstantBundle {
        k,
        ell,
        a,
        b,
        c,
        d,
        d_main,
        d_tail,
        lambda,
        ln_x_threshold: x_threshold(ell)?,
        delta_flag,
    })
}

/// ln x_min = 7^28 (12eℓ)^(28 ln(192eℓ)).
pub fn x_threshold(ell: f64) -> Result<ExtReal> {
    if !(1.0..=10.0).contains(&ell) {
        return Err(Error::pre(format!("ℓ must lie in [1, 10], got {ell}")));
    }
    let lnln = 28.0 * 7f64.ln() + 28.0 * (192.0 * E * ell).ln() * (12.0 * E * ell).ln();
    finite("x threshold", ExtReal::from_ln(lnln))
}

/// Λ · y · S / log x.
pub fn main_rhs(bundle: &ConstantBundle, x: f64, y: f64, s: f64) -> Result<ExtReal> {
    if !(s >= 0.0) {
        return Err(Error::pre(format!("Σ f(n)/n must be non-negative, got {s}")));
    }
    if !(x > 1.0) || !(y >= 0.0) {
        return Err(Error::pre(format!("main_rhs requires x > 1 and y >= 0, got x={x}, y={y}")));
    }
    Ok(bundle.lambda * ExtReal::from_f64(y) * ExtReal::from_f64(s) / ExtReal::from_f64(x.ln()))
}

/// φ(ℓ) = 16748 Λ(2, ℓ).
pub fn phi(ell: f64) -> Result<ExtReal> {
    Ok(constants(2, ell)?.lambda * COROLLARY_FACTOR)
}

/// Without j: φ(ℓ)·y·(log x)^(−1+4/π). With j: φ(ℓ)·(y/log x)·(4e log log x/(πj))^j.
pub fn corollary_rhs(ell: f64, x: f64, y: f64, j: Option<u32>) -> Result<ExtReal> {
    if !(y >= 0.0) {
        return Err(Error::pre(format!("y must be non-negative, got {y}")));
    }
    let phi = phi(ell)?;
    let y = ExtReal::from_f64(y);
    match j {
        None => {
            if !(x > 1.0) {
                return Err(Error::pre(format!("x must exceed 1, got {x}")));
            }
            let lx = ExtReal::from_f64(x.ln());
            Ok(phi * y * lx.powf(-1.0 + 4.0 / PI).expect("log x > 0"))
        }
        Some(j) => {
            if j == 0 {
                return Err(Error::pre("j must be at least 1"));
            }
            if !(x > E.powf(E)) {
                return Err(Error::pre(format!("x must exceed e^e when j is given, got {x}")));
            }
            let lx = x.ln();
            let base = 4.0 * E * lx.ln() / (PI * j as f64);
            Ok(phi * y / ExtReal::from_f64(lx) * ExtReal::from_f64(base).powf(j as f64).expect("base > 0"))
        }
    }
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
}

/// max_{0≤h≤2k−2} (C(k−1,h+2)² + C(2k−1,h+2) + k²C(2k−1,h+1)).
pub fn landreau_m(k: u32) -> u64 {
    let k = k as u64;
    (0..=2 * k - 2)
        .map(|h| binom(k - 1, h + 2).pow(2) + binom(2 * k - 1, h + 2) + k * k * binom(2 * k - 1, h + 1))
        .max()
        .unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LandreauBound {
    pub k: u32,
    pub m_k: u64,
    /// 2k⁴ (e/2)^(k⁴) ζ(2)^(4^k k³ M_k)
    pub constant: ExtReal,
    /// constant · y · (log x)^(k⁴)
    pub bound: ExtReal,
}

pub fn landreau_bound(k: u32, x: f64, y: f64) -> Result<LandreauBound> {
    if !(2..=10).contains(&k) {
        return Err(Error::pre(format!("k must lie in 2..=10, got {k}")));
    }
    if !(x > 1.0) || !(y >= 0.0) {
        return Err(Error::pre(format!("landreau_bound requires x > 1 and y >= 0, got x={x}, y={y}")));
    }
    let kf = k as f64;
    let k4 = kf.powi(4);
    let m_k = landreau_m(k);
    let zeta_exp = 4f64.powi(k as i32) * kf.powi(3) * m_k as f64;
    let constant = ExtReal::from_ln(
        (2.0 * k4).ln() + k4 * (E / 2.0).ln() + zeta_exp * ZETA2.ln(),
    );
    let bound = constant * ExtReal::from_f64(y) * ExtReal::from_f64(x.ln()).powf(k4).expect("log x > 0");
    Ok(LandreauBound {
        k,
        m_k,
        constant,
        bound,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k2_l1_bundle() {
        let c = constants(2, 1.0).unwrap();
        assert_eq!(c.a, 2_132_812.5);
        assert!((c.b / 2_283_715.307 - 1.0).abs() < 1e-9);
        assert!(c.delta_flag && c.d_tail.is_some());
        assert!((c.c.log10() - 65536.0).abs() < 1e-9);
        assert!((c.lambda.lnmag() / 7_391_782.318_513_889 - 1.0).abs() < 1e-12);
        // The first summand of D dominates Λ.
        assert!((c.lambda.lnmag() - c.d_main.lnmag() - (9f64).ln()).abs() < 1e-6);
    }

    #[test]
    fn delta_flag_can_be_false() {
        // A_k grows like 125^k, B like k^(20ℓ): at k = 10, ℓ = 1 B wins, at
        // ℓ = 1 and k = 3 compare directly.
        for k in 2..=10 {
            let c = constants(k, 1.0).unwrap();
            assert_eq!(c.delta_flag, c.a < c.b);
            assert_eq!(c.d_tail.is_some(), c.delta_flag);
        }
    }

    #[test]
    fn domain_errors() {
        assert!(constants(1, 1.0).is_err());
        assert!(constants(11, 1.0).is_err());
        assert!(constants(2, 0.5).is_err());
        assert!(constants(10, 10.0).is_ok());
    }

    #[test]
    fn threshold() {
        let t1 = x_threshold(1.0).unwrap();
        let expect = 28.0 * 7f64.ln() + 28.0 * (192.0 * E).ln() * (12.0 * E).ln();
        assert!((t1.lnmag() - expect).abs() < 1e-12);
        assert!((t1.lnmag() - 665.1).abs() < 0.05);
        assert!((t1.log10() - 288.84).abs() < 0.01);
        assert!(x_threshold(2.0).unwrap() > t1);
    }

    #[test]
    fn main_rhs_properties() {
        let b = constants(2, 1.0).unwrap();
        assert!(main_rhs(&b, 10.0, 5.0, 0.0).unwrap().is_zero());
        let unit = main_rhs(&b, E, 1.0, 1.0).unwrap();
        assert!((unit.lnmag() - b.lambda.lnmag()).abs() < 1e-9);
        let one = main_rhs(&b, 1e6, 10.0, 3.0).unwrap();
        let two = main_rhs(&b, 1e6, 20.0, 3.0).unwrap();
        assert!((two.lnmag() - one.lnmag() - LN_2).abs() < 1e-9);
        assert!(main_rhs(&b, 10.0, 1.0, -1.0).is_err());
    }

    #[test]
    fn corollary_rhs_cases() {
        let phi1 = phi(1.0).unwrap();
        let r = corollary_rhs(1.0, E, 1.0, None).unwrap();
        assert!((r.lnmag() - phi1.lnmag()).abs() < 1e-9);
        assert!((phi1.lnmag() - constants(2, 1.0).unwrap().lambda.lnmag() - 16748f64.ln()).abs() < 1e-9);
        assert!(corollary_rhs(1.0, E.powf(E), 1.0, Some(1)).is_err());
        assert!(corollary_rhs(1.0, 1e6, 1.0, Some(1)).is_ok());
    }

    #[test]
    fn landreau() {
        assert_eq!(landreau_m(2), 15);
        let lb = landreau_bound(2, 1e6, 1e3).unwrap();
        let expect = (32f64).ln() + 16.0 * (E / 2.0).ln() + 1920.0 * ZETA2.ln();
        assert!((lb.constant.lnmag() - expect).abs() < 1e-9);
        assert!((ZETA2 - PI * PI / 6.0).abs() < 1e-16);
    }
}
