use super::oracle::Oracle;
use super::{constants, x_threshold};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn lambda_matches_high_precision() {
    let mut o = Oracle::new();
    for k in 2..=4u32 {
        for ell in 1..=3u32 {
            let want = o.ln_lambda(k, ell);
            let want = o.to_f64(&want);
            let got = constants(k, ell as f64).unwrap().lambda.lnmag();
            assert!(rel(got, want) < 1e-12, "k={k} ℓ={ell}: {got} vs {want}");
        }
    }
}

#[test]
fn frozen_reference_values() {
    let mut o = Oracle::new();
    let l21 = o.ln_lambda(2, 1);
    assert!(rel(o.to_f64(&l21), 7_391_782.318_513_889) < 1e-14);
    let t1 = o.ln_ln_threshold(1);
    assert!(rel(o.to_f64(&t1), 665.075_526_697_471_9) < 1e-14);
}

#[test]
fn threshold_matches_high_precision() {
    let mut o = Oracle::new();
    for ell in 1..=10u32 {
        let want = o.ln_ln_threshold(ell);
        let want = o.to_f64(&want);
        let got = x_threshold(ell as f64).unwrap().lnmag();
        assert!(rel(got, want) < 1e-13, "ℓ={ell}: {got} vs {want}");
    }
}
