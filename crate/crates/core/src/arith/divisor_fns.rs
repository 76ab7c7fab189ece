use super::factor::Factorization;
use crate::error::{Error, Result};
use num_bigint::BigUint;
use num_complex::Complex64;

fn binomial_big(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn binomial_u64(n: u64, k: u64) -> Option<u64> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        acc = acc * (n as u128 - i) / (i + 1);
        if acc > u64::MAX as u128 {
            return None;
        }
    }
    Some(acc as u64)
}

/// τ_k(n) = Π_{p^ν ∥ n} C(k+ν−1, ν), exact.
pub fn tau_k(f: &Factorization, k: u32) -> Result<BigUint> {
    if k == 0 {
        return Err(Error::pre("tau_k requires k >= 1"));
    }
    Ok(f.factors()
        .iter()
        .map(|&(_, nu)| binomial_big(k as u64 + nu as u64 - 1, nu as u64))
        .product())
}

/// τ_k(n) if it fits in a u64.
pub fn tau_k_u64(f: &Factorization, k: u32) -> Option<u64> {
    if k == 0 {
        return None;
    }
    f.factors().iter().try_fold(1u64, |acc, &(_, nu)| {
        acc.checked_mul(binomial_u64(k as u64 + nu as u64 - 1, nu as u64)?)
    })
}

/// J_a(n) = n^a Π_{p | n} (1 − p^(−a)), a ∈ (0, 2/3].
pub fn jordan_weighted(f: &Factorization, a: f64) -> Result<f64> {
    if !(a > 0.0 && a <= 2.0 / 3.0) {
        return Err(Error::pre(format!("Jordan parameter must lie in (0, 2/3], got {a}")));
    }
    Ok(f.factors()
        .iter()
        .map(|&(p, e)| {
            let pa = (p as f64).powf(a);
            pa.powi(e as i32 - 1) * (pa - 1.0)
        })
        .product())
}

/// τ(p^ν; v) = Σ_{j=0}^{ν} p^(ijv).
pub fn tau_abs_prime_power(p: u64, nu: u32, v: f64) -> f64 {
    prime_power_factor(p, nu, v).norm()
}

fn prime_power_factor(p: u64, nu: u32, v: f64) -> Complex64 {
    let theta = v * (p as f64).ln();
    (0..=nu)
        .map(|j| Complex64::from_polar(1.0, j as f64 * theta))
        .sum()
}

/// τ(n; v) = Σ_{d | n} d^(iv), evaluated as a product over prime powers.
pub fn tau_complex(f: &Factorization, v: f64) -> Complex64 {
    f.factors()
        .iter()
        .map(|&(p, nu)| prime_power_factor(p, nu, v))
        .product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::factorize;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gcd(a: u64, b: u64) -> u64 {
        if b == 0 { a } else { gcd(b, a % b) }
    }

    fn tau_k_brute(n: u64, k: u32) -> u64 {
        if k == 1 {
            return 1;
        }
        (1..=n).filter(|d| n % d == 0).map(|d| tau_k_brute(n / d, k - 1)).sum()
    }

    fn tau_direct(n: u64, v: f64) -> Complex64 {
        (1..=n)
            .filter(|d| n % d == 0)
            .map(|d| Complex64::from_polar(1.0, v * (d as f64).ln()))
            .sum()
    }

    #[test]
    fn tau_k_examples() {
        let f6 = factorize(6).unwrap();
        assert_eq!(tau_k(&f6, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(tau_k(&factorize(4).unwrap(), 3).unwrap(), BigUint::from(6u32));
        assert_eq!(tau_k_brute(4, 3), 6);
        assert_eq!(tau_k(&factorize(123_456).unwrap(), 1).unwrap(), BigUint::from(1u32));
        for n in 1..=200 {
            let f = factorize(n).unwrap();
            for k in 1..=4 {
                assert_eq!(tau_k_u64(&f, k), Some(tau_k_brute(n, k)));
            }
        }
    }

    #[test]
    fn tau_k_promotes_instead_of_wrapping() {
        let f = factorize(1 << 39).unwrap();
        assert_eq!(tau_k_u64(&f, 1000), None);
        // C(1038, 39) has more than 64 bits.
        assert!(tau_k(&f, 1000).unwrap().bits() > 64);
    }

    #[test]
    fn tau_k_bounded_by_k_pow_big_omega() {
        for n in 1..=100_000u64 {
            let f = factorize(n).unwrap();
            for k in 1..=6u32 {
                let t = tau_k_u64(&f, k).unwrap();
                assert!(t <= (k as u64).pow(f.big_omega()), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn jordan_examples() {
        assert_eq!(jordan_weighted(&factorize(1).unwrap(), 0.3).unwrap(), 1.0);
        let j2 = jordan_weighted(&factorize(2).unwrap(), 0.5).unwrap();
        assert!((j2 - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!(jordan_weighted(&factorize(2).unwrap(), 0.7).is_err());
        assert!(jordan_weighted(&factorize(2).unwrap(), 0.0).is_err());
    }

    #[test]
    fn jordan_divisor_sum_identity() {
        for a in [0.1, 0.5, 2.0 / 3.0] {
            for n in 1..=10_000u64 {
                let f = factorize(n).unwrap();
                let s: f64 = f
                    .divisors()
                    .unwrap()
                    .divisors()
                    .iter()
                    .map(|&d| jordan_weighted(&factorize(d).unwrap(), a).unwrap())
                    .sum();
                let target = (n as f64).powf(a);
                assert!((s / target - 1.0).abs() < 1e-10, "n={n} a={a}");
            }
        }
    }

    #[test]
    fn tau_complex_examples() {
        let f6 = factorize(6).unwrap();
        assert_eq!(tau_complex(&f6, 0.0), Complex64::new(4.0, 0.0));
        let t2 = tau_complex(&factorize(2).unwrap(), 1.0).norm();
        assert!((t2 - 2.0 * (0.5 * 2f64.ln()).cos().abs()).abs() < 1e-15);
        assert!((t2 - 1.881_084_209_366_487_7).abs() < 1e-14);
        for n in [1u64, 12, 360, 9263, 30030] {
            for v in [0.0, 0.3, 1.0, 7.5] {
                let f = factorize(n).unwrap();
                let a = tau_complex(&f, v);
                let b = tau_direct(n, v);
                assert!((a - b).norm() < 1e-10 * f.tau() as f64);
                assert!(a.norm() <= f.tau() as f64 + 1e-9);
            }
        }
    }

    #[test]
    fn multiplicativity_on_random_coprime_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut checked = 0;
        while checked < 2000 {
            let m = rng.random_range(1..=10_000u64);
            let n = rng.random_range(1..=10_000u64);
            if gcd(m, n) != 1 {
                continue;
            }
            checked += 1;
            let (fm, fn_, fmn) = (factorize(m).unwrap(), factorize(n).unwrap(), factorize(m * n).unwrap());
            for k in 1..=4 {
                assert_eq!(tau_k(&fmn, k).unwrap(), tau_k(&fm, k).unwrap() * tau_k(&fn_, k).unwrap());
            }
            let v = rng.random_range(0.0..1.0);
            let lhs = tau_complex(&fmn, v).norm();
            let rhs = tau_complex(&fm, v).norm() * tau_complex(&fn_, v).norm();
            assert!((lhs - rhs).abs() < 1e-9 * (1.0 + rhs));
        }
    }

    proptest! {
        #[test]
        fn tau_k_epsilon_bound(n in 1u64..=100_000, k in 2u32..=3, which in 0usize..3) {
            let eps = [0.05, 0.1, (k - 1) as f64 / 6.0][which];
            let f = factorize(n).unwrap();
            let lhs = (tau_k_u64(&f, k).unwrap() as f64).ln();
            let kf = k as f64;
            let rhs = kf.powf(1.0 / eps) * (kf - 1.0) * (3.0 * (kf - 1.0) / (5.0 * eps)).ln()
                + eps * (n as f64).ln();
            prop_assert!(lhs <= rhs);
        }
    }
}
