//! One PASS/FAIL line per acceptance criterion. Exits non-zero if any fails.

#[path = "../src/extscale/oracle.rs"]
mod oracle;

use hooley_core::arith::{delta, delta_k, factorize, short_sum, ArithFn};
use hooley_core::extscale::constants;
use hooley_core::primes::{prime_constant_sums_split, PrimeTable};
use hooley_core::verify::{
    check_mertens_b, check_pi_li_endpoints, check_proposition, check_smoothing, check_tau_mertens,
    classify_window, linspace, run_all, InequalityReport, VerifyConfig, VerifyContext,
};
use oracle::Oracle;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const SEED: u64 = 20_240_611;

type Verdict = (bool, String);

fn summary(r: &InequalityReport) -> String {
    format!(
        "{}: {} points, {} failures, min_margin {:.3e}",
        r.check_id, r.points_checked, r.failures, r.min_margin
    )
}

fn ctx(sieve_limit: u64) -> VerifyContext {
    VerifyContext::new(VerifyConfig {
        sieve_limit,
        ..VerifyConfig::default()
    })
    .unwrap()
}

fn ac1() -> Verdict {
    let table = PrimeTable::build(1_000_000).unwrap();
    let s = prime_constant_sums_split(&table, 10_000, 1_000_000).unwrap();
    let checks = [
        ("s1", s.s1, 2.92135),
        ("s2", s.s2, 8.159998),
        ("s1+tail", s.s1_total(), 2.9215),
        ("s2+tail", s.s2_total(), 8.16001),
    ];
    let ok = checks.iter().all(|&(_, v, b)| v < b);
    let parts: Vec<String> = checks
        .iter()
        .map(|&(name, v, b)| format!("{name} {v:.10} < {b} (margin {:.2e})", b - v))
        .collect();
    (ok, parts.join("; "))
}

fn ac2() -> Verdict {
    let c = ctx(10_000_000);
    let reports = [
        check_pi_li_endpoints(&c, 2.0, 2657.0).unwrap(),
        check_mertens_b(&c, 127.0, 293.0).unwrap(),
        check_mertens_b(&c, 127.0, 1e6).unwrap(),
    ];
    let ok = reports.iter().all(|r| r.passed);
    let parts: Vec<String> = reports.iter().map(summary).collect();
    (ok, parts.join("; "))
}

fn ac3() -> Verdict {
    let r = check_proposition(&ctx(1_000_000), &[1e3, 1e4, 1e5, 1e6], &[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
    (r.passed, summary(&r))
}

/// Δ(n) by direct counting: for every divisor d and every u on a 1/1024 grid
/// of [−1, log n], count divisors in (e^u, e^(u+1)].
fn dense_delta(n: u64) -> u64 {
    let ds: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
    let count = |lo: f64, hi: f64| ds.iter().filter(|&&d| lo < d as f64 && d as f64 <= hi).count() as u64;
    // windows with a divisor on the right edge: (d/e, d]
    let edges = ds.iter().map(|&d| count(d as f64 / std::f64::consts::E, d as f64)).max().unwrap();
    let steps = (((n as f64).ln() + 1.0) * 1024.0).ceil() as usize;
    let grid = (0..=steps)
        .map(|j| {
            let u = -1.0 + j as f64 / 1024.0;
            count(u.exp(), (u + 1.0).exp())
        })
        .max()
        .unwrap();
    edges.max(grid)
}

fn ac4() -> Verdict {
    let mut bad = Vec::new();
    for n in 1..=10_000u64 {
        if delta(n).unwrap().value != dense_delta(n) {
            bad.push(n);
        }
    }
    let mut bad_k = Vec::new();
    for n in 1..=1_000u64 {
        if delta_k(n, 2).unwrap() != delta(n).unwrap().value {
            bad_k.push(n);
        }
    }
    let ok = bad.is_empty() && bad_k.is_empty();
    (
        ok,
        format!(
            "Δ vs dense grid: {} mismatches over n ≤ 10^4 {:?}; Δ₂ vs Δ: {} mismatches over n ≤ 10^3",
            bad.len(),
            &bad[..bad.len().min(5)],
            bad_k.len()
        ),
    )
}

fn ac5() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut violations = Vec::new();
    for _ in 0..10_000 {
        let m = rng.random_range(1..=1000u64);
        let n = rng.random_range(1..=1000u64);
        let lhs = delta(m * n).unwrap().value;
        let rhs = factorize(m).unwrap().tau() * delta(n).unwrap().value;
        if lhs > rhs {
            violations.push((m, n));
        }
    }
    (
        violations.is_empty(),
        format!("10^4 pairs, {} violations {:?}", violations.len(), &violations[..violations.len().min(5)]),
    )
}

fn ac6() -> Verdict {
    let r = check_smoothing(&ctx(1_000_000), 2000).unwrap();
    let w = r.witness.get("n").copied().unwrap_or(f64::NAN);
    (r.passed, format!("{}; worst n = {w}", summary(&r)))
}

fn ac7() -> Verdict {
    let b = constants(2, 1.0).unwrap();
    let mut o = Oracle::new();
    let want_lambda = o.ln_lambda(2, 1);
    let want_lambda = o.to_f64(&want_lambda);
    let want_thr = o.ln_ln_threshold(1);
    let want_thr = o.to_f64(&want_thr);
    let got_lambda = b.lambda.lnmag();
    let got_thr = b.ln_x_threshold.lnmag();
    let rel_lambda = ((got_lambda - want_lambda) / want_lambda).abs();
    let rel_thr = ((got_thr - want_thr) / want_thr).abs();
    let log10_c = b.c.log10();
    let ok = log10_c == 65536.0 && rel_lambda < 1e-6 && b.delta_flag && rel_thr < 1e-3;
    (
        ok,
        format!(
            "log10 C = {log10_c}; ln Λ = {got_lambda} (oracle rel err {rel_lambda:.1e}); δ-flag {}; ln ln x_thr = {got_thr} (oracle rel err {rel_thr:.1e})",
            b.delta_flag
        ),
    )
}

fn ac8() -> Verdict {
    let start = Instant::now();
    let results = run_all(&ctx(VerifyConfig::default().sieve_limit));
    let mut failed = Vec::new();
    let mut at_equality = Vec::new();
    for (id, r) in &results {
        match r {
            Ok(r) if r.passed && r.min_margin > 0.0 => {}
            Ok(r) if r.passed => at_equality.push(id.as_str()),
            Ok(r) => failed.push(format!("{id} ({} failures)", r.failures)),
            Err(e) => failed.push(format!("{id} (error: {e})")),
        }
    }
    (
        failed.is_empty() && at_equality.is_empty(),
        format!(
            "{} checks in {:.1} s; failing: {}; passing with zero margin (equality attained): {}",
            results.len(),
            start.elapsed().as_secs_f64(),
            if failed.is_empty() { "none".to_string() } else { failed.join(", ") },
            if at_equality.is_empty() { "none".to_string() } else { at_equality.join(", ") }
        ),
    )
}

fn ac9() -> Verdict {
    let c = ctx(1_000_000);
    let vs = linspace(0.0, 1.0, 21);
    let log_t = 8.2f64;
    let mut branches = [0.0; 3];
    let mut ok = true;
    let mut parts = Vec::new();
    for x in [1e4, 1e5, 1e6] {
        let r = check_tau_mertens(&c, x, &vs, log_t.exp(), 0.6 * log_t).unwrap();
        ok &= r.passed;
        for (i, b) in branches.iter_mut().enumerate() {
            *b += r.details[&format!("branch{}_points", i + 1)];
        }
        parts.push(format!("x={x:e}: {}", summary(&r)));
    }
    ok &= branches.iter().all(|&b| b > 0.0);
    parts.push(format!("branch points {branches:?}"));
    (ok, parts.join("; "))
}

fn ac10() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    let mut mismatches = 0;
    for _ in 0..20 {
        let x: f64 = rng.random_range(3f64.ln()..=1e8f64.ln()).exp();
        let y: f64 = rng.random_range(8f64.ln()..=x.min(1e5).ln()).exp();
        for f in [ArithFn::TauK(2), ArithFn::Delta] {
            let c = classify_window(x, y, f).unwrap();
            if c.total() != short_sum(f, x, y).unwrap() {
                mismatches += 1;
            }
        }
    }
    (mismatches == 0, format!("20 windows × {{τ₂, Δ}}: {mismatches} mismatches"))
}

fn main() {
    let criteria: [(&str, fn() -> Verdict); 10] = [
        ("AC1 prime-sum constants", ac1),
        ("AC2 π/li and Mertens verification", ac2),
        ("AC3 weighted Δ bounds at desk scale", ac3),
        ("AC4 Δ oracle equivalence", ac4),
        ("AC5 sub-multiplicativity", ac5),
        ("AC6 smoothing inequality", ac6),
        ("AC7 constants", ac7),
        ("AC8 full check registry", ac8),
        ("AC9 Mertens-type τ bound", ac9),
        ("AC10 class decomposition", ac10),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let (ok, detail) = run();
        let secs = start.elapsed().as_secs_f64();
        println!("{} {name} [{secs:.2} s]: {detail}", if ok { "PASS" } else { "FAIL" });
        failed += usize::from(!ok);
    }
    println!("{} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
