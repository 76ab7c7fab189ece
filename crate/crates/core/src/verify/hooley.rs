use super::grid::{describe, linspace};
use super::primesums::{LOG_T, MEAN_CONSTANTS, MERTENS_B, Q_OVER_LOG_T, TAU_MERTENS_PARAMS, ZETA3};
use super::report::{InequalityReport, MarginTracker, Relation, Sample};
use super::{find, finish, Outcome, VerifyContext};
use crate::arith::{delta_moments, delta_of, for_each_factored, short_sum, tau_abs_prime_power, ArithFn, MAX_SHORT_WINDOW};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::extscale::{constants, corollary_rhs, main_rhs, ExtReal};
use crate::specialfun::{frak_m, quad, quad_with_kinks};
use std::f64::consts::PI;

/// Constant of the unweighted bound Σ t^ω(n)Δ(n) < c x(log ex)^{−1+4t/π}.
pub const PROPOSITION_CONSTANT: f64 = 9380.0;
/// Constant of the logarithmic bound Σ t^ω(n)Δ(n)/n < c(log ex)^{4t/π}.
pub const PROPOSITION_LOG_CONSTANT: f64 = 16748.0;

fn report(ctx: &VerifyContext, id: &str, outcome: Outcome) -> Result<InequalityReport> {
    finish(ctx, find(id).expect("registered"), outcome)
}

/// Σ_{n≤x} τ(n) = 2Σ_{d≤√x}⌊x/d⌋ − ⌊√x⌋².
fn divisor_summatory(x: u64) -> u128 {
    let r = x.isqrt();
    let s: u128 = (1..=r).map(|d| (x / d) as u128).sum();
    2 * s - (r as u128) * (r as u128)
}

fn proposition_into(xs: &[f64], ts: &[f64], t: &mut MarginTracker) -> Result<()> {
    for &tt in ts {
        if !(0.0..=1.0).contains(&tt) {
            return Err(Error::pre(format!("t must lie in [0, 1], got {tt}")));
        }
    }
    for &x in xs {
        if !(x >= 1.0) {
            return Err(Error::pre(format!("x must be at least 1, got {x}")));
        }
        let moments = delta_moments(x)?;
        let lex = 1.0 + x.ln();
        for &tt in ts {
            let (s, sh) = moments.eval(tt);
            let e = 4.0 * tt / PI;
            let pt = |step: f64| vec![("x", x), ("t", tt), ("step", step)];
            t.push(Sample::new(pt(1.0), s, PROPOSITION_CONSTANT * x * lex.powf(e - 1.0), Relation::Lt))?;
            t.push(Sample::new(pt(2.0), sh, PROPOSITION_LOG_CONSTANT * lex.powf(e), Relation::Lt))?;
        }
        let xf = x.floor() as u64;
        let taus = divisor_summatory(xf) as f64;
        t.push(Sample::new(vec![("x", x), ("t", 1.0), ("step", 3.0)], taus, x * lex, Relation::Le))?;
        t.push(Sample::new(vec![("x", x), ("t", 1.0), ("step", 4.0)], x * lex, PROPOSITION_CONSTANT * x / lex, Relation::Lt))?;
    }
    Ok(())
}

/// Both weighted Δ bounds for every (x, t), plus the divisor-sum bound used
/// below the range where the argument starts.
pub fn check_proposition(ctx: &VerifyContext, xs: &[f64], ts: &[f64]) -> Result<InequalityReport> {
    let mut t = MarginTracker::new("P3.1");
    proposition_into(xs, ts, &mut t)?;
    report(ctx, "P3.1", Outcome::new(proposition_grid(xs, ts), t))
}

fn proposition_grid(xs: &[f64], ts: &[f64]) -> String {
    format!(
        "{}; steps 1 Σt^ωΔ, 2 Σt^ωΔ/n, 3 Στ ≤ x log(ex), 4 x log(ex) < 9380x/log(ex)",
        describe(&[("x", xs), ("t", ts)])
    )
}

pub(crate) fn proposition(ctx: &VerifyContext) -> Result<Outcome> {
    let xs = ctx.axis("x", vec![1e3, 1e4, 1e5, 1e6]);
    let ts = ctx.axis("t", linspace(0.0, 1.0, 5));
    let work: f64 = xs.iter().sum();
    ctx.charge("P3.1", work as u64)?;
    let mut t = MarginTracker::new("P3.1");
    proposition_into(&xs, &ts, &mut t)?;
    Ok(Outcome::new(proposition_grid(&xs, &ts), t))
}

fn mean_prefactor() -> f64 {
    let (a1, a2, a3) = MEAN_CONSTANTS;
    let (a, _, r, _, _, _) = TAU_MERTENS_PARAMS;
    (2.0 * MERTENS_B + 4.0 * a * ZETA3 / (2.0 * PI).powi(r) + a2).exp() * (a1 + a3 + 1.0) / 1f64.sin()
}

fn tail_factor() -> f64 {
    let (a, b, r, s, _, _) = TAU_MERTENS_PARAMS;
    (14.0 * a / LOG_T.powi(r) + 2.0 * b / LOG_T.powi(s)).exp()
}

/// The closed form bounding the v-integral, divided by λE x. `final_form`
/// replaces π/(4t+π) by π/(4+π).
fn closed_form(lnx: f64, t: f64, final_form: bool) -> f64 {
    let q = Q_OVER_LOG_T * LOG_T;
    let c = (4.0 * frak_m() * t / q).exp();
    let lex = 1.0 + lnx;
    let d = PI - 2.0 * t * (PI - 2.0);
    let bracket =
        q.powf(-4.0 * t / PI) * LOG_T * LOG_T + 2.0 * PI * t * q / (d * LOG_T.powf(1.0 + t * (4.0 / PI - 2.0)));
    let lead = PI * c / (4.0 * if final_form { 1.0 } else { t } + PI) * lex.powf(-1.0 + 4.0 * t / PI) * bracket;
    if final_form {
        lead
    } else {
        lead - q * lnx.powf(2.0 * (t - 1.0)) * (PI * c + 2.0 * t * (PI - 2.0) - PI) / d
    }
}

/// The three-piece v-integral of exp(t·bound(v)) without its common constant,
/// divided by log(ex), by quadrature.
fn integral_form(lnx: f64, t: f64) -> Result<f64> {
    let q = Q_OVER_LOG_T * LOG_T;
    let c = 4.0 * frak_m() * t / q;
    let ll = lnx.ln();
    let (b1, b2) = (q / lnx, q / LOG_T);
    // the integrand is at most (log x)^2 e^{4𝔪/q}(log T)^2
    let tol = 1e-12 * (lnx * LOG_T).powf(2.0 * t).max(1.0) * c.exp();
    let p1 = quad(|_| (2.0 * t * ll).exp(), 0.0, b1, tol)?.value;
    let p2 = quad(
        |v| (4.0 * t / PI * ll - (2.0 - 4.0 / PI) * t * (v / q).ln() + c).exp(),
        b1,
        b2,
        tol,
    )?
    .value;
    let p3 = quad(
        |v| (4.0 * t / PI * ll + 4.0 * t / PI * (v / q).ln() + 2.0 * t * LOG_T.ln() + c).exp(),
        b2,
        1.0,
        tol,
    )?
    .value;
    Ok((p1 + p2 + p3) / (1.0 + lnx))
}

fn check_lnx(lnx: f64) -> Result<()> {
    if !(lnx >= LOG_T) {
        return Err(Error::pre(format!("log x must be at least log T = {LOG_T}, got {lnx}")));
    }
    Ok(())
}

/// Quadrature of the piecewise integral against the closed form it is bounded by.
pub(crate) fn proposition_integral(ctx: &VerifyContext) -> Result<Outcome> {
    let lnxs = ctx.axis("lnx", vec![12.3, 20.0, 50.0, 100.0, 1e3, 1e4]);
    let ts = ctx.axis("t", linspace(0.0, 1.0, 21));
    let mut tr = MarginTracker::new("P3.1-integral");
    for &lnx in &lnxs {
        check_lnx(lnx)?;
        for &t in &ts {
            let lhs = integral_form(lnx, t)?;
            tr.push(Sample::new(vec![("lnx", lnx), ("t", t)], lhs, closed_form(lnx, t, false), Relation::Le))?;
        }
    }
    Ok(Outcome::new(describe(&[("lnx", &lnxs), ("t", &ts)]), tr))
}

/// λE times the closed form over x(log ex)^{−1+4t/π}: the constant the chain
/// actually delivers at (log x, t). With `final_form` the π/(4+π) version.
pub fn proposition_chain_constant(t: f64, lnx: f64, final_form: bool) -> Result<f64> {
    check_lnx(lnx)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::pre(format!("t must lie in [0, 1], got {t}")));
    }
    let lex = 1.0 + lnx;
    Ok(mean_prefactor() * tail_factor() * closed_form(lnx, t, final_form) / lex.powf(-1.0 + 4.0 * t / PI))
}

/// The constant delivered by the chain against 9380, for both closed forms
/// (step 1 as assembled, step 2 after the π/(4t+π) ≤ π/(4+π) replacement).
pub(crate) fn proposition_constant(ctx: &VerifyContext) -> Result<Outcome> {
    let lnxs = ctx.axis("lnx", vec![96.0, 200.0, 1e3, 1e4]);
    let ts = ctx.axis("t", linspace(0.0, 1.0, 21));
    let mut tr = MarginTracker::new("P3.1-constant");
    let mut worst: f64 = 0.0;
    for &lnx in &lnxs {
        for &t in &ts {
            for (step, fin) in [(1.0, false), (2.0, true)] {
                let c = proposition_chain_constant(t, lnx, fin)?;
                worst = worst.max(c);
                tr.push(Sample::new(vec![("lnx", lnx), ("t", t), ("step", step)], c, PROPOSITION_CONSTANT, Relation::Lt))?;
            }
        }
    }
    Ok(Outcome::new(describe(&[("lnx", &lnxs), ("t", &ts)]), tr)
        .detail("lambda", mean_prefactor())
        .detail("tail_factor", tail_factor())
        .detail("max_constant", worst))
}

/// Where some factor |τ(p^ν; v)| vanishes on [0, 1].
fn smoothing_kinks(factors: &[(u64, u32)]) -> Vec<f64> {
    let mut ks = Vec::new();
    for &(p, nu) in factors {
        let step = 2.0 * PI / ((nu + 1) as f64 * (p as f64).ln());
        let mut v = step;
        while v < 1.0 {
            ks.push(v);
            v += step;
        }
    }
    ks.sort_by(f64::total_cmp);
    ks.dedup();
    ks
}

/// (1/sin 1)∫₀¹|τ(n;v)|dv for the factorization of n.
pub fn smoothed_tau(factors: &[(u64, u32)]) -> Result<f64> {
    let kinks = smoothing_kinks(factors);
    let f = |v: f64| factors.iter().map(|&(p, nu)| tau_abs_prime_power(p, nu, v)).product::<f64>();
    Ok(quad_with_kinks(f, 0.0, 1.0, &kinks, 1e-8)?.value / 1f64.sin())
}

fn smoothing_into(ctx: &VerifyContext, n_max: u64) -> Result<MarginTracker> {
    if n_max < 1 {
        return Err(Error::pre("n_max must be at least 1"));
    }
    if n_max > MAX_SHORT_WINDOW {
        return Err(Error::Resource(format!("smoothing check up to {n_max} exceeds {MAX_SHORT_WINDOW}")));
    }
    ctx.charge("SMOOTHING-kappa", n_max.saturating_mul(1000))?;
    let parts = for_each_factored(1, n_max, |chunk| {
        let mut t = MarginTracker::new("SMOOTHING-kappa");
        for f in chunk {
            let d = delta_of(f)?.value as f64;
            let rhs = smoothed_tau(f.factors())?;
            t.push(Sample::new(vec![("n", f.n() as f64)], d, rhs, Relation::Le))?;
        }
        Ok(t)
    })?;
    let mut t = MarginTracker::new("SMOOTHING-kappa");
    for p in parts {
        t.merge(p);
    }
    Ok(t)
}

/// Δ(n) ≤ (1/sin 1)∫₀¹|τ(n;v)|dv for every n ≤ n_max.
pub fn check_smoothing(ctx: &VerifyContext, n_max: u64) -> Result<InequalityReport> {
    let t = smoothing_into(ctx, n_max)?;
    report(ctx, "SMOOTHING-kappa", Outcome::new(format!("every n ≤ {n_max}"), t))
}

pub(crate) fn smoothing(ctx: &VerifyContext) -> Result<Outcome> {
    let n_max = ctx.axis("n_max", vec![1e4])[0] as u64;
    let t = smoothing_into(ctx, n_max)?;
    Ok(Outcome::new(format!("every n ≤ {n_max}"), t))
}

const MAIN_FNS: [ArithFn; 3] = [ArithFn::TauK(2), ArithFn::TauK(3), ArithFn::Delta];

/// Σ_{n≤x} f(n)/n for several functions in one pass.
fn harmonic_sums(x: f64, fns: &[ArithFn]) -> Result<Vec<f64>> {
    let parts = for_each_factored(1, x.floor() as u64, |chunk| {
        let mut acc = vec![CompensatedSum::new(); fns.len()];
        for fz in chunk {
            for (i, f) in fns.iter().enumerate() {
                acc[i].add(f.eval(fz)? as f64 / fz.n() as f64);
            }
        }
        Ok(acc)
    })?;
    let mut total = vec![CompensatedSum::new(); fns.len()];
    for p in parts {
        for (t, s) in total.iter_mut().zip(&p) {
            t.merge(s);
        }
    }
    Ok(total.iter().map(CompensatedSum::value).collect())
}

fn window_length(x: f64, ell: f64) -> Result<f64> {
    if !(1.0..=10.0).contains(&ell) || !(x >= 3.0) {
        return Err(Error::pre(format!("need ℓ in [1, 10] and x ≥ 3, got ℓ={ell}, x={x}")));
    }
    Ok(x.powf(1.0 / ell))
}

/// Short sums over (x − x^{1/ℓ}, x] against Λ(k,ℓ)·y/log x·Σ_{n≤x} f(n)/n.
pub(crate) fn main_bound(ctx: &VerifyContext) -> Result<Outcome> {
    let xs = ctx.axis("x", vec![1e4, 1e5, 1e6]);
    let ells = ctx.axis("ell", vec![1.0, 2.0, 3.0]);
    ctx.charge("MAIN", xs.iter().sum::<f64>() as u64 * (ells.len() as u64 + 1))?;
    let mut t = MarginTracker::new("MAIN");
    for &x in &xs {
        let harmonic = harmonic_sums(x, &MAIN_FNS)?;
        for &ell in &ells {
            let y = window_length(x, ell)?;
            for (i, f) in MAIN_FNS.iter().enumerate() {
                let bundle = constants(f.submultiplicative_k(), ell)?;
                let lhs = short_sum(*f, x, y)? as f64;
                let rhs = main_rhs(&bundle, x, y, harmonic[i])?;
                t.push(Sample::from_ext(
                    vec![("x", x), ("ell", ell), ("f", i as f64)],
                    ExtReal::from_f64(lhs),
                    rhs,
                    Relation::Le,
                ))?;
            }
        }
    }
    Ok(Outcome::new(
        format!("{}; y = x^(1/ℓ); f 0 τ₂, 1 τ₃, 2 Δ", describe(&[("x", &xs), ("ell", &ells)])),
        t,
    ))
}

/// Σ_{x−y<n≤x, ω(n)≤j} Δ(n), or the full window sum when j is None.
fn delta_window_sum(x: f64, y: f64, j: Option<u32>) -> Result<u128> {
    if j.is_none() {
        return short_sum(ArithFn::Delta, x, y);
    }
    let j = j.unwrap();
    if !(y >= 1.0 && y <= x) {
        return Err(Error::pre(format!("window requires 1 ≤ y ≤ x, got x={x}, y={y}")));
    }
    let (lo, hi) = (((x - y).floor() as u64), x.floor() as u64);
    if hi - lo > MAX_SHORT_WINDOW {
        return Err(Error::Resource(format!("window of {} integers exceeds {MAX_SHORT_WINDOW}", hi - lo)));
    }
    if lo == hi {
        return Ok(0);
    }
    let parts = for_each_factored(lo + 1, hi, |chunk| {
        chunk
            .iter()
            .filter(|f| f.omega() <= j)
            .try_fold(0u128, |acc, f| Ok(acc + delta_of(f)?.value as u128))
    })?;
    Ok(parts.into_iter().sum())
}

fn corollary_sample(ell: f64, x: f64, y: f64, j: Option<u32>) -> Result<Sample> {
    let lhs = delta_window_sum(x, y, j)? as f64;
    let rhs = corollary_rhs(ell, x, y, j)?;
    let mut point = vec![("x", x), ("y", y), ("ell", ell)];
    if let Some(j) = j {
        point.push(("j", j as f64));
    }
    Ok(Sample::from_ext(point, ExtReal::from_f64(lhs), rhs, Relation::Le))
}

/// One corollary point: COR1.3 when `j` is given, COR1.2 otherwise.
pub fn check_corollaries(ctx: &VerifyContext, ell: f64, x: f64, y: f64, j: Option<u32>) -> Result<InequalityReport> {
    let id = if j.is_some() { "COR1.3" } else { "COR1.2" };
    let mut t = MarginTracker::new(id);
    t.push(corollary_sample(ell, x, y, j)?)?;
    let grid = match j {
        Some(j) => format!("x={x}, y={y}, ℓ={ell}, j={j}"),
        None => format!("x={x}, y={y}, ℓ={ell}"),
    };
    report(ctx, id, Outcome::new(grid, t))
}

fn corollary_grid(ctx: &VerifyContext, id: &str, js: &[Option<u32>]) -> Result<Outcome> {
    let xs = ctx.axis("x", vec![1e4, 1e5, 1e6]);
    let ells = ctx.axis("ell", vec![1.0, 2.0, 3.0]);
    ctx.charge(id, xs.iter().sum::<f64>() as u64 * (ells.len() * js.len()) as u64)?;
    let mut t = MarginTracker::new(id);
    for &x in &xs {
        for &ell in &ells {
            let y = window_length(x, ell)?;
            for &j in js {
                t.push(corollary_sample(ell, x, y, j)?)?;
            }
        }
    }
    Ok(Outcome::new(format!("{}; y = x^(1/ℓ)", describe(&[("x", &xs), ("ell", &ells)])), t))
}

pub(crate) fn corollary_delta(ctx: &VerifyContext) -> Result<Outcome> {
    corollary_grid(ctx, "COR1.2", &[None])
}

pub(crate) fn corollary_omega(ctx: &VerifyContext) -> Result<Outcome> {
    let js: Vec<Option<u32>> = ctx
        .axis("j", vec![1.0, 2.0, 3.0, 4.0, 6.0])
        .into_iter()
        .map(|j| Some(j as u32))
        .collect();
    let mut o = corollary_grid(ctx, "COR1.3", &js)?;
    o.grid.push_str(&format!("; j in {:?}", js.iter().flatten().collect::<Vec<_>>()));
    Ok(o)
}
