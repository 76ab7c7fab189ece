use super::grid::describe;
use super::report::{InequalityReport, MarginTracker, Relation, Sample};
use super::{param, CheckKind, Outcome, VerifyContext};
use crate::arith::{for_each_factored, jordan_weighted, smooth_count, tau_k_u64, ArithFn};
use crate::compensated::CompensatedSum;
use crate::error::{Error, Result};
use crate::primes::PrimeTable;
use std::collections::BTreeMap;
use std::f64::consts::E;

fn rankin_product_ln(table: &PrimeTable, t: f64, a: f64) -> Result<(f64, f64)> {
    let mut ln_prod = CompensatedSum::new();
    let mut sum = CompensatedSum::new();
    for &p in table.primes_up_to(t)? {
        let q = (p as f64).powf(a) - 1.0;
        ln_prod.add((1.0 / q).ln_1p());
        sum.add(1.0 / q);
    }
    Ok((ln_prod.value(), sum.value()))
}

fn rankin_samples(table: &PrimeTable, z: f64, t: f64, a: f64) -> Result<Vec<Sample>> {
    let psi = smooth_count(table, z, t)? as f64;
    let (ln_prod, sum) = rankin_product_ln(table, t, a)?;
    let pt = |step: f64| vec![("step", step), ("z", z), ("t", t), ("a", a)];
    Ok(vec![
        Sample::from_logs(pt(1.0), psi.ln(), a * z.ln() + ln_prod, Relation::Le),
        Sample::from_logs(pt(2.0), a * z.ln() + ln_prod, a * z.ln() + sum, Relation::Le),
    ])
}

/// e^u − 1 ≥ Σ_{n≤N} u^n/n! ≥ N (Π 1/n!)^(1/N) u^((N+1)/2) with u = a log p.
fn am_gm_samples(p: f64, a: f64, n: u32) -> Vec<Sample> {
    let u = a * p.ln();
    let mut partial = 0.0;
    let mut term = 1.0;
    let mut ln_fact_prod = 0.0;
    let mut ln_fact = 0.0;
    for j in 1..=n {
        term *= u / j as f64;
        partial += term;
        ln_fact += (j as f64).ln();
        ln_fact_prod += ln_fact;
    }
    let nf = n as f64;
    let ln_amgm = nf.ln() - ln_fact_prod / nf + (nf + 1.0) / 2.0 * u.ln();
    let pt = |step: f64| vec![("step", step), ("p", p), ("a", a), ("N", nf)];
    vec![
        Sample::new(pt(3.0), partial, u.exp_m1(), Relation::Le),
        Sample::from_logs(pt(4.0), ln_amgm, partial.ln(), Relation::Le),
    ]
}

pub(crate) fn rankin(ctx: &VerifyContext) -> Result<Outcome> {
    let zs = ctx.axis("z", vec![1e3, 1e4, 1e5, 1e6]);
    let ts = ctx.axis("t", vec![2.0, 10.0, 100.0, 1000.0]);
    let aa = ctx.axis("a", vec![0.1, 0.25, 0.5, 0.75, 0.9]);
    let table = ctx.table()?;
    let mut t = MarginTracker::new("L2.10-rankin");
    let mut pts = Vec::new();
    for &z in &zs {
        let mut tv: Vec<f64> = ts.iter().copied().filter(|&x| x <= z).collect();
        tv.push(z.sqrt());
        for &tt in &tv {
            for &a in &aa {
                pts.push((z, tt, a));
            }
        }
    }
    ctx.charge("L2.10-rankin", pts.len() as u64 * 2 + 168 * aa.len() as u64 * 8)?;
    for &(z, tt, a) in &pts {
        t.extend(rankin_samples(table, z, tt, a)?)?;
    }
    for &p in table.primes_up_to(1000.0)? {
        for &a in &aa {
            for n in 1..=8 {
                t.extend(am_gm_samples(p as f64, a, n))?;
            }
        }
    }
    Ok(Outcome::new(
        format!(
            "{}; t also √z; steps 1 Ψ ≤ product, 2 product ≤ exp, 3-4 AM-GM for p ≤ 1000, N ≤ 8",
            describe(&[("z", &zs), ("t", &ts), ("a", &aa)])
        ),
        t,
    ))
}

fn ln_factorial_product(n: u32) -> f64 {
    (2..=n).map(|h| (n - h + 1) as f64 * (h as f64).ln()).sum()
}

/// R_N from its definition through K_N and L_N.
fn ln_r(n: u32) -> f64 {
    let nf = n as f64;
    let ln_k = -nf.ln() + ln_factorial_product(n) / nf;
    let ln_l = (nf + 1.0) / 2.0 * (nf + 1.0).ln() + ln_k;
    (nf + 3.0).ln() - (nf + 1.0) / (nf + 3.0) * (nf + 1.0).ln() + 2.0 / (nf + 3.0) * (ln_l - 2f64.ln())
}

pub(crate) fn rankin_constants(ctx: &VerifyContext) -> Result<Outcome> {
    let ns = ctx.axis("N", (5..=200).map(f64::from).collect());
    let mut t = MarginTracker::new("L2.10-chain");
    ctx.charge("L2.10-chain", ns.len() as u64 * 4 + 54)?;
    for &nf in &ns {
        if nf < 5.0 || nf.fract() != 0.0 {
            return Err(Error::Usage(format!("N must be an integer ≥ 5, got {nf}")));
        }
        let n = nf as u32;
        let ln_pf = ln_factorial_product(n);
        let e_pf = 2.0 / (nf * (nf + 3.0));
        let pt = |step: f64| vec![("step", step), ("N", nf)];
        // R_N = (N+3)(2N)^(−2/(N+3)) (Π n!)^(2/(N(N+3)))
        let ln_r_closed = (nf + 3.0).ln() - 2.0 / (nf + 3.0) * (2.0 * nf).ln() + e_pf * ln_pf;
        t.push(Sample::new(pt(1.0), (ln_r(n) - ln_r_closed).abs(), 1e-9 * ln_r_closed.abs().max(1.0), Relation::Le))?;
        t.push(Sample::from_logs(pt(2.0), ln_r_closed, nf.ln() + e_pf * ln_pf, Relation::Lt))?;
        let ln_bound = (1.0 - (nf - 1.0) / (nf * (nf + 3.0))) * nf.ln() - 3.0 * (nf * nf - 1.0) / (2.0 * nf * (nf + 3.0));
        t.push(Sample::from_logs(pt(3.0), e_pf * ln_pf, ln_bound, Relation::Le))?;
        t.push(Sample::from_logs(pt(4.0), ln_bound, nf.ln() - 1.0, Relation::Lt))?;
    }
    // The optimized bound Ψ(z,t) ≤ exp(R_N t^(2/(N+3)) (log z)^((N+1)/(N+3)) / log t).
    let table = ctx.table()?;
    for &z in &[1e4, 1e5, 1e6] {
        for &tt in &[10.0, 100.0, 1000.0] {
            let psi = smooth_count(table, z, tt)? as f64;
            for n in 5..=10u32 {
                let nf = n as f64;
                let ln_rhs = ln_r(n).exp() * tt.powf(2.0 / (nf + 3.0)) * z.ln().powf((nf + 1.0) / (nf + 3.0)) / tt.ln();
                t.push(Sample::from_logs(
                    vec![("step", 5.0), ("N", nf), ("z", z), ("t", tt)],
                    psi.ln(),
                    ln_rhs,
                    Relation::Le,
                ))?;
            }
        }
    }
    Ok(Outcome::new(
        format!(
            "{}; steps 1 R_N forms agree, 2-4 R_N < e^(−1)N², 5 optimized Ψ bound for z ≤ 1e6, t ≤ 1000, N ≤ 10",
            describe(&[("N", &ns)])
        ),
        t,
    ))
}

/// #{n ≤ z : P⁺(n) < t} against the bound with N = ⌊log(3ℓ log₂x)⌋, at x = e^lnx
/// and the least ℓ meeting the side conditions.
pub(crate) fn smooth_small_primes(ctx: &VerifyContext) -> Result<Outcome> {
    let zs = ctx.axis("z", vec![1e4, 1e5, 1e6]);
    let lnxs = ctx.axis("lnx", vec![30.0, 100.0, 300.0, 1000.0, 1e4]);
    let table = ctx.table()?;
    let mut t = MarginTracker::new("L2.10-shiu4");
    let mut ells = Vec::new();
    for &z in &zs {
        for &lx in &lnxs {
            let llx = lx.ln();
            let tt = lx * llx;
            if !(tt >= 2.0 && tt <= z) {
                continue;
            }
            let ell = [(12f64).exp() / (3.0 * llx), 5f64.exp() / (3.0 * llx), lx / (3.0 * z.ln()), 1.0]
                .into_iter()
                .fold(0.0, f64::max);
            ells.push(ell);
            let w = (3.0 * ell * llx).ln();
            let nn = w.floor();
            let psi = smooth_count(table, z, tt)? as f64;
            let pt = |step: f64| vec![("step", step), ("z", z), ("lnx", lx), ("ell", ell)];
            let e1 = (nn + 1.0) / (nn + 3.0);
            let ln_mid = nn * nn / E * lx.powf(2.0 / (nn + 3.0)) * z.ln().powf(e1) / llx.powf(e1);
            t.push(Sample::from_logs(pt(1.0), psi.ln(), ln_mid, Relation::Lt))?;
            let ln_final = E * z.ln() * w * w / llx;
            t.push(Sample::from_logs(pt(2.0), ln_mid, ln_final, Relation::Le))?;
        }
    }
    if t.points() == 0 {
        return Err(Error::Usage("no (z, lnx) pair has 2 ≤ log x log₂x ≤ z".into()));
    }
    let mut o = Outcome::new(
        format!(
            "{}; pairs with log x log₂x ≤ z; steps 1 Ψ < N-bound, 2 N-bound ≤ final",
            describe(&[("z", &zs), ("lnx", &lnxs)])
        ),
        t,
    );
    o = o.detail("ell_min", ells.iter().copied().fold(f64::INFINITY, f64::min));
    Ok(o)
}

const U_EXPONENTS: [f64; 3] = [0.25, 1.0 / 3.0, 0.5];
const CHAIN_FNS: [ArithFn; 3] = [ArithFn::TauK(2), ArithFn::TauK(3), ArithFn::Delta];

/// One-pass sums for the Jordan chain over n ≤ max(z):
/// Σ_{n≤z} f(n)/n, Σ_{√z<n≤z, P⁺≤u} f(n)/n and Σ_{d≤z, P⁺≤u} J_a(d)τ_k(d)/d.
struct ChainSums {
    m: Vec<f64>,
    lhs: Vec<f64>,
    euler: Vec<f64>,
}

fn chain_sums(zs: &[f64], us: &[Vec<f64>], aa: &[f64], fns: &[ArithFn]) -> Result<ChainSums> {
    let z_max = zs.iter().copied().fold(1.0, f64::max).floor() as u64;
    let (nz, nu, na, nf) = (zs.len(), us[0].len(), aa.len(), fns.len());
    let im = |zi: usize, fi: usize| zi * nf + fi;
    let il = |zi: usize, ui: usize, fi: usize| (zi * nu + ui) * nf + fi;
    let ie = |zi: usize, ui: usize, ai: usize, fi: usize| ((zi * nu + ui) * na + ai) * nf + fi;
    let parts = for_each_factored(1, z_max, |chunk| {
        let mut m = vec![CompensatedSum::new(); nz * nf];
        let mut lhs = vec![CompensatedSum::new(); nz * nu * nf];
        let mut euler = vec![CompensatedSum::new(); nz * nu * na * nf];
        let mut fv = vec![0.0; nf];
        let mut tk = vec![0.0; nf];
        let mut ja = vec![0.0; na];
        for f in chunk {
            let n = f.n() as f64;
            let pmax = f.largest_prime() as f64;
            for (i, g) in fns.iter().enumerate() {
                fv[i] = g.eval(f)? as f64 / n;
                tk[i] = tau_k_u64(f, g.submultiplicative_k()).unwrap_or(u64::MAX) as f64;
            }
            for (i, &a) in aa.iter().enumerate() {
                ja[i] = jordan_weighted(f, a)? / n;
            }
            for (zi, &z) in zs.iter().enumerate() {
                if n > z {
                    continue;
                }
                for fi in 0..nf {
                    m[im(zi, fi)].add(fv[fi]);
                }
                for (ui, &u) in us[zi].iter().enumerate() {
                    if pmax > u {
                        continue;
                    }
                    for fi in 0..nf {
                        if n * n > z {
                            lhs[il(zi, ui, fi)].add(fv[fi]);
                        }
                        for ai in 0..na {
                            euler[ie(zi, ui, ai, fi)].add(ja[ai] * tk[fi]);
                        }
                    }
                }
            }
        }
        Ok((m, lhs, euler))
    })?;
    let merge = |pick: &dyn Fn(&(Vec<CompensatedSum>, Vec<CompensatedSum>, Vec<CompensatedSum>)) -> &Vec<CompensatedSum>| {
        let mut acc = pick(&parts[0]).clone();
        for p in &parts[1..] {
            for (a, b) in acc.iter_mut().zip(pick(p)) {
                a.merge(b);
            }
        }
        acc.iter().map(CompensatedSum::value).collect::<Vec<f64>>()
    };
    Ok(ChainSums {
        m: merge(&|p| &p.0),
        lhs: merge(&|p| &p.1),
        euler: merge(&|p| &p.2),
    })
}

/// Samples for steps 1-5 of the Jordan chain at one (z, u, a, k).
#[allow(clippy::too_many_arguments)]
fn jordan_samples(
    table: &PrimeTable,
    z: f64,
    u: f64,
    a: f64,
    k: u32,
    fi: f64,
    m: f64,
    lhs: f64,
    euler_partial: f64,
) -> Result<Vec<Sample>> {
    let kf = k as f64;
    let mut ln_prod = CompensatedSum::new();
    let mut s_binom = CompensatedSum::new();
    let mut s_pow = CompensatedSum::new();
    for &p in table.primes_up_to(u)? {
        let p = p as f64;
        let x = p.powf(a - 1.0);
        let g = (1.0 - x).powf(-kf) - 1.0;
        ln_prod.add(((1.0 - p.powf(-a)) * g).ln_1p());
        s_binom.add(g);
        s_pow.add(x);
    }
    let ln_prod = ln_prod.value();
    let c5 = 5f64.powi(k as i32) * kf;
    let pt = |step: f64| vec![("step", step), ("z", z), ("u", u), ("a", a), ("k", kf), ("f", fi)];
    let mut out = vec![
        Sample::new(pt(2.0), euler_partial, ln_prod.exp(), Relation::Le),
        Sample::from_logs(pt(3.0), ln_prod, s_binom.value(), Relation::Le),
        Sample::new(pt(4.0), s_binom.value(), c5 * s_pow.value(), Relation::Le),
        Sample::new(pt(5.0), c5 * s_pow.value(), c5 * 1.26 * (3.0 - 2.0 * a) / a * u.powf(a) / u.ln(), Relation::Le),
    ];
    if lhs > 0.0 {
        out.insert(0, Sample::from_logs(pt(1.0), lhs.ln(), -a / 2.0 * z.ln() + ln_prod + m.ln(), Relation::Le));
    } else {
        out.insert(0, Sample::new(pt(1.0), 0.0, (-a / 2.0 * z.ln() + ln_prod).exp() * m, Relation::Le));
    }
    Ok(out)
}

pub(crate) fn jordan_chain(ctx: &VerifyContext) -> Result<Outcome> {
    let zs = ctx.axis("z", vec![1e4, 1e5, 1e6]);
    let aa = ctx.axis("a", vec![0.25, 0.5, 2.0 / 3.0]);
    if zs.iter().any(|&z| !(16.0..=1e6).contains(&z)) {
        return Err(Error::Usage("z must lie in [16, 1e6]".into()));
    }
    let us: Vec<Vec<f64>> = zs.iter().map(|z| U_EXPONENTS.iter().map(|e| z.powf(*e)).collect()).collect();
    let z_max = zs.iter().copied().fold(0.0, f64::max);
    ctx.charge("L2.11-chain", z_max as u64 * CHAIN_FNS.len() as u64)?;
    let sums = chain_sums(&zs, &us, &aa, &CHAIN_FNS)?;
    let table = ctx.table()?;
    let (nu, na, nf) = (U_EXPONENTS.len(), aa.len(), CHAIN_FNS.len());
    let mut t = MarginTracker::new("L2.11-chain");
    for (zi, &z) in zs.iter().enumerate() {
        for (ui, &u) in us[zi].iter().enumerate() {
            for (ai, &a) in aa.iter().enumerate() {
                for (fi, g) in CHAIN_FNS.iter().enumerate() {
                    t.extend(jordan_samples(
                        table,
                        z,
                        u,
                        a,
                        g.submultiplicative_k(),
                        fi as f64,
                        sums.m[zi * nf + fi],
                        sums.lhs[(zi * nu + ui) * nf + fi],
                        sums.euler[((zi * nu + ui) * na + ai) * nf + fi],
                    )?)?;
                }
            }
        }
    }
    Ok(Outcome::new(
        format!(
            "{}; u = z^(1/4), z^(1/3), z^(1/2); f = tau2, tau3, delta (index 0-2); \
             steps 1 Rankin, 2 partial ≤ Euler product, 3 product ≤ exp, 4 (1−x)^(−k)−1 ≤ 5^k k x, 5 prime power sum",
            describe(&[("z", &zs), ("a", &aa)])
        ),
        t,
    ))
}

fn scalar_sample(k: f64, i: f64) -> Sample {
    let lhs = (250.0 / (250.0 - i)).powi(k as i32) - 1.0;
    let rhs = 5f64.powi(k as i32) * k * (i / 250.0);
    Sample::new(vec![("k", k), ("i", i)], lhs, rhs, Relation::Le)
}

/// x = i/250 for i = 0..=200, so x = 4/5 is hit exactly.
pub(crate) fn scalar(ctx: &VerifyContext) -> Result<Outcome> {
    let ks = ctx.axis("k", (1..=10).map(f64::from).collect());
    ctx.charge("L2.11-scalar", ks.len() as u64 * 201)?;
    let mut t = MarginTracker::new("L2.11-scalar");
    for &k in &ks {
        for i in 0..=200 {
            t.push(scalar_sample(k, i as f64))?;
        }
    }
    Ok(Outcome::new(format!("{}; x = i/250, 0 ≤ i ≤ 200", describe(&[("k", &ks)])), t))
}

pub(crate) fn scalar_reeval(p: &BTreeMap<String, f64>) -> Result<f64> {
    Ok(scalar_sample(param(p, "k")?, param(p, "i")?).margin)
}

/// Every step of both Rankin-type chains at one parameter point:
/// Ψ(z, t) against the Rankin product (needs a > 0), the Jordan chain for
/// f with u = t (needs a ≤ 2/3), and (1−x)^(−k) − 1 ≤ 5^k k x on [0, 4/5].
pub fn rankin_chain_check(
    ctx: &VerifyContext,
    z: f64,
    t_or_u: f64,
    a: f64,
    k: u32,
    f: ArithFn,
) -> Result<InequalityReport> {
    if !(z <= 1e6 && t_or_u >= 2.0 && t_or_u <= z) {
        return Err(Error::pre(format!("need 2 ≤ t ≤ z ≤ 1e6, got z={z}, t={t_or_u}")));
    }
    if !(a > 0.0 && a <= 2.0 / 3.0) {
        return Err(Error::pre(format!("a must lie in (0, 2/3], got {a}")));
    }
    if k < f.submultiplicative_k() {
        return Err(Error::pre(format!("{f} is not bounded through τ_{k}")));
    }
    let table = ctx.table()?;
    let mut t = MarginTracker::new("rankin-chain");
    t.extend(rankin_samples(table, z, t_or_u, a)?)?;
    let sums = chain_sums(&[z], &[vec![t_or_u]], &[a], &[f])?;
    let mut chain = jordan_samples(table, z, t_or_u, a, k, 0.0, sums.m[0], sums.lhs[0], sums.euler[0])?;
    // steps of the Jordan chain follow the two Rankin steps
    for s in &mut chain {
        if let Some(step) = s.point.iter_mut().find(|(n, _)| *n == "step") {
            step.1 += 10.0;
        }
    }
    t.extend(chain)?;
    for i in 0..=200 {
        t.push(scalar_sample(k as f64, i as f64))?;
    }
    InequalityReport::build(
        "rankin-chain",
        "Ψ(z,t) ≤ z^a Π(1+1/(p^a−1)); Σ f(n)/n ≤ z^{−a/2} Π(…) Σ f(m)/m; (1−x)^{−k} − 1 ≤ 5^k k x",
        CheckKind::ProofIngredient,
        format!("z={z}, t=u={t_or_u}, a={a}, k={k}, f={f}; steps 1-2 Rankin, 11-15 Jordan chain, scalar on x = i/250"),
        t,
        BTreeMap::new(),
        None,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::VerifyConfig;

    fn ctx() -> VerifyContext {
        VerifyContext::new(VerifyConfig {
            sieve_limit: 1_000_000,
            ..VerifyConfig::default()
        })
        .unwrap()
    }

    #[test]
    fn scalar_edges() {
        let s0 = scalar_sample(3.0, 0.0);
        assert_eq!(s0.margin, 0.0);
        assert!(s0.holds());
        // k = 1 is tight at x = 4/5
        let s = scalar_sample(1.0, 200.0);
        assert_eq!(s.margin, 0.0);
        assert!(s.holds());
    }

    #[test]
    fn example_point() {
        let r = rankin_chain_check(&ctx(), 1e4, 10.0, 0.5, 2, ArithFn::TauK(2)).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn rankin_at_1e4_100() {
        let table = ctx().table().unwrap().clone();
        let s = rankin_samples(&table, 1e4, 100.0, 0.5).unwrap();
        assert!(s.iter().all(Sample::holds));
    }

    #[test]
    fn euler_partial_sum_approaches_product() {
        // with u = 2 the smooth d are powers of 2 and the tail past z is tiny
        let sums = chain_sums(&[1e6], &[vec![2.0]], &[0.5], &[ArithFn::TauK(2)]).unwrap();
        let table = ctx().table().unwrap().clone();
        let s = jordan_samples(&table, 1e6, 2.0, 0.5, 2, 0.0, sums.m[0], sums.lhs[0], sums.euler[0]).unwrap();
        assert!(s[1].margin >= 0.0 && s[1].margin < 1e-2, "{}", s[1].margin);
    }

    #[test]
    fn registered_chains_pass() {
        let c = ctx();
        for run in [rankin, rankin_constants, smooth_small_primes, scalar] {
            let o = run(&c).unwrap();
            assert_eq!(o.tracker.failures(), 0, "{}", o.grid);
        }
    }
}
