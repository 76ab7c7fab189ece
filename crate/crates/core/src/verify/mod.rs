//! Numerical checks of the inequalities behind the short-sum bounds.
//!
//! Each check evaluates both sides of one inequality on a grid and reports
//! the smallest margin. Checks marked [`CheckKind::ProofIngredient`] cover an
//! intermediate step whose stated domain is out of reach.

mod classify;
mod elementary;
mod grid;
mod hooley;
mod primesums;
mod rankin;
mod report;

pub use classify::{classify_window, ClassTag, ClassifiedInteger, WindowClassification};
pub use grid::{linspace, logspace, parse_axis_override};
pub use hooley::{check_corollaries, check_proposition, check_smoothing, proposition_chain_constant};
pub use primesums::{check_mean_bound, check_mertens_b, check_pi_li, check_pi_li_endpoints, check_tau_mertens};
pub use rankin::rankin_chain_check;
pub use report::{ext_margin, margin, CheckKind, InequalityReport, MarginTracker, Relation, Sample, NEAR_TIE};

use crate::error::{Error, Result};
use crate::primes::{PrimeTable, SieveOptions};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::OnceLock;

pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;
/// Grid points allowed per check.
pub const DEFAULT_EVAL_BUDGET: u64 = 50_000_000;
pub const DEFAULT_SEED: u64 = 0x5eed_0f_de17a;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyConfig {
    pub sieve_limit: u64,
    pub budget: u64,
    pub seed: u64,
    /// check id → smallest acceptable min_margin.
    pub margin_floors: BTreeMap<String, f64>,
    /// axis name → values replacing that axis's default grid.
    pub axes: BTreeMap<String, Vec<f64>>,
    pub cache: Option<PathBuf>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            sieve_limit: DEFAULT_SIEVE_LIMIT,
            budget: DEFAULT_EVAL_BUDGET,
            seed: DEFAULT_SEED,
            margin_floors: BTreeMap::new(),
            axes: BTreeMap::new(),
            cache: None,
        }
    }
}

impl VerifyConfig {
    /// Rejects floors for unregistered ids and axes no check reads.
    pub fn validate(&self) -> Result<()> {
        for id in self.margin_floors.keys() {
            if find(id).is_none() {
                return Err(Error::UnknownCheck(id.clone()));
            }
        }
        for name in self.axes.keys() {
            if !REGISTRY.iter().any(|e| e.info.axes.contains(&name.as_str())) {
                return Err(Error::Usage(format!("no check has a grid axis named `{name}`")));
            }
        }
        if self.sieve_limit < 2 {
            return Err(Error::Usage("sieve limit must be at least 2".into()));
        }
        Ok(())
    }
}

/// Shared state for a verification run: configuration plus a lazily built prime table.
pub struct VerifyContext {
    config: VerifyConfig,
    table: OnceLock<PrimeTable>,
}

impl VerifyContext {
    pub fn new(config: VerifyConfig) -> Result<Self> {
        config.validate()?;
        Ok(VerifyContext {
            config,
            table: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &VerifyConfig {
        &self.config
    }

    pub fn table(&self) -> Result<&PrimeTable> {
        if let Some(t) = self.table.get() {
            return Ok(t);
        }
        let opts = SieveOptions {
            cache: self.config.cache.clone(),
            ..SieveOptions::default()
        };
        let t = PrimeTable::build_with(self.config.sieve_limit, &opts)?;
        Ok(self.table.get_or_init(|| t))
    }

    /// The override for `name` if one was given, else `default`.
    pub(crate) fn axis(&self, name: &str, default: Vec<f64>) -> Vec<f64> {
        self.config.axes.get(name).cloned().unwrap_or(default)
    }

    /// A generator seeded from the run seed and the check id.
    pub(crate) fn rng(&self, check_id: &str) -> ChaCha8Rng {
        // FNV-1a, so that seeds do not depend on the std hasher
        let h = check_id
            .bytes()
            .fold(0xcbf2_9ce4_8422_2325u64, |h, b| (h ^ b as u64).wrapping_mul(0x100_0000_01b3));
        ChaCha8Rng::seed_from_u64(self.config.seed ^ h)
    }

    pub(crate) fn charge(&self, check_id: &str, points: u64) -> Result<()> {
        if points > self.config.budget {
            return Err(Error::Resource(format!(
                "check {check_id} needs {points} grid points, budget is {}",
                self.config.budget
            )));
        }
        Ok(())
    }

    /// Largest x a check may sieve up to: `want` capped by the sieve limit.
    pub(crate) fn cap(&self, want: f64) -> f64 {
        want.min(self.config.sieve_limit as f64)
    }
}

/// What a check produces before the registry attaches its metadata.
pub(crate) struct Outcome {
    pub grid: String,
    pub tracker: MarginTracker,
    pub details: BTreeMap<String, f64>,
}

impl Outcome {
    pub fn new(grid: String, tracker: MarginTracker) -> Self {
        Outcome {
            grid,
            tracker,
            details: BTreeMap::new(),
        }
    }

    pub fn detail(mut self, key: &str, value: f64) -> Self {
        self.details.insert(key.to_string(), value);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckInfo {
    pub id: &'static str,
    /// The inequality being checked, as a formula.
    pub anchor: &'static str,
    pub kind: CheckKind,
    /// Grid axes that accept overrides.
    pub axes: &'static [&'static str],
}

type Runner = fn(&VerifyContext) -> Result<Outcome>;
type Reeval = fn(&BTreeMap<String, f64>) -> Result<f64>;

struct Entry {
    info: CheckInfo,
    run: Runner,
    reeval: Option<Reeval>,
}

macro_rules! entry {
    ($id:expr, $anchor:expr, $kind:ident, [$($axis:expr),*], $run:path) => {
        Entry { info: CheckInfo { id: $id, anchor: $anchor, kind: CheckKind::$kind, axes: &[$($axis),*] }, run: $run, reeval: None }
    };
    ($id:expr, $anchor:expr, $kind:ident, [$($axis:expr),*], $run:path, $reeval:path) => {
        Entry { info: CheckInfo { id: $id, anchor: $anchor, kind: CheckKind::$kind, axes: &[$($axis),*] }, run: $run, reeval: Some($reeval) }
    };
}

static REGISTRY: &[Entry] = &[
    entry!("L2.1", "log x ≥ a(log(b log x))²", Statement, ["a", "b", "step"], elementary::log_square, elementary::log_square_reeval),
    entry!("L2.2", "c₁5^k k r^{2/3} ≤ (r/12)(log r)²", Statement, ["k", "scale"], elementary::power_log, elementary::power_log_reeval),
    entry!("L2.2-threshold", "18967 c_k³(log c_k)^{−6} < A_k", ProofIngredient, ["k"], elementary::power_log_threshold),
    entry!("L2.3", "τ_k(n) ≤ min(k^Ω(n), (3(k−1)/(5ε))^{k^{1/ε}(k−1)} n^ε)", Statement, ["k", "eps", "n_max"], elementary::tau_k_bound),
    entry!("L2.4", "Π n! ≤ N^{½(N+1)²}e^{−¾(N²−1)}", Statement, ["N"], elementary::factorial_product, elementary::factorial_product_reeval),
    entry!("L2.5", "Σ_{p≤x}(log p)^{−α} < (2α)^α x/(log x)^{α+1}", Statement, ["alpha", "x_max"], elementary::log_power_sum),
    entry!("L2.5-constant", "c₀((α/(e log 2))^{α/(α+1)} + 1)^{α+2} < (2α)^α", ProofIngredient, ["alpha"], elementary::log_power_constant),
    entry!("L2.6", "Σ_{p≤x}p^{−α} < c₀(1+2α)/(1−α) x^{1−α}/log x", Statement, ["alpha", "x_max"], elementary::power_sum),
    entry!("L2.7", "∫_a^b e^{−g} ≤ e^{−g(a)}/λ₁", Statement, ["a", "len", "lambda", "mu"], elementary::integral_decay, elementary::integral_decay_reeval),
    entry!("L2.8", "Σ_{r=2}^A r k^{5ℓr} < A max(A, 2k^{5ℓA})", Statement, ["k", "ell", "A"], elementary::geometric_sum, elementary::geometric_sum_reeval),
    entry!("L2.9", "#{x−y < n ≤ x : P⁻(n) > z} ≤ 2y/log z", Statement, ["points"], elementary::sifted),
    entry!("L2.10-rankin", "Ψ(z,t) ≤ z^a Π_{p≤t}(1 + 1/(p^a−1))", ProofIngredient, ["z", "t", "a"], rankin::rankin),
    entry!("L2.10-chain", "R_N < e^{−1}N²", ProofIngredient, ["N"], rankin::rankin_constants),
    entry!("L2.10-shiu4", "Ψ(z, log x log₂x) < exp(e log z (log(3ℓ log₂x))²/log₂x)", ProofIngredient, ["z", "lnx"], rankin::smooth_small_primes),
    entry!("L2.11-chain", "Σ_{z^{1/2}<n≤z, P⁺(n)≤u} f(n)/n ≤ z^{−a/2} Σ_{P⁺(d)≤u} J_a(d)τ_k(d)/d Σ_{m≤z} f(m)/m", ProofIngredient, ["z", "a"], rankin::jordan_chain),
    entry!("L2.11-scalar", "(1−x)^{−k} − 1 ≤ 5^k k x", ProofIngredient, ["k"], rankin::scalar, rankin::scalar_reeval),
    entry!("L3.2-pi-endpoints", "|(log p_n)³/p_n (n − li(p_n))| ≤ 4.6", ProofIngredient, [], primesums::pi_li_endpoints),
    entry!("L3.2-pi", "|π(x) − li(x)| ≤ 4.6x/(log x)³", Statement, [], primesums::pi_li),
    entry!("L3.2-mertens", "Σ_{p≤x}1/p = log log x + B + O*(0.6/(log x)²)", Statement, ["x_max"], primesums::mertens),
    entry!("L3.3", "∫_a^b f(t)/t dt = μ_f log(b/a) + O*(2m_f/a)", Statement, ["points"], primesums::periodic_mean),
    entry!("L3.4", "|∫_0^{2cπ}(|cos(t/2)| − 2/π)dt| ≤ 𝔪", Statement, ["c"], primesums::periodic_extremum, primesums::periodic_extremum_reeval),
    entry!("L3.5", "Σ_{p≤x}|τ(p;v)|/p < 2B + 4aζ(r)/(2π)^r + 14a/(log T)^r + 2b/(log T)^s + branch(v)", Statement, ["x", "v"], primesums::tau_mertens),
    entry!("L3.1-mean", "Σ_{n≤x} f(n) ≤ e^{a₂}(a₁+a₃+1) x/log(ex) exp(Σ_{p≤x} f(p)/p)", Statement, ["x", "t", "v"], primesums::mean_bound),
    entry!("L3.7", "Σ(3p−2)/(p(p−1)²) < 2.9215, Σ2(3p²−3p+1)log p/(p(p−1)³) < 8.16001", Statement, [], primesums::prime_constants),
    entry!("L3.8-theta", "θ(x) < c₁x", Statement, ["x_max"], primesums::theta),
    entry!("L3.8-tail", "Σ_{x<p≤X} f(p) log p ≤ c₁∫_x^∞ f + (c₁−1)xf(x) + 4xf(x)/(log x)²", ProofIngredient, ["x"], primesums::tail),
    entry!("P3.1", "Σ t^ω(n)Δ(n) < 9380 x(log ex)^{−1+4t/π}, Σ t^ω(n)Δ(n)/n < 16748(log ex)^{4t/π}", Statement, ["x", "t"], hooley::proposition),
    entry!("P3.1-integral", "λ e^{…} x/log(ex) ∫₀¹ exp(t·bound(v)) dv ≤ closed form", ProofIngredient, ["lnx", "t"], hooley::proposition_integral),
    entry!("P3.1-constant", "λ π e^{4𝔪t/q}/(4t+π) e^{…}(q^{−4t/π}(log T)² + …) − … < 9380", ProofIngredient, ["lnx", "t"], hooley::proposition_constant),
    entry!("SMOOTHING-kappa", "Δ(n) ≤ (1/sin 1)∫₀¹|τ(n;v)|dv, κ(z) = 2 sin z/z", ProofIngredient, ["n_max"], hooley::smoothing),
    entry!("MAIN", "Σ_{x−y<n≤x} f(n) ≤ Λ(k,ℓ) y/log x Σ_{n≤x} f(n)/n", Statement, ["x", "ell"], hooley::main_bound),
    entry!("COR1.2", "Σ_{x−y<n≤x} Δ(n) ≤ φ(ℓ) y(log x)^{−1+4/π}", Statement, ["x", "ell"], hooley::corollary_delta),
    entry!("COR1.3", "Σ_{x−y<n≤x, ω(n)≤j} Δ(n) ≤ φ(ℓ)(y/log x)(4e log log x/(πj))^j", Statement, ["x", "ell", "j"], hooley::corollary_omega),
    entry!("CLASS", "Σ_{I}+Σ_{II}+Σ_{III}+Σ_{IV} = Σ_{x−y<n≤x} f(n)", Statement, ["windows"], classify::class_partition),
];

fn find(id: &str) -> Option<&'static Entry> {
    REGISTRY.iter().find(|e| e.info.id == id)
}

pub fn registry() -> impl Iterator<Item = &'static CheckInfo> {
    REGISTRY.iter().map(|e| &e.info)
}

/// Resolves ids, `all`, and family prefixes (`L3.2` selects every `L3.2-*`, `L2` every `L2.*`)
/// to registered ids in registry order. An exact id never expands to its family.
pub fn select<S: AsRef<str>>(patterns: &[S]) -> Result<Vec<&'static str>> {
    let mut chosen = vec![false; REGISTRY.len()];
    for pat in patterns {
        let pat = pat.as_ref();
        let exact = find(pat).is_some();
        let mut hit = false;
        for (i, e) in REGISTRY.iter().enumerate() {
            let id = e.info.id;
            let family = !exact && id.strip_prefix(pat).is_some_and(|rest| rest.starts_with(['-', '.']));
            if pat.eq_ignore_ascii_case("all") || id == pat || family {
                chosen[i] = true;
                hit = true;
            }
        }
        if !hit {
            return Err(Error::UnknownCheck(pat.to_string()));
        }
    }
    Ok(REGISTRY.iter().zip(chosen).filter(|(_, c)| *c).map(|(e, _)| e.info.id).collect())
}

fn finish(ctx: &VerifyContext, entry: &Entry, outcome: Outcome) -> Result<InequalityReport> {
    let id = entry.info.id;
    InequalityReport::build(
        id,
        entry.info.anchor,
        entry.info.kind,
        outcome.grid,
        outcome.tracker,
        outcome.details,
        ctx.config.margin_floors.get(id).copied(),
    )
}

pub fn run_check(ctx: &VerifyContext, check_id: &str) -> Result<InequalityReport> {
    let entry = find(check_id).ok_or_else(|| Error::UnknownCheck(check_id.to_string()))?;
    let outcome = (entry.run)(ctx)?;
    finish(ctx, entry, outcome)
}

/// Runs the given ids in parallel; results come back in the order given.
pub fn run_selected(ctx: &VerifyContext, ids: &[&str]) -> Vec<(String, Result<InequalityReport>)> {
    // build the shared table once up front; a failure resurfaces in the checks that need it
    let _ = ctx.table();
    ids.par_iter().map(|id| (id.to_string(), run_check(ctx, id))).collect()
}

pub fn run_all(ctx: &VerifyContext) -> Vec<(String, Result<InequalityReport>)> {
    let ids: Vec<&str> = registry().map(|c| c.id).collect();
    run_selected(ctx, &ids)
}

/// Recomputes the margin at a witness, for checks whose points are cheap to
/// evaluate in isolation. `Ok(None)` when the check has no point evaluator.
pub fn reevaluate(check_id: &str, witness: &BTreeMap<String, f64>) -> Result<Option<f64>> {
    let entry = find(check_id).ok_or_else(|| Error::UnknownCheck(check_id.to_string()))?;
    entry.reeval.map(|f| f(witness)).transpose()
}

pub(crate) fn param(p: &BTreeMap<String, f64>, key: &str) -> Result<f64> {
    p.get(key).copied().ok_or_else(|| Error::Usage(format!("witness lacks `{key}`")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique() {
        let mut ids: Vec<_> = registry().map(|c| c.id).collect();
        let n = ids.len();
        ids.sort();
        ids.dedup();
        assert_eq!(ids.len(), n);
    }

    #[test]
    fn selection() {
        assert_eq!(select(&["L3.2"]).unwrap(), vec!["L3.2-pi-endpoints", "L3.2-pi", "L3.2-mertens"]);
        assert_eq!(select(&["L2.1"]).unwrap(), vec!["L2.1"]);
        assert_eq!(select(&["L2.5"]).unwrap(), vec!["L2.5"]);
        assert_eq!(select(&["L2"]).unwrap().len(), 16);
        assert_eq!(select(&["L2.5-constant"]).unwrap(), vec!["L2.5-constant"]);
        assert_eq!(select(&["L2.10"]).unwrap().len(), 3);
        assert_eq!(select(&["all"]).unwrap().len(), REGISTRY.len());
        assert_eq!(select(&["BOGUS"]).unwrap_err(), Error::UnknownCheck("BOGUS".into()));
        assert_eq!(select(&["L2.4", "L2.1"]).unwrap(), vec!["L2.1", "L2.4"]);
    }

    #[test]
    fn config_validation() {
        let mut c = VerifyConfig::default();
        c.margin_floors.insert("NOPE".into(), 0.0);
        assert!(VerifyContext::new(c).is_err());
        let mut c = VerifyConfig::default();
        c.axes.insert("nonsense".into(), vec![1.0]);
        assert!(matches!(VerifyContext::new(c), Err(Error::Usage(_))));
        let mut c = VerifyConfig::default();
        c.axes.insert("alpha".into(), vec![3.0]);
        assert!(VerifyContext::new(c).is_ok());
    }

    #[test]
    fn unknown_id() {
        let ctx = VerifyContext::new(VerifyConfig::default()).unwrap();
        assert_eq!(run_check(&ctx, "X").unwrap_err(), Error::UnknownCheck("X".into()));
    }
}
