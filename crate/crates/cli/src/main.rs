//! `hooley`: run inequality checks and evaluate the library's quantities from the shell.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or precondition error,
//! 3 resource budget exceeded.

mod config;

use clap::{Args, Parser, Subcommand};
use config::{parse_tolerance, Format, RunConfig};
use hooley_core::arith::{delta, short_sum, weighted_delta_sums, ArithFn};
use hooley_core::error::Error;
use hooley_core::extscale::{constants, landreau_m, phi, ExtReal};
use hooley_core::verify::{
    classify_window, parse_axis_override, registry, run_check, select, InequalityReport, VerifyContext,
};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

#[derive(Parser, Debug)]
#[command(name = "hooley", version, about = "Explicit short-sum bounds and the Erdős–Hooley Δ-function")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Largest integer covered by the prime table.
    #[arg(long, global = true)]
    sieve_limit: Option<u64>,
    /// Evaluation budget per check.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the payload here and run metadata to PATH.meta.json.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// key=value config file; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Seed for randomized grids.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Prime table cache file.
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run registered checks: ids, family prefixes such as `L3.2`, or `all`.
    Verify {
        #[arg(default_value = "all")]
        checks: Vec<String>,
        /// Replace a grid axis: `name=v1,v2` or `name=lo..hi`. Repeatable.
        #[arg(long = "grid")]
        grids: Vec<String>,
        /// Require min_margin ≥ floor for a check: `id=floor`. Repeatable.
        #[arg(long = "tolerance")]
        tolerances: Vec<String>,
    },
    /// List registered checks.
    List,
    /// Main Theorem constants for (k, ℓ).
    Constants {
        #[arg(long)]
        k: u32,
        #[arg(long = "l")]
        ell: f64,
    },
    /// Δ(n) with its witness divisor.
    Delta {
        #[arg(long)]
        n: u64,
    },
    /// Σ_{x−y<n≤x} f(n).
    Shortsum {
        /// tau2, tau3, ..., delta, delta_omega_le2, ...
        #[arg(long)]
        f: String,
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
    },
    /// Σ_{n≤x} t^ω(n)Δ(n) and Σ t^ω(n)Δ(n)/n against their explicit bounds.
    Hooley {
        #[arg(long)]
        x: f64,
        #[arg(long, num_args = 1.., default_values_t = [0.0, 0.25, 0.5, 0.75, 1.0])]
        t: Vec<f64>,
    },
    /// Sort the window (x − y, x] into Classes I–IV.
    Classify {
        #[arg(long)]
        x: f64,
        #[arg(long)]
        y: f64,
        #[arg(long, default_value = "delta")]
        f: String,
        /// Include every member with its split n = a·b.
        #[arg(long)]
        members: bool,
    },
}

/// A run's failure mode, ordered by exit-code precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Status {
    Ok = 0,
    Failed = 1,
    Usage = 2,
    Resource = 3,
}

fn status_of(e: &Error) -> Status {
    match e {
        _ if e.is_resource() => Status::Resource,
        Error::Usage(_) | Error::UnknownCheck(_) | Error::Precondition(_) | Error::Range { .. } => Status::Usage,
        _ => Status::Failed,
    }
}

struct Output {
    payload: String,
    status: Status,
    meta: BTreeMap<String, Value>,
}

impl Output {
    fn new(payload: String, status: Status) -> Self {
        Output {
            payload,
            status,
            meta: BTreeMap::new(),
        }
    }
}

fn flag_config(g: &GlobalArgs) -> RunConfig {
    RunConfig {
        sieve_limit: g.sieve_limit,
        budget: g.budget,
        threads: g.threads,
        seed: g.seed,
        format: g.format,
        out: g.out.clone(),
        cache: g.cache.clone(),
        ..RunConfig::default()
    }
}

fn json_text<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

/// Rows of `key,value`.
fn kv_csv(rows: &[(String, String)]) -> Result<String, Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
    w.write_record(["key", "value"]).map_err(io)?;
    for (k, v) in rows {
        w.write_record([k, v]).map_err(io)?;
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

/// Flattens a JSON object into dotted keys for CSV output.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, v) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, v, out);
            }
        }
        Value::Array(a) => {
            for (i, v) in a.iter().enumerate() {
                flatten(&format!("{prefix}.{i}"), v, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

fn render(v: &Value, format: Format) -> Result<String, Error> {
    match format {
        Format::Json => Ok(json_text(v)),
        Format::Csv => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            kv_csv(&rows)
        }
    }
}

fn ext(v: ExtReal) -> Value {
    json!({ "sign": v.sign() as i8, "lnmag": v.lnmag(), "log10": v.log10() })
}

fn cmd_verify(cfg: &RunConfig, checks: &[String]) -> Result<Output, Error> {
    let ids = select(checks)?;
    let ctx = VerifyContext::new(cfg.verify_config()?)?;
    let _ = ctx.table();
    let results: Vec<(&str, Result<InequalityReport, Error>, f64)> = ids
        .par_iter()
        .map(|&id| {
            let start = Instant::now();
            let r = run_check(&ctx, id);
            (id, r, start.elapsed().as_secs_f64())
        })
        .collect();

    let mut status = Status::Ok;
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    let mut timings = BTreeMap::new();
    for (id, r, secs) in &results {
        timings.insert(id.to_string(), json!(secs));
        match r {
            Ok(rep) => {
                if !rep.passed {
                    status = status.max(Status::Failed);
                }
                reports.push(rep);
            }
            Err(e) => {
                status = status.max(status_of(e));
                errors.push(json!({ "check_id": id, "error": e.to_string() }));
            }
        }
    }
    let passed = reports.iter().filter(|r| r.passed).count();
    let payload = match cfg.format() {
        Format::Json => json_text(&json!({
            "summary": {
                "selected": ids.len(),
                "passed": passed,
                "failed": reports.len() - passed,
                "errored": errors.len(),
            },
            "reports": reports,
            "errors": errors,
        })),
        Format::Csv => verify_csv(&results)?,
    };
    let mut out = Output::new(payload, status);
    out.meta.insert("check_seconds".into(), Value::Object(timings.into_iter().collect()));
    Ok(out)
}

fn verify_csv(results: &[(&str, Result<InequalityReport, Error>, f64)]) -> Result<String, Error> {
    let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "check_id", "kind", "passed", "points_checked", "failures", "min_margin", "near_tie", "witness", "grid", "error",
    ])
    .map_err(io)?;
    for (id, r, _) in results {
        match r {
            Ok(rep) => {
                let witness: Vec<String> = rep.witness.iter().map(|(k, v)| format!("{k}={v}")).collect();
                let kind = serde_json::to_value(rep.kind).expect("serializable");
                w.write_record([
                    rep.check_id.clone(),
                    kind.as_str().unwrap_or_default().to_string(),
                    rep.passed.to_string(),
                    rep.points_checked.to_string(),
                    rep.failures.to_string(),
                    format!("{:e}", rep.min_margin),
                    rep.near_tie.to_string(),
                    witness.join(";"),
                    rep.grid.clone(),
                    String::new(),
                ])
                .map_err(io)?;
            }
            Err(e) => {
                let mut row = vec![id.to_string()];
                row.extend(std::iter::repeat_n(String::new(), 8));
                row.push(e.to_string());
                w.write_record(row).map_err(io)?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8"))
}

fn cmd_list(cfg: &RunConfig) -> Result<Output, Error> {
    let checks: Vec<Value> = registry()
        .map(|c| json!({ "id": c.id, "kind": c.kind, "anchor": c.anchor, "axes": c.axes }))
        .collect();
    let payload = match cfg.format() {
        Format::Json => json_text(&checks),
        Format::Csv => {
            let io = |e: csv::Error| Error::Usage(format!("csv: {e}"));
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["id", "kind", "axes", "anchor"]).map_err(io)?;
            for c in registry() {
                let kind = serde_json::to_value(c.kind).expect("serializable");
                w.write_record([c.id, kind.as_str().unwrap_or_default(), &c.axes.join(";"), c.anchor])
                    .map_err(io)?;
            }
            String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
        }
    };
    Ok(Output::new(payload, Status::Ok))
}

fn cmd_constants(cfg: &RunConfig, k: u32, ell: f64) -> Result<Output, Error> {
    let b = constants(k, ell)?;
    let v = json!({
        "k": b.k,
        "ell": b.ell,
        "A": b.a,
        "B": b.b,
        "delta_flag": b.delta_flag,
        "C": ext(b.c),
        "D": ext(b.d),
        "D_main": ext(b.d_main),
        "D_tail": b.d_tail.map(ext),
        "Lambda": ext(b.lambda),
        "ln_x_threshold": ext(b.ln_x_threshold),
        "log10_C": b.c.log10(),
        "ln_Lambda": b.lambda.lnmag(),
        "ln_ln_x_threshold": b.ln_x_threshold.lnmag(),
        "phi": ext(phi(ell)?),
        "landreau_M": landreau_m(k),
    });
    Ok(Output::new(render(&v, cfg.format())?, Status::Ok))
}

fn cmd_delta(cfg: &RunConfig, n: u64) -> Result<Output, Error> {
    let d = delta(n)?;
    let v = json!({ "n": d.n, "value": d.value, "witness": d.witness, "window": [d.window.0, d.window.1] });
    Ok(Output::new(render(&v, cfg.format())?, Status::Ok))
}

fn cmd_shortsum(cfg: &RunConfig, f: &str, x: f64, y: f64) -> Result<Output, Error> {
    let func: ArithFn = f.parse()?;
    let s = short_sum(func, x, y)?;
    let v = json!({ "f": func.to_string(), "x": x, "y": y, "value": s });
    Ok(Output::new(render(&v, cfg.format())?, Status::Ok))
}

fn cmd_hooley(cfg: &RunConfig, x: f64, ts: &[f64]) -> Result<Output, Error> {
    let lex = 1.0 + x.ln();
    let mut rows = Vec::new();
    for &t in ts {
        let (s, sh) = weighted_delta_sums(x, t)?;
        let e = 4.0 * t / PI;
        let bound = 9380.0 * x * lex.powf(e - 1.0);
        let bound_log = 16748.0 * lex.powf(e);
        rows.push(json!({
            "t": t,
            "sum": s,
            "bound": bound,
            "margin": (bound / s).ln(),
            "sum_over_n": sh,
            "bound_over_n": bound_log,
            "margin_over_n": (bound_log / sh).ln(),
        }));
    }
    let v = json!({ "x": x, "rows": rows });
    Ok(Output::new(render(&v, cfg.format())?, Status::Ok))
}

fn cmd_classify(cfg: &RunConfig, x: f64, y: f64, f: &str, members: bool) -> Result<Output, Error> {
    let func: ArithFn = f.parse()?;
    let c = classify_window(x, y, func)?;
    let classes = ["I", "II", "III", "IV"];
    let per_class: Vec<Value> = classes
        .iter()
        .enumerate()
        .map(|(i, name)| json!({ "class": name, "count": c.counts[i], "sum": c.sums[i] }))
        .collect();
    let mut v = json!({ "f": func.to_string(), "x": c.x, "y": c.y, "z": c.z, "total": c.total(), "classes": per_class });
    if members {
        v["members"] = serde_json::to_value(&c.members).expect("serializable");
    }
    Ok(Output::new(render(&v, cfg.format())?, Status::Ok))
}

fn unix_seconds() -> f64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map_or(0.0, |d| d.as_secs_f64())
}

fn write_out(path: &Path, text: &str) -> Result<(), Error> {
    std::fs::write(path, text).map_err(|e| Error::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(Output, RunConfig), Error> {
    let file = match &cli.global.config {
        Some(p) => RunConfig::from_file(p)?,
        None => RunConfig::default(),
    };
    let mut cfg = file.merge(flag_config(&cli.global));
    if let Command::Verify { grids, tolerances, .. } = &cli.command {
        for g in grids {
            let (name, values) = parse_axis_override(g)?;
            cfg.grids.insert(name, values);
        }
        for t in tolerances {
            let (id, floor) = parse_tolerance(t)?;
            cfg.tolerances.insert(id, floor);
        }
    }
    if let Some(n) = cfg.threads {
        if n == 0 {
            return Err(Error::Usage("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Usage(format!("thread pool: {e}")))?;
    }
    let out = match &cli.command {
        Command::Verify { checks, .. } => cmd_verify(&cfg, checks)?,
        Command::List => cmd_list(&cfg)?,
        Command::Constants { k, ell } => cmd_constants(&cfg, *k, *ell)?,
        Command::Delta { n } => cmd_delta(&cfg, *n)?,
        Command::Shortsum { f, x, y } => cmd_shortsum(&cfg, f, *x, *y)?,
        Command::Hooley { x, t } => cmd_hooley(&cfg, *x, t)?,
        Command::Classify { x, y, f, members } => cmd_classify(&cfg, *x, *y, f, *members)?,
    };
    Ok((out, cfg))
}

fn main() -> ExitCode {
    let started = unix_seconds();
    let clock = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    let (mut out, cfg) = match run(cli) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("hooley: {e}");
            return ExitCode::from(status_of(&e) as u8);
        }
    };
    match &cfg.out {
        Some(path) => {
            out.meta.insert("argv".into(), json!(argv));
            out.meta.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
            out.meta.insert("started_unix".into(), json!(started));
            out.meta.insert("elapsed_seconds".into(), json!(clock.elapsed().as_secs_f64()));
            out.meta.insert("threads".into(), json!(rayon::current_num_threads()));
            out.meta.insert("exit_code".into(), json!(out.status as u8));
            let mut meta_path = path.clone().into_os_string();
            meta_path.push(".meta.json");
            let written = write_out(path, &out.payload).and_then(|_| write_out(Path::new(&meta_path), &json_text(&out.meta)));
            if let Err(e) = written {
                eprintln!("hooley: {e}");
                return ExitCode::from(Status::Usage as u8);
            }
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.payload.as_bytes()).is_err() {
                return ExitCode::from(Status::Usage as u8);
            }
        }
    }
    ExitCode::from(out.status as u8)
}
