//! `key=value` run configuration, merged under command-line flags.

use hooley_core::error::{Error, Result};
use hooley_core::verify::{parse_axis_override, VerifyConfig};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Everything a run needs besides the subcommand's own arguments.
#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub sieve_limit: Option<u64>,
    pub budget: Option<u64>,
    pub threads: Option<usize>,
    pub seed: Option<u64>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub cache: Option<PathBuf>,
    /// check id → margin floor
    pub tolerances: BTreeMap<String, f64>,
    /// axis → values
    pub grids: BTreeMap<String, Vec<f64>>,
}

fn usage(msg: String) -> Error {
    Error::Usage(msg)
}

fn num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.trim()
        .replace('_', "")
        .parse()
        .map_err(|_| usage(format!("`{key}` expects a number, got `{v}`")))
}

/// Parses `id=floor`.
pub fn parse_tolerance(s: &str) -> Result<(String, f64)> {
    let (id, v) = s
        .split_once('=')
        .ok_or_else(|| usage(format!("tolerance `{s}`: expected check_id=floor")))?;
    Ok((id.trim().to_string(), num("tolerance", v)?))
}

impl RunConfig {
    /// Reads a config file: one `key = value` per line, `#` starts a comment.
    ///
    /// Keys: sieve_limit, budget, threads, seed, format, out, cache,
    /// `grid.<axis>` and `tolerance.<check id>`.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| usage(format!("config line {}: expected key = value", i + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "sieve_limit" => c.sieve_limit = Some(num(key, value)?),
                "budget" => c.budget = Some(num(key, value)?),
                "threads" => c.threads = Some(num(key, value)?),
                "seed" => c.seed = Some(num(key, value)?),
                "format" => {
                    c.format = Some(match value {
                        "json" => Format::Json,
                        "csv" => Format::Csv,
                        _ => return Err(usage(format!("format must be json or csv, got `{value}`"))),
                    })
                }
                "out" => c.out = Some(PathBuf::from(value)),
                "cache" => c.cache = Some(PathBuf::from(value)),
                _ => {
                    if let Some(axis) = key.strip_prefix("grid.") {
                        let (_, values) = parse_axis_override(&format!("{axis}={value}"))?;
                        c.grids.insert(axis.to_string(), values);
                    } else if let Some(id) = key.strip_prefix("tolerance.") {
                        c.tolerances.insert(id.to_string(), num(key, value)?);
                    } else {
                        return Err(usage(format!("config line {}: unknown key `{key}`", i + 1)));
                    }
                }
            }
        }
        Ok(c)
    }

    /// Values set in `over` replace those in `self`.
    pub fn merge(mut self, over: RunConfig) -> Self {
        self.sieve_limit = over.sieve_limit.or(self.sieve_limit);
        self.budget = over.budget.or(self.budget);
        self.threads = over.threads.or(self.threads);
        self.seed = over.seed.or(self.seed);
        self.format = over.format.or(self.format);
        self.out = over.out.or(self.out);
        self.cache = over.cache.or(self.cache);
        self.tolerances.extend(over.tolerances);
        self.grids.extend(over.grids);
        self
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    /// The verification config, validated against the check registry.
    pub fn verify_config(&self) -> Result<VerifyConfig> {
        let d = VerifyConfig::default();
        let c = VerifyConfig {
            sieve_limit: self.sieve_limit.unwrap_or(d.sieve_limit),
            budget: self.budget.unwrap_or(d.budget),
            seed: self.seed.unwrap_or(d.seed),
            margin_floors: self.tolerances.clone(),
            axes: self.grids.clone(),
            cache: self.cache.clone(),
        };
        c.validate()?;
        Ok(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_merge() {
        let file = RunConfig::parse(
            "# run\nsieve_limit = 1_000_000\nformat = csv\ngrid.alpha = 3..5\ntolerance.L2.5 = 0.01\n",
        )
        .unwrap();
        assert_eq!(file.sieve_limit, Some(1_000_000));
        assert_eq!(file.grids["alpha"], vec![3.0, 4.0, 5.0]);
        let flags = RunConfig {
            format: Some(Format::Json),
            ..RunConfig::default()
        };
        let c = file.merge(flags);
        assert_eq!(c.format(), Format::Json);
        assert_eq!(c.sieve_limit, Some(1_000_000));
        assert_eq!(c.verify_config().unwrap().margin_floors["L2.5"], 0.01);
    }

    #[test]
    fn rejects_unknown() {
        assert!(RunConfig::parse("colour = red").is_err());
        assert!(RunConfig::parse("budget = lots").is_err());
        let c = RunConfig::parse("tolerance.BOGUS = 1").unwrap();
        assert!(matches!(c.verify_config(), Err(Error::UnknownCheck(_))));
    }
}
