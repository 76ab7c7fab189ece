use crate::error::{Error, Result};

/// `n` points from `lo` to `hi` inclusive, evenly spaced in log scale.
pub fn logspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| {
            if i == 0 {
                lo
            } else if i == n - 1 {
                hi
            } else {
                (a + (b - a) * i as f64 / (n - 1) as f64).exp()
            }
        })
        .collect()
}

/// `n` points from `lo` to `hi` inclusive, evenly spaced.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![lo];
    }
    (0..n)
        .map(|i| if i == 0 { lo } else if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / (n - 1) as f64 })
        .collect()
}

/// Parses `name=v1,v2,...` or `name=lo..hi`.
///
/// A range with integer ends no more than 1000 apart expands to every integer
/// in it; any other range expands to 20 points, log-spaced when `lo > 0`.
pub fn parse_axis_override(s: &str) -> Result<(String, Vec<f64>)> {
    let bad = |why: &str| Error::Usage(format!("grid override `{s}`: {why}"));
    let (name, spec) = s.split_once('=').ok_or_else(|| bad("expected name=values"))?;
    let name = name.trim();
    if name.is_empty() {
        return Err(bad("empty axis name"));
    }
    let num = |t: &str| -> Result<f64> {
        let v: f64 = t.trim().parse().map_err(|_| bad("not a number"))?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(bad("not finite"))
        }
    };
    let values = if let Some((lo, hi)) = spec.split_once("..") {
        let (lo, hi) = (num(lo)?, num(hi)?);
        if !(lo <= hi) {
            return Err(bad("empty range"));
        }
        if lo.fract() == 0.0 && hi.fract() == 0.0 && hi - lo <= 1000.0 {
            (lo as i64..=hi as i64).map(|v| v as f64).collect()
        } else if lo > 0.0 {
            logspace(lo, hi, 20)
        } else {
            linspace(lo, hi, 20)
        }
    } else {
        spec.split(',').map(num).collect::<Result<Vec<_>>>()?
    };
    if values.is_empty() {
        return Err(bad("no values"));
    }
    Ok((name.to_string(), values))
}

pub(crate) fn describe(axes: &[(&str, &[f64])]) -> String {
    axes.iter()
        .map(|(name, v)| match v.len() {
            0 => format!("{name}: none"),
            1 => format!("{name}: {}", v[0]),
            n => format!("{name}: {n} pts in [{}, {}]", fmt_num(min(v)), fmt_num(max(v))),
        })
        .collect::<Vec<_>>()
        .join("; ")
}

fn min(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::INFINITY, f64::min)
}

fn max(v: &[f64]) -> f64 {
    v.iter().copied().fold(f64::NEG_INFINITY, f64::max)
}

fn fmt_num(x: f64) -> String {
    if x != 0.0 && (x.abs() >= 1e5 || x.abs() < 1e-3) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        assert_eq!(
            parse_axis_override("alpha=3..10").unwrap(),
            ("alpha".into(), (3..=10).map(|v| v as f64).collect())
        );
        assert_eq!(parse_axis_override("x=1,2.5").unwrap().1, vec![1.0, 2.5]);
        let (_, v) = parse_axis_override("x=1e3..1e9").unwrap();
        assert_eq!(v.len(), 20);
        assert_eq!((v[0], v[19]), (1e3, 1e9));
        assert!(parse_axis_override("x=5..1").is_err());
        assert!(parse_axis_override("x").is_err());
        assert!(parse_axis_override("x=a").is_err());
    }

    #[test]
    fn spacing_hits_ends() {
        let v = logspace(2.0, 1e6, 7);
        assert_eq!((v[0], v[6]), (2.0, 1e6));
        assert_eq!(linspace(0.0, 1.0, 21)[20], 1.0);
    }
}
