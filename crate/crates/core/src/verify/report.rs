use crate::error::{Error, Result};
use crate::extscale::{ExtReal, Sign};
use serde::Serialize;
use std::collections::BTreeMap;

/// Margins with absolute value below this are reported as near ties.
pub const NEAR_TIE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckKind {
    /// The inequality as stated, on a reachable domain.
    Statement,
    /// An intermediate step of a proof, checked where it is computable.
    ProofIngredient,
}

/// Strict or non-strict inequality LHS < RHS / LHS ≤ RHS.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Lt,
    Le,
}

impl Relation {
    fn holds(self, margin: f64) -> bool {
        match self {
            Relation::Lt => margin > 0.0,
            Relation::Le => margin >= 0.0,
        }
    }
}

/// Gap between the two sides: ln RHS − ln LHS when both are positive,
/// RHS − LHS otherwise.
pub fn margin(lhs: f64, rhs: f64) -> f64 {
    if lhs > 0.0 && rhs > 0.0 {
        rhs.ln() - lhs.ln()
    } else {
        rhs - lhs
    }
}

/// As [`margin`] for extended reals. When one side is not positive and the
/// difference overflows a double, the log-magnitude of the difference is
/// returned with its sign.
pub fn ext_margin(lhs: ExtReal, rhs: ExtReal) -> f64 {
    if lhs.sign() == Sign::Pos && rhs.sign() == Sign::Pos {
        return rhs.lnmag() - lhs.lnmag();
    }
    let d = rhs.sub(&lhs).value;
    let v = d.to_f64();
    if v.is_finite() {
        v
    } else {
        d.sign() as i8 as f64 * d.lnmag()
    }
}

/// One evaluated grid point.
#[derive(Debug, Clone)]
pub struct Sample {
    pub point: Vec<(&'static str, f64)>,
    pub margin: f64,
    pub relation: Relation,
    finite: bool,
}

impl Sample {
    pub fn new(point: Vec<(&'static str, f64)>, lhs: f64, rhs: f64, relation: Relation) -> Self {
        Sample {
            finite: lhs.is_finite() && rhs.is_finite(),
            margin: margin(lhs, rhs),
            point,
            relation,
        }
    }

    /// Both sides given by their natural logarithms.
    pub fn from_logs(point: Vec<(&'static str, f64)>, ln_lhs: f64, ln_rhs: f64, relation: Relation) -> Self {
        Sample {
            finite: ln_lhs.is_finite() && ln_rhs.is_finite(),
            margin: ln_rhs - ln_lhs,
            point,
            relation,
        }
    }

    pub fn from_ext(point: Vec<(&'static str, f64)>, lhs: ExtReal, rhs: ExtReal, relation: Relation) -> Self {
        Sample {
            finite: lhs.is_finite() && rhs.is_finite(),
            margin: ext_margin(lhs, rhs),
            point,
            relation,
        }
    }

    pub fn holds(&self) -> bool {
        self.relation.holds(self.margin)
    }
}

/// Running minimum of margins over a grid. Ties keep the first point seen.
#[derive(Debug, Clone)]
pub struct MarginTracker {
    check_id: String,
    points: u64,
    failures: u64,
    min_margin: f64,
    witness: Vec<(&'static str, f64)>,
}

impl MarginTracker {
    pub fn new(check_id: &str) -> Self {
        MarginTracker {
            check_id: check_id.to_string(),
            points: 0,
            failures: 0,
            min_margin: f64::INFINITY,
            witness: Vec::new(),
        }
    }

    pub fn push(&mut self, s: Sample) -> Result<()> {
        let Sample {
            point,
            margin,
            relation,
            finite,
        } = s;
        self.observe(margin, finite, relation, || point)
    }

    /// As [`push`](Self::push) without building the point unless it becomes the witness.
    pub fn observe<F>(&mut self, margin: f64, finite: bool, relation: Relation, point: F) -> Result<()>
    where
        F: FnOnce() -> Vec<(&'static str, f64)>,
    {
        if !finite || margin.is_nan() {
            let point = point()
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(", ");
            return Err(Error::NonFinite {
                check: self.check_id.clone(),
                point,
            });
        }
        self.points += 1;
        if !relation.holds(margin) {
            self.failures += 1;
        }
        if margin < self.min_margin {
            self.min_margin = margin;
            self.witness = point();
        }
        Ok(())
    }

    /// Folds in a tracker for grid points that come after this one's.
    pub fn merge(&mut self, other: MarginTracker) {
        self.points += other.points;
        self.failures += other.failures;
        if other.min_margin < self.min_margin {
            self.min_margin = other.min_margin;
            self.witness = other.witness;
        }
    }

    pub fn extend<I: IntoIterator<Item = Sample>>(&mut self, samples: I) -> Result<()> {
        for s in samples {
            self.push(s)?;
        }
        Ok(())
    }

    pub fn points(&self) -> u64 {
        self.points
    }

    pub fn failures(&self) -> u64 {
        self.failures
    }

    pub fn min_margin(&self) -> f64 {
        self.min_margin
    }
}

/// Outcome of one registered check.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub check_id: String,
    pub anchor: String,
    pub grid: String,
    pub points_checked: u64,
    pub min_margin: f64,
    pub witness: BTreeMap<String, f64>,
    pub passed: bool,
    pub kind: CheckKind,
    pub failures: u64,
    pub near_tie: bool,
    /// Auxiliary values computed along the way (sums, branch counts, ...).
    pub details: BTreeMap<String, f64>,
}

impl InequalityReport {
    pub(crate) fn build(
        check_id: &str,
        anchor: &str,
        kind: CheckKind,
        grid: String,
        tracker: MarginTracker,
        details: BTreeMap<String, f64>,
        floor: Option<f64>,
    ) -> Result<Self> {
        if tracker.points == 0 {
            return Err(Error::pre(format!("check {check_id}: empty grid")));
        }
        let floor_ok = floor.is_none_or(|f| tracker.min_margin >= f);
        Ok(InequalityReport {
            check_id: check_id.to_string(),
            anchor: anchor.to_string(),
            grid,
            points_checked: tracker.points,
            min_margin: tracker.min_margin,
            witness: tracker.witness.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            passed: tracker.failures == 0 && floor_ok,
            kind,
            failures: tracker.failures,
            near_tie: tracker.min_margin.abs() < NEAR_TIE,
            details,
        })
    }
}
