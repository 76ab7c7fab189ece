use crate::error::{Error, Result};
use serde::Serialize;

pub const DEFAULT_MAX_EVALUATIONS: usize = 20_000_000;
const MAX_DEPTH: u32 = 50;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Adaptive Simpson quadrature of `f` over [a, b] to absolute tolerance `tol`.
pub fn quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    quad_with_kinks(f, a, b, &[], tol)
}

/// As [`quad`], first splitting at every kink abscissa inside (a, b).
///
/// The tolerance is shared between pieces in proportion to their length.
pub fn quad_with_kinks<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    kinks: &[f64],
    tol: f64,
) -> Result<QuadratureResult> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::pre(format!("invalid interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::pre(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 0,
        });
    }
    let mut cuts: Vec<f64> = kinks.iter().copied().filter(|&k| k > a && k < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut points = Vec::with_capacity(cuts.len() + 2);
    points.push(a);
    points.extend(cuts);
    points.push(b);

    let mut state = State {
        value: 0.0,
        error: 0.0,
        evaluations: 0,
        converged: true,
    };
    let width = b - a;
    for w in points.windows(2) {
        let piece_tol = tol * (w[1] - w[0]) / width;
        integrate_piece(&f, w[0], w[1], piece_tol, &mut state);
        if state.evaluations > DEFAULT_MAX_EVALUATIONS {
            state.converged = false;
            break;
        }
    }
    if !state.value.is_finite() {
        return Err(Error::pre("integrand produced a non-finite value"));
    }
    if !state.converged || state.error > tol {
        return Err(Error::NoConvergence {
            estimate: state.value,
            error: state.error,
            evaluations: state.evaluations,
        });
    }
    Ok(QuadratureResult {
        value: state.value,
        abs_error_estimate: state.error,
        evaluations: state.evaluations,
    })
}

struct State {
    value: f64,
    error: f64,
    evaluations: usize,
    converged: bool,
}

struct Segment {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
}

fn integrate_piece<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64, st: &mut State) {
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a), f(m), f(b));
    st.evaluations += 3;
    let mut stack = vec![Segment {
        a,
        b,
        fa,
        fm,
        fb,
        whole: (b - a) / 6.0 * (fa + 4.0 * fm + fb),
        tol,
        depth: 0,
    }];
    while let Some(s) = stack.pop() {
        let m = 0.5 * (s.a + s.b);
        let lm = 0.5 * (s.a + m);
        let rm = 0.5 * (m + s.b);
        let (flm, frm) = (f(lm), f(rm));
        st.evaluations += 2;
        let left = (m - s.a) / 6.0 * (s.fa + 4.0 * flm + s.fm);
        let right = (s.b - m) / 6.0 * (s.fm + 4.0 * frm + s.fb);
        let diff = left + right - s.whole;
        let accept = diff.abs() <= 15.0 * s.tol;
        if accept || s.depth >= MAX_DEPTH || st.evaluations > DEFAULT_MAX_EVALUATIONS {
            if !accept {
                st.converged = false;
            }
            st.value += left + right + diff / 15.0;
            st.error += diff.abs() / 15.0;
            continue;
        }
        let half = 0.5 * s.tol;
        // Push right first so the left half is finished first.
        stack.push(Segment {
            a: m,
            b: s.b,
            fa: s.fm,
            fm: frm,
            fb: s.fb,
            whole: right,
            tol: half,
            depth: s.depth + 1,
        });
        stack.push(Segment {
            a: s.a,
            b: m,
            fa: s.fa,
            fm: flm,
            fb: s.fm,
            whole: left,
            tol: half,
            depth: s.depth + 1,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn abs_cos_with_kink() {
        let r = quad_with_kinks(|t| (t / 2.0).cos().abs(), 0.0, 2.0 * PI, &[PI], 1e-12).unwrap();
        assert!((r.value - 4.0).abs() < 1e-12);
        assert!(r.abs_error_estimate <= 1e-12);
    }

    #[test]
    fn zero_integrand() {
        let r = quad(|_| 0.0, 0.0, 1.0, 1e-12).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(quad(|t| t, 3.0, 3.0, 1e-9).unwrap().value, 0.0);
    }

    #[test]
    fn exponential_decay() {
        let r = quad(|t: f64| (-t).exp(), 0.0, 10.0, 1e-12).unwrap();
        assert!((r.value - (1.0 - (-10f64).exp())).abs() < 1e-12);
        assert!(r.value <= 1.0);
    }

    #[test]
    fn unreachable_tolerance_reports_partial_estimate() {
        let err = quad(|t: f64| t.sin() * 1e8, 0.0, 1.0, 1e-30).unwrap_err();
        match err {
            Error::NoConvergence { estimate, .. } => assert!(estimate.is_finite()),
            e => panic!("unexpected {e:?}"),
        }
    }

    #[test]
    fn rejects_reversed_interval() {
        assert!(quad(|t| t, 1.0, 0.0, 1e-9).is_err());
    }
}
