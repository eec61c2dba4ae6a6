use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::Fn1D;
use crate::geometry::OpenInterval;

/// Runs of at most this many samples never count as affine.
pub const MIN_RUN: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    GloballyAffine,
    PartiallyAffine,
    NowhereAffine,
}

/// A detected affinity window with the least-squares line of `F` on it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineWindow {
    pub interval: OpenInterval,
    pub slope: f64,
    pub intercept: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AffinityReport {
    pub intervals: Vec<AffineWindow>,
    pub tol: f64,
    pub n: usize,
    /// Absolute bound on the spread of `F'` within a run.
    pub threshold: f64,
    pub verdict: Verdict,
}

fn spread_ok(lo: f64, hi: f64, thr: f64) -> bool {
    hi - lo <= thr
}

/// Detects the maximal windows on which `F` is affine.
///
/// `F'` is sampled at `n` points of the margin-shrunk domain. A run is a
/// maximal stretch of consecutive samples whose derivative values spread by
/// at most `tol · max|F'|`; runs longer than [`MIN_RUN`] samples are
/// reported. A run touching the first or last sample extends to that end of
/// the domain. The verdict is `GloballyAffine` when one run covers every
/// sample and `NowhereAffine` when no run qualifies.
pub fn classify_affine_intervals(f: &Fn1D, tol: f64, n: usize) -> Result<AffinityReport> {
    if n < 16 {
        return Err(Error::Spec(format!("classification needs n ≥ 16, got {n}")));
    }
    if !(tol >= 0.0 && tol.is_finite()) {
        return Err(Error::Spec(format!("tolerance must be finite and non-negative, got {tol}")));
    }
    let dom = f.domain();
    let xs = dom.grid(n, f.margin());
    let mut ds = Vec::with_capacity(n);
    let mut vs = Vec::with_capacity(n);
    for &x in &xs {
        let (v, d) = f.eval_with_deriv_raw(x);
        if !(v.is_finite() && d.is_finite()) {
            return Err(Error::Numerical(format!("F or F' is not finite at x = {x}")));
        }
        vs.push(v);
        ds.push(d);
    }
    let scale = ds.iter().fold(0.0_f64, |m, d| m.max(d.abs()));
    let threshold = tol * scale;

    let mut runs: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    while start < n {
        let (mut lo, mut hi) = (ds[start], ds[start]);
        let mut end = start;
        while end + 1 < n {
            let d = ds[end + 1];
            if !spread_ok(lo.min(d), hi.max(d), threshold) {
                break;
            }
            lo = lo.min(d);
            hi = hi.max(d);
            end += 1;
        }
        runs.push((start, end));
        start = end + 1;
    }
    // Adjacent runs whose union still passes the spread test are merged.
    let mut merged: Vec<(usize, usize)> = Vec::new();
    for r in runs {
        if let Some(last) = merged.last_mut() {
            let seg = &ds[last.0..=r.1];
            let (lo, hi) = seg.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
            if spread_ok(lo, hi, threshold) {
                last.1 = r.1;
                continue;
            }
        }
        merged.push(r);
    }

    let mut intervals = Vec::new();
    for &(s, e) in merged.iter().filter(|(s, e)| e - s + 1 > MIN_RUN) {
        let lo = if s == 0 { dom.lo() } else { xs[s] };
        let hi = if e == n - 1 { dom.hi() } else { xs[e] };
        let (slope, intercept) = least_squares(&xs[s..=e], &vs[s..=e]);
        intervals.push(AffineWindow { interval: OpenInterval::new(lo, hi)?, slope, intercept });
    }
    let verdict = if merged.len() == 1 {
        Verdict::GloballyAffine
    } else if intervals.is_empty() {
        Verdict::NowhereAffine
    } else {
        Verdict::PartiallyAffine
    };
    Ok(AffinityReport { intervals, tol, n, threshold, verdict })
}

/// Least-squares line through `(x, y)` pairs, centred for conditioning.
fn least_squares(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let m = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / m, ys.iter().sum::<f64>() / m);
    let (mut sxy, mut sxx) = (0.0, 0.0);
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::paper_example;

    #[test]
    fn example_is_partially_affine() {
        let r = classify_affine_intervals(paper_example().big_f(), 1e-6, 4096).unwrap();
        assert_eq!(r.verdict, Verdict::PartiallyAffine);
        assert_eq!(r.intervals.len(), 1);
        let w = r.intervals[0];
        assert!((w.interval.lo() - 1.0).abs() < 0.02 && (w.interval.hi() - 4.0).abs() < 0.02, "{w:?}");
        assert!((w.slope - 4.0).abs() < 1e-6);
    }

    #[test]
    fn line_and_parabola() {
        let i = OpenInterval::new(0.0, 1.0).unwrap();
        let r = classify_affine_intervals(&Fn1D::affine(i, 3.0, 1.0), 1e-6, 64).unwrap();
        assert_eq!(r.verdict, Verdict::GloballyAffine);
        assert_eq!(r.intervals[0].interval, i);
        assert!((r.intervals[0].slope - 3.0).abs() < 1e-12 && (r.intervals[0].intercept - 1.0).abs() < 1e-12);
        let r = classify_affine_intervals(&Fn1D::quadratic(i, 1.0, 0.0, 0.0), 1e-6, 4096).unwrap();
        assert_eq!(r.verdict, Verdict::NowhereAffine);
    }

    #[test]
    fn small_n_is_rejected() {
        let i = OpenInterval::new(0.0, 1.0).unwrap();
        assert!(classify_affine_intervals(&Fn1D::identity(i), 1e-6, 8).is_err());
    }
}
