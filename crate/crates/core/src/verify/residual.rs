use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::families::{AuxProfiles, SolutionTuple};
use crate::func::Fn1D;
use crate::geometry::OpenInterval;

/// Summary of an absolute residual over a sample grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_abs: f64,
    pub mean_abs: f64,
    pub worst_point: [f64; 2],
    pub samples: usize,
    pub margin: f64,
    /// Grid points per axis.
    pub n: usize,
}

/// Pairwise summation, so the mean does not depend on accumulation order
/// beyond the fixed tree shape.
pub(crate) fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        v.iter().sum()
    } else {
        let (a, b) = v.split_at(v.len() / 2);
        pairwise_sum(a) + pairwise_sum(b)
    }
}

/// Value at a point of the open domain; unlike [`Fn1D::eval`] this ignores
/// the interior margin, since the points come from composite arguments.
pub(crate) fn value_in(f: &Fn1D, x: f64) -> Result<f64> {
    let d = f.domain();
    if !d.contains(x) {
        return Err(Error::Domain { x, lo: d.lo(), hi: d.hi() });
    }
    let v = f.eval_raw(x);
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("non-finite value at x = {x}")))
    }
}

fn axis(i: OpenInterval, n: usize, margin: f64) -> Result<Vec<f64>> {
    if n < 2 {
        return Err(Error::Spec(format!("grids need n ≥ 2, got {n}")));
    }
    if !(margin >= 0.0 && 2.0 * margin < i.len()) {
        return Err(Error::Spec(format!("margin {margin} does not fit inside {i}")));
    }
    Ok(i.grid(n, margin))
}

/// Evaluates `term` on the product grid of `xs × ys` and summarizes `|term|`.
fn summarize<T>(xs: &[f64], ys: &[f64], margin: f64, term: T) -> Result<ResidualReport>
where
    T: Fn(usize, usize) -> Result<f64>,
{
    let mut values = Vec::with_capacity(xs.len() * ys.len());
    let mut worst = (f64::NEG_INFINITY, [xs[0], ys[0]]);
    for (i, &x) in xs.iter().enumerate() {
        for (j, &y) in ys.iter().enumerate() {
            let r = term(i, j).map_err(|e| e.at(x, y))?.abs();
            if !r.is_finite() {
                return Err(Error::Numerical("non-finite residual".into()).at(x, y));
            }
            if r > worst.0 {
                worst = (r, [x, y]);
            }
            values.push(r);
        }
    }
    Ok(ResidualReport {
        max_abs: worst.0,
        mean_abs: pairwise_sum(&values) / values.len() as f64,
        worst_point: worst.1,
        samples: values.len(),
        margin,
        n: xs.len(),
    })
}

/// `|F((x+y)/2) + f1(x) + f2(y) - G(g1(x) + g2(y))|` on the `n × n` grid of
/// the margin-shrunk square `I × I`.
pub fn residual_main(s: &SolutionTuple, n: usize, margin: f64) -> Result<ResidualReport> {
    let xs = axis(s.interval(), n, margin)?;
    let row = |f: &Fn1D| -> Vec<Result<f64>> { xs.iter().map(|&x| value_in(f, x)).collect() };
    let (f1, g1, f2, g2) = (row(s.f1()), row(s.g1()), row(s.f2()), row(s.g2()));
    summarize(&xs, &xs, margin, |i, j| {
        let m = 0.5 * (xs[i] + xs[j]);
        let u = g1[i].clone()? + g2[j].clone()?;
        Ok(value_in(s.big_f(), m)? + f1[i].clone()? + f2[j].clone()? - value_in(s.big_g(), u)?)
    })
}

/// `|φ((x+y)/2) (ψ1(x) - ψ2(y))|` on the grid of `I1 × I2`.
pub fn residual_aux(
    phi: &Fn1D,
    psi1: &Fn1D,
    psi2: &Fn1D,
    i1: OpenInterval,
    i2: OpenInterval,
    n: usize,
    margin: f64,
) -> Result<ResidualReport> {
    let mid = i1.mean_with(&i2);
    let dom = phi.domain();
    if !dom.contains_interval(&mid) {
        return Err(Error::NotContained { inner_lo: mid.lo(), inner_hi: mid.hi(), outer_lo: dom.lo(), outer_hi: dom.hi() });
    }
    let (xs, ys) = (axis(i1, n, margin)?, axis(i2, n, margin)?);
    let p1: Vec<Result<f64>> = xs.iter().map(|&x| value_in(psi1, x)).collect();
    let p2: Vec<Result<f64>> = ys.iter().map(|&y| value_in(psi2, y)).collect();
    summarize(&xs, &ys, margin, |i, j| {
        Ok(value_in(phi, 0.5 * (xs[i] + ys[j]))? * (p1[i].clone()? - p2[j].clone()?))
    })
}

/// The two equations of the derivative system:
///
/// ```text
/// φ((x+y)/2)(ψ1(x) + ψ1(y)) = Ψ1(x) + Ψ1(y)
/// φ((x+y)/2)(ψ2(x) - ψ2(y)) = Ψ2(x) - Ψ2(y)
/// ```
pub fn residual_system(p: &AuxProfiles, n: usize, margin: f64) -> Result<(ResidualReport, ResidualReport)> {
    let xs = axis(p.interval(), n, margin)?;
    let row = |f: &Fn1D| -> Result<Vec<f64>> { xs.iter().map(|&x| value_in(f, x)).collect() };
    let (p1, p2, q1, q2) = (row(&p.psi1)?, row(&p.psi2)?, row(&p.cap_psi1)?, row(&p.cap_psi2)?);
    let first = summarize(&xs, &xs, margin, |i, j| {
        Ok(value_in(&p.phi, 0.5 * (xs[i] + xs[j]))? * (p1[i] + p1[j]) - q1[i] - q1[j])
    })?;
    let second = summarize(&xs, &xs, margin, |i, j| {
        Ok(value_in(&p.phi, 0.5 * (xs[i] + xs[j]))? * (p2[i] - p2[j]) - q2[i] + q2[j])
    })?;
    Ok((first, second))
}
