use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use super::expr::{Dual, Expr};
use super::quadrature;
use crate::error::{Error, Result};
use crate::geometry::OpenInterval;

/// Number of evenly spaced antiderivative checkpoints across the domain.
pub const CHECKPOINTS: usize = 129;

/// Samples used when checking quotient denominators at construction.
pub const DENOMINATOR_SAMPLES: usize = 1024;

/// Samples used by the strict-monotonicity assertion.
const MONOTONE_SAMPLES: usize = 257;

/// Default interior margin as a fraction of the domain length.
pub const DEFAULT_MARGIN_FRACTION: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// The formula valid on one piece of a [`Fn1D`].
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Body {
    Affine { slope: f64, intercept: f64 },
    /// `a2 x² + a1 x + a0`
    Quadratic { a2: f64, a1: f64, a0: f64 },
    ClosedForm(Expr),
    Antiderivative(Antiderivative),
    Hermite(HermiteTable),
}

impl Body {
    fn eval_dual(&self, x: f64) -> Dual {
        match self {
            Body::Affine { slope, intercept } => Dual::new(slope * x + intercept, *slope),
            Body::Quadratic { a2, a1, a0 } => Dual::new((a2 * x + a1) * x + a0, 2.0 * a2 * x + a1),
            Body::ClosedForm(e) => e.eval_dual(x),
            Body::Antiderivative(a) => Dual::new(a.value(x), a.integrand.eval_raw(x)),
            Body::Hermite(h) => h.eval_dual(x),
        }
    }
}

/// `y0 + ∫_{x0}^{x} integrand`, with cumulative values cached at fixed
/// checkpoints so one evaluation integrates over at most one checkpoint gap.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "AntiderivativeSpec", into = "AntiderivativeSpec")]
pub struct Antiderivative {
    integrand: Arc<Fn1D>,
    x0: f64,
    y0: f64,
    tol: f64,
    anchors: Vec<f64>,
    values: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AntiderivativeSpec {
    integrand: Arc<Fn1D>,
    x0: f64,
    y0: f64,
    tol: f64,
}

impl TryFrom<AntiderivativeSpec> for Antiderivative {
    type Error = Error;
    fn try_from(s: AntiderivativeSpec) -> Result<Self> {
        Antiderivative::new(s.integrand, s.x0, s.y0, s.tol)
    }
}

impl From<Antiderivative> for AntiderivativeSpec {
    fn from(a: Antiderivative) -> Self {
        AntiderivativeSpec { integrand: a.integrand, x0: a.x0, y0: a.y0, tol: a.tol }
    }
}

impl Antiderivative {
    pub fn new(integrand: Arc<Fn1D>, x0: f64, y0: f64, tol: f64) -> Result<Self> {
        if !(tol > 0.0) {
            return Err(Error::Spec(format!("quadrature tolerance must be positive, got {tol}")));
        }
        let dom = integrand.domain();
        if !dom.contains(x0) {
            return Err(Error::Domain { x: x0, lo: dom.lo(), hi: dom.hi() });
        }
        let mut anchors: Vec<f64> = (0..CHECKPOINTS)
            .map(|i| dom.lo() + dom.len() * i as f64 / (CHECKPOINTS - 1) as f64)
            .collect();
        *anchors.last_mut().unwrap() = dom.hi();
        let pos = anchors.partition_point(|&a| a < x0);
        if anchors[pos] != x0 {
            anchors.insert(pos, x0);
        }
        let f = |t: f64| integrand.eval_raw(t);
        let seg_tol = tol / (4.0 * anchors.len() as f64);
        let mut values = vec![0.0; anchors.len()];
        values[pos] = y0;
        for i in pos + 1..anchors.len() {
            values[i] = values[i - 1] + quadrature::integrate(&f, anchors[i - 1], anchors[i], seg_tol)?;
        }
        for i in (0..pos).rev() {
            values[i] = values[i + 1] - quadrature::integrate(&f, anchors[i], anchors[i + 1], seg_tol)?;
        }
        Ok(Self { integrand, x0, y0, tol, anchors, values })
    }

    pub fn integrand(&self) -> &Arc<Fn1D> {
        &self.integrand
    }

    pub fn anchor(&self) -> (f64, f64) {
        (self.x0, self.y0)
    }

    fn value(&self, x: f64) -> f64 {
        let i = self.anchors.partition_point(|&a| a < x);
        let nearest = if i == 0 {
            0
        } else if i == self.anchors.len() || x - self.anchors[i - 1] <= self.anchors[i] - x {
            i - 1
        } else {
            i
        };
        let a = self.anchors[nearest];
        if a == x {
            return self.values[nearest];
        }
        let f = |t: f64| self.integrand.eval_raw(t);
        match quadrature::integrate(&f, a, x, 0.5 * self.tol) {
            Ok(v) => self.values[nearest] + v,
            Err(_) => f64::NAN,
        }
    }
}

/// Piecewise cubic Hermite interpolant through `(xs[i], ys[i])` with slopes
/// `ds[i]`. Outside the node range the end cubics are extended.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "HermiteSpec", into = "HermiteSpec")]
pub struct HermiteTable {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct HermiteSpec {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl TryFrom<HermiteSpec> for HermiteTable {
    type Error = Error;
    fn try_from(s: HermiteSpec) -> Result<Self> {
        HermiteTable::new(s.xs, s.ys, s.ds)
    }
}

impl From<HermiteTable> for HermiteSpec {
    fn from(h: HermiteTable) -> Self {
        HermiteSpec { xs: h.xs, ys: h.ys, ds: h.ds }
    }
}

impl HermiteTable {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>, ds: Vec<f64>) -> Result<Self> {
        if xs.len() < 2 || xs.len() != ys.len() || xs.len() != ds.len() {
            return Err(Error::Spec("Hermite table needs at least two nodes and matching lengths".into()));
        }
        if xs.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Spec("Hermite nodes must be strictly increasing".into()));
        }
        if xs.iter().chain(&ys).chain(&ds).any(|v| !v.is_finite()) {
            return Err(Error::Spec("Hermite table contains non-finite entries".into()));
        }
        Ok(Self { xs, ys, ds })
    }

    /// Monotone-preserving slopes (Fritsch–Carlson) for tabulated data.
    pub fn monotone_cubic(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n {
            return Err(Error::Spec("tabulation needs at least two nodes and matching lengths".into()));
        }
        let secants: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / (xs[i + 1] - xs[i])).collect();
        let mut ds = vec![0.0; n];
        ds[0] = secants[0];
        ds[n - 1] = secants[n - 2];
        for i in 1..n - 1 {
            let (s0, s1) = (secants[i - 1], secants[i]);
            ds[i] = if s0 * s1 <= 0.0 {
                0.0
            } else {
                let (h0, h1) = (xs[i] - xs[i - 1], xs[i + 1] - xs[i]);
                let w1 = 2.0 * h1 + h0;
                let w2 = h1 + 2.0 * h0;
                (w1 + w2) / (w1 / s0 + w2 / s1)
            };
        }
        Self::new(xs, ys, ds)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.xs
    }

    fn eval_dual(&self, x: f64) -> Dual {
        let n = self.xs.len();
        let i = self.xs.partition_point(|&a| a <= x).clamp(1, n - 1) - 1;
        let h = self.xs[i + 1] - self.xs[i];
        let t = (x - self.xs[i]) / h;
        let (y0, y1) = (self.ys[i], self.ys[i + 1]);
        let (m0, m1) = (self.ds[i] * h, self.ds[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * m0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * m1;
        let dv = (6.0 * t2 - 6.0 * t) * y0
            + (3.0 * t2 - 4.0 * t + 1.0) * m0
            + (-6.0 * t2 + 6.0 * t) * y1
            + (3.0 * t2 - 2.0 * t) * m1;
        Dual::new(v, dv / h)
    }
}

/// A real function on an open interval, given piecewise.
///
/// Piece `i` covers `]breaks[i-1], breaks[i]]`; the first and last pieces
/// extend to the domain ends. Derivatives are exact by construction (closed
/// forms through forward-mode evaluation, antiderivatives through their
/// integrand). Public evaluation rejects points closer than `margin` to the
/// domain ends.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "Fn1DRepr", into = "Fn1DRepr")]
pub struct Fn1D {
    domain: OpenInterval,
    breaks: Vec<f64>,
    bodies: Vec<Body>,
    margin: f64,
    direction: OnceLock<Result<Direction>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Fn1DRepr {
    domain: OpenInterval,
    #[serde(default)]
    breaks: Vec<f64>,
    bodies: Vec<Body>,
    #[serde(default)]
    margin: Option<f64>,
}

impl TryFrom<Fn1DRepr> for Fn1D {
    type Error = Error;
    fn try_from(r: Fn1DRepr) -> Result<Self> {
        let f = Fn1D::piecewise(r.domain, r.breaks, r.bodies)?;
        Ok(match r.margin {
            Some(m) => f.with_margin(m),
            None => f,
        })
    }
}

impl From<Fn1D> for Fn1DRepr {
    fn from(f: Fn1D) -> Self {
        Fn1DRepr { domain: f.domain, breaks: f.breaks, bodies: f.bodies, margin: Some(f.margin) }
    }
}

impl Fn1D {
    pub fn piecewise(domain: OpenInterval, breaks: Vec<f64>, bodies: Vec<Body>) -> Result<Self> {
        if bodies.len() != breaks.len() + 1 {
            return Err(Error::Spec(format!(
                "{} bodies need {} breaks, got {}",
                bodies.len(),
                bodies.len().saturating_sub(1),
                breaks.len()
            )));
        }
        let mut prev = domain.lo();
        for &b in &breaks {
            if !(b > prev && b < domain.hi()) {
                return Err(Error::Spec(format!(
                    "break {b} is not strictly increasing inside ]{}, {}[",
                    domain.lo(),
                    domain.hi()
                )));
            }
            prev = b;
        }
        for (i, body) in bodies.iter().enumerate() {
            if let Body::ClosedForm(e) = body {
                let lo = if i == 0 { domain.lo() } else { breaks[i - 1] };
                let hi = if i == breaks.len() { domain.hi() } else { breaks[i] };
                e.check_denominators(lo, hi, DENOMINATOR_SAMPLES)?;
            }
        }
        Ok(Self {
            domain,
            breaks,
            bodies,
            margin: DEFAULT_MARGIN_FRACTION * domain.len(),
            direction: OnceLock::new(),
        })
    }

    pub fn single(domain: OpenInterval, body: Body) -> Result<Self> {
        Self::piecewise(domain, Vec::new(), vec![body])
    }

    pub fn affine(domain: OpenInterval, slope: f64, intercept: f64) -> Self {
        Self::single(domain, Body::Affine { slope, intercept }).expect("affine body is always valid")
    }

    pub fn constant(domain: OpenInterval, value: f64) -> Self {
        Self::affine(domain, 0.0, value)
    }

    pub fn identity(domain: OpenInterval) -> Self {
        Self::affine(domain, 1.0, 0.0)
    }

    pub fn quadratic(domain: OpenInterval, a2: f64, a1: f64, a0: f64) -> Self {
        Self::single(domain, Body::Quadratic { a2, a1, a0 }).expect("quadratic body is always valid")
    }

    pub fn closed_form(domain: OpenInterval, expr: Expr) -> Result<Self> {
        Self::single(domain, Body::ClosedForm(expr))
    }

    /// Cubic Hermite interpolant with given node slopes.
    pub fn hermite(domain: OpenInterval, xs: Vec<f64>, ys: Vec<f64>, ds: Vec<f64>) -> Result<Self> {
        Self::single(domain, Body::Hermite(HermiteTable::new(xs, ys, ds)?))
    }

    /// Monotone-cubic interpolant of tabulated samples.
    pub fn tabulated(domain: OpenInterval, xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        Self::single(domain, Body::Hermite(HermiteTable::monotone_cubic(xs, ys)?))
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = margin.max(0.0);
        self
    }

    pub fn domain(&self) -> OpenInterval {
        self.domain
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn bodies(&self) -> &[Body] {
        &self.bodies
    }

    /// The closed window `[lo + margin, hi - margin]` accepted by [`Fn1D::eval`].
    pub fn window(&self) -> (f64, f64) {
        (self.domain.lo() + self.margin, self.domain.hi() - self.margin)
    }

    fn piece(&self, x: f64) -> &Body {
        &self.bodies[self.breaks.partition_point(|&b| b < x)]
    }

    /// Evaluates without the domain check. Points outside the domain use the
    /// nearest piece's formula.
    pub fn eval_raw(&self, x: f64) -> f64 {
        self.piece(x).eval_dual(x).v
    }

    pub fn deriv_raw(&self, x: f64) -> f64 {
        self.piece(x).eval_dual(x).d
    }

    pub fn eval_with_deriv_raw(&self, x: f64) -> (f64, f64) {
        let d = self.piece(x).eval_dual(x);
        (d.v, d.d)
    }

    fn check(&self, x: f64) -> Result<()> {
        let (lo, hi) = self.window();
        if x >= lo && x <= hi {
            Ok(())
        } else {
            Err(Error::Domain { x, lo, hi })
        }
    }

    pub fn eval(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        finite(self.eval_raw(x), x, "value")
    }

    pub fn deriv(&self, x: f64) -> Result<f64> {
        self.check(x)?;
        finite(self.deriv_raw(x), x, "derivative")
    }

    pub fn eval_with_deriv(&self, x: f64) -> Result<(f64, f64)> {
        self.check(x)?;
        let (v, d) = self.eval_with_deriv_raw(x);
        Ok((finite(v, x, "value")?, finite(d, x, "derivative")?))
    }

    /// One-sided limit at the lower end: the first piece's formula at the
    /// endpoint when finite there, otherwise the value at the margin.
    pub fn limit_lo(&self) -> f64 {
        let v = self.eval_raw(self.domain.lo());
        if v.is_finite() {
            v
        } else {
            self.eval_raw(self.window().0)
        }
    }

    pub fn limit_hi(&self) -> f64 {
        let v = self.eval_raw(self.domain.hi());
        if v.is_finite() {
            v
        } else {
            self.eval_raw(self.window().1)
        }
    }

    /// Value at `x`, or the one-sided limit when `x` is a domain endpoint.
    pub fn value_or_limit(&self, x: f64) -> f64 {
        if x <= self.domain.lo() {
            self.limit_lo()
        } else if x >= self.domain.hi() {
            self.limit_hi()
        } else {
            self.eval_raw(x)
        }
    }

    /// Strict-monotonicity assertion by sampling values and derivative signs
    /// across the window. Cached after the first call.
    pub fn direction(&self) -> Result<Direction> {
        self.direction.get_or_init(|| self.sample_direction()).clone()
    }

    fn sample_direction(&self) -> Result<Direction> {
        let (lo, hi) = self.window();
        let n = MONOTONE_SAMPLES;
        let pts: Vec<(f64, f64, f64)> = (0..n)
            .map(|i| {
                let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                let (v, d) = self.eval_with_deriv_raw(x);
                (x, v, d)
            })
            .collect();
        if pts.iter().any(|p| !p.1.is_finite()) {
            return Err(Error::Monotonicity("non-finite value while sampling".into()));
        }
        let dir = if pts[n - 1].1 > pts[0].1 {
            Direction::Increasing
        } else if pts[n - 1].1 < pts[0].1 {
            Direction::Decreasing
        } else {
            return Err(Error::Monotonicity("equal values at both ends of the window".into()));
        };
        let sign = if dir == Direction::Increasing { 1.0 } else { -1.0 };
        let dscale = pts.iter().map(|p| p.2.abs()).filter(|d| d.is_finite()).fold(0.0, f64::max);
        for w in pts.windows(2) {
            if !(sign * (w[1].1 - w[0].1) > 0.0) {
                return Err(Error::Monotonicity(format!(
                    "values do not change strictly between x = {} and x = {}",
                    w[0].0, w[1].0
                )));
            }
        }
        for p in &pts {
            if p.2.is_finite() && sign * p.2 < -1e-12 * dscale {
                return Err(Error::Monotonicity(format!("derivative sign change at x = {}", p.0)));
            }
        }
        Ok(dir)
    }

    /// Image of the whole domain, from the endpoint limits.
    pub fn image(&self) -> OpenInterval {
        let (a, b) = (self.limit_lo(), self.limit_hi());
        OpenInterval::new_unchecked(a.min(b), a.max(b))
    }

    /// Image of a subinterval of the domain (monotone functions).
    pub fn image_of(&self, j: OpenInterval) -> Result<OpenInterval> {
        if !self.domain.contains_interval(&j) {
            return Err(Error::NotContained {
                inner_lo: j.lo(),
                inner_hi: j.hi(),
                outer_lo: self.domain.lo(),
                outer_hi: self.domain.hi(),
            });
        }
        self.direction()?;
        let a = self.value_or_limit(j.lo());
        let b = self.value_or_limit(j.hi());
        OpenInterval::new(a.min(b), a.max(b))
    }

    /// Checks value continuity across every internal break.
    pub fn check_continuity(&self, rel_tol: f64) -> Result<()> {
        for (i, &b) in self.breaks.iter().enumerate() {
            let left = self.bodies[i].eval_dual(b).v;
            let right = self.bodies[i + 1].eval_dual(b).v;
            if (left - right).abs() > rel_tol * (1.0 + left.abs().max(right.abs())) {
                return Err(Error::Continuity(format!(
                    "jump at x = {b}: left limit {left}, right limit {right}"
                )));
            }
        }
        Ok(())
    }

    /// Checks continuity of the derivative across every internal break.
    pub fn check_derivative_continuity(&self, rel_tol: f64) -> Result<()> {
        for (i, &b) in self.breaks.iter().enumerate() {
            let left = self.bodies[i].eval_dual(b).d;
            let right = self.bodies[i + 1].eval_dual(b).d;
            if (left - right).abs() > rel_tol * (1.0 + left.abs().max(right.abs())) {
                return Err(Error::Continuity(format!(
                    "derivative jump at x = {b}: left {left}, right {right}"
                )));
            }
        }
        Ok(())
    }

    /// Uniform grid of `n` points over the margin-shrunk domain, symmetric
    /// about the midpoint.
    pub fn grid(&self, n: usize, margin: f64) -> Vec<f64> {
        self.domain.grid(n, margin)
    }
}

fn finite(v: f64, x: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Numerical(format!("non-finite {what} at x = {x}")))
    }
}

/// Antiderivative of `integrand` taking the value `y0` at `x0`.
pub fn antiderivative(integrand: &Arc<Fn1D>, x0: f64, y0: f64, tol: f64) -> Result<Fn1D> {
    let a = Antiderivative::new(Arc::clone(integrand), x0, y0, tol)?;
    Fn1D::single(integrand.domain(), Body::Antiderivative(a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(lo: f64, hi: f64) -> OpenInterval {
        OpenInterval::new(lo, hi).unwrap()
    }

    fn example_f() -> Fn1D {
        Fn1D::piecewise(
            iv(0.0, 4.0),
            vec![1.0],
            vec![Body::Quadratic { a2: 2.0, a1: 0.0, a0: 2.0 }, Body::Affine { slope: 4.0, intercept: 0.0 }],
        )
        .unwrap()
    }

    #[test]
    fn piecewise_eval_and_deriv() {
        let f = example_f();
        assert_eq!(f.eval(2.0).unwrap(), 8.0);
        assert_eq!(f.eval(0.5).unwrap(), 2.5);
        // boundary belongs to the left piece
        assert_eq!(f.deriv(1.0).unwrap(), 4.0);
        assert_eq!(f.deriv(3.0).unwrap(), 4.0);
        f.check_continuity(1e-12).unwrap();
        f.check_derivative_continuity(1e-12).unwrap();
    }

    #[test]
    fn out_of_window_rejected() {
        let f = Fn1D::identity(iv(0.0, 1.0));
        assert!(matches!(f.eval(0.0), Err(Error::Domain { .. })));
        assert!(matches!(f.eval(1.5), Err(Error::Domain { .. })));
        assert!(matches!(f.deriv(-1.0), Err(Error::Domain { .. })));
        assert_eq!(f.eval(0.25).unwrap(), 0.25);
    }

    #[test]
    fn bad_breaks_rejected() {
        let r = Fn1D::piecewise(
            iv(0.0, 1.0),
            vec![1.5],
            vec![Body::Affine { slope: 1.0, intercept: 0.0 }, Body::Affine { slope: 1.0, intercept: 0.0 }],
        );
        assert!(r.is_err());
    }

    #[test]
    fn jump_detected() {
        let f = Fn1D::piecewise(
            iv(0.0, 2.0),
            vec![1.0],
            vec![Body::Affine { slope: 1.0, intercept: 0.0 }, Body::Affine { slope: 1.0, intercept: 0.1 }],
        )
        .unwrap();
        assert!(matches!(f.check_continuity(1e-12), Err(Error::Continuity(_))));
    }

    #[test]
    fn closed_form_denominator_checked() {
        let e = Expr::c(1.0) / (Expr::x() - 0.5);
        assert!(Fn1D::closed_form(iv(0.0, 1.0), e.clone()).is_err());
        assert!(Fn1D::closed_form(iv(0.6, 1.0), e).is_ok());
    }

    #[test]
    fn antiderivative_of_linear_integrand() {
        let integrand = Arc::new(Fn1D::affine(iv(0.0, 3.0), 2.0, 0.0));
        let f = antiderivative(&integrand, 1.0, 0.0, 1e-10).unwrap();
        assert!((f.eval(2.0).unwrap() - 3.0).abs() < 1e-10);
        assert_eq!(f.eval(1.0).unwrap(), 0.0);
        assert_eq!(f.deriv(1.7).unwrap(), 3.4);
    }

    #[test]
    fn antiderivative_constant_is_linear() {
        let integrand = Arc::new(Fn1D::constant(iv(0.0, 4.0), 4.0));
        let f = antiderivative(&integrand, 1.0, 4.0, 1e-10).unwrap();
        for x in [0.1, 0.7, 2.2, 3.9] {
            assert!((f.eval(x).unwrap() - 4.0 * x).abs() < 1e-10);
        }
    }

    #[test]
    fn antiderivative_log_oracle() {
        let integrand =
            Arc::new(Fn1D::closed_form(iv(1.0, 2.0), Expr::c(2.0) / (Expr::x() + 3.0)).unwrap());
        let f = antiderivative(&integrand, 1.5, 0.0, 1e-10).unwrap();
        let v = f.eval(1.999).unwrap();
        assert!((v - 2.0 * ((1.999f64 + 3.0) / 4.5).ln()).abs() < 1e-10);
        // limit at the right end
        assert!((f.limit_hi() - 2.0 * (5.0f64 / 4.5).ln()).abs() < 1e-10);
    }

    #[test]
    fn antiderivative_polynomial_oracle() {
        let tol = 1e-10;
        let integrand = Arc::new(Fn1D::affine(iv(0.0, 3.0), 2.0, 0.0));
        let f = antiderivative(&integrand, 0.5, 2.5, tol).unwrap();
        for i in 1..60 {
            let x = 3.0 * i as f64 / 60.0;
            assert!((f.eval(x).unwrap() - (x * x + 2.25)).abs() <= tol);
        }
    }

    #[test]
    fn central_difference_converges_quadratically() {
        let integrand = Arc::new(Fn1D::closed_form(iv(0.0, 2.0), Expr::x().sin().exp()).unwrap());
        let f = antiderivative(&integrand, 1.0, 0.0, 1e-13).unwrap();
        let x = 0.8;
        let exact = integrand.eval(x).unwrap();
        let err = |h: f64| {
            ((f.eval(x + h).unwrap() - f.eval(x - h).unwrap()) / (2.0 * h) - exact).abs()
        };
        let (e3, e4) = (err(1e-3), err(1e-4));
        assert!(e3 < 1e-6, "{e3}");
        // O(h^2): a tenfold smaller step shrinks the error about a hundredfold
        assert!(e4 < e3 / 30.0, "{e3} {e4}");
        assert!(err(1e-5) < 1e-8);
    }

    #[test]
    fn serde_round_trip_rebuilds_antiderivative() {
        let integrand = Arc::new(Fn1D::closed_form(iv(1.0, 2.0), Expr::c(2.0) / (Expr::x() + 3.0)).unwrap());
        let f = antiderivative(&integrand, 1.5, 0.0, 1e-10).unwrap();
        let json = serde_json::to_string(&f).unwrap();
        let g: Fn1D = serde_json::from_str(&json).unwrap();
        for x in [1.1, 1.5, 1.9] {
            assert_eq!(f.eval(x).unwrap(), g.eval(x).unwrap());
        }
    }

    #[test]
    fn direction_detection() {
        let d = iv(0.0, 1.0);
        assert_eq!(Fn1D::identity(d).direction().unwrap(), Direction::Increasing);
        assert_eq!(Fn1D::affine(d, -2.0, 0.0).direction().unwrap(), Direction::Decreasing);
        // x^3 centred at 0.5 has a vanishing derivative but is strictly increasing
        let cube = Fn1D::closed_form(d, Expr::poly(vec![0.0, 0.0, 0.0, 1.0], Expr::x() - 0.5)).unwrap();
        assert_eq!(cube.direction().unwrap(), Direction::Increasing);
        let hump = Fn1D::quadratic(d, -1.0, 1.0, 0.0);
        assert!(matches!(hump.direction(), Err(Error::Monotonicity(_))));
    }

    #[test]
    fn tabulated_reproduces_linear_data() {
        let d = iv(0.0, 10.0);
        let xs: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.0 * x + 1.0).collect();
        let f = Fn1D::tabulated(d, xs, ys).unwrap();
        assert!((f.eval(4.25).unwrap() - 13.75).abs() < 1e-12);
        assert!((f.deriv(7.3).unwrap() - 3.0).abs() < 1e-12);
    }
}
