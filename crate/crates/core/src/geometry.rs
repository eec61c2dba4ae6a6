//! Open intervals and the set constructions built from them: sumsets, side
//! sets, reflections, restricted preimages and extensions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::func::{preimage, Direction, Fn1D};

/// Absolute slack for endpoint comparisons. Intervals shorter than this are
/// treated as empty.
pub const SLACK: f64 = 1e-12;

/// A nonempty open interval `]lo, hi[` with finite endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct OpenInterval {
    lo: f64,
    hi: f64,
}

impl TryFrom<[f64; 2]> for OpenInterval {
    type Error = Error;
    fn try_from(v: [f64; 2]) -> Result<Self> {
        OpenInterval::new(v[0], v[1])
    }
}

impl From<OpenInterval> for [f64; 2] {
    fn from(i: OpenInterval) -> Self {
        [i.lo, i.hi]
    }
}

impl std::fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "]{}, {}[", self.lo, self.hi)
    }
}

impl OpenInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_finite() && hi.is_finite() && lo < hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::InvalidInterval { lo, hi })
        }
    }

    pub(crate) fn new_unchecked(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn mid(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn contains(&self, x: f64) -> bool {
        x > self.lo && x < self.hi
    }

    /// `other ⊆ self` up to [`SLACK`].
    pub fn contains_interval(&self, other: &OpenInterval) -> bool {
        other.lo >= self.lo - SLACK && other.hi <= self.hi + SLACK
    }

    /// `other ⊊ self`: contained, and at least one endpoint differs by more
    /// than [`SLACK`].
    pub fn strictly_contains(&self, other: &OpenInterval) -> bool {
        self.contains_interval(other) && (other.lo > self.lo + SLACK || other.hi < self.hi - SLACK)
    }

    /// Endpoint-wise equality within `tol`.
    pub fn approx_eq(&self, other: &OpenInterval, tol: f64) -> bool {
        (self.lo - other.lo).abs() <= tol && (self.hi - other.hi).abs() <= tol
    }

    pub fn intersect(&self, other: &OpenInterval) -> Option<OpenInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (hi - lo > SLACK).then_some(OpenInterval { lo, hi })
    }

    /// Minkowski sum `self + other`.
    pub fn sum(&self, other: &OpenInterval) -> OpenInterval {
        OpenInterval { lo: self.lo + other.lo, hi: self.hi + other.hi }
    }

    /// Minkowski difference `self - other = {a - b}`.
    pub fn minus(&self, other: &OpenInterval) -> OpenInterval {
        OpenInterval { lo: self.lo - other.hi, hi: self.hi - other.lo }
    }

    pub fn shift(&self, d: f64) -> OpenInterval {
        OpenInterval { lo: self.lo + d, hi: self.hi + d }
    }

    pub fn scale(&self, s: f64) -> Result<OpenInterval> {
        let (a, b) = (self.lo * s, self.hi * s);
        OpenInterval::new(a.min(b), a.max(b))
    }

    /// The arithmetic mean set `½(self + other)`.
    pub fn mean_with(&self, other: &OpenInterval) -> OpenInterval {
        OpenInterval { lo: 0.5 * (self.lo + other.lo), hi: 0.5 * (self.hi + other.hi) }
    }

    /// `n` points over `[lo + margin, hi - margin]`, placed symmetrically about
    /// the midpoint (so odd `n` hits the midpoint exactly), with both ends
    /// exact.
    pub fn grid(&self, n: usize, margin: f64) -> Vec<f64> {
        let (a, b) = (self.lo + margin, self.hi - margin);
        if n == 1 {
            return vec![self.mid()];
        }
        let mid = 0.5 * (a + b);
        let step = (b - a) / (n - 1) as f64;
        let c = 0.5 * (n - 1) as f64;
        let mut g: Vec<f64> = (0..n).map(|i| mid + (i as f64 - c) * step).collect();
        (g[0], g[n - 1]) = (a, b);
        g
    }
}

/// Extension, reflection, their intersection and the two side sets of a
/// subinterval `H` of `I`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntervalSetReport {
    pub h: OpenInterval,
    pub sumset: OpenInterval,
    pub ext: Option<OpenInterval>,
    #[serde(rename = "ref")]
    pub reflection: Option<OpenInterval>,
    pub star: Option<OpenInterval>,
    pub side_minus: Option<OpenInterval>,
    pub side_plus: Option<OpenInterval>,
}

fn require_subset(h: &OpenInterval, i: &OpenInterval) -> Result<()> {
    if i.contains_interval(h) {
        Ok(())
    } else {
        Err(Error::NotContained { inner_lo: h.lo, inner_hi: h.hi, outer_lo: i.lo, outer_hi: i.hi })
    }
}

fn same_sense(g1: &Fn1D, g2: &Fn1D) -> Result<Direction> {
    let (d1, d2) = (g1.direction()?, g2.direction()?);
    if d1 != d2 {
        return Err(Error::Monotonicity(
            "g1 and g2 must be strictly monotone in the same sense".into(),
        ));
    }
    Ok(d1)
}

/// `g1(J1) + g2(J2)` from one-sided endpoint limits.
pub fn sumset_image(g1: &Fn1D, g2: &Fn1D, j1: OpenInterval, j2: OpenInterval) -> Result<OpenInterval> {
    Ok(g1.image_of(j1)?.sum(&g2.image_of(j2)?))
}

/// `(H⁻, H⁺)`: the parts of `I` strictly below and strictly above `H`.
pub fn side_sets(h: OpenInterval, i: OpenInterval) -> Result<(Option<OpenInterval>, Option<OpenInterval>)> {
    require_subset(&h, &i)?;
    let minus = OpenInterval::new(i.lo, h.lo).ok().filter(|s| s.len() > SLACK);
    let plus = OpenInterval::new(h.hi, i.hi).ok().filter(|s| s.len() > SLACK);
    Ok((minus, plus))
}

/// `(2H - H) ∩ I`.
pub fn h_ref(h: OpenInterval, i: OpenInterval) -> Result<OpenInterval> {
    require_subset(&h, &i)?;
    let reflected = OpenInterval { lo: 2.0 * h.lo - h.hi, hi: 2.0 * h.hi - h.lo };
    Ok(reflected.intersect(&i).expect("the reflection contains H"))
}

/// Restricted preimage `g_{3-k}⁻¹(g1(H) + g2(H) - g_k(x)) ∩ H`.
pub fn h_k(h: OpenInterval, x: f64, k: u8, g1: &Fn1D, g2: &Fn1D, i: OpenInterval) -> Result<Option<OpenInterval>> {
    require_subset(&h, &i)?;
    if !(x >= i.lo && x <= i.hi) {
        return Err(Error::Domain { x, lo: i.lo, hi: i.hi });
    }
    same_sense(g1, g2)?;
    let (gk, other) = match k {
        1 => (g1, g2),
        2 => (g2, g1),
        _ => return Err(Error::Spec(format!("k must be 1 or 2, got {k}"))),
    };
    let s = sumset_image(g1, g2, h, h)?;
    let target = s.shift(-gk.value_or_limit(x));
    preimage(other, target, h)
}

/// `{x ∈ I : H₁(x) ≠ ∅ and H₂(x) ≠ ∅}`, computed as
/// `g1⁻¹((S - g2(H)) ∩ g1(I)) ∩ g2⁻¹((S - g1(H)) ∩ g2(I))` with
/// `S = g1(H) + g2(H)`.
pub fn h_ext(h: OpenInterval, g1: &Fn1D, g2: &Fn1D, i: OpenInterval) -> Result<OpenInterval> {
    require_subset(&h, &i)?;
    same_sense(g1, g2)?;
    let (img1, img2) = (g1.image_of(h)?, g2.image_of(h)?);
    let s = img1.sum(&img2);
    let first = preimage(g1, s.minus(&img2), i)?;
    let second = preimage(g2, s.minus(&img1), i)?;
    let ext = match (first, second) {
        (Some(a), Some(b)) => a.intersect(&b),
        _ => None,
    };
    // H always lies inside; the hull guards against inversion round-off.
    let ext = ext.ok_or_else(|| Error::Numerical("extension came out empty".into()))?;
    Ok(OpenInterval { lo: ext.lo.min(h.lo), hi: ext.hi.max(h.hi) })
}

/// `U* = U_ext ∩ U_ref`.
pub fn u_star(u: OpenInterval, g1: &Fn1D, g2: &Fn1D, i: OpenInterval) -> Result<OpenInterval> {
    let ext = h_ext(u, g1, g2, i)?;
    let reflection = h_ref(u, i)?;
    Ok(ext.intersect(&reflection).expect("both sets contain U"))
}

/// Every set construction for `H` at once.
pub fn interval_report(h: OpenInterval, g1: &Fn1D, g2: &Fn1D, i: OpenInterval) -> Result<IntervalSetReport> {
    let ext = h_ext(h, g1, g2, i)?;
    let reflection = h_ref(h, i)?;
    let (side_minus, side_plus) = side_sets(h, i)?;
    Ok(IntervalSetReport {
        h,
        sumset: sumset_image(g1, g2, i, i)?,
        ext: Some(ext),
        reflection: Some(reflection),
        star: ext.intersect(&reflection),
        side_minus,
        side_plus,
    })
}

/// Outcome of one assertion of the extension lemmas.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaCheck {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

fn covers(outer: Option<OpenInterval>, inner: OpenInterval, slack: f64) -> bool {
    outer.is_some_and(|o| o.lo <= inner.lo + slack && o.hi >= inner.hi - slack)
}

fn show(h: Option<OpenInterval>) -> String {
    h.map_or_else(|| "∅".to_string(), |h| h.to_string())
}

/// Checks the properties of `H_k(x)`, `H_ext`, `H_ref` and the side sets
/// for one instance, with endpoint slack `slack`:
///
/// 1. `H ⊆ H_k(a)` and `H ⊆ H_k(b)` for the endpoints `a, b` of `H` in `I`;
/// 2. some `x < a` (and some `x > b`) has `H_k(x) ≠ ∅`;
/// 3. `H_k(x) ⊆ H_k(u)` for `u` between such an `x` and `H`;
/// 4. `a < inf H_k(x)`, `sup H_k(x) = b` for `x < a`, and the mirror for `x > b`;
///
/// plus `H⁻ + H⁺ ⊆ H + I` and the strict inclusions `H ⊊ H_ext`, `H ⊊ H_ref`
/// on every side where `H` stops short of `I`.
pub fn lemma_checks(h: OpenInterval, g1: &Fn1D, g2: &Fn1D, i: OpenInterval, slack: f64) -> Result<Vec<LemmaCheck>> {
    require_subset(&h, &i)?;
    same_sense(g1, g2)?;
    let mut out = Vec::new();
    let mut push = |name: String, pass: bool, detail: String| out.push(LemmaCheck { name, pass, detail });
    let (a, b) = (h.lo, h.hi);
    let (has_a, has_b) = (a > i.lo + SLACK, b < i.hi - SLACK);

    for k in [1u8, 2] {
        for (lower, end, has) in [(true, a, has_a), (false, b, has_b)] {
            if !has {
                continue;
            }
            let side = if lower { "a" } else { "b" };
            let at_end = h_k(h, end, k, g1, g2, i)?;
            push(format!("L6.1 H ⊆ H_{k}({side})"), covers(at_end, h, slack), show(at_end));

            // Walk toward the end of I on this side; the first nonempty H_k(x)
            // witnesses (2), and the points beyond it feed (4).
            let outer = if lower { i.lo } else { i.hi };
            let mut witness = None;
            let mut probes = Vec::new();
            for m in 1..=40 {
                let x = end + (outer - end) * 0.5_f64.powi(m);
                if x == end {
                    break;
                }
                let hx = h_k(h, x, k, g1, g2, i)?;
                probes.push((x, hx));
                if let (None, Some(hx)) = (witness, hx) {
                    witness = Some((x, hx));
                }
            }
            for m in 1..=8 {
                let x = end + (outer - end) * (m as f64 / 9.0);
                probes.push((x, h_k(h, x, k, g1, g2, i)?));
            }
            let beyond = if lower { "x < a" } else { "x > b" };
            push(
                format!("L6.2 ∃ {beyond} with H_{k}(x) ≠ ∅"),
                witness.is_some(),
                witness.map_or_else(|| "none found".into(), |(x, hx)| format!("x = {x}, H_{k}(x) = {hx}")),
            );

            if let Some((x, hx)) = witness {
                let mut ok = true;
                let mut detail = format!("x = {x}");
                for m in 0..=8 {
                    let u = x + (end - x) * (m as f64 / 8.0);
                    let hu = h_k(h, u, k, g1, g2, i)?;
                    if !covers(hu, hx, slack) {
                        ok = false;
                        detail = format!("H_{k}({x}) = {hx} ⊄ H_{k}({u}) = {}", show(hu));
                        break;
                    }
                }
                push(format!("L6.3 H_{k}(x) ⊆ H_{k}(u) for u between {beyond} and H"), ok, detail);
            }

            let mut ok = true;
            let mut detail = format!("{} probes", probes.len());
            for (x, hx) in &probes {
                let good = match hx {
                    None => true,
                    Some(s) if lower => s.lo > a - slack && (s.hi - b).abs() <= slack,
                    Some(s) => s.hi < b + slack && (s.lo - a).abs() <= slack,
                };
                if !good {
                    ok = false;
                    detail = format!("x = {x}: H_{k}(x) = {}", show(*hx));
                    break;
                }
            }
            push(format!("L6.4 endpoints of H_{k}(x) for {beyond}"), ok, detail);
        }
    }

    let (minus, plus) = side_sets(h, i)?;
    if let (Some(m), Some(p)) = (minus, plus) {
        let (lhs, rhs) = (m.sum(&p), h.sum(&i));
        push(
            "H⁻ + H⁺ ⊆ H + I".into(),
            lhs.lo >= rhs.lo - slack && lhs.hi <= rhs.hi + slack,
            format!("{lhs} vs {rhs}"),
        );
    }
    let ext = h_ext(h, g1, g2, i)?;
    let reflection = h_ref(h, i)?;
    for (name, set) in [("H_ext", ext), ("H_ref", reflection)] {
        if !(has_a || has_b) {
            break;
        }
        let strict_lo = !has_a || set.lo < a - SLACK;
        let strict_hi = !has_b || set.hi > b + SLACK;
        push(
            format!("H ⊊ {name}"),
            covers(Some(set), h, slack) && strict_lo && strict_hi,
            format!("{name} = {set}, H = {h}"),
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Body;

    fn iv(lo: f64, hi: f64) -> OpenInterval {
        OpenInterval::new(lo, hi).unwrap()
    }

    fn example_g() -> Fn1D {
        Fn1D::piecewise(
            iv(0.0, 4.0),
            vec![2.0],
            vec![Body::Affine { slope: 1.0, intercept: 0.0 }, Body::Quadratic { a2: 0.25, a1: 0.0, a0: 1.0 }],
        )
        .unwrap()
    }

    #[test]
    fn invalid_intervals() {
        assert!(OpenInterval::new(1.0, 1.0).is_err());
        assert!(OpenInterval::new(2.0, 1.0).is_err());
        assert!(OpenInterval::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn sumset_examples() {
        let id = Fn1D::identity(iv(1.0, 2.0));
        assert!(sumset_image(&id, &id, iv(1.0, 2.0), iv(1.0, 2.0)).unwrap().approx_eq(&iv(2.0, 4.0), 0.0));

        let g1 = Fn1D::identity(iv(0.0, 4.0));
        let g2 = Fn1D::quadratic(iv(2.0, 4.0), 0.25, 0.0, 1.0);
        let s = sumset_image(&g1, &g2, iv(2.0, 4.0), iv(2.0, 4.0)).unwrap();
        assert!(s.approx_eq(&iv(4.0, 9.0), SLACK));

        let g = example_g();
        let s = sumset_image(&g, &g, iv(0.0, 4.0), iv(0.0, 4.0)).unwrap();
        assert!(s.approx_eq(&iv(0.0, 10.0), SLACK));
    }

    #[test]
    fn non_monotone_sumset_rejected() {
        let d = iv(0.0, 1.0);
        let hump = Fn1D::quadratic(d, -1.0, 1.0, 0.0);
        let id = Fn1D::identity(d);
        assert!(matches!(sumset_image(&hump, &id, d, d), Err(Error::Monotonicity(_))));
    }

    #[test]
    fn side_set_examples() {
        let i = iv(0.0, 4.0);
        assert_eq!(side_sets(iv(1.0, 2.0), i).unwrap(), (Some(iv(0.0, 1.0)), Some(iv(2.0, 4.0))));
        assert_eq!(side_sets(i, i).unwrap(), (None, None));
        assert_eq!(side_sets(iv(0.0, 2.0), i).unwrap(), (None, Some(iv(2.0, 4.0))));
        assert!(side_sets(iv(3.0, 5.0), i).is_err());
    }

    #[test]
    fn reflection_examples() {
        let i = iv(0.0, 4.0);
        assert_eq!(h_ref(iv(1.0, 2.0), i).unwrap(), iv(0.0, 3.0));
        assert_eq!(h_ref(i, i).unwrap(), i);
        assert_eq!(h_ref(iv(3.0, 4.0), i).unwrap(), iv(2.0, 4.0));
    }

    #[test]
    fn restricted_preimage_examples() {
        let i = iv(0.0, 4.0);
        let id = Fn1D::identity(i);
        let h = iv(1.0, 2.0);
        let r = h_k(h, 0.5, 1, &id, &id, i).unwrap().unwrap();
        assert!(r.approx_eq(&iv(1.5, 2.0), 1e-14));
        assert_eq!(h_k(h, 1.3, 1, &id, &id, i).unwrap().unwrap(), h);
        assert_eq!(h_k(h, 1.3, 2, &id, &id, i).unwrap().unwrap(), h);
        assert!(h_k(h, 3.5, 1, &id, &id, i).unwrap().is_none());
    }

    #[test]
    fn extension_examples() {
        let i = iv(0.0, 4.0);
        let id = Fn1D::identity(i);
        assert!(h_ext(iv(1.0, 2.0), &id, &id, i).unwrap().approx_eq(&iv(0.0, 3.0), 1e-14));
        assert_eq!(h_ext(i, &id, &id, i).unwrap(), i);
        assert!(i.strictly_contains(&iv(1.0, 2.0)));
        assert!(h_ext(iv(1.0, 2.0), &id, &id, i).unwrap().strictly_contains(&iv(1.0, 2.0)));
    }

    #[test]
    fn opposite_senses_rejected() {
        let i = iv(0.0, 1.0);
        let up = Fn1D::identity(i);
        let down = Fn1D::affine(i, -1.0, 0.0);
        assert!(matches!(h_ext(iv(0.2, 0.4), &up, &down, i), Err(Error::Monotonicity(_))));
        assert!(matches!(h_k(iv(0.2, 0.4), 0.1, 1, &up, &down, i), Err(Error::Monotonicity(_))));
    }

    #[test]
    fn grid_is_symmetric() {
        let g = iv(0.0, 4.0).grid(9, 1e-3);
        assert_eq!(g[4], 2.0);
        assert!((g[0] - 1e-3).abs() < 1e-15);
        assert!((g[8] - (4.0 - 1e-3)).abs() < 1e-15);
    }

    #[test]
    fn lemma_checks_on_the_example() {
        let g = example_g();
        for h in [iv(1.0, 2.0), iv(2.5, 3.5), iv(0.0, 1.0), iv(0.0, 4.0)] {
            let checks = lemma_checks(h, &g, &g, iv(0.0, 4.0), 1e-9).unwrap();
            assert!(checks.iter().all(|c| c.pass), "{h}: {checks:#?}");
        }
        let dec = Fn1D::affine(iv(0.0, 4.0), -2.0, 1.0);
        let checks = lemma_checks(iv(1.0, 3.0), &dec, &dec, iv(0.0, 4.0), 1e-9).unwrap();
        assert!(checks.len() > 10 && checks.iter().all(|c| c.pass), "{checks:#?}");
    }
}
