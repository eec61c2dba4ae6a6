//! Bisection-based inversion of strictly monotone functions.

use super::fn1d::{Direction, Fn1D};
use crate::error::{Error, Result};
use crate::geometry::OpenInterval;

const MAX_BISECTIONS: usize = 2000;

/// Bisection for a root of the increasing function `h` on `[lo, hi]`, where
/// `h(lo) <= 0 <= h(hi)`. Stops when `|h| <= tol` or the bracket cannot
/// shrink any further.
pub(crate) fn bisect_increasing<H: Fn(f64) -> f64>(h: H, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = h(mid);
        if tol > 0.0 && v.abs() <= tol {
            return mid;
        }
        if v < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let (vl, vh) = (h(lo).abs(), h(hi).abs());
    if vl <= vh {
        lo
    } else {
        hi
    }
}

/// Inverse without range errors: `None` when `y` lies outside the closed
/// image, otherwise a point of the closed domain.
pub(crate) fn invert_raw(f: &Fn1D, y: f64, tol: f64) -> Option<f64> {
    let dir = f.direction().ok()?;
    let dom = f.domain();
    let s = if dir == Direction::Increasing { 1.0 } else { -1.0 };
    let (vlo, vhi) = (s * f.limit_lo(), s * f.limit_hi());
    let target = s * y;
    if !(target >= vlo && target <= vhi) {
        return None;
    }
    if target == vlo {
        return Some(dom.lo());
    }
    if target == vhi {
        return Some(dom.hi());
    }
    Some(bisect_increasing(|x| s * f.value_or_limit(x) - target, dom.lo(), dom.hi(), tol))
}

/// `x` with `|f(x) - y| <= tol` for a strictly monotone `f`.
pub fn monotone_inverse(f: &Fn1D, y: f64, tol: f64) -> Result<f64> {
    f.direction()?;
    let img = f.image();
    if !(y > img.lo() && y < img.hi()) {
        return Err(Error::Range { y, lo: img.lo(), hi: img.hi() });
    }
    invert_raw(f, y, tol).ok_or(Error::Range { y, lo: img.lo(), hi: img.hi() })
}

/// Preimage of the open interval `target` under the monotone `f`, restricted
/// to `within` (a subinterval of `f`'s domain). `None` when empty up to the
/// geometry slack.
pub fn preimage(f: &Fn1D, target: OpenInterval, within: OpenInterval) -> Result<Option<OpenInterval>> {
    let img = f.image_of(within)?;
    let Some(hit) = img.intersect(&target) else {
        return Ok(None);
    };
    let dir = f.direction()?;
    // Restrict f to `within` before inverting so the bracket stays inside it.
    let s = if dir == Direction::Increasing { 1.0 } else { -1.0 };
    let solve = |y: f64| {
        let h = |x: f64| s * f.value_or_limit(x) - s * y;
        if h(within.lo()) >= 0.0 {
            within.lo()
        } else if h(within.hi()) <= 0.0 {
            within.hi()
        } else {
            bisect_increasing(h, within.lo(), within.hi(), 0.0)
        }
    };
    let (a, b) = (solve(hit.lo()), solve(hit.hi()));
    Ok(OpenInterval::new(a.min(b), a.max(b)).ok().and_then(|i| i.intersect(&within)))
}

/// Image of the diagonal `t ↦ g1(t) + g2(t)` over the common domain, which
/// equals the sumset `g1(I) + g2(I)` for same-sense monotone functions.
pub fn diagonal_image(g1: &Fn1D, g2: &Fn1D) -> Result<OpenInterval> {
    same_sense(g1, g2)?;
    let a = g1.limit_lo() + g2.limit_lo();
    let b = g1.limit_hi() + g2.limit_hi();
    OpenInterval::new(a.min(b), a.max(b))
}

fn same_sense(g1: &Fn1D, g2: &Fn1D) -> Result<Direction> {
    if g1.domain() != g2.domain() {
        return Err(Error::Spec("g1 and g2 must share a domain".into()));
    }
    let (d1, d2) = (g1.direction()?, g2.direction()?);
    if d1 != d2 {
        return Err(Error::Monotonicity("g1 and g2 are monotone in opposite senses".into()));
    }
    Ok(d1)
}

/// Root of `g1(t) + g2(t) = u` on the closed domain, endpoints allowed.
pub(crate) fn diagonal_root(g1: &Fn1D, g2: &Fn1D, u: f64, tol: f64) -> Result<f64> {
    let dir = same_sense(g1, g2)?;
    let s = if dir == Direction::Increasing { 1.0 } else { -1.0 };
    let dom = g1.domain();
    let h = |t: f64| s * (g1.value_or_limit(t) + g2.value_or_limit(t) - u);
    let (hl, hh) = (h(dom.lo()), h(dom.hi()));
    if hl > 0.0 || hh < 0.0 {
        let img = diagonal_image(g1, g2)?;
        return Err(Error::Range { y: u, lo: img.lo(), hi: img.hi() });
    }
    if hl == 0.0 {
        return Ok(dom.lo());
    }
    if hh == 0.0 {
        return Ok(dom.hi());
    }
    Ok(bisect_increasing(h, dom.lo(), dom.hi(), tol))
}

/// `t` with `|g1(t) + g2(t) - u| <= tol`, for `u` strictly inside the sumset.
/// Roots falling in the margin band are clamped to the evaluation window.
pub fn diagonal_solve(g1: &Fn1D, g2: &Fn1D, u: f64, tol: f64) -> Result<f64> {
    let img = diagonal_image(g1, g2)?;
    if !(u > img.lo() && u < img.hi()) {
        return Err(Error::Range { y: u, lo: img.lo(), hi: img.hi() });
    }
    let t = diagonal_root(g1, g2, u, tol)?;
    let (lo, hi) = g1.window();
    Ok(t.clamp(lo, hi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::func::Expr;

    fn iv(lo: f64, hi: f64) -> OpenInterval {
        OpenInterval::new(lo, hi).unwrap()
    }

    #[test]
    fn quadratic_inverse() {
        let f = Fn1D::quadratic(iv(2.0, 4.0), 0.25, 0.0, 1.0);
        let x = monotone_inverse(&f, 3.25, 1e-13).unwrap();
        assert!((x - 3.0).abs() < 1e-12);
    }

    #[test]
    fn identity_inverse() {
        let f = Fn1D::identity(iv(0.0, 4.0));
        let x = monotone_inverse(&f, 1.2345, 1e-14).unwrap();
        assert!((x - 1.2345).abs() < 1e-13);
    }

    #[test]
    fn log_round_trip() {
        let f = Fn1D::closed_form(iv(1.0, 2.0), 2.0 * (Expr::x() + 3.0).ln()).unwrap();
        let y = f.eval(1.8).unwrap();
        let x = monotone_inverse(&f, y, 1e-12).unwrap();
        assert!((x - 1.8).abs() < 1e-11);
    }

    #[test]
    fn decreasing_inverse() {
        let f = Fn1D::affine(iv(0.0, 1.0), -2.0, 1.0);
        let x = monotone_inverse(&f, 0.5, 1e-14).unwrap();
        assert!((x - 0.25).abs() < 1e-13);
    }

    #[test]
    fn range_errors() {
        let f = Fn1D::identity(iv(0.0, 4.0));
        assert!(matches!(monotone_inverse(&f, 5.0, 1e-12), Err(Error::Range { .. })));
        let hump = Fn1D::quadratic(iv(0.0, 1.0), -1.0, 1.0, 0.0);
        assert!(matches!(monotone_inverse(&hump, 0.1, 1e-12), Err(Error::Monotonicity(_))));
    }

    #[test]
    fn diagonal_solve_example_gs() {
        let d = iv(0.0, 4.0);
        let g = Fn1D::piecewise(
            d,
            vec![2.0],
            vec![
                crate::func::Body::Affine { slope: 1.0, intercept: 0.0 },
                crate::func::Body::Quadratic { a2: 0.25, a1: 0.0, a0: 1.0 },
            ],
        )
        .unwrap();
        let t = diagonal_solve(&g, &g, 4.25, 1e-14).unwrap();
        assert!((t - 4.5f64.sqrt()).abs() < 1e-12);
        let id = Fn1D::identity(d);
        assert!((diagonal_solve(&id, &id, 3.0, 1e-14).unwrap() - 1.5).abs() < 1e-13);
        assert!(matches!(diagonal_solve(&id, &id, 0.0, 1e-14), Err(Error::Range { .. })));
        assert!(matches!(diagonal_solve(&id, &id, 8.5, 1e-14), Err(Error::Range { .. })));
        // roots inside the margin band come back clamped to the window
        let t = diagonal_solve(&id, &id, 1e-9, 1e-14).unwrap();
        assert_eq!(t, id.window().0);
    }

    #[test]
    fn opposite_senses_rejected() {
        let d = iv(0.0, 1.0);
        let up = Fn1D::identity(d);
        let down = Fn1D::affine(d, -1.0, 0.0);
        assert!(matches!(diagonal_solve(&up, &down, 0.0, 1e-12), Err(Error::Monotonicity(_))));
    }
}
