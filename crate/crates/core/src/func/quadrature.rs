//! Adaptive Gauss–Kronrod (7/15) quadrature with interval halving.

use crate::error::{Error, Result};

#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// Default cap on the number of subintervals.
pub const MAX_SUBDIVISIONS: usize = 4096;

/// Single 15-point Kronrod estimate and its difference from the embedded
/// 7-point Gauss rule.
pub fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]` (either orientation) to absolute accuracy
/// `tol`. Never evaluates `f` at `a` or `b`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let total = b - a;
    let mut stack = vec![(a, b)];
    let mut sum = 0.0;
    let mut used = 0usize;
    while let Some((lo, hi)) = stack.pop() {
        let (value, err) = gk15(f, lo, hi);
        if !value.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite integrand on [{lo}, {hi}]"
            )));
        }
        let local_tol = tol * (hi - lo) / total;
        let mid = 0.5 * (lo + hi);
        // The second clause stops once the subinterval cannot be split further.
        if err <= local_tol || mid <= lo || mid >= hi {
            sum += value;
            continue;
        }
        used += 1;
        if used > MAX_SUBDIVISIONS {
            return Err(Error::Numerical(format!(
                "quadrature on [{a}, {b}] did not reach tolerance {tol} within {MAX_SUBDIVISIONS} subdivisions"
            )));
        }
        stack.push((mid, hi));
        stack.push((lo, mid));
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let v = integrate(&|t: f64| 2.0 * t, 1.0, 2.0, 1e-12).unwrap();
        assert!((v - 3.0).abs() < 1e-14);
        let w = integrate(&|t: f64| 2.0 * t, 2.0, 1.0, 1e-12).unwrap();
        assert!((w + 3.0).abs() < 1e-14);
    }

    #[test]
    fn logarithm() {
        let v = integrate(&|t: f64| 2.0 / (t + 3.0), 1.5, 2.0, 1e-12).unwrap();
        let exact = 2.0 * (5.0f64 / 4.5).ln();
        assert!((v - exact).abs() < 1e-13);
    }

    #[test]
    fn endpoint_derivative_singularity() {
        let v = integrate(&|t: f64| t.sqrt(), 0.0, 1.0, 1e-10).unwrap();
        assert!((v - 2.0 / 3.0).abs() < 1e-10);
    }

    #[test]
    fn nan_integrand_fails() {
        assert!(integrate(&|_t: f64| f64::NAN, 0.0, 1.0, 1e-8).is_err());
    }
}
