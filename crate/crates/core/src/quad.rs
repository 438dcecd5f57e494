//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the total
//! estimate meets the tolerance. Error estimates use the QUADPACK rescaling
//! of the Gauss/Kronrod difference. Integrable endpoint singularities are
//! handled by subdivision, but callers with a known algebraic singularity
//! `t^(p-1)` should substitute `t = w^(1/p)` first; it converges much faster.

use alloc::vec::Vec;

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
    0.0,
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

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5] and the centre.
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            abs: 1e-14,
            rel: 1e-12,
            max_intervals: 2000,
        }
    }
}

impl Tolerance {
    pub fn new(abs: f64, rel: f64) -> Self {
        Tolerance {
            abs,
            rel,
            ..Tolerance::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn rescale_error(err: f64, resabs: f64, resasc: f64) -> f64 {
    let mut e = err.abs();
    if resasc != 0.0 && e != 0.0 {
        let scale = libm::pow(200.0 * e / resasc, 1.5);
        e = if scale < 1.0 { resasc * scale } else { resasc };
    }
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        let floor = 50.0 * f64::EPSILON * resabs;
        if floor > e {
            e = floor;
        }
    }
    e
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> Result<Segment> {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut resabs = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(centre - dx);
        let f2 = f(centre + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() {
        return Err(Error::domain(
            "integrate",
            alloc::format!("non-finite integrand on [{a:e}, {b:e}]"),
        ));
    }
    let mean = res_k * 0.5;
    let mut resasc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half.abs();
    Ok(Segment {
        a,
        b,
        value: res_k * half,
        error: rescale_error((res_k - res_g) * half, resabs * scale, resasc * scale),
    })
}

/// Integrate `f` over the finite interval `[a, b]`.
pub fn integrate<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    b: f64,
    tol: Tolerance,
) -> Result<QuadEstimate> {
    if a == b {
        return Ok(QuadEstimate {
            value: 0.0,
            error: 0.0,
            intervals: 0,
            evaluations: 0,
        });
    }
    let mut evaluations = 15;
    let mut segments: Vec<Segment> = Vec::with_capacity(64);
    segments.push(gk15(&mut f, a, b)?);
    // Error of pieces too narrow to split further; they stay in the total.
    let mut frozen_error = 0.0;
    let mut frozen_value = 0.0;
    loop {
        let value: f64 = frozen_value + segments.iter().map(|s| s.value).sum::<f64>();
        let error: f64 = frozen_error + segments.iter().map(|s| s.error).sum::<f64>();
        let target = tol.abs.max(tol.rel * value.abs());
        let intervals = segments.len() + usize::from(frozen_error > 0.0);
        if error <= target {
            return Ok(QuadEstimate {
                value,
                error,
                intervals,
                evaluations,
            });
        }
        let (worst, _) = match segments
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
        {
            Some(w) => w,
            None => {
                return Err(Error::Quadrature {
                    estimate: value,
                    error,
                    intervals,
                    evaluations,
                })
            }
        };
        if segments.len() >= tol.max_intervals {
            return Err(Error::Quadrature {
                estimate: value,
                error,
                intervals,
                evaluations,
            });
        }
        let s = segments.swap_remove(worst);
        let mid = 0.5 * (s.a + s.b);
        if mid <= s.a.min(s.b) || mid >= s.a.max(s.b) {
            frozen_error += s.error;
            frozen_value += s.value;
            continue;
        }
        segments.push(gk15(&mut f, s.a, mid)?);
        segments.push(gk15(&mut f, mid, s.b)?);
        evaluations += 30;
    }
}

/// Integrate `f` over `[a, inf)` through `t = a + s / (1 - s)`.
pub fn integrate_to_infinity<F: FnMut(f64) -> f64>(
    mut f: F,
    a: f64,
    tol: Tolerance,
) -> Result<QuadEstimate> {
    integrate(
        |s| {
            let one_minus = 1.0 - s;
            let t = a + s / one_minus;
            let v = f(t);
            if v == 0.0 {
                0.0
            } else {
                v / (one_minus * one_minus)
            }
        },
        0.0,
        1.0,
        tol,
    )
}

/// `∫_0^c t^(p-1) g(t) dt` via `t = w^(1/p)`, which removes the algebraic
/// singularity at zero: the integral equals `(1/p) ∫_0^(c^p) g(w^(1/p)) dw`.
pub fn integrate_power_singular<G: FnMut(f64) -> f64>(
    mut g: G,
    p: f64,
    c: f64,
    tol: Tolerance,
) -> Result<QuadEstimate> {
    if p <= 0.0 {
        return Err(Error::domain(
            "integrate_power_singular",
            alloc::format!("exponent p = {p} must be positive"),
        ));
    }
    let upper = libm::pow(c, p);
    let inv = 1.0 / p;
    let mut est = integrate(|w| g(libm::pow(w, inv)), 0.0, upper, tol)?;
    est.value *= inv;
    est.error *= inv;
    Ok(est)
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = 2.0 * WGK[..7].iter().sum::<f64>() + WGK[7];
        let g: f64 = 2.0 * WG[..3].iter().sum::<f64>() + WG[3];
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn single_panel_is_exact_for_degree_21_and_below() {
        // Kronrod 15 integrates polynomials up to degree 22 exactly; odd
        // degrees vanish by symmetry so check the even ones.
        for d in (0..=22).step_by(2) {
            let mut f = |x: f64| libm::pow(x, d as f64);
            let s = gk15(&mut f, -1.0, 1.0).unwrap();
            assert!((s.value - 2.0 / (d as f64 + 1.0)).abs() < 1e-14, "degree {d}");
        }
    }

    #[test]
    fn smooth_integrals() {
        let r = integrate(libm::sin, 0.0, PI, Tolerance::default()).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
        let r = integrate(|x| libm::exp(-x * x), -10.0, 10.0, Tolerance::default()).unwrap();
        assert!((r.value - libm::sqrt(PI)).abs() < 1e-13);
    }

    #[test]
    fn reversed_interval_changes_sign() {
        let r = integrate(|x| x * x, 1.0, 0.0, Tolerance::default()).unwrap();
        assert!((r.value + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity_by_subdivision() {
        let r = integrate(|x| 1.0 / libm::sqrt(x), 0.0, 1.0, Tolerance::new(1e-10, 1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn power_substitution() {
        // ∫_0^1 t^(-0.7) e^t dt  = Σ 1/(k! (k + 0.3))
        let r = integrate_power_singular(libm::exp, 0.3, 1.0, Tolerance::default()).unwrap();
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 0..40 {
            if k > 0 {
                fact *= k as f64;
            }
            sum += 1.0 / (fact * (k as f64 + 0.3));
        }
        assert!((r.value - sum).abs() < 1e-12 * sum);
    }

    #[test]
    fn semi_infinite() {
        let r = integrate_to_infinity(|t| libm::exp(-t), 0.0, Tolerance::default()).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
        let r = integrate_to_infinity(|t| 1.0 / (1.0 + t * t), 0.0, Tolerance::default()).unwrap();
        assert!((r.value - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn reports_nonconvergence() {
        let tol = Tolerance {
            abs: 1e-15,
            rel: 1e-15,
            max_intervals: 4,
        };
        let err = integrate(|x| libm::sin(1.0 / x), 1e-6, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }

    #[test]
    fn rejects_non_finite_integrand() {
        let err = integrate(|_| f64::NAN, 0.0, 1.0, Tolerance::default()).unwrap_err();
        assert!(matches!(err, Error::Domain { .. }));
    }
}
