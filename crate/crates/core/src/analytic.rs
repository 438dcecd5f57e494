//! Closed-form laws of the meeting local time, their Laplace transforms,
//! and residual checks of the generator and Kummer equations.

use alloc::vec::Vec;

use crate::config::{RegimeTag, SkewConfig};
use crate::error::{Error, Result};
use crate::math::{exp, ln, ln_1p, powf};
use crate::quad::{self, Tolerance};
use crate::rng::RngStream;
use crate::samplers;
use crate::special::{self, ln_beta, ln_gamma, reg_inc_beta};

/// PosPos laws are refused once `ξ⋆` is this close to 1.
pub const XI_STAR_MARGIN: f64 = 1e-6;

/// How the Beta variable maps to the physical quantity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LawTransform {
    /// `U⋆ = x / (β1 B)`.
    Reciprocal,
    /// `U⋆ = x B / β1`.
    Direct,
    /// `L = (x / |β1|) (1 / (B B') - 1)`, `B' ~ Beta(second_a, second_b)`
    /// independent of `B`.
    ProductReciprocal { second_a: f64, second_b: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LawDescriptor {
    pub beta_a: f64,
    pub beta_b: f64,
    pub transform: LawTransform,
    pub x: f64,
    /// `|β1|`.
    pub scale: f64,
}

fn law_of(cfg: &SkewConfig, op: &'static str) -> Result<LawDescriptor> {
    let regime = cfg.regime();
    let (x, b1, b2) = (cfg.x(), cfg.beta1(), cfg.beta2());
    match regime.tag {
        RegimeTag::PosPos => {
            let xi = cfg.constants().xi_star;
            if xi >= 1.0 - XI_STAR_MARGIN {
                return Err(Error::Domain {
                    op,
                    detail: alloc::format!(
                        "xi* = {xi} is not below 1: beta1 = {b1} does not exceed \
                         beta2 / (1 + 2 beta2) = {}",
                        b2 / (1.0 + 2.0 * b2)
                    ),
                });
            }
            Ok(LawDescriptor {
                beta_a: 1.0 - xi,
                beta_b: (1.0 - b1) / (2.0 * b1),
                transform: LawTransform::Reciprocal,
                x,
                scale: b1,
            })
        }
        RegimeTag::PosNeg => Ok(LawDescriptor {
            beta_a: (b2 - 1.0) / (2.0 * b2),
            beta_b: (1.0 - b1) / (2.0 * b1),
            transform: LawTransform::Direct,
            x,
            scale: b1,
        }),
        RegimeTag::NegNeg if regime.coalescence_condition => {
            let (a1, a2) = (b1.abs(), b2.abs());
            Ok(LawDescriptor {
                beta_a: 1.0 - 1.0 / (2.0 * a2) + 1.0 / (2.0 * a1),
                beta_b: (1.0 - a2) / (2.0 * a2),
                transform: LawTransform::ProductReciprocal {
                    second_a: samplers::initial_hit_exponent(a1),
                    second_b: 1.0,
                },
                x,
                scale: a1,
            })
        }
        RegimeTag::NegNeg => Err(Error::Regime {
            op,
            regime: regime.tag,
            reason: "coalescence condition |beta2| > |beta1| / (1 + 2|beta1|) fails",
        }),
        RegimeTag::NegPos => Err(Error::Regime {
            op,
            regime: regime.tag,
            reason: "the processes never meet: T* is infinite almost surely",
        }),
    }
}

impl LawDescriptor {
    pub fn for_config(cfg: &SkewConfig) -> Result<Self> {
        law_of(cfg, "law_descriptor")
    }

    /// The Beta (or Beta-product) variable corresponding to a value `v` of
    /// `U⋆` (or of `L` for two negative parameters).
    pub fn beta_variable(&self, v: f64) -> f64 {
        match self.transform {
            LawTransform::Reciprocal => self.x / (self.scale * v),
            LawTransform::Direct => self.scale * v / self.x,
            LawTransform::ProductReciprocal { .. } => 1.0 / (1.0 + self.scale * v / self.x),
        }
    }

    /// Inverse of [`Self::beta_variable`].
    pub fn physical(&self, b: f64) -> f64 {
        match self.transform {
            LawTransform::Reciprocal => self.x / (self.scale * b),
            LawTransform::Direct => self.x * b / self.scale,
            LawTransform::ProductReciprocal { .. } => self.x / self.scale * (1.0 / b - 1.0),
        }
    }

    /// Support of the physical variable.
    pub fn support(&self) -> (f64, f64) {
        match self.transform {
            LawTransform::Reciprocal => (self.x / self.scale, f64::INFINITY),
            LawTransform::Direct => (0.0, self.x / self.scale),
            LawTransform::ProductReciprocal { .. } => (0.0, f64::INFINITY),
        }
    }

    /// CDF of the Beta variable (or of the product `B B'`).
    pub fn beta_cdf(&self, p: f64) -> Result<f64> {
        match self.transform {
            LawTransform::ProductReciprocal { second_a, .. } => {
                product_cdf(self.beta_a, self.beta_b, second_a, p)
            }
            _ => Ok(reg_inc_beta(self.beta_a, self.beta_b, p.clamp(0.0, 1.0))),
        }
    }

    /// CDF of the physical variable.
    pub fn cdf(&self, v: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        if v <= lo {
            return Ok(0.0);
        }
        if v >= hi {
            return Ok(1.0);
        }
        let b = self.beta_variable(v);
        match self.transform {
            LawTransform::Direct => self.beta_cdf(b),
            // The map is decreasing.
            _ => Ok(1.0 - self.beta_cdf(b)?),
        }
    }

    /// Density of the physical variable (PosPos and PosNeg only).
    pub fn density(&self, v: f64) -> Result<f64> {
        let (lo, hi) = self.support();
        if v < lo || v > hi {
            return Ok(0.0);
        }
        let (a, b) = (self.beta_a, self.beta_b);
        match self.transform {
            LawTransform::Reciprocal => {
                let s = self.beta_variable(v);
                Ok(special::beta_pdf(a, b, s) * s / v)
            }
            LawTransform::Direct => {
                Ok(special::beta_pdf(a, b, self.beta_variable(v)) * self.scale / self.x)
            }
            LawTransform::ProductReciprocal { .. } => Err(Error::domain(
                "density",
                "the product law is only available through its CDF",
            )),
        }
    }

    /// Density at distance `d >= 0` inside the support from the drift
    /// horizon `x / |β1|`. Computing `1 - B` as a ratio of `d` keeps full
    /// relative accuracy right next to the endpoint.
    pub fn density_from_horizon(&self, d: f64) -> Result<f64> {
        let h = self.x / self.scale;
        let (a, b) = (self.beta_a, self.beta_b);
        let pdf = |s: f64, one_minus: f64| {
            if s <= 0.0 || one_minus <= 0.0 {
                0.0
            } else {
                exp((a - 1.0) * ln(s) + (b - 1.0) * ln(one_minus) - ln_beta(a, b))
            }
        };
        match self.transform {
            LawTransform::Reciprocal => {
                let u = h + d;
                Ok(pdf(h / u, d / u) * h / (u * u))
            }
            LawTransform::Direct => {
                if d > h {
                    return Ok(0.0);
                }
                Ok(pdf((h - d) / h, d / h) / h)
            }
            LawTransform::ProductReciprocal { .. } => Err(Error::domain(
                "density",
                "the product law is only available through its CDF",
            )),
        }
    }

    /// `E[V^k]` for the Beta variable or the Beta product; always finite.
    pub fn beta_moment(&self, k: u32) -> f64 {
        let kf = k as f64;
        let one = |a: f64, b: f64| exp(ln_beta(a + kf, b) - ln_beta(a, b));
        match self.transform {
            LawTransform::ProductReciprocal { second_a, second_b } => {
                one(self.beta_a, self.beta_b) * one(second_a, second_b)
            }
            _ => one(self.beta_a, self.beta_b),
        }
    }

    /// `E[U⋆^k]` for PosPos and PosNeg.
    pub fn u_star_moment(&self, k: u32) -> Result<f64> {
        let kf = k as f64;
        let (a, b) = (self.beta_a, self.beta_b);
        match self.transform {
            LawTransform::Direct => Ok(powf(self.x / self.scale, kf) * self.beta_moment(k)),
            LawTransform::Reciprocal => {
                if a <= kf {
                    return Err(Error::InfiniteMoment {
                        order: k,
                        reason: alloc::format!(
                            "U* has a power tail of index {a}; its moment of order {k} \
                             needs 1 - xi* > {k}"
                        ),
                    });
                }
                Ok(powf(self.x / self.scale, kf) * exp(ln_beta(a - kf, b) - ln_beta(a, b)))
            }
            LawTransform::ProductReciprocal { .. } => Err(Error::domain(
                "u_star_moment",
                "not defined for two negative parameters",
            )),
        }
    }

    /// Draw the physical variable directly from the Beta representation.
    pub fn sample(&self, rng: &mut RngStream) -> Result<f64> {
        let b = samplers::sample_beta(self.beta_a, self.beta_b, rng)?;
        let b = match self.transform {
            LawTransform::ProductReciprocal { second_a, second_b } => {
                b * samplers::sample_beta(second_a, second_b, rng)?
            }
            _ => b,
        };
        Ok(self.physical(b))
    }
}

/// `P(B B' <= p)` for `B ~ Beta(a, b)` and `B' ~ Beta(c, 1)`:
/// `I_p(a, b) + p^c E[B^(-c); B > p]`, the expectation taken in `d = 1 - s`
/// so the `(1-s)^(b-1)` end is handled as a power singularity.
fn product_cdf(a: f64, b: f64, c: f64, p: f64) -> Result<f64> {
    if p <= 0.0 {
        return Ok(0.0);
    }
    if p >= 1.0 {
        return Ok(1.0);
    }
    let below = reg_inc_beta(a, b, p);
    let alpha = a - c;
    let tail = quad::integrate_power_singular(
        |d| powf(1.0 - d, alpha - 1.0),
        b,
        1.0 - p,
        Tolerance::new(1e-15, 1e-12),
    )?;
    let upper = exp(c * ln(p) + ln(tail.value) - ln_beta(a, b));
    Ok((below + upper).min(1.0))
}

fn require_hitting_law(cfg: &SkewConfig, op: &'static str) -> Result<LawDescriptor> {
    let law = law_of(cfg, op)?;
    if matches!(law.transform, LawTransform::ProductReciprocal { .. }) {
        return Err(Error::Regime {
            op,
            regime: RegimeTag::NegNeg,
            reason: "U* law is given for beta1 > 0; use LawDescriptor for L",
        });
    }
    Ok(law)
}

/// Density of `U⋆` at `u`.
pub fn hitting_density(cfg: &SkewConfig, u: f64) -> Result<f64> {
    require_hitting_law(cfg, "hitting_density")?.density(u)
}

/// CDF of `U⋆` at `u`, through the regularized incomplete beta.
pub fn hitting_cdf(cfg: &SkewConfig, u: f64) -> Result<f64> {
    require_hitting_law(cfg, "hitting_cdf")?.cdf(u)
}

/// CDF of `U⋆` at `u` by adaptive quadrature of [`hitting_density`].
///
/// The density has an integrable power singularity at the drift horizon
/// `x / β1` with exponent `(1-β1)/(2β1) - 1`; it is removed by a power
/// substitution anchored there.
pub fn hitting_cdf_quadrature(cfg: &SkewConfig, u: f64) -> Result<f64> {
    let law = require_hitting_law(cfg, "hitting_cdf_quadrature")?;
    let (lo, hi) = law.support();
    if u <= lo {
        return Ok(0.0);
    }
    if u >= hi {
        return Ok(1.0);
    }
    // The density loses relative accuracy next to the horizon (1 - s
    // cancels), so ask for less than the incomplete-beta route delivers.
    let tol = Tolerance::new(1e-13, 1e-10);
    let horizon = cfg.drift_horizon();
    let p = law.beta_b;
    let dens = |v: f64| law.density(v).unwrap_or(0.0);
    let near = |d: f64| law.density_from_horizon(d).unwrap_or(0.0);
    match law.transform {
        LawTransform::Reciprocal => {
            let est = quad::integrate_power_singular(
                |d| if d == 0.0 { 0.0 } else { near(d) * powf(d, 1.0 - p) },
                p,
                u - horizon,
                tol,
            )?;
            Ok(est.value)
        }
        _ => {
            // Singular at both ends: t^(a-1) at 0 and the horizon side.
            let mid = 0.5 * horizon;
            let a = law.beta_a;
            let left = |lim: f64| {
                quad::integrate_power_singular(
                    |v| if v == 0.0 { 0.0 } else { dens(v) * powf(v, 1.0 - a) },
                    a,
                    lim,
                    tol,
                )
            };
            if u <= mid {
                return Ok(left(u)?.value);
            }
            let right = |from: f64| {
                quad::integrate_power_singular(
                    |d| if d == 0.0 { 0.0 } else { near(d) * powf(d, 1.0 - p) },
                    p,
                    horizon - from,
                    tol,
                )
            };
            // ∫_0^u = ∫_0^mid + (∫_u^H complement taken from the right end).
            let total_right = right(mid)?.value;
            let beyond = right(u)?.value;
            Ok(left(mid)?.value + total_right - beyond)
        }
    }
}

/// Tail of `ℓ` under the excursion measure, for excursions leaving from
/// level `h`: `(1-β1)/(2h) · (1 + β2 a / h)^(-(1+β2)/(2β2))`, with the cutoff
/// at `a = h / |β2|` when `β2 < 0`.
pub fn excursion_jump_law(cfg: &SkewConfig, h: f64, a: f64) -> f64 {
    (1.0 - cfg.beta1()) / (2.0 * h) * localtime_survival(h, cfg.beta2(), a)
}

/// `P(L > a) = (1 + β2 a / h)^(-(1+β2)/(2β2))`: local time at 0 of a skew
/// Brownian motion with parameter `β2` started at 0, accumulated before the
/// driving Brownian motion reaches `h`. Zero from `h / |β2|` on when `β2 < 0`.
pub fn localtime_survival(h: f64, beta2: f64, a: f64) -> f64 {
    if a <= 0.0 {
        return 1.0;
    }
    let r = beta2 * a / h;
    if r <= -1.0 {
        return 0.0;
    }
    exp(-(1.0 + beta2) / (2.0 * beta2) * ln_1p(r))
}

/// `e^(-λ x / β1)`, the upper bound of the PosPos Laplace transform.
pub fn laplace_upper_bound(cfg: &SkewConfig, lambda: f64) -> f64 {
    exp(-lambda * cfg.drift_horizon())
}

fn laplace_tol() -> Tolerance {
    Tolerance::new(1e-300, 1e-12)
}

/// Maximum number of doubling panels in the tail of the PosPos integral.
const MAX_PANELS: usize = 1000;
const TAIL_CUTOFF: f64 = 1e-14;

/// PosPos: `C ∫_1^∞ e^(-z t) (t-1)^(B-1) t^(1-γ) dt` with `z = λx/β1`,
/// `B = (1-β1)/(2β1)` and `C = Γ(γ-1) / (Γ(1-ξ⋆) Γ(B))`.
fn laplace_pospos(cfg: &SkewConfig, lambda: f64) -> Result<f64> {
    let k = cfg.constants();
    let bb = k.xi_star + k.gamma - 2.0;
    let z = lambda * cfg.drift_horizon();
    let ln_c = ln_gamma(k.gamma - 1.0) - ln_gamma(1.0 - k.xi_star) - ln_gamma(bb);
    let tol = laplace_tol();
    let g = |t: f64| {
        let e = -z * t + (1.0 - k.gamma) * ln(t) + ln_c;
        if e < -745.0 {
            0.0
        } else {
            exp(e)
        }
    };
    // [1, 2] with the (t-1)^(B-1) singularity removed.
    let head = quad::integrate_power_singular(|r| g(1.0 + r), bb, 1.0, tol)?;
    let mut sum = head.value;
    let mut lo = 2.0;
    for _ in 0..MAX_PANELS {
        let hi = 2.0 * lo;
        let panel = quad::integrate(|t| g(t) * powf(t - 1.0, bb - 1.0), lo, hi, tol)?;
        sum += panel.value;
        if panel.value.abs() <= TAIL_CUTOFF * sum.abs() {
            return Ok(sum);
        }
        lo = hi;
        if !lo.is_finite() {
            break;
        }
    }
    Err(Error::Quadrature {
        estimate: sum,
        error: f64::NAN,
        intervals: MAX_PANELS,
        evaluations: 0,
    })
}

/// PosNeg: `K ∫_0^1 e^(-z t) t^(1-γ) (1-t)^(B-1) dt` with
/// `K = Γ(ξ⋆) / (Γ(B) Γ(2-γ))`.
fn laplace_posneg(cfg: &SkewConfig, lambda: f64) -> Result<f64> {
    let k = cfg.constants();
    let bb = k.xi_star + k.gamma - 2.0;
    let aa = 2.0 - k.gamma;
    let z = lambda * cfg.drift_horizon();
    let ln_k = ln_gamma(k.xi_star) - ln_gamma(bb) - ln_gamma(aa);
    let tol = laplace_tol();
    let left = quad::integrate_power_singular(
        |t| exp(-z * t + (bb - 1.0) * ln_1p(-t) + ln_k),
        aa,
        0.5,
        tol,
    )?;
    let right = quad::integrate_power_singular(
        |s| exp(-z * (1.0 - s) + (aa - 1.0) * ln_1p(-s) + ln_k),
        bb,
        0.5,
        tol,
    )?;
    Ok(left.value + right.value)
}

/// NegNeg: `E[e^(-λL)] = e^(λx/|β1|) ∫ f_B'(b) u'(x/b) db` where `u'` is the
/// PosPos transform at `λ|β2|/|β1|` for the exchanged parameters.
fn laplace_negneg(cfg: &SkewConfig, lambda: f64) -> Result<f64> {
    let (x, a1, a2) = (cfg.x(), cfg.beta1().abs(), cfg.beta2().abs());
    let c = samplers::initial_hit_exponent(a1);
    let mu = lambda * a2 / a1;
    let mut failure = None;
    let est = quad::integrate(
        |b| {
            if b == 0.0 {
                return 0.0;
            }
            let ex = match SkewConfig::new(x / b, a2, a1) {
                Ok(e) => e,
                Err(e) => {
                    failure = Some(e);
                    return 0.0;
                }
            };
            // Skip where the weight times e^(-μ x/(b a2)) is negligible.
            if mu * x / (b * a2) - lambda * x / a1 > 745.0 {
                return 0.0;
            }
            match laplace_pospos(&ex, mu) {
                Ok(v) => c * powf(b, c - 1.0) * v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            }
        },
        0.0,
        1.0,
        Tolerance::new(1e-300, 1e-10),
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(exp(lambda * x / a1) * est.value)
}

/// `E_x[e^(-λ U⋆)]` (or `E[e^(-λ L)]` for two negative parameters).
pub fn laplace_u_star(cfg: &SkewConfig, lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::domain(
            "laplace_u_star",
            alloc::format!("lambda = {lambda} must be positive"),
        ));
    }
    let law = law_of(cfg, "laplace_u_star")?;
    match law.transform {
        LawTransform::Reciprocal => laplace_pospos(cfg, lambda),
        LawTransform::Direct => laplace_posneg(cfg, lambda),
        LawTransform::ProductReciprocal { .. } => laplace_negneg(cfg, lambda),
    }
}

/// Generator of the gap process applied to `f` at level `h` (β1 > 0).
///
/// PosPos: `-β1 f'(h) + (κ/h) ∫_0^∞ [f(h(1+s)) - f(h)] (1+s)^(-γ) ds`.
/// PosNeg: `-β1 f'(h) + (|κ|/h) ∫_0^1 [f(h(1-s)) - f(h)] (1-s)^(-γ) ds`,
/// integrated through `1 - s = w^(1/(1-γ))`, which turns the weight into
/// the constant `1/(1-γ)`.
pub fn generator<F: FnMut(f64) -> f64>(
    cfg: &SkewConfig,
    h: f64,
    mut f: F,
    derivative: f64,
) -> Result<f64> {
    if cfg.beta1() <= 0.0 {
        return Err(Error::Regime {
            op: "generator",
            regime: cfg.regime().tag,
            reason: "the jump generator is written for beta1 > 0",
        });
    }
    let k = cfg.constants();
    let fh = f(h);
    let tol = Tolerance::new(1e-15, 1e-11);
    let jump = if cfg.beta2() > 0.0 {
        let est = quad::integrate_to_infinity(
            |s| (f(h * (1.0 + s)) - fh) * powf(1.0 + s, -k.gamma),
            0.0,
            tol,
        )?;
        k.kappa / h * est.value
    } else {
        let q = 1.0 / (1.0 - k.gamma);
        let est = quad::integrate(|w| f(h * powf(w, q)) - fh, 0.0, 1.0, tol)?;
        k.kappa.abs() * q / h * est.value
    };
    Ok(-cfg.beta1() * derivative + jump)
}

/// One grid point of a residual check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualPoint {
    pub x: f64,
    pub residual: f64,
    /// Normaliser the tolerance is applied against.
    pub scale: f64,
}

impl ResidualPoint {
    pub fn relative(&self) -> f64 {
        (self.residual / self.scale).abs()
    }
}

pub const DYNKIN_TOLERANCE: f64 = 1e-4;
pub const ODE_TOLERANCE: f64 = 1e-3;

/// Central-difference step for first derivatives.
pub fn first_derivative_step(x: f64) -> f64 {
    (1e-4f64).max(1e-4 * x)
}

/// Central-difference step for second derivatives.
pub fn second_derivative_step(x: f64) -> f64 {
    1e-3 * x
}

fn check_grid(x: &[f64]) -> Result<()> {
    if let Some(bad) = x.iter().find(|v| !(**v > 0.0 && v.is_finite())) {
        return Err(Error::domain(
            "residual",
            alloc::format!("grid point {bad} must be positive"),
        ));
    }
    Ok(())
}

fn require_positive_drift(cfg: &SkewConfig, op: &'static str) -> Result<()> {
    let law = law_of(cfg, op)?;
    if matches!(law.transform, LawTransform::ProductReciprocal { .. }) {
        return Err(Error::Regime {
            op,
            regime: RegimeTag::NegNeg,
            reason: "the generator identity is checked for beta1 > 0",
        });
    }
    Ok(())
}

/// `A u_λ - λ u_λ` on the grid, scaled by `1 + |λ u_λ|`.
pub fn dynkin_residual(cfg: &SkewConfig, lambda: f64, grid: &[f64]) -> Result<Vec<ResidualPoint>> {
    require_positive_drift(cfg, "dynkin_residual")?;
    check_grid(grid)?;
    let u_at = |x: f64| -> Result<f64> { laplace_u_star(&cfg.with_x(x)?, lambda) };
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let d = first_derivative_step(x);
        let du = (u_at(x + d)? - u_at(x - d)?) / (2.0 * d);
        let u = u_at(x)?;
        let mut failure = None;
        let a = generator(
            cfg,
            x,
            |y| match u_at(y) {
                Ok(v) => v,
                Err(e) => {
                    failure = Some(e);
                    0.0
                }
            },
            du,
        )?;
        if let Some(e) = failure {
            return Err(e);
        }
        out.push(ResidualPoint {
            x,
            residual: a - lambda * u,
            scale: 1.0 + (lambda * u).abs(),
        });
    }
    Ok(out)
}

/// `β1 x u'' + (λx + β1 ξ⋆) u' - λ(γ-2) u` on the grid, scaled by the sum
/// of the absolute values of the three terms.
pub fn ode_residual(cfg: &SkewConfig, lambda: f64, grid: &[f64]) -> Result<Vec<ResidualPoint>> {
    require_positive_drift(cfg, "ode_residual")?;
    check_grid(grid)?;
    let k = cfg.constants();
    let b1 = cfg.beta1();
    let u_at = |x: f64| -> Result<f64> { laplace_u_star(&cfg.with_x(x)?, lambda) };
    let mut out = Vec::with_capacity(grid.len());
    for &x in grid {
        let u = u_at(x)?;
        let d1 = first_derivative_step(x);
        let du = (u_at(x + d1)? - u_at(x - d1)?) / (2.0 * d1);
        let d2 = second_derivative_step(x);
        let d2u = (u_at(x + d2)? - 2.0 * u + u_at(x - d2)?) / (d2 * d2);
        let terms = [
            b1 * x * d2u,
            (lambda * x + b1 * k.xi_star) * du,
            -lambda * (k.gamma - 2.0) * u,
        ];
        let scale: f64 = terms.iter().map(|t| t.abs()).sum();
        out.push(ResidualPoint {
            x,
            residual: terms.iter().sum(),
            scale: if scale > 0.0 { scale } else { 1.0 },
        });
    }
    Ok(out)
}

/// Evenly spaced grid of `n` points on `[a, b]`.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..n)
            .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}
