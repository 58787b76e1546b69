//! Exact reference solutions: the circular hole, the elliptical hole, and
//! the boundary stress trace for the hole formed by two overlapping circles.

use crate::error::{Error, Result};
use crate::quadrature::{legendre_rule, map_rule, QuadratureRule};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Exact decaying Goursat function on the unit circle under uniaxial tension
/// (chi = 0): phi(z) = 1/(2z), parameterized by the polar angle.
pub fn circle_phi(theta: f64) -> Complex64 {
    Complex64::from_polar(0.5, -theta)
}

/// Exact decaying Goursat function on the ellipse with semi-axes 1 + m and
/// 1 - m under uniaxial tension (chi = 0): phi = ((1 - m)/2) zeta, with zeta
/// the unit-disk preimage of the boundary point under z = 1/zeta + m zeta.
///
/// At m -> 0 this reduces to the circle's 1/(2z); the constant differs from
/// the published form, which does not decay at infinity.
pub fn ellipse_phi(theta: f64, m: f64) -> Result<Complex64> {
    if !(m > 0.0 && m < 1.0) {
        return Err(Error::Domain(format!(
            "ellipse parameter m must lie in (0, 1), got {m}"
        )));
    }
    let e2 = 1.0 - (1.0 - m) * (1.0 - m) / ((1.0 + m) * (1.0 + m));
    let r = (1.0 - m) / (1.0 - e2 * theta.cos().powi(2)).sqrt();
    let cos_b = (r * theta.cos() / (1.0 + m)).clamp(-1.0, 1.0);
    let sin_b = (-r * theta.sin() / (1.0 - m)).clamp(-1.0, 1.0);
    let norm = (cos_b * cos_b + sin_b * sin_b).sqrt();
    Ok(Complex64::new(cos_b / norm, sin_b / norm) * (0.5 * (1.0 - m)))
}

/// Parameters of the exact overlapping-circles trace: overlap angle alpha,
/// far-field tensions N1 (along x) and N2 (along y), and the constant K.
#[derive(Debug, Clone, Copy)]
pub struct LingParams {
    pub alpha: f64,
    pub n1: f64,
    pub n2: f64,
    pub k: f64,
}

impl LingParams {
    pub fn new(alpha: f64, n1: f64, n2: f64) -> Result<Self> {
        let k = ling_k(alpha, n1, n2)?;
        Ok(LingParams { alpha, n1, n2, k })
    }

    /// Residual of the defining relation 4 K I1 + 2 (N1 - N2) I2 - N1.
    pub fn residual(&self) -> Result<f64> {
        let (i1, i2) = ling_k_integrals(self.alpha, truncation(self.alpha))?;
        Ok((4.0 * self.k * i1 + 2.0 * (self.n1 - self.n2) * i2 - self.n1).abs())
    }
}

fn truncation(alpha: f64) -> f64 {
    (22.0 / alpha).max(18.0)
}

fn panel_rule(n: usize) -> QuadratureRule {
    legendre_rule(n).expect("fixed rule size")
}

/// Composite Gauss integration of `f` over [a, b] with panels of width <= w.
fn paneled<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, w: f64, base: &QuadratureRule) -> f64 {
    let nseg = ((b - a) / w).ceil().max(1.0) as usize;
    let h = (b - a) / nseg as f64;
    let mut total = 0.0;
    for i in 0..nseg {
        let lo = a + i as f64 * h;
        let rule = map_rule(base, lo, lo + h).expect("panel bounds");
        total += rule.integrate(&mut f);
    }
    total
}

/// Integrands of the two semi-infinite integrals defining K, in
/// exponential-scaled form that stays finite for all s.
fn ling_k_integrals(alpha: f64, s_max: f64) -> Result<(f64, f64)> {
    if !(alpha > 0.0 && alpha < PI) {
        return Err(Error::Domain(format!(
            "overlap angle alpha must lie in (0, pi), got {alpha}"
        )));
    }
    let sa = alpha.sin();
    let s2a = (2.0 * alpha).sin();
    let base = panel_rule(16);
    // scaled by 4 exp(-2 s alpha): numerator (1-e)^2 - 4 s^2 sin^2(a) e,
    // denominator s (s^2+1) (2 (1 - e^2) + 4 s sin(2a) e)
    let i1 = paneled(
        |s: f64| {
            let e = (-2.0 * s * alpha).exp();
            let num = (1.0 - e) * (1.0 - e) - 4.0 * s * s * sa * sa * e;
            let den = s * (s * s + 1.0) * (2.0 * (1.0 - e * e) + 4.0 * s * s2a * e);
            num / den
        },
        0.0,
        s_max,
        0.5_f64.min(0.5 / alpha),
        &base,
    );
    // exponential-tail corrections are below 1e-15 at s_max; the remaining
    // algebraic tail of i1 is integral of 1/(2 s (s^2+1)) = ln(1 + 1/S^2)/4
    let i1 = i1 + 0.25 * (1.0 + 1.0 / (s_max * s_max)).ln_1p_stable();
    let i2 = paneled(
        |s: f64| {
            let e = (-2.0 * s * alpha).exp();
            4.0 * s * sa * sa * e / (2.0 * (1.0 - e * e) + 4.0 * s * s2a * e)
        },
        0.0,
        s_max,
        0.5_f64.min(0.5 / alpha),
        &base,
    );
    Ok((i1, i2))
}

trait Ln1pStable {
    fn ln_1p_stable(self) -> f64;
}
impl Ln1pStable for f64 {
    fn ln_1p_stable(self) -> f64 {
        (self - 1.0).ln_1p()
    }
}

/// The constant K of the exact overlapping-circles solution, from the linear
/// relation 4 K I1 + 2 (N1 - N2) I2 = N1.
pub fn ling_k(alpha: f64, n1: f64, n2: f64) -> Result<f64> {
    let (i1, i2) = ling_k_integrals(alpha, truncation(alpha))?;
    if !i1.is_finite() || !i2.is_finite() || i1 <= 0.0 {
        return Err(Error::Numerical(format!(
            "K integrals did not evaluate: I1 = {i1}, I2 = {i2}"
        )));
    }
    Ok((n1 - 2.0 * (n1 - n2) * i2) / (4.0 * i1))
}

/// Trace integrand F(s, alpha) in the form num / (2 cosh(s a) + s sin(2a) /
/// sinh(s a)), finite for all s > 0 and decaying like s^2 e^{-s alpha}.
fn trace_integrand(s: f64, p: &LingParams) -> f64 {
    let alpha = p.alpha;
    let cot_a = alpha.cos() / alpha.sin();
    let coth = 1.0 / (s * alpha).tanh();
    let num = 2.0 * p.k - (p.n1 - p.n2) * s * (s - cot_a * coth);
    let den = 2.0 * (s * alpha).cosh() + s * (2.0 * alpha).sin() / (s * alpha).sinh();
    num / den
}

/// Exact boundary trace sigma_x + sigma_y at polar angle theta in [0, pi/2).
///
/// The transform coordinate xi grows like ln(1/(pi/2 - theta)), so the
/// cosine factor is resolved with panels no wider than a fixed fraction of
/// its period; the integrand itself decays exponentially and is truncated
/// where it falls below roundoff. Direct evaluation stays accurate
/// arbitrarily close to the corner.
pub fn ling_trace(theta: f64, p: &LingParams) -> Result<f64> {
    if !(0.0..FRAC_PI_2).contains(&theta) || FRAC_PI_2 - theta < 1e-14 {
        if p.alpha > FRAC_PI_2 {
            return Err(Error::SingularEvaluation(format!(
                "trace is singular at the corner theta = pi/2 (theta = {theta})"
            )));
        }
        return Err(Error::Domain(format!(
            "trace requires theta in [0, pi/2), got {theta}"
        )));
    }
    let alpha = p.alpha;
    let (ca, sa) = (alpha.cos(), alpha.sin());
    let gamma = theta + (theta.sin() * ca).asin();
    // cosh(xi) - 1 = (1 - cos a)(1 - cos gamma) / (cos a + cos gamma), with
    // the denominator in the cancellation-free form r(theta) cos(theta)
    let q = (1.0 - theta.sin().powi(2) * ca * ca).sqrt();
    let r = ca * theta.cos() + q;
    let denom = r * theta.cos();
    let cm1 = (1.0 - ca) * (1.0 - gamma.cos()) / denom;
    let xi = (cm1 + (cm1 * (cm1 + 2.0)).sqrt()).ln_1p();
    let h = 4.0 * (cm1 + 1.0 - ca) * sa;

    let s_max = (50.0 / alpha).max(30.0);
    let width = (PI / xi.max(1.0)).min(0.5);
    let base = panel_rule(16);
    let integral = paneled(
        |s| trace_integrand(s, p) * (s * xi).cos(),
        0.0,
        s_max,
        width,
        &base,
    );
    Ok(h * integral)
}
