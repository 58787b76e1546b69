//! Corner stress exponents from the wedge eigenvalue relation, and the
//! residue-based near-corner asymptote of the overlapping-circles trace.

use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Corner metadata: the solid-side corner angle, the wedge exponent lambda,
/// the basis power lambda - 1, and the characteristic-equation residual at
/// the returned lambda.
///
/// For corner angles beta > beta_c (~ 0.7365 pi, where pi sin(beta) = beta)
/// the characteristic relation has a genuine real root and `residual` is at
/// roundoff. Below beta_c no nontrivial real root exists; the returned value
/// is the real point minimizing the residual (where a root iteration stalls),
/// which is the value in published use, and `residual` is O(1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CornerSpec {
    pub beta: f64,
    pub lambda: f64,
    /// lambda - 1, the power of the corner basis term.
    pub exponent: f64,
    pub residual: f64,
}

/// Characteristic function g(t) = sin(t beta) + t sin(beta), whose roots
/// t = lambda - 1 govern stresses ~ r^(lambda - 2) at a wedge of angle beta.
fn characteristic(t: f64, beta: f64) -> f64 {
    (t * beta).sin() + t * beta.sin()
}

fn characteristic_deriv(t: f64, beta: f64) -> f64 {
    beta * (t * beta).cos() + beta.sin()
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let mut flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo < tol || !(mid > lo && mid < hi) {
            return mid;
        }
        let fm = f(mid);
        if (fm >= 0.0) == (flo >= 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

const SCAN_CELLS: usize = 400;
const T_MAX: f64 = 5.0; // lambda in (1, 6)
const T_MIN: f64 = 1e-8; // excludes the trivial root t = 0

/// Smallest relevant wedge exponent for a corner of angle `beta` (radians,
/// measured through the solid).
///
/// beta = pi returns lambda = 2 exactly (straight boundary, constant stress).
/// beta in (pi, 2 pi) returns the smallest real root lambda in (1, 2): a
/// singular, integrable stress. beta in (0, pi) has lambda > 2 (stresses
/// vanish at the corner); where no real root exists the stalling value of the
/// root iteration is returned, see [`CornerSpec`].
pub fn williams_exponent(beta: f64) -> Result<CornerSpec> {
    if !(beta > 0.0 && beta < 2.0 * PI) {
        return Err(Error::Domain(format!(
            "corner angle must lie in (0, 2 pi), got {beta}"
        )));
    }
    if (beta - PI).abs() < 1e-12 {
        return Ok(CornerSpec {
            beta,
            lambda: 2.0,
            exponent: 1.0,
            residual: 0.0,
        });
    }

    // Scan for a sign change of the characteristic function.
    let step = (T_MAX - T_MIN) / SCAN_CELLS as f64;
    let mut prev_t = T_MIN;
    let mut prev_g = characteristic(prev_t, beta);
    for i in 1..=SCAN_CELLS {
        let t = T_MIN + step * i as f64;
        let g = characteristic(t, beta);
        if prev_g == 0.0 {
            return Ok(spec_from_root(beta, prev_t));
        }
        if (g >= 0.0) != (prev_g >= 0.0) {
            let root = bisect(|t| characteristic(t, beta), prev_t, t, 1e-13);
            return Ok(spec_from_root(beta, root));
        }
        prev_t = t;
        prev_g = g;
    }

    // No real root: locate stationary points of g and take the global
    // residual minimum. Root finders stall there; the published exponent for
    // such angles is this value.
    let gp = |t: f64| characteristic_deriv(t, beta);
    let mut best: Option<(f64, f64)> = None;
    let mut prev_t = T_MIN;
    let mut prev_d = gp(prev_t);
    for i in 1..=SCAN_CELLS {
        let t = T_MIN + step * i as f64;
        let d = gp(t);
        if (d >= 0.0) != (prev_d >= 0.0) {
            let ts = bisect(gp, prev_t, t, 1e-13);
            let res = characteristic(ts, beta).abs();
            if best.map_or(true, |(_, r)| res < r) {
                best = Some((ts, res));
            }
        }
        prev_t = t;
        prev_d = d;
    }
    match best {
        Some((t, res)) => Ok(CornerSpec {
            beta,
            lambda: t,
            exponent: t - 1.0,
            residual: res,
        }),
        None => Err(Error::Numerical(format!(
            "no characteristic root or stationary point bracketed for beta = {beta} \
             on ({T_MIN}, {T_MAX})"
        ))),
    }
}

fn spec_from_root(beta: f64, t: f64) -> CornerSpec {
    CornerSpec {
        beta,
        lambda: 1.0 + t,
        exponent: t,
        residual: characteristic(t, beta).abs(),
    }
}

/// Smallest positive root of sin(2 alpha t) + t sin(2 alpha) = 0, the
/// imaginary-axis location of the first upper-half-plane pole of the
/// overlapping-circles trace integrand. Defined for alpha in (pi/2, pi).
pub fn wedge_root_t1(alpha: f64) -> Result<f64> {
    if !(alpha > PI / 2.0 && alpha < PI) {
        return Err(Error::Domain(format!(
            "wedge_root_t1 requires alpha in (pi/2, pi), got {alpha}"
        )));
    }
    let beta = 2.0 * alpha;
    let g = |t: f64| characteristic(t, beta);
    let cells = 4000;
    let step = (T_MAX - T_MIN) / cells as f64;
    let mut prev_t = T_MIN;
    let mut prev_g = g(prev_t);
    for i in 1..=cells {
        let t = T_MIN + step * i as f64;
        let v = g(t);
        if (v >= 0.0) != (prev_g >= 0.0) {
            return Ok(bisect(g, prev_t, t, 1e-14));
        }
        prev_t = t;
        prev_g = v;
    }
    Err(Error::Numerical(format!(
        "root of the wedge relation not bracketed for alpha = {alpha}"
    )))
}

/// Residue asymptote of the boundary trace sigma_x + sigma_y of the
/// overlapping-circles hole as the corner is approached: `eps` is the polar
/// distance pi/2 - theta. Valid for alpha in (pi/2, pi) where the trace is
/// singular; K is the constant of the exact solution, N1 and N2 the far-field
/// tensions.
pub fn ling_corner_asymptote(alpha: f64, k: f64, n1: f64, n2: f64, eps: f64) -> Result<f64> {
    if !(alpha > PI / 2.0 && alpha < PI) {
        return Err(Error::Domain(format!(
            "asymptote requires alpha in (pi/2, pi), got {alpha}"
        )));
    }
    if !(eps > 0.0 && eps < 0.2) {
        return Err(Error::Domain(format!(
            "asymptote requires 0 < eps < 0.2, got {eps}"
        )));
    }
    let t1 = wedge_root_t1(alpha)?;
    let cot_a = alpha.cos() / alpha.sin();
    // cot (not cosh/sinh): the pole sits at z = i t1*, where
    // coth(i alpha t1*) = -i cot(alpha t1*).
    let cot_at1 = (alpha * t1).cos() / (alpha * t1).sin();
    let numer = 2.0 * k + (n1 - n2) * t1 * (t1 + cot_a * cot_at1);
    let denom = 2.0 * alpha * (2.0 * alpha * t1).cos() + (2.0 * alpha).sin();
    let amp = numer / denom;
    Ok(-amp
        * 2.0
        * PI
        * alpha.sin()
        * (alpha * t1).sin()
        * (2.0 * alpha.sin() / eps).powf(1.0 - t1))
}
