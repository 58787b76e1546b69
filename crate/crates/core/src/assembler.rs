//! Discretization of the singular boundary integro-differential equation,
//! the analyticity constraints, and the end conditions into an
//! overdetermined real system in the basis coefficients, plus the driver
//! that solves it.
//!
//! For each collocation point the Cauchy principal values are extracted
//! analytically (the smooth-contour half-residue pi*i), leaving difference
//! integrands with removable singularities. Full-contour integrals run over
//! the four quadrant images of [0, pi/2] using the plate symmetry; every
//! piece is integrated with nested Gauss-Legendre quadrature refined toward
//! its singular end. When the basis carries a corner term, the quadrant
//! window adjacent to the corner is integrated by parts so the singular
//! derivative of the corner term never appears in an integrand.

use crate::error::{Error, Result};
use crate::goursat::{eval_basis, AugmentedGoursat, BasisEval};
use crate::linsolve::{lstsq, DenseSystem, RowLabel};
use crate::quadrature::{legendre_rule, nested_integrate_value, SingularEnd};
use crate::shapes::{extend_theta_derivative, extend_value, BoundaryShape};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Value signs of the extended basis directions per quadrant: a-coefficient
/// directions are real on the first quadrant, b-directions imaginary.
const S_Q: [f64; 4] = [1.0, -1.0, -1.0, 1.0];
const T_Q: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
/// Theta-derivative signs of the extended basis directions per quadrant.
const P_Q: [f64; 4] = [1.0, 1.0, -1.0, -1.0];
const W_Q: [f64; 4] = [1.0, -1.0, -1.0, 1.0];

/// Width of the symmetric window around a collocation angle inside which the
/// removable-limit value replaces the difference quotient.
const REMOVABLE_WINDOW: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Basis size N: coefficients a_0..a_{N-1} and b_0..b_{N-1}.
    pub n_basis: usize,
    /// Far-field stress ratio sigma_y / sigma_x.
    pub chi: f64,
    /// Augment the Chebyshev basis with the corner term of the shape.
    pub use_corner: bool,
    /// Gauss rule size per quadrature panel.
    pub quad_n: usize,
    /// Nested-quadrature acceptance tolerance.
    pub quad_eps: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_basis: 64,
            chi: 0.0,
            use_corner: false,
            quad_n: 16,
            quad_eps: 1e-15,
        }
    }
}

impl SolverConfig {
    fn validate(&self, shape: &BoundaryShape) -> Result<()> {
        if self.n_basis < 8 {
            return Err(Error::Config(format!(
                "basis size must be at least 8, got {}",
                self.n_basis
            )));
        }
        if !(self.quad_eps > 0.0 && self.quad_eps <= 1e-6) {
            return Err(Error::Config(format!(
                "quadrature tolerance must lie in (0, 1e-6], got {}",
                self.quad_eps
            )));
        }
        if self.quad_n < 2 {
            return Err(Error::Config(format!(
                "panel rule size must be at least 2, got {}",
                self.quad_n
            )));
        }
        if self.use_corner && shape.corner().is_none() {
            return Err(Error::Config(
                "corner term requested but the shape declares no corner".into(),
            ));
        }
        Ok(())
    }

    fn corner_exponent(&self, shape: &BoundaryShape) -> Option<f64> {
        if self.use_corner {
            shape.corner().map(|c| c.exponent)
        } else {
            None
        }
    }
}

/// Collocation angles (interior Gauss-Legendre images) with boundary data.
#[derive(Debug, Clone)]
pub struct CollocationGrid {
    pub thetas: Vec<f64>,
    pub z: Vec<Complex64>,
    pub zp: Vec<Complex64>,
    pub zpp: Vec<Complex64>,
}

/// The N - 1 collocation angles theta_i = pi (x_i + 1) / 4 with x_i the
/// roots of the degree-(N-1) Legendre polynomial.
pub fn collocation_points(shape: &BoundaryShape, n_basis: usize) -> Result<CollocationGrid> {
    if n_basis < 2 {
        return Err(Error::InvalidArgument(
            "collocation requires a basis of at least 2".into(),
        ));
    }
    let rule = legendre_rule(n_basis - 1)?;
    let thetas: Vec<f64> = rule.nodes.iter().map(|&x| PI * (x + 1.0) / 4.0).collect();
    let z = thetas.iter().map(|&t| shape.z(t)).collect();
    let zp = thetas.iter().map(|&t| shape.zp(t)).collect();
    let zpp = thetas.iter().map(|&t| shape.zpp(t)).collect();
    Ok(CollocationGrid {
        thetas,
        z,
        zp,
        zpp,
    })
}

/// Quadrant geometry at a first-quadrant angle: boundary point of the image
/// quadrant and the theta-derivative of the contour there.
#[inline]
fn quadrant_geometry(shape: &BoundaryShape, u: f64, q: usize) -> (Complex64, Complex64) {
    let z = shape.z(u);
    let zp = shape.zp(u);
    (extend_value(z, q), extend_theta_derivative(zp, q))
}

struct PointContext<'a> {
    shape: &'a BoundaryShape,
    n_basis: usize,
    corner_exponent: Option<f64>,
    theta_i: f64,
    z_i: Complex64,
    zp_i: Complex64,
    zpp_i: Complex64,
    basis_i: BasisEval,
    /// conj(z_i) B'_k(theta_i) / z'(theta_i): the subtraction constants of
    /// the z-phi' kernel.
    c_sub: Vec<Complex64>,
}

impl<'a> PointContext<'a> {
    /// Integrand of the phi-difference kernels: for every basis direction
    /// the bracket (ext(B_k) - B_k(theta_i)) z'(theta)/(z - z_i), split into
    /// the a-direction (S_Q) and b-direction (T_Q) sign tables, plus the
    /// geometry component (conj z - conj z_i) z'/(z - z_i) in the last slot.
    fn phi_kernel(&self, u: f64, q: usize) -> Vec<Complex64> {
        let n = self.n_basis;
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        if q == 0 && (u - self.theta_i).abs() < REMOVABLE_WINDOW {
            for k in 0..n {
                out[k] = Complex64::new(self.basis_i.bp[k], 0.0);
                out[n + k] = out[k];
            }
            out[2 * n] = self.zp_i.conj();
            return out;
        }
        let (zq, dq) = quadrant_geometry(self.shape, u, q);
        let kern = dq / (zq - self.z_i);
        let basis = eval_basis(self.n_basis, self.corner_exponent, u);
        for k in 0..n {
            out[k] = (S_Q[q] * basis.b[k] - self.basis_i.b[k]) * kern;
            out[n + k] = (T_Q[q] * basis.b[k] - self.basis_i.b[k]) * kern;
        }
        out[2 * n] = (zq.conj() - self.z_i.conj()) * kern;
        out
    }

    /// Integrand of the z-phi' difference kernel: per basis direction the
    /// bracket ext(B'_k) conj(z)/(z - z_i) - C_k z'/(z - z_i), a-direction
    /// then b-direction.
    fn zphi_kernel(&self, u: f64, q: usize) -> Vec<Complex64> {
        let n = self.n_basis;
        let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
        if q == 0 && (u - self.theta_i).abs() < REMOVABLE_WINDOW {
            // removable limit of [conj(z)phi'/z' - conj(z_i)phi'_i/z'_i] z'/(z-z_i)
            let zc = self.z_i.conj();
            let zpc = self.zp_i.conj();
            for k in 0..n {
                let v = (zpc * self.basis_i.bp[k] + zc * self.basis_i.bpp[k]) / self.zp_i
                    - zc * self.basis_i.bp[k] * self.zpp_i / (self.zp_i * self.zp_i);
                out[k] = v;
                out[n + k] = v;
            }
            return out;
        }
        let (zq, dq) = quadrant_geometry(self.shape, u, q);
        let kern = dq / (zq - self.z_i);
        let kern2 = zq.conj() / (zq - self.z_i);
        let basis = eval_basis(self.n_basis, self.corner_exponent, u);
        for k in 0..n {
            out[k] = P_Q[q] * basis.bp[k] * kern2 - self.c_sub[k] * kern;
            out[n + k] = W_Q[q] * basis.bp[k] * kern2 - self.c_sub[k] * kern;
        }
        out
    }

    /// Integrand of the integrated-by-parts corner window: per basis
    /// function B_k M'(u) with M = conj(z)/(z - z_i), plus z'/(z - z_i) in
    /// the last slot for the subtraction constants.
    fn window_kernel(&self, u: f64, q: usize) -> Vec<Complex64> {
        let n = self.n_basis;
        let mut out = vec![Complex64::new(0.0, 0.0); n + 1];
        let (zq, dq) = quadrant_geometry(self.shape, u, q);
        // u-derivative of the image point
        let vq = extend_value(self.shape.zp(u), q);
        let dz = zq - self.z_i;
        let mprime = (vq.conj() * dz - zq.conj() * vq) / (dz * dz);
        let basis = eval_basis(self.n_basis, self.corner_exponent, u);
        for k in 0..n {
            out[k] = basis.b[k] * mprime;
        }
        out[n] = dq / dz;
        out
    }
}

/// Assemble the overdetermined system: 2(N-1) integral-equation rows,
/// 2(N-1) analyticity rows, and the two end conditions, in the unknowns
/// (a_0..a_{N-1}, b_0..b_{N-1}).
pub fn assemble(shape: &BoundaryShape, cfg: &SolverConfig) -> Result<DenseSystem> {
    cfg.validate(shape)?;
    let n = cfg.n_basis;
    let corner_exponent = cfg.corner_exponent(shape);
    let grid = collocation_points(shape, n)?;
    let m_colloc = grid.thetas.len();
    let rows = 4 * n - 2;
    let cols = 2 * n;
    let mut data = vec![0.0; rows * cols];
    let mut rhs = vec![0.0; rows];
    let mut labels = Vec::with_capacity(rows);
    for i in 0..m_colloc {
        labels.push(RowLabel::IntegralRe(i));
        labels.push(RowLabel::IntegralIm(i));
    }
    for i in 0..m_colloc {
        labels.push(RowLabel::AnalyticityRe(i));
        labels.push(RowLabel::AnalyticityIm(i));
    }
    labels.push(RowLabel::EndRealAtHalfPi);
    labels.push(RowLabel::EndImagAtZero);

    // corner window: theta_eps = theta_1 / 2 keeps every collocation point
    // strictly outside the integrated-by-parts region
    let theta_eps = grid.thetas[0] / 2.0;
    let window_start = FRAC_PI_2 - theta_eps;
    if corner_exponent.is_some() {
        let max_theta = grid.thetas[m_colloc - 1];
        if max_theta >= window_start {
            return Err(Error::Config(format!(
                "corner window [{window_start}, pi/2] would contain the \
                 collocation point {max_theta}"
            )));
        }
    }

    let refine_to_corner = shape.corner().is_some();
    let inv_2pi_i = Complex64::new(0.0, -0.5 / PI); // 1/(2 pi i)

    // basis values at the interval ends for the end-condition rows
    let basis_half = eval_basis(n, corner_exponent, FRAC_PI_2);
    let basis_zero = eval_basis(n, corner_exponent, 0.0);

    for i in 0..m_colloc {
        let basis_i = eval_basis(n, corner_exponent, grid.thetas[i]);
        let c_sub: Vec<Complex64> = (0..n)
            .map(|k| grid.z[i].conj() * basis_i.bp[k] / grid.zp[i])
            .collect();
        let ctx = PointContext {
            shape,
            n_basis: n,
            corner_exponent,
            theta_i: grid.thetas[i],
            z_i: grid.z[i],
            zp_i: grid.zp[i],
            zpp_i: grid.zpp[i],
            basis_i,
            c_sub,
        };

        // ---- phi-difference kernels over the four quadrant images
        let mut group_a = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for q in 0..4 {
            let pieces = [
                (0.0, ctx.theta_i, SingularEnd::Right),
                (
                    ctx.theta_i,
                    FRAC_PI_2,
                    if refine_to_corner {
                        SingularEnd::Right
                    } else {
                        SingularEnd::Left
                    },
                ),
            ];
            for &(a, b, end) in &pieces {
                let part = nested_integrate_value(
                    |u| ctx.phi_kernel(u, q),
                    a,
                    b,
                    cfg.quad_n,
                    cfg.quad_eps,
                    end,
                )
                .map_err(|e| annotate(e, i, q))?;
                for (acc, v) in group_a.iter_mut().zip(&part) {
                    *acc += v;
                }
            }
        }

        // ---- z-phi' kernel, with the corner window integrated by parts
        let mut group_b = vec![Complex64::new(0.0, 0.0); 2 * n];
        for q in 0..4 {
            let direct_end = if corner_exponent.is_some() {
                window_start
            } else {
                FRAC_PI_2
            };
            let pieces = [
                (0.0, ctx.theta_i, SingularEnd::Right),
                (
                    ctx.theta_i,
                    direct_end,
                    if refine_to_corner {
                        SingularEnd::Right
                    } else {
                        SingularEnd::Left
                    },
                ),
            ];
            for &(a, b, end) in &pieces {
                let part = nested_integrate_value(
                    |u| ctx.zphi_kernel(u, q),
                    a,
                    b,
                    cfg.quad_n,
                    cfg.quad_eps,
                    end,
                )
                .map_err(|e| annotate(e, i, q))?;
                for (acc, v) in group_b.iter_mut().zip(&part) {
                    *acc += v;
                }
            }
            if corner_exponent.is_some() {
                // boundary terms of the integration by parts
                let (z_end, _) = quadrant_geometry(shape, FRAC_PI_2, q);
                let m_end = z_end.conj() / (z_end - ctx.z_i);
                let (z_c, _) = quadrant_geometry(shape, window_start, q);
                let m_c = z_c.conj() / (z_c - ctx.z_i);
                let basis_c = eval_basis(n, corner_exponent, window_start);
                let window = nested_integrate_value(
                    |u| ctx.window_kernel(u, q),
                    window_start,
                    FRAC_PI_2,
                    cfg.quad_n,
                    cfg.quad_eps,
                    SingularEnd::Right,
                )
                .map_err(|e| annotate(e, i, q))?;
                for k in 0..n {
                    let bterm = basis_half.b[k] * m_end - basis_c.b[k] * m_c;
                    group_b[k] += P_Q[q] * (bterm - window[k]) - ctx.c_sub[k] * window[n];
                    group_b[n + k] += W_Q[q] * (bterm - window[k]) - ctx.c_sub[k] * window[n];
                }
            }
        }

        // ---- rows
        let z_i = grid.z[i];
        let zc = z_i.conj();
        let zp_i = grid.zp[i];
        let row_re = 2 * i;
        let row_im = 2 * i + 1;
        for k in 0..n {
            // integro-differential equation, a_k and b_k columns
            let va = Complex64::new(ctx.basis_i.b[k], 0.0)
                + inv_2pi_i * group_a[k]
                + zc / zp_i * ctx.basis_i.bp[k]
                + inv_2pi_i * group_b[k];
            let vb = Complex64::new(0.0, -ctx.basis_i.b[k])
                + inv_2pi_i * (-Complex64::i() * group_a[n + k])
                + zc / zp_i * Complex64::i() * ctx.basis_i.bp[k]
                + inv_2pi_i * (Complex64::i() * group_b[n + k]);
            data[row_re * cols + k] = va.re;
            data[row_im * cols + k] = va.im;
            data[row_re * cols + n + k] = vb.re;
            data[row_im * cols + n + k] = vb.im;
            // analyticity rows
            let wa = Complex64::new(ctx.basis_i.b[k], 0.0) + inv_2pi_i * group_a[k];
            let wb = Complex64::new(0.0, ctx.basis_i.b[k])
                + inv_2pi_i * (Complex64::i() * group_a[n + k]);
            let r2 = 2 * m_colloc + 2 * i;
            let r3 = r2 + 1;
            data[r2 * cols + k] = wa.re;
            data[r3 * cols + k] = wa.im;
            data[r2 * cols + n + k] = wb.re;
            data[r3 * cols + n + k] = wb.im;
        }
        let chi = cfg.chi;
        let constant = 0.5 * (1.0 + chi) * zc
            + 0.5 * (1.0 + chi) * inv_2pi_i * group_a[2 * n]
            + 0.5 * (chi - 1.0) * z_i;
        rhs[row_re] = -constant.re;
        rhs[row_im] = -constant.im;
    }

    // end conditions: Re phi(pi/2) = 0, Im phi(0) = 0
    let row = rows - 2;
    for k in 0..n {
        data[row * cols + k] = basis_half.b[k];
        data[(row + 1) * cols + n + k] = basis_zero.b[k];
    }

    Ok(DenseSystem::new(data, rows, cols, rhs).with_labels(labels))
}

fn annotate(e: Error, i: usize, q: usize) -> Error {
    match e {
        Error::QuadratureDivergence {
            bisections,
            gap,
            estimate,
        } => Error::Numerical(format!(
            "quadrature for collocation row {i}, quadrant {q} failed after \
             {bisections} bisections (gap {gap:.3e}, estimate {estimate:.3e})"
        )),
        other => other,
    }
}

/// Diagnostics attached to a solve.
#[derive(Debug, Clone)]
pub struct SolveDiagnostics {
    pub rows: usize,
    pub cols: usize,
    pub residual_norm: f64,
    pub condition_estimate: f64,
}

/// A solved boundary problem: shape, configuration, and the coefficient set.
#[derive(Debug, Clone)]
pub struct BoundarySolution {
    pub shape: BoundaryShape,
    pub config: SolverConfig,
    pub goursat: AugmentedGoursat,
    pub diagnostics: SolveDiagnostics,
}

/// Assemble and solve in the least-squares sense. Column pivoting is enabled
/// when the corner term is active (the augmented basis is ill-conditioned).
pub fn solve(shape: &BoundaryShape, cfg: &SolverConfig) -> Result<BoundarySolution> {
    let system = assemble(shape, cfg)?;
    let outcome = lstsq(&system, cfg.use_corner)?;
    let n = cfg.n_basis;
    let goursat = AugmentedGoursat::new(
        outcome.x[..n].to_vec(),
        outcome.x[n..].to_vec(),
        cfg.corner_exponent(shape),
    );
    Ok(BoundarySolution {
        shape: shape.clone(),
        config: cfg.clone(),
        goursat,
        diagnostics: SolveDiagnostics {
            rows: system.rows(),
            cols: system.cols(),
            residual_norm: outcome.residual_norm,
            condition_estimate: outcome.condition_estimate,
        },
    })
}
