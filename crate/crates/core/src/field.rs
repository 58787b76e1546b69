//! Boundary and interior fields on top of a solved problem: the auxiliary
//! function h, Cauchy continuation of phi and h into the solid, stresses at
//! arbitrary points, error norms, and sampled stress grids.

use crate::assembler::BoundarySolution;
use crate::error::{Error, Result};
use crate::quadrature::{nested_integrate, nested_integrate_complex, SingularEnd};
use crate::shapes::{extend_theta_derivative, extend_value, fold_angle};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

/// Points closer to the boundary than this are rejected: the Cauchy kernels
/// become nearly singular and the continuation loses accuracy.
pub const NEAR_BOUNDARY_BAND: f64 = 1e-3;

/// Tabulated boundary data of a solution.
#[derive(Debug, Clone)]
pub struct BoundaryField {
    pub thetas: Vec<f64>,
    pub phi: Vec<Complex64>,
    /// d phi / d theta.
    pub dphi: Vec<Complex64>,
    pub h: Vec<Complex64>,
    /// sigma_x + sigma_y along the boundary.
    pub trace: Vec<f64>,
}

/// Stresses at one interior point.
#[derive(Debug, Clone, Copy)]
pub struct StressSample {
    pub location: Complex64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub tau_xy: f64,
}

/// Boundary trace sigma_x + sigma_y = 1 + chi + 4 Re{phi'(theta)/z'(theta)}.
pub fn boundary_trace(sol: &BoundarySolution, theta: f64) -> Result<f64> {
    let dphi = sol.goursat.eval_dphi(theta)?;
    let zp = sol.shape.zp(theta);
    Ok(1.0 + sol.config.chi + 4.0 * (dphi / zp).re)
}

/// The auxiliary function h on the first quadrant of the boundary, from the
/// traction-free condition.
pub fn recover_h(sol: &BoundarySolution, theta: f64) -> Result<Complex64> {
    let chi = sol.config.chi;
    let phi = sol.goursat.eval_phi(theta)?;
    let dphi = sol.goursat.eval_dphi(theta)?;
    let z = sol.shape.z(theta);
    let zp = sol.shape.zp(theta);
    let phi_z = dphi / zp;
    Ok(-phi.conj() - 0.25 * (1.0 + chi) * z.conj() - z.conj() * (phi_z + 0.25 * (1.0 + chi))
        - 0.5 * (chi - 1.0) * z)
}

/// Tabulate boundary data at the given first-quadrant angles.
pub fn tabulate_boundary(sol: &BoundarySolution, thetas: &[f64]) -> Result<BoundaryField> {
    let mut phi = Vec::with_capacity(thetas.len());
    let mut dphi = Vec::with_capacity(thetas.len());
    let mut h = Vec::with_capacity(thetas.len());
    let mut trace = Vec::with_capacity(thetas.len());
    for &t in thetas {
        phi.push(sol.goursat.eval_phi(t)?);
        dphi.push(sol.goursat.eval_dphi(t)?);
        h.push(recover_h(sol, t)?);
        trace.push(boundary_trace(sol, t)?);
    }
    Ok(BoundaryField {
        thetas: thetas.to_vec(),
        phi,
        dphi,
        h,
        trace,
    })
}

/// True when the point lies strictly inside the hole (shapes are star-shaped
/// about the origin).
pub fn inside_hole(sol: &BoundarySolution, zeta: Complex64) -> bool {
    let (q, u) = fold_angle(zeta.arg().rem_euclid(2.0 * PI));
    let _ = q;
    zeta.norm() < sol.shape.r(u)
}

/// Distance from `zeta` to the boundary, by dense sampling plus local
/// refinement.
pub fn boundary_distance(sol: &BoundarySolution, zeta: Complex64) -> f64 {
    let coarse = 512;
    let mut best = f64::INFINITY;
    let mut best_t = 0.0;
    for j in 0..coarse {
        let t = 2.0 * PI * j as f64 / coarse as f64;
        let (z, _) = sol.shape.boundary_point(t);
        let d = (z - zeta).norm();
        if d < best {
            best = d;
            best_t = t;
        }
    }
    let mut lo = best_t - 2.0 * PI / coarse as f64;
    let mut hi = best_t + 2.0 * PI / coarse as f64;
    for _ in 0..60 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        let d1 = (sol.shape.boundary_point(m1).0 - zeta).norm();
        let d2 = (sol.shape.boundary_point(m2).0 - zeta).norm();
        if d1 < d2 {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    let t = 0.5 * (lo + hi);
    best.min((sol.shape.boundary_point(t).0 - zeta).norm())
}

/// First-quadrant angle whose image in quadrant `q` lies nearest to `zeta`.
fn nearest_angle_in_quadrant(sol: &BoundarySolution, zeta: Complex64, q: usize) -> f64 {
    let dist = |u: f64| (extend_value(sol.shape.z(u), q) - zeta).norm();
    let coarse = 65;
    let mut best = f64::INFINITY;
    let mut best_u = FRAC_PI_2 * 0.5;
    for j in 0..=coarse {
        let u = FRAC_PI_2 * j as f64 / coarse as f64;
        let d = dist(u);
        if d < best {
            best = d;
            best_u = u;
        }
    }
    let mut lo = (best_u - FRAC_PI_2 / coarse as f64).max(0.0);
    let mut hi = (best_u + FRAC_PI_2 / coarse as f64).min(FRAC_PI_2);
    for _ in 0..50 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if dist(m1) < dist(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Exterior Cauchy integral of a plate-symmetric boundary function given on
/// the first quadrant: value(zeta) = (1/2 pi i) integral over the clockwise
/// contour of f(z)/(z - zeta) dz.
fn cauchy_exterior<F: Fn(f64) -> Result<Complex64>>(
    sol: &BoundarySolution,
    f: F,
    zeta: Complex64,
) -> Result<Complex64> {
    let n = sol.config.quad_n;
    let eps = sol.config.quad_eps;
    let corner = sol.shape.corner().is_some();
    let mut total = Complex64::new(0.0, 0.0);
    for q in 0..4 {
        let integrand = |u: f64| -> Complex64 {
            let z = extend_value(sol.shape.z(u), q);
            let dz = extend_theta_derivative(sol.shape.zp(u), q);
            let v = extend_value(f(u).expect("boundary evaluation inside quadrant"), q);
            v * dz / (z - zeta)
        };
        // split the quadrant at the closest approach to zeta when near,
        // so panel refinement resolves the kernel peak
        let u_near = nearest_angle_in_quadrant(sol, zeta, q);
        let near = (extend_value(sol.shape.z(u_near), q) - zeta).norm() < 0.3;
        let tail_end = if corner {
            SingularEnd::Right
        } else {
            SingularEnd::Left
        };
        if near && u_near > 1e-6 && u_near < FRAC_PI_2 - 1e-6 {
            total += nested_integrate_complex(integrand, 0.0, u_near, n, eps, SingularEnd::Right)?;
            total += nested_integrate_complex(integrand, u_near, FRAC_PI_2, n, eps, tail_end)?;
        } else {
            total += nested_integrate_complex(integrand, 0.0, FRAC_PI_2, n, eps, SingularEnd::Right)?;
        }
    }
    // clockwise contour: negate the counterclockwise parameterization
    Ok(-total * Complex64::new(0.0, -0.5 / PI))
}

/// Analytic continuation of phi and h to a point in the solid.
pub fn continue_interior(
    sol: &BoundarySolution,
    zeta: Complex64,
) -> Result<(Complex64, Complex64)> {
    if inside_hole(sol, zeta) {
        return Err(Error::Domain(format!(
            "point {zeta} lies inside the hole"
        )));
    }
    let d = boundary_distance(sol, zeta);
    if d <= NEAR_BOUNDARY_BAND {
        return Err(Error::Domain(format!(
            "point {zeta} is within {NEAR_BOUNDARY_BAND} of the boundary (distance {d:.3e})"
        )));
    }
    let phi = cauchy_exterior(sol, |u| sol.goursat.eval_phi(u), zeta)?;
    let h = cauchy_exterior(sol, |u| recover_h(sol, u), zeta)?;
    Ok((phi, h))
}

/// Stresses at a point of the solid. Derivatives of the continued fields use
/// centered differences with step 1e-5 (1 + |zeta|).
pub fn stress_at(sol: &BoundarySolution, zeta: Complex64) -> Result<StressSample> {
    let chi = sol.config.chi;
    let delta = 1e-5 * (1.0 + zeta.norm());
    let (phi_0, _h_0) = continue_interior(sol, zeta)?;
    let (phi_p, h_p) = continue_interior(sol, zeta + delta)?;
    let (phi_m, h_m) = continue_interior(sol, zeta - delta)?;
    let dphi = (phi_p - phi_m) / (2.0 * delta);
    let d2phi = (phi_p - 2.0 * phi_0 + phi_m) / (delta * delta);
    let dh = (h_p - h_m) / (2.0 * delta);
    let trace = 1.0 + chi + 4.0 * dphi.re;
    let dev = zeta.conj() * d2phi + 0.5 * (chi - 1.0) + dh;
    let diff = 2.0 * dev.re; // sigma_y - sigma_x
    Ok(StressSample {
        location: zeta,
        sigma_x: 0.5 * (trace - diff),
        sigma_y: 0.5 * (trace + diff),
        tau_xy: dev.im,
    })
}

/// L2 norm of phi_numeric - phi_oracle over the first quadrant,
/// sqrt((2/pi) integral |diff|^2).
pub fn l2_error_phi<F: Fn(f64) -> Complex64>(sol: &BoundarySolution, oracle: F) -> Result<f64> {
    let end = if sol.goursat.corner_exponent.is_some() {
        SingularEnd::Right
    } else {
        SingularEnd::Left
    };
    let sq = nested_integrate(
        |t| {
            let d = sol.goursat.eval_phi(t).expect("interior angle") - oracle(t);
            d.norm_sqr()
        },
        0.0,
        FRAC_PI_2,
        sol.config.quad_n,
        sol.config.quad_eps,
        end,
    )?;
    Ok((2.0 / PI * sq.max(0.0)).sqrt())
}

/// L2 norm of the boundary-trace error against an oracle, with the
/// quadrature refined into the corner where the trace is singular.
pub fn l2_error_trace<F: Fn(f64) -> f64>(sol: &BoundarySolution, oracle: F) -> Result<f64> {
    let sq = nested_integrate(
        |t| {
            let d = boundary_trace(sol, t).expect("interior angle") - oracle(t);
            d * d
        },
        0.0,
        FRAC_PI_2,
        sol.config.quad_n,
        sol.config.quad_eps,
        SingularEnd::Right,
    )?;
    Ok((2.0 / PI * sq.max(0.0)).sqrt())
}

/// One cell of a sampled stress grid.
#[derive(Debug, Clone, Copy)]
pub struct GridCell {
    pub x: f64,
    pub y: f64,
    pub valid: bool,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub tau_xy: f64,
}

/// Row-major stress grid over `bbox` = (x_min, x_max, y_min, y_max). Cells
/// inside the hole or within the near-boundary band are marked invalid.
pub fn field_grid(
    sol: &BoundarySolution,
    bbox: (f64, f64, f64, f64),
    nx: usize,
    ny: usize,
) -> Result<Vec<GridCell>> {
    let (x0, x1, y0, y1) = bbox;
    if !(x0 < x1 && y0 < y1) || nx < 2 || ny < 2 {
        return Err(Error::InvalidArgument(format!(
            "degenerate grid request: bbox {bbox:?}, nx {nx}, ny {ny}"
        )));
    }
    let mut cells = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = y0 + (y1 - y0) * j as f64 / (ny - 1) as f64;
        for i in 0..nx {
            let x = x0 + (x1 - x0) * i as f64 / (nx - 1) as f64;
            let zeta = Complex64::new(x, y);
            match stress_at(sol, zeta) {
                Ok(s) => cells.push(GridCell {
                    x,
                    y,
                    valid: true,
                    sigma_x: s.sigma_x,
                    sigma_y: s.sigma_y,
                    tau_xy: s.tau_xy,
                }),
                Err(Error::Domain(_)) => cells.push(GridCell {
                    x,
                    y,
                    valid: false,
                    sigma_x: 0.0,
                    sigma_y: 0.0,
                    tau_xy: 0.0,
                }),
                Err(e) => return Err(e),
            }
        }
    }
    Ok(cells)
}
