//! Hole geometry: r(theta) on the first quadrant with analytic first and
//! second derivatives, complex boundary points, corner metadata, and the
//! mirror-symmetry extension to the full contour.
//!
//! Shapes are two-fold symmetric (reflection across both axes), so they are
//! defined on [0, pi/2] only; the other quadrants are images. A corner, when
//! present, sits on the y axis at theta = pi/2 (and its mirror at 3 pi/2).

use crate::chebyshev::ChebSeries;
use crate::corner::{williams_exponent, CornerSpec};
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_2, PI};

#[derive(Debug, Clone)]
enum ShapeKind {
    Circle,
    Ellipse {
        m: f64,
        e2: f64,
    },
    /// Union/intersection of two unit circles centered at (+-cos alpha, 0).
    Overlap {
        cos_alpha: f64,
    },
    Custom {
        r: ChebSeries,
        rp: ChebSeries,
        rpp: ChebSeries,
    },
}

/// Boundary of the hole on the first quadrant, plus corner metadata.
#[derive(Debug, Clone)]
pub struct BoundaryShape {
    kind: ShapeKind,
    corner: Option<CornerSpec>,
    pub label: String,
}

impl BoundaryShape {
    /// Unit circle: r = 1.
    pub fn circle() -> Self {
        BoundaryShape {
            kind: ShapeKind::Circle,
            corner: None,
            label: "circle".into(),
        }
    }

    /// Ellipse with semi-axes 1 + m (x) and 1 - m (y), m in (0, 1).
    pub fn ellipse(m: f64) -> Result<Self> {
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::Domain(format!(
                "ellipse parameter m must lie in (0, 1), got {m}"
            )));
        }
        let e2 = 1.0 - (1.0 - m) * (1.0 - m) / ((1.0 + m) * (1.0 + m));
        Ok(BoundaryShape {
            kind: ShapeKind::Ellipse { m, e2 },
            corner: None,
            label: format!("ellipse(m={m})"),
        })
    }

    /// Hole formed by two unit circles centered at (+-cos alpha, 0):
    /// r(theta) = cos(alpha) cos(theta) + sqrt(1 - sin^2(theta) cos^2(alpha)).
    /// For alpha != pi/2 the shape has corners at theta = pi/2 and 3 pi/2
    /// with solid angle beta = 2 alpha.
    pub fn overlapping_circles(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < PI) {
            return Err(Error::Domain(format!(
                "overlap parameter alpha must lie in (0, pi), got {alpha}"
            )));
        }
        let corner = if (alpha - FRAC_PI_2).abs() < 1e-12 {
            None // degenerates to the unit circle
        } else {
            Some(williams_exponent(2.0 * alpha)?)
        };
        Ok(BoundaryShape {
            kind: ShapeKind::Overlap {
                cos_alpha: alpha.cos(),
            },
            corner,
            label: format!("overlap(alpha={alpha})"),
        })
    }

    /// Shape from r samples at the first-kind Chebyshev nodes of [0, pi/2]
    /// (ascending order, as produced by [`ChebSeries::nodes`]); derivatives
    /// come from the spectral derivative of the interpolant.
    pub fn custom_from_samples(samples: &[f64], corner_beta: Option<f64>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::InvalidData("no radius samples given".into()));
        }
        if let Some((j, &v)) = samples
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > 0.0) || !v.is_finite())
        {
            return Err(Error::InvalidData(format!(
                "radius sample {v} at node {j} is not positive and finite"
            )));
        }
        let r = ChebSeries::from_samples_at_nodes(samples, 0.0, FRAC_PI_2)?;
        let rp = r.derivative();
        let rpp = rp.derivative();
        let corner = match corner_beta {
            Some(beta) => Some(williams_exponent(beta)?),
            None => None,
        };
        Ok(BoundaryShape {
            kind: ShapeKind::Custom { r, rp, rpp },
            corner,
            label: format!("custom({} samples)", samples.len()),
        })
    }

    pub fn corner(&self) -> Option<&CornerSpec> {
        self.corner.as_ref()
    }

    /// r(theta) on [0, pi/2].
    pub fn r(&self, theta: f64) -> f64 {
        match &self.kind {
            ShapeKind::Circle => 1.0,
            ShapeKind::Ellipse { m, e2 } => {
                (1.0 - m) / (1.0 - e2 * theta.cos().powi(2)).sqrt()
            }
            ShapeKind::Overlap { cos_alpha } => {
                let s = theta.sin();
                cos_alpha * theta.cos() + (1.0 - s * s * cos_alpha * cos_alpha).sqrt()
            }
            ShapeKind::Custom { r, .. } => r.eval(theta).expect("theta within [0, pi/2]"),
        }
    }

    /// dr/dtheta on [0, pi/2].
    pub fn rp(&self, theta: f64) -> f64 {
        match &self.kind {
            ShapeKind::Circle => 0.0,
            ShapeKind::Ellipse { m, e2 } => {
                let q = 1.0 - e2 * theta.cos().powi(2);
                -(1.0 - m) / 2.0 * q.powf(-1.5) * e2 * (2.0 * theta).sin()
            }
            ShapeKind::Overlap { cos_alpha } => {
                let (s, c) = theta.sin_cos();
                let q = (1.0 - s * s * cos_alpha * cos_alpha).sqrt();
                -cos_alpha * s - s * c * cos_alpha * cos_alpha / q
            }
            ShapeKind::Custom { rp, .. } => rp.eval(theta).expect("theta within [0, pi/2]"),
        }
    }

    /// d2r/dtheta2 on [0, pi/2].
    pub fn rpp(&self, theta: f64) -> f64 {
        match &self.kind {
            ShapeKind::Circle => 0.0,
            ShapeKind::Ellipse { m, e2 } => {
                let q = 1.0 - e2 * theta.cos().powi(2);
                let s2 = (2.0 * theta).sin();
                -(1.0 - m) / 2.0
                    * (-(1.5) * q.powf(-2.5) * (e2 * s2) * (e2 * s2)
                        + 2.0 * q.powf(-1.5) * e2 * (2.0 * theta).cos())
            }
            ShapeKind::Overlap { cos_alpha } => {
                let (s, c) = theta.sin_cos();
                let ca2 = cos_alpha * cos_alpha;
                let q = (1.0 - s * s * ca2).sqrt();
                -cos_alpha * c - ca2 * ((2.0 * theta).cos() / q + s * s * c * c * ca2 / (q * q * q))
            }
            ShapeKind::Custom { rpp, .. } => rpp.eval(theta).expect("theta within [0, pi/2]"),
        }
    }

    /// z(u) = r(u) e^{iu} on the first quadrant.
    pub fn z(&self, u: f64) -> Complex64 {
        Complex64::from_polar(self.r(u), u)
    }

    /// dz/du on the first quadrant.
    pub fn zp(&self, u: f64) -> Complex64 {
        let (s, c) = u.sin_cos();
        let r = self.r(u);
        let rp = self.rp(u);
        Complex64::new(rp * c - r * s, rp * s + r * c)
    }

    /// d2z/du2 on the first quadrant.
    pub fn zpp(&self, u: f64) -> Complex64 {
        let r = self.r(u);
        let rp = self.rp(u);
        let rpp = self.rpp(u);
        Complex64::new(rpp - r, 2.0 * rp) * Complex64::from_polar(1.0, u)
    }

    /// Boundary point and tangent dz/dtheta anywhere on [0, 2 pi], using the
    /// mirror extension of r. At the corner (theta = pi/2 with a corner
    /// present) the tangent is the one-sided limit from below.
    pub fn boundary_point(&self, theta: f64) -> (Complex64, Complex64) {
        let (q, u) = fold_angle(theta);
        (
            extend_value(self.z(u), q),
            extend_theta_derivative(self.zp(u), q),
        )
    }
}

/// Quadrant index and first-quadrant angle for theta in [0, 2 pi].
/// Quadrants: 0: [0, pi/2], 1: [pi/2, pi] (u = pi - theta),
/// 2: [pi, 3 pi/2] (u = theta - pi), 3: [3 pi/2, 2 pi] (u = 2 pi - theta).
pub(crate) fn fold_angle(theta: f64) -> (usize, f64) {
    let t = theta.rem_euclid(2.0 * PI);
    if t <= FRAC_PI_2 {
        (0, t)
    } else if t <= PI {
        (1, PI - t)
    } else if t <= 1.5 * PI {
        (2, t - PI)
    } else {
        (3, 2.0 * PI - t)
    }
}

/// Extension of a plate-symmetric boundary function (z, the Goursat function,
/// or the auxiliary h all transform the same way) from quadrant 0 to image
/// quadrant `q`.
pub(crate) fn extend_value(v: Complex64, q: usize) -> Complex64 {
    match q {
        0 => v,
        1 => -v.conj(),
        2 => -v,
        _ => v.conj(),
    }
}

/// Extension of d/dtheta of a plate-symmetric boundary function.
pub(crate) fn extend_theta_derivative(v: Complex64, q: usize) -> Complex64 {
    match q {
        0 => v,
        1 => v.conj(),
        2 => -v,
        _ => -v.conj(),
    }
}
