//! Boundary representation of the decaying Goursat function: a Chebyshev
//! series on [0, pi/2] for the real and imaginary parts, optionally augmented
//! with a fractional-power corner term, plus the symmetry extension to the
//! full boundary.

use crate::chebyshev::cheb_t_all;
use crate::error::{Error, Result};
use crate::shapes::{extend_value, fold_angle};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;

/// Coefficients of the boundary Goursat function.
///
/// Without a corner term all `n` coefficients per part are Chebyshev. With a
/// corner term, indices 0..n-2 are Chebyshev and index n-1 multiplies
/// (pi/2 - theta)^exponent; the layout is fixed so the assembled system's
/// column mapping is unambiguous.
#[derive(Debug, Clone, PartialEq)]
pub struct AugmentedGoursat {
    /// Real-part coefficients a_0..a_{n-1}.
    pub a: Vec<f64>,
    /// Imaginary-part coefficients b_0..b_{n-1}.
    pub b: Vec<f64>,
    /// Corner power lambda - 1, when the basis carries a corner term.
    pub corner_exponent: Option<f64>,
}

/// Serialized form: {"N": .., "lambda": .., "a": [..], "b": [..]}.
#[derive(Serialize, Deserialize)]
struct GoursatJson {
    #[serde(rename = "N")]
    n: usize,
    lambda: Option<f64>,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl AugmentedGoursat {
    pub fn new(a: Vec<f64>, b: Vec<f64>, corner_exponent: Option<f64>) -> Self {
        assert_eq!(a.len(), b.len(), "coefficient arrays must match in length");
        AugmentedGoursat {
            a,
            b,
            corner_exponent,
        }
    }

    pub fn n_basis(&self) -> usize {
        self.a.len()
    }

    fn check_domain(theta: f64) -> Result<()> {
        if !(-1e-12..=FRAC_PI_2 + 1e-12).contains(&theta) {
            return Err(Error::Domain(format!(
                "theta {theta} outside [0, pi/2]"
            )));
        }
        Ok(())
    }

    /// phi(theta) on [0, pi/2]: Clenshaw on both Chebyshev parts plus the
    /// corner terms.
    pub fn eval_phi(&self, theta: f64) -> Result<Complex64> {
        Self::check_domain(theta)?;
        let basis = eval_basis(self.n_basis(), self.corner_exponent, theta);
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..self.n_basis() {
            re += self.a[k] * basis.b[k];
            im += self.b[k] * basis.b[k];
        }
        Ok(Complex64::new(re, im))
    }

    /// d phi / d theta. With a corner term of power p < 1 the derivative
    /// diverges at theta = pi/2 and evaluation there is an error.
    pub fn eval_dphi(&self, theta: f64) -> Result<Complex64> {
        Self::check_domain(theta)?;
        self.check_corner_singularity(theta, 1.0)?;
        let basis = eval_basis(self.n_basis(), self.corner_exponent, theta);
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..self.n_basis() {
            re += self.a[k] * basis.bp[k];
            im += self.b[k] * basis.bp[k];
        }
        Ok(Complex64::new(re, im))
    }

    /// d2 phi / d theta2, with the analogous corner restriction (p < 2).
    pub fn eval_d2phi(&self, theta: f64) -> Result<Complex64> {
        Self::check_domain(theta)?;
        self.check_corner_singularity(theta, 2.0)?;
        let basis = eval_basis(self.n_basis(), self.corner_exponent, theta);
        let mut re = 0.0;
        let mut im = 0.0;
        for k in 0..self.n_basis() {
            re += self.a[k] * basis.bpp[k];
            im += self.b[k] * basis.bpp[k];
        }
        Ok(Complex64::new(re, im))
    }

    fn check_corner_singularity(&self, theta: f64, order: f64) -> Result<()> {
        if let Some(p) = self.corner_exponent {
            if p < order && FRAC_PI_2 - theta < 1e-14 {
                return Err(Error::SingularEvaluation(format!(
                    "corner term (pi/2 - theta)^{p} has unbounded derivative of \
                     order {order} at theta = pi/2"
                )));
            }
        }
        Ok(())
    }

    /// phi extended to [0, 2 pi] by the plate symmetry.
    pub fn extend(&self, theta: f64) -> Result<Complex64> {
        let (q, u) = fold_angle(theta);
        Ok(extend_value(self.eval_phi(u)?, q))
    }

    pub fn to_json(&self) -> Result<String> {
        let j = GoursatJson {
            n: self.n_basis(),
            lambda: self.corner_exponent.map(|p| p + 1.0),
            a: self.a.clone(),
            b: self.b.clone(),
        };
        Ok(serde_json::to_string_pretty(&j)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let j: GoursatJson = serde_json::from_str(text)?;
        if j.a.len() != j.n || j.b.len() != j.n {
            return Err(Error::InvalidData(format!(
                "coefficient arrays (lengths {}, {}) do not match N = {}",
                j.a.len(),
                j.b.len(),
                j.n
            )));
        }
        Ok(AugmentedGoursat::new(j.a, j.b, j.lambda.map(|l| l - 1.0)))
    }
}

/// Values and theta-derivatives of the whole basis at one angle.
pub(crate) struct BasisEval {
    pub b: Vec<f64>,
    pub bp: Vec<f64>,
    pub bpp: Vec<f64>,
}

/// Evaluate all basis functions at theta in [0, pi/2]: Chebyshev polynomials
/// mapped to the quadrant, with the last index replaced by the corner term
/// (pi/2 - theta)^p when `corner_exponent` is set. Derivatives of the corner
/// term are analytic, never spectral.
pub(crate) fn eval_basis(n_basis: usize, corner_exponent: Option<f64>, theta: f64) -> BasisEval {
    let n_cheb = match corner_exponent {
        Some(_) => n_basis - 1,
        None => n_basis,
    };
    let mut b = vec![0.0; n_basis];
    let mut bp = vec![0.0; n_basis];
    let mut bpp = vec![0.0; n_basis];
    if n_cheb > 0 {
        let x = 4.0 * theta / std::f64::consts::PI - 1.0;
        let scale = 4.0 / std::f64::consts::PI;
        let mut t = vec![0.0; n_cheb];
        let mut tp = vec![0.0; n_cheb];
        let mut tpp = vec![0.0; n_cheb];
        cheb_t_all(n_cheb - 1, x, &mut t, &mut tp, &mut tpp);
        for k in 0..n_cheb {
            b[k] = t[k];
            bp[k] = tp[k] * scale;
            bpp[k] = tpp[k] * scale * scale;
        }
    }
    if let Some(p) = corner_exponent {
        let d = FRAC_PI_2 - theta;
        let k = n_basis - 1;
        if d > 0.0 {
            b[k] = d.powf(p);
            bp[k] = -p * d.powf(p - 1.0);
            bpp[k] = p * (p - 1.0) * d.powf(p - 2.0);
        } else {
            // value of the corner term at its own vertex (p > 0)
            b[k] = 0.0;
            bp[k] = f64::NAN;
            bpp[k] = f64::NAN;
        }
    }
    BasisEval { b, bp, bpp }
}
