//! Chebyshev interpolation, Clenshaw evaluation, and spectral differentiation
//! on a general interval.
//!
//! Series use the plain-sum convention f(x) = sum c_k T_k(x). Interpolation
//! samples at Chebyshev points of the first kind (all nodes interior), which
//! keeps endpoint-singular shapes representable and golden files stable.

use crate::error::{Error, Result};

/// A truncated Chebyshev expansion on `interval`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChebSeries {
    pub coeffs: Vec<f64>,
    pub interval: (f64, f64),
}

impl ChebSeries {
    /// The first-kind Chebyshev interpolation nodes on (a, b), ascending.
    pub fn nodes(n: usize, a: f64, b: f64) -> Vec<f64> {
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        (0..n)
            .rev()
            .map(|j| {
                let x = (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos();
                mid + hw * x
            })
            .collect()
    }

    /// Degree-(n-1) interpolant of `f` through the n Chebyshev nodes of (a, b).
    pub fn interpolate<F: FnMut(f64) -> f64>(mut f: F, n: usize, a: f64, b: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "interpolate requires at least one node".into(),
            ));
        }
        if !(a < b) {
            return Err(Error::InvalidArgument(format!(
                "interpolate requires a < b, got a = {a}, b = {b}"
            )));
        }
        let mid = 0.5 * (a + b);
        let hw = 0.5 * (b - a);
        let mut samples = Vec::with_capacity(n);
        for j in 0..n {
            let angle = std::f64::consts::PI * (j as f64 + 0.5) / n as f64;
            let theta = mid + hw * angle.cos();
            let v = f(theta);
            if !v.is_finite() {
                return Err(Error::InvalidData(format!(
                    "non-finite sample {v} at node {j} (theta = {theta})"
                )));
            }
            samples.push(v);
        }
        let mut coeffs = vec![0.0; n];
        for (k, c) in coeffs.iter_mut().enumerate() {
            let mut s = 0.0;
            for (j, &fj) in samples.iter().enumerate() {
                s += fj * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos();
            }
            *c = s * 2.0 / n as f64;
        }
        coeffs[0] *= 0.5;
        Ok(ChebSeries {
            coeffs,
            interval: (a, b),
        })
    }

    pub fn from_samples_at_nodes(samples: &[f64], a: f64, b: f64) -> Result<Self> {
        let mut it = samples.iter();
        Self::interpolate(move |_| *it.next().expect("sample count"), samples.len(), a, b)
    }

    /// Clenshaw evaluation. `x` may touch the interval endpoints; anything
    /// beyond a relative 1e-12 slack is a domain error.
    pub fn eval(&self, x: f64) -> Result<f64> {
        let (a, b) = self.interval;
        let slack = 1e-12 * (b - a);
        if x < a - slack || x > b + slack {
            return Err(Error::Domain(format!(
                "evaluation point {x} outside [{a}, {b}]"
            )));
        }
        let u = ((2.0 * x - a - b) / (b - a)).clamp(-1.0, 1.0);
        Ok(clenshaw(&self.coeffs, u))
    }

    /// Series of the derivative, interval scaling included. The result keeps
    /// one fewer meaningful coefficient (a constant differentiates to the
    /// zero series of length 1).
    pub fn derivative(&self) -> ChebSeries {
        let n = self.coeffs.len();
        let (a, b) = self.interval;
        if n <= 1 {
            return ChebSeries {
                coeffs: vec![0.0],
                interval: self.interval,
            };
        }
        let mut der = vec![0.0; n - 1];
        // c'_{k-1} = c'_{k+1} + 2k c_k, downward
        let mut next = 0.0; // c'_{n-1}
        let mut cur = 2.0 * (n as f64 - 1.0) * self.coeffs[n - 1]; // c'_{n-2}
        der[n - 2] = cur;
        for k in (1..n - 1).rev() {
            let v = next + 2.0 * k as f64 * self.coeffs[k];
            next = cur;
            cur = v;
            der[k - 1] = v;
        }
        der[0] *= 0.5;
        let scale = 2.0 / (b - a);
        for d in der.iter_mut() {
            *d *= scale;
        }
        ChebSeries {
            coeffs: der,
            interval: self.interval,
        }
    }
}

fn clenshaw(c: &[f64], u: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &ck in c.iter().skip(1).rev() {
        let t = ck + 2.0 * u * b1 - b2;
        b2 = b1;
        b1 = t;
    }
    c[0] + u * b1 - b2
}

/// T_k(x), T'_k(x), T''_k(x) for k = 0..=kmax via coupled recurrences.
/// Derivatives are with respect to x on (-1, 1).
pub(crate) fn cheb_t_all(kmax: usize, x: f64, t: &mut [f64], tp: &mut [f64], tpp: &mut [f64]) {
    t[0] = 1.0;
    tp[0] = 0.0;
    tpp[0] = 0.0;
    if kmax == 0 {
        return;
    }
    t[1] = x;
    tp[1] = 1.0;
    tpp[1] = 0.0;
    for k in 1..kmax {
        t[k + 1] = 2.0 * x * t[k] - t[k - 1];
        tp[k + 1] = 2.0 * t[k] + 2.0 * x * tp[k] - tp[k - 1];
        tpp[k + 1] = 4.0 * tp[k] + 2.0 * x * tpp[k] - tpp[k - 1];
    }
}
