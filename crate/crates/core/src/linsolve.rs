//! Dense least squares for overdetermined real systems via Householder
//! orthogonalization, with optional column pivoting for the ill-conditioned
//! corner-augmented systems.

use crate::error::{Error, Result};

/// Provenance of an assembled row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RowLabel {
    /// Real/imaginary part of the boundary integro-differential equation at
    /// collocation point i.
    IntegralRe(usize),
    IntegralIm(usize),
    /// Real/imaginary part of the analyticity constraint at collocation
    /// point i.
    AnalyticityRe(usize),
    AnalyticityIm(usize),
    /// Re phi(pi/2) = 0.
    EndRealAtHalfPi,
    /// Im phi(0) = 0.
    EndImagAtZero,
}

/// Row-major dense system A x ~ rhs with m >= n.
#[derive(Debug, Clone)]
pub struct DenseSystem {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
    pub rhs: Vec<f64>,
    pub row_labels: Vec<RowLabel>,
}

impl DenseSystem {
    pub fn new(data: Vec<f64>, rows: usize, cols: usize, rhs: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        assert_eq!(rhs.len(), rows);
        DenseSystem {
            data,
            rows,
            cols,
            rhs,
            row_labels: Vec::new(),
        }
    }

    pub fn with_labels(mut self, labels: Vec<RowLabel>) -> Self {
        assert_eq!(labels.len(), self.rows);
        self.row_labels = labels;
        self
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut f64 {
        &mut self.data[i * self.cols + j]
    }

    /// Residual vector A x - rhs.
    pub fn residual(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut s = -self.rhs[i];
                for j in 0..self.cols {
                    s += self.at(i, j) * x[j];
                }
                s
            })
            .collect()
    }

    fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }
}

/// Least-squares solution of the system.
#[derive(Debug, Clone)]
pub struct LstsqOutcome {
    pub x: Vec<f64>,
    /// Euclidean norm of A x - rhs.
    pub residual_norm: f64,
    /// Ratio of extreme diagonal magnitudes of the triangular factor;
    /// reported, not acted upon.
    pub condition_estimate: f64,
}

/// Minimize ||A x - rhs|| by Householder QR. With `pivot` set, columns are
/// swapped to bring the largest remaining norm to the front at each step.
/// A diagonal of the triangular factor below 1e-12 * ||A|| is reported as
/// rank deficiency (index in the original column order).
pub fn lstsq(sys: &DenseSystem, pivot: bool) -> Result<LstsqOutcome> {
    let m = sys.rows;
    let n = sys.cols;
    if m < n {
        return Err(Error::InvalidArgument(format!(
            "system has fewer rows ({m}) than columns ({n})"
        )));
    }
    let threshold = 1e-12 * sys.frobenius_norm();
    let mut a = sys.data.clone();
    let mut b = sys.rhs.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let idx = |i: usize, j: usize| i * n + j;

    let mut diag = vec![0.0; n];
    for k in 0..n {
        if pivot {
            // column with largest remaining norm
            let mut best = k;
            let mut best_norm = -1.0;
            for j in k..n {
                let nj: f64 = (k..m).map(|i| a[idx(i, j)] * a[idx(i, j)]).sum();
                if nj > best_norm {
                    best_norm = nj;
                    best = j;
                }
            }
            if best != k {
                for i in 0..m {
                    a.swap(idx(i, k), idx(i, best));
                }
                perm.swap(k, best);
            }
        }
        // Householder vector for column k
        let mut norm: f64 = (k..m).map(|i| a[idx(i, k)] * a[idx(i, k)]).sum();
        norm = norm.sqrt();
        if norm < threshold {
            return Err(Error::RankDeficient {
                index: perm[k],
                value: norm,
                threshold,
            });
        }
        let alpha = if a[idx(k, k)] >= 0.0 { -norm } else { norm };
        let mut v = vec![0.0; m - k];
        v[0] = a[idx(k, k)] - alpha;
        for i in k + 1..m {
            v[i - k] = a[idx(i, k)];
        }
        let vtv: f64 = v.iter().map(|x| x * x).sum();
        a[idx(k, k)] = alpha;
        diag[k] = alpha;
        for i in k + 1..m {
            a[idx(i, k)] = 0.0;
        }
        if vtv > 0.0 {
            let beta = 2.0 / vtv;
            for j in k + 1..n {
                let dot: f64 = (k..m).map(|i| v[i - k] * a[idx(i, j)]).sum();
                let c = beta * dot;
                for i in k..m {
                    a[idx(i, j)] -= c * v[i - k];
                }
            }
            let dot: f64 = (k..m).map(|i| v[i - k] * b[i]).sum();
            let c = beta * dot;
            for i in k..m {
                b[i] -= c * v[i - k];
            }
        }
    }

    // back substitution on R x = Q^T b
    let mut y = vec![0.0; n];
    for k in (0..n).rev() {
        let mut s = b[k];
        for j in k + 1..n {
            s -= a[idx(k, j)] * y[j];
        }
        y[k] = s / diag[k];
    }
    let mut x = vec![0.0; n];
    for (k, &p) in perm.iter().enumerate() {
        x[p] = y[k];
    }
    let residual_norm = b[n..m].iter().map(|v| v * v).sum::<f64>().sqrt();
    let dmax = diag.iter().map(|d| d.abs()).fold(0.0, f64::max);
    let dmin = diag.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min);
    Ok(LstsqOutcome {
        x,
        residual_norm,
        condition_estimate: dmax / dmin,
    })
}
