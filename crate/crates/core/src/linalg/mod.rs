//! Dense symmetric linear algebra: eigenvalues, resolvents and Stieltjes
//! transforms.

mod eigen;
mod green;
mod stieltjes;
pub mod tridiagonal;

pub use eigen::{eigenvalues, eigh, tridiagonalize, Eigh};
pub use green::{green_matrix, ComplexSymMatrix};
pub use stieltjes::{m_sc, stieltjes_mn};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dense real symmetric matrix in full row-major storage.
///
/// Both triangles are stored and kept bitwise equal by every mutating method.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    /// Builds a matrix from the lower triangle; `f(i, j)` is called for `j <= i`.
    pub fn from_lower_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Wraps full row-major data, rejecting anything that is not exactly symmetric.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries, got {}",
                n * n,
                data.len()
            )));
        }
        let m = Self { n, data };
        if !m.is_symmetric() {
            return Err(Error::InvalidArgument("matrix is not symmetric".into()));
        }
        Ok(m)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    /// Sets `(i, j)` and `(j, i)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j).to_bits() == self.get(j, i).to_bits()))
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `sum_ij h_ij^2`.
    pub fn frobenius_sq(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `a * self + b * other`, entrywise.
    pub fn affine_combination(&self, a: f64, other: &SymMatrix, b: f64) -> SymMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(x, y)| a * x + b * y)
            .collect();
        SymMatrix { n: self.n, data }
    }

    /// Number of eigenvalues strictly below `x`, from the inertia of an
    /// unpivoted `LDL^T` factorization of `H - x`.
    pub fn count_below(&self, x: f64) -> usize {
        let n = self.n;
        let mut a = self.data.clone();
        for i in 0..n {
            a[i * n + i] -= x;
        }
        let tiny = f64::EPSILON * (self.max_abs() + x.abs() + 1.0);
        let mut count = 0;
        for k in 0..n {
            let mut d = a[k * n + k];
            if d == 0.0 {
                d = -tiny;
            }
            if d < 0.0 {
                count += 1;
            }
            for i in k + 1..n {
                let l = a[i * n + k] / d;
                for j in k + 1..=i {
                    a[i * n + j] -= l * a[j * n + k];
                }
            }
        }
        count
    }

    /// `Q A Q^T` for a dense orthogonal `Q` given in row-major order.
    pub fn conjugate(&self, q: &[f64]) -> SymMatrix {
        let n = self.n;
        assert_eq!(q.len(), n * n);
        // tmp = A Q^T
        let mut tmp = vec![0.0; n * n];
        for i in 0..n {
            let ai = self.row(i);
            for j in 0..n {
                let qj = &q[j * n..(j + 1) * n];
                tmp[i * n + j] = ai.iter().zip(qj).map(|(a, b)| a * b).sum();
            }
        }
        SymMatrix::from_lower_fn(n, |i, j| {
            let qi = &q[i * n..(i + 1) * n];
            (0..n).map(|k| qi[k] * tmp[k * n + j]).sum()
        })
    }
}

/// Eigenvalues sorted in descending order, `λ₁ ≥ λ₂ ≥ … ≥ λ_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
}

impl Spectrum {
    /// Sorts the values descending.
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { eigenvalues: values }
    }

    pub fn n(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn values(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// `λ_k`, 1-based as in the usual labelling.
    pub fn lambda(&self, k: usize) -> f64 {
        self.eigenvalues[k - 1]
    }

    pub fn largest(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn smallest(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    pub fn top(&self, k: usize) -> &[f64] {
        &self.eigenvalues[..k.min(self.n())]
    }

    /// The `k` smallest values, smallest first.
    pub fn bottom(&self, k: usize) -> Vec<f64> {
        self.eigenvalues.iter().rev().take(k).copied().collect()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    pub fn sum_sq(&self) -> f64 {
        self.eigenvalues.iter().map(|x| x * x).sum()
    }
}

/// Spectral parameter `z = E + iη` with `η > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexPoint {
    pub e: f64,
    pub eta: f64,
}

impl ComplexPoint {
    pub fn new(e: f64, eta: f64) -> Result<Self> {
        if !(eta > 0.0) || !e.is_finite() || !eta.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "spectral parameter needs finite E and eta > 0, got E = {e}, eta = {eta}"
            )));
        }
        Ok(Self { e, eta })
    }

    #[inline]
    pub fn z(&self) -> Complex64 {
        Complex64::new(self.e, self.eta)
    }
}
