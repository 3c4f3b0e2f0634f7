//! Resolvent `G(z) = (H - z)^{-1}` via complex-symmetric `LDL^T`.
//!
//! `H - z` has imaginary part `-η I`, so every leading principal minor is
//! nonsingular and the factorization needs no pivoting.

use num_complex::Complex64;

use super::{ComplexPoint, SymMatrix};

/// Dense complex symmetric matrix, full row-major storage.
#[derive(Debug, Clone)]
pub struct ComplexSymMatrix {
    n: usize,
    data: Vec<Complex64>,
}

impl ComplexSymMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `max_ij |((H - z) G - I)_ij|`.
    pub fn inverse_residual(&self, h: &SymMatrix, z: Complex64) -> f64 {
        let n = self.n;
        let mut worst = 0.0_f64;
        for i in 0..n {
            let hi = h.row(i);
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += hi[k] * self.get(k, j);
                }
                s -= z * self.get(i, j);
                if i == j {
                    s -= 1.0;
                }
                worst = worst.max(s.norm());
            }
        }
        worst
    }
}

/// `G(z) = (H - z)^{-1}` for `η > 0`.
pub fn green_matrix(h: &SymMatrix, z: ComplexPoint) -> ComplexSymMatrix {
    let n = h.n();
    let zc = z.z();
    // In-place LDL^T of A = H - z: unit lower L stored below the diagonal, D on it.
    let mut a: Vec<Complex64> = h.as_slice().iter().map(|&x| Complex64::new(x, 0.0)).collect();
    for i in 0..n {
        a[i * n + i] -= zc;
    }
    let mut dinv = vec![Complex64::new(0.0, 0.0); n];
    let mut work = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        // work[k] = L_jk D_k for k < j
        for k in 0..j {
            work[k] = a[j * n + k] * a[k * n + k];
        }
        let row_j = &a[j * n..j * n + j];
        let djj = a[j * n + j] - row_j.iter().zip(&work[..j]).map(|(l, w)| l * w).sum::<Complex64>();
        a[j * n + j] = djj;
        dinv[j] = djj.inv();
        for i in j + 1..n {
            let row_i = &mut a[i * n..(i + 1) * n];
            let s: Complex64 = row_i[..j].iter().zip(&work[..j]).map(|(l, w)| l * w).sum();
            row_i[j] = (row_i[j] - s) * dinv[j];
        }
    }

    // L^T in row-major for the back substitution.
    let mut lt = vec![Complex64::new(0.0, 0.0); n * n];
    for i in 0..n {
        for k in 0..i {
            lt[k * n + i] = a[i * n + k];
        }
    }

    // Column j of G for rows i >= j: forward L y = e_j, scale by D^{-1},
    // back L^T x = y stopping at row j. Symmetry fills the rest.
    let mut g = vec![Complex64::new(0.0, 0.0); n * n];
    let mut y = vec![Complex64::new(0.0, 0.0); n];
    for j in 0..n {
        y[j] = Complex64::new(1.0, 0.0);
        for i in j + 1..n {
            let row = &a[i * n + j..i * n + i];
            y[i] = -row.iter().zip(&y[j..i]).map(|(l, v)| l * v).sum::<Complex64>();
        }
        for i in j..n {
            y[i] *= dinv[i];
        }
        for i in (j..n).rev() {
            let row = &lt[i * n + i + 1..(i + 1) * n];
            let s: Complex64 = row.iter().zip(&y[i + 1..n]).map(|(l, v)| l * v).sum();
            y[i] -= s;
        }
        for i in j..n {
            g[i * n + j] = y[i];
            g[j * n + i] = y[i];
        }
    }
    ComplexSymMatrix { n, data: g }
}
