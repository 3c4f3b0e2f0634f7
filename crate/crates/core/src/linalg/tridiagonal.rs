//! Symmetric tridiagonal matrices: Sturm counts, bisection, and the
//! Dumitriu–Edelman model of the GOE.

use rand::Rng;
use rand_distr::{ChiSquared, Distribution, StandardNormal};

use super::eigen::ql_implicit;
use super::Spectrum;
use crate::error::Result;

/// Symmetric tridiagonal matrix: `diag[i]` and `off[i] = T[i+1][i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(off.len() + 1, diag.len().max(1));
        Self { diag, off }
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        let mut count = 0;
        let mut d = 1.0_f64;
        for i in 0..self.n() {
            let e2 = if i == 0 { 0.0 } else { self.off[i - 1] * self.off[i - 1] };
            d = self.diag[i] - x - if i == 0 { 0.0 } else { e2 / d };
            if d == 0.0 {
                d = -f64::EPSILON * (self.diag[i].abs() + x.abs() + 1.0);
            }
            if d < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.n();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.off[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    /// `λ_k` (1-based, descending) by bisection on the Sturm count.
    pub fn kth_largest(&self, k: usize) -> f64 {
        let n = self.n();
        assert!(k >= 1 && k <= n);
        let (mut lo, mut hi) = self.gershgorin();
        let scale = lo.abs().max(hi.abs()).max(f64::MIN_POSITIVE);
        // λ_k is the (n-k+1)-th smallest: count_below(x) ≥ n-k+1 iff x > λ_k.
        let target = n - k + 1;
        while hi - lo > 4.0 * f64::EPSILON * scale {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) >= target {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Full spectrum via implicit QL.
    pub fn spectrum(&self) -> Result<Spectrum> {
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        ql_implicit(&mut d, &mut e, None)?;
        Ok(Spectrum::new(d))
    }
}

/// Tridiagonal matrix with the same spectral law as an `n × n` GOE matrix
/// whose off-diagonal entries have variance `1/n` and diagonal `2/n`.
pub fn goe_tridiagonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tridiagonal {
    let s = (1.0 / n as f64).sqrt();
    let diag = (0..n)
        .map(|_| {
            let g: f64 = StandardNormal.sample(rng);
            g * 2f64.sqrt() * s
        })
        .collect();
    let off = (1..n)
        .map(|i| {
            let dof = (n - i) as f64;
            let c: f64 = ChiSquared::new(dof).expect("positive dof").sample(rng);
            c.sqrt() * s
        })
        .collect();
    Tridiagonal::new(diag, off)
}
