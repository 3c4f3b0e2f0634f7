//! Householder tridiagonalization followed by implicit-shift QL.
//!
//! The eigenvalue-only path fuses the rank-2 update of one Householder step
//! with the symmetric matrix-vector product of the next, so the trailing
//! lower triangle is streamed once per step.

use super::{Spectrum, SymMatrix};
use crate::error::{Error, Result};

/// Full symmetric eigendecomposition; only meant for small matrices.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub spectrum: Spectrum,
    /// Row-major `n × n`; column `k` is the eigenvector of `spectrum.lambda(k + 1)`.
    pub vectors: Vec<f64>,
}

impl Eigh {
    pub fn vector(&self, k: usize) -> Vec<f64> {
        let n = self.spectrum.n();
        (0..n).map(|i| self.vectors[i * n + k]).collect()
    }
}

/// All eigenvalues of `h`, sorted descending.
pub fn eigenvalues(h: &SymMatrix) -> Result<Spectrum> {
    let (mut d, e) = tridiagonalize(h);
    let mut e = extend_offdiag(e, d.len());
    ql_implicit(&mut d, &mut e, None)?;
    Ok(Spectrum::new(d))
}

/// Eigenvalues and eigenvectors of `h`.
pub fn eigh(h: &SymMatrix) -> Result<Eigh> {
    let n = h.n();
    let mut a = h.as_slice().to_vec();
    let mut reflectors = Vec::new();
    let (mut d, e) = householder(&mut a, n, Some(&mut reflectors));
    let mut q = identity(n);
    for (k, (v, beta)) in reflectors.iter().enumerate() {
        // q <- q (I - beta v v^T), with v supported on k+1..n
        let lo = k + 1;
        for row in q.chunks_exact_mut(n) {
            let s: f64 = row[lo..].iter().zip(v).map(|(x, y)| x * y).sum::<f64>() * beta;
            for (x, y) in row[lo..].iter_mut().zip(v) {
                *x -= s * y;
            }
        }
    }
    let mut e = extend_offdiag(e, n);
    ql_implicit(&mut d, &mut e, Some(&mut q))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[b].total_cmp(&d[a]));
    let mut vectors = vec![0.0; n * n];
    for (col, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[i * n + col] = q[i * n + src];
        }
    }
    Ok(Eigh { spectrum: Spectrum::new(d), vectors })
}

/// Reduces `h` to symmetric tridiagonal form: diagonal `d` (length `n`) and
/// subdiagonal `e` (length `n - 1`), with `e[k] = T[k + 1][k]`.
pub fn tridiagonalize(h: &SymMatrix) -> (Vec<f64>, Vec<f64>) {
    let mut a = h.as_slice().to_vec();
    householder(&mut a, h.n(), None)
}

fn identity(n: usize) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    q
}

fn extend_offdiag(mut e: Vec<f64>, n: usize) -> Vec<f64> {
    e.resize(n, 0.0);
    e
}

/// Builds the reflector annihilating column `k` below the subdiagonal.
/// Writes `v` on `k+1..n`, returns `(alpha, beta)` with `(I - beta v v^T) x = alpha e_1`.
fn reflector(a: &[f64], n: usize, k: usize, v: &mut [f64]) -> (f64, f64) {
    let x0 = a[(k + 1) * n + k];
    let mut sigma = 0.0;
    for i in k + 2..n {
        let x = a[i * n + k];
        v[i] = x;
        sigma += x * x;
    }
    if sigma == 0.0 {
        v[k + 1] = 0.0;
        return (x0, 0.0);
    }
    let norm = (x0 * x0 + sigma).sqrt();
    let alpha = if x0 >= 0.0 { -norm } else { norm };
    let v0 = x0 - alpha;
    v[k + 1] = v0;
    (alpha, 2.0 / (v0 * v0 + sigma))
}

fn householder(
    a: &mut [f64],
    n: usize,
    mut reflectors: Option<&mut Vec<(Vec<f64>, f64)>>,
) -> (Vec<f64>, Vec<f64>) {
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n.saturating_sub(1)];
    if n == 0 {
        return (d, e);
    }
    if n == 1 {
        d[0] = a[0];
        return (d, e);
    }

    let mut v = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut y = vec![0.0; n];
    let mut v_next = vec![0.0; n];
    let mut y_next = vec![0.0; n];

    let (alpha, mut beta) = reflector(a, n, 0, &mut v);
    e[0] = alpha;
    symv_lower(a, n, 1, &v, &mut y);

    for k in 0..n - 1 {
        d[k] = a[k * n + k];
        let lo = k + 1;
        if let Some(store) = reflectors.as_deref_mut() {
            store.push((v[lo..].to_vec(), beta));
        }

        // w = beta y - (beta^2 / 2)(y . v) v
        let yv: f64 = y[lo..].iter().zip(&v[lo..]).map(|(a, b)| a * b).sum();
        let kk = 0.5 * beta * beta * yv;
        for i in lo..n {
            w[i] = beta * y[i] - kk * v[i];
        }

        // Column k+1 of the updated trailing block feeds the next reflector.
        let (vk, wk) = (v[lo], w[lo]);
        for i in lo..n {
            a[i * n + lo] -= v[i] * wk + w[i] * vk;
        }
        if lo == n - 1 {
            d[lo] = a[lo * n + lo];
            break;
        }

        let (alpha_next, beta_next) = reflector(a, n, lo, &mut v_next);
        e[lo] = alpha_next;

        // Rank-2 update of rows lo+1.. fused with y_next = A_sub v_next.
        let start = lo + 1;
        y_next[start..].iter_mut().for_each(|x| *x = 0.0);
        for i in start..n {
            let (vi, wi, vni) = (v[i], w[i], v_next[i]);
            let row = &mut a[i * n + start..i * n + i + 1];
            let len = row.len() - 1;
            let (body, diag) = row.split_at_mut(len);
            let s = fused_row(
                body,
                &v[start..i],
                &w[start..i],
                &v_next[start..i],
                &mut y_next[start..i],
                vi,
                wi,
                vni,
            );
            let aii = diag[0] - 2.0 * vi * wi;
            diag[0] = aii;
            y_next[i] += s + aii * vni;
        }
        std::mem::swap(&mut v, &mut v_next);
        std::mem::swap(&mut y, &mut y_next);
        beta = beta_next;
    }
    (d, e)
}

/// One row of the fused update. Returns `sum_j a_ij vn_j` over the updated row.
#[inline(always)]
#[allow(clippy::too_many_arguments)]
fn fused_row(
    row: &mut [f64],
    v: &[f64],
    w: &[f64],
    vn: &[f64],
    yn: &mut [f64],
    vi: f64,
    wi: f64,
    vni: f64,
) -> f64 {
    const LANES: usize = 4;
    let len = row.len();
    let split = len - len % LANES;
    let mut acc = [0.0; LANES];
    let (rc, rr) = row.split_at_mut(split);
    let (yc, yr) = yn.split_at_mut(split);
    for ((((r, vj), wj), vnj), ynj) in rc
        .chunks_exact_mut(LANES)
        .zip(v.chunks_exact(LANES))
        .zip(w.chunks_exact(LANES))
        .zip(vn.chunks_exact(LANES))
        .zip(yc.chunks_exact_mut(LANES))
    {
        for l in 0..LANES {
            let x = r[l] - vi * wj[l] - wi * vj[l];
            r[l] = x;
            acc[l] += x * vnj[l];
            ynj[l] += x * vni;
        }
    }
    let mut s = (acc[0] + acc[1]) + (acc[2] + acc[3]);
    for (l, (r, y)) in rr.iter_mut().zip(yr.iter_mut()).enumerate() {
        let j = split + l;
        let x = *r - vi * w[j] - wi * v[j];
        *r = x;
        s += x * vn[j];
        *y += x * vni;
    }
    s
}

/// `y[lo..] = A[lo.., lo..] v[lo..]` reading the lower triangle only.
fn symv_lower(a: &[f64], n: usize, lo: usize, v: &[f64], y: &mut [f64]) {
    y[lo..].iter_mut().for_each(|x| *x = 0.0);
    for i in lo..n {
        let row = &a[i * n + lo..i * n + i];
        let vi = v[i];
        let mut s = 0.0;
        for (j, &aij) in row.iter().enumerate() {
            s += aij * v[lo + j];
            y[lo + j] += aij * vi;
        }
        y[i] += s + a[i * n + i] * vi;
    }
}

/// Implicit-shift QL on a symmetric tridiagonal matrix. `e[k] = T[k+1][k]`,
/// `e.len() == d.len()` with the last entry unused. When `z` is given the
/// rotations are accumulated into its columns (row-major `n × n`).
pub(crate) fn ql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut Vec<f64>>) -> Result<()> {
    let n = d.len();
    if n == 0 {
        return Ok(());
    }
    e[n - 1] = 0.0;
    let max_sweeps = 30 * n;
    let mut sweeps = 0usize;
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1 = 0.0_f64;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            loop {
                sweeps += 1;
                if sweeps > max_sweeps {
                    return Err(Error::NoConvergence(max_sweeps));
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for di in d.iter_mut().skip(l + 2) {
                    *di -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(z) = z.as_deref_mut() {
                        for row in z.chunks_exact_mut(n) {
                            let hk = row[i + 1];
                            row[i + 1] = s * row[i] + c * hk;
                            row[i] = c * row[i] - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}
