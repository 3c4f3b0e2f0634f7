use num_complex::Complex64;
use proptest::prelude::*;
use sparse_edge::linalg::tridiagonal::{goe_tridiagonal, Tridiagonal};
use sparse_edge::linalg::{eigh, m_sc, stieltjes_mn, ComplexPoint, Spectrum, SymMatrix};
use sparse_edge::rng::{trial_rng, Stream};
use sparse_edge::{eigenvalues, green_matrix};

fn sym_strategy(max_n: usize) -> impl Strategy<Value = SymMatrix> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(-2.0f64..2.0, n * n).prop_map(move |v| SymMatrix::from_lower_fn(n, |i, j| v[i * n + j]))
    })
}

/// Orthogonal matrix as a product of Householder reflectors.
fn orthogonal(n: usize, vs: &[Vec<f64>]) -> Vec<f64> {
    let mut q = vec![0.0; n * n];
    for i in 0..n {
        q[i * n + i] = 1.0;
    }
    for v in vs {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        if norm2 < 1e-8 {
            continue;
        }
        // q <- q (I - 2 v v^T / |v|^2)
        for r in 0..n {
            let row = &mut q[r * n..(r + 1) * n];
            let dot: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
            let f = 2.0 * dot / norm2;
            for (x, vi) in row.iter_mut().zip(v) {
                *x -= f * vi;
            }
        }
    }
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn eigenvalues_match_inertia_counts(h in sym_strategy(8)) {
        let s = eigenvalues(&h).unwrap();
        let n = h.n();
        let scale = 1.0 + h.max_abs() * n as f64;
        for (k, &lam) in s.values().iter().enumerate() {
            // λ_k is the (k+1)-th largest: N-k-1 eigenvalues lie strictly below λ_k - δ.
            let below = h.count_below(lam - 1e-9 * scale);
            let above = n - h.count_below(lam + 1e-9 * scale);
            prop_assert!(below < n - k);
            prop_assert!(above <= k + 1);
        }
    }

    #[test]
    fn sum_rules(h in sym_strategy(12)) {
        let s = eigenvalues(&h).unwrap();
        prop_assert!((s.sum() - h.trace()).abs() <= 1e-10 * (1.0 + h.frobenius_sq().sqrt()));
        prop_assert!((s.sum_sq() - h.frobenius_sq()).abs() <= 1e-10 * (1.0 + h.frobenius_sq()));
    }

    #[test]
    fn spectrum_is_orthogonally_invariant(
        h in sym_strategy(10),
        seed in prop::collection::vec(prop::collection::vec(-1.0f64..1.0, 10), 3),
    ) {
        let n = h.n();
        let vs: Vec<Vec<f64>> = seed.iter().map(|v| v[..n].to_vec()).collect();
        let q = orthogonal(n, &vs);
        let a = eigenvalues(&h).unwrap();
        let b = eigenvalues(&h.conjugate(&q)).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!((x - y).abs() <= 1e-10 * (1.0 + h.max_abs() * n as f64));
        }
    }

    #[test]
    fn cauchy_interlacing(h in sym_strategy(10)) {
        let n = h.n();
        prop_assume!(n >= 2);
        let sub = SymMatrix::from_lower_fn(n - 1, |i, j| h.get(i, j));
        let a = eigenvalues(&h).unwrap();
        let b = eigenvalues(&sub).unwrap();
        let tol = 1e-10 * (1.0 + h.max_abs() * n as f64);
        for k in 0..n - 1 {
            prop_assert!(a.lambda(k + 1) + tol >= b.lambda(k + 1));
            prop_assert!(b.lambda(k + 1) + tol >= a.lambda(k + 2));
        }
    }

    #[test]
    fn eigenvectors_satisfy_the_eigen_equation(h in sym_strategy(9)) {
        let e = eigh(&h).unwrap();
        for k in 0..h.n() {
            let v = e.vector(k);
            let hv = h.matvec(&v);
            let lam = e.spectrum.lambda(k + 1);
            let res: f64 = hv.iter().zip(&v).map(|(a, b)| (a - lam * b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(res <= 1e-10 * (1.0 + h.max_abs() * h.n() as f64));
        }
    }

    #[test]
    fn stieltjes_is_herglotz(points in prop::collection::vec(-3.0f64..3.0, 1..20), e in -4.0f64..4.0, eta in 1e-6f64..5.0) {
        let s = Spectrum::new(points);
        let z = ComplexPoint::new(e, eta).unwrap();
        let m = stieltjes_mn(&s, z);
        prop_assert!(m.im > 0.0);
        prop_assert!(m.norm() <= 1.0 / eta + 1e-12);
    }

    #[test]
    fn m_sc_solves_its_quadratic(e in -10.0f64..10.0, eta in 1e-9f64..10.0) {
        let z = ComplexPoint::new(e, eta).unwrap();
        let m = m_sc(z);
        let res = m * m + z.z() * m + Complex64::new(1.0, 0.0);
        prop_assert!(res.norm() <= 1e-13 * (1.0 + m.norm() * z.z().norm()));
        prop_assert!(m.im > 0.0);
    }

    #[test]
    fn sturm_count_matches_dense(diag in prop::collection::vec(-2.0f64..2.0, 1..12), x in -3.0f64..3.0) {
        let n = diag.len();
        let off: Vec<f64> = (1..n).map(|i| 0.3 + 0.1 * i as f64).collect();
        let t = Tridiagonal::new(diag.clone(), off.clone());
        let dense = SymMatrix::from_lower_fn(n, |i, j| {
            if i == j { diag[i] } else if i == j + 1 { off[j] } else { 0.0 }
        });
        let s = eigenvalues(&dense).unwrap();
        let tol = 1e-9;
        if s.values().iter().all(|l| (l - x).abs() > tol) {
            prop_assert_eq!(t.count_below(x), s.values().iter().filter(|&&l| l < x).count());
        }
    }
}

#[test]
fn ward_identity_on_samples() {
    use sparse_edge::{sample, EnsembleKind, EnsembleSpec};
    let spec = EnsembleSpec::new(EnsembleKind::SignedSparse, 150, 4.0, 11).unwrap();
    for trial in 0..3 {
        let s = sample(&spec, trial).unwrap();
        let z = ComplexPoint::new(-0.3, 0.02).unwrap();
        let g = green_matrix(&s.h, z);
        for i in 0..s.n() {
            let lhs: f64 = g.row(i).iter().map(|v| v.norm_sqr()).sum();
            let rhs = g.get(i, i).im / z.eta;
            assert!(((lhs - rhs) / rhs).abs() < 1e-9);
        }
        let tr = g.trace() / s.n() as f64;
        let via_spectrum = stieltjes_mn(&eigenvalues(&s.h).unwrap(), z);
        assert!((tr - via_spectrum).norm() < 1e-9);
    }
}

#[test]
fn goe_tridiagonal_matches_semicircle_edge() {
    let mut tops = Vec::new();
    for j in 0..20 {
        let mut rng = trial_rng(5, j, Stream::GoeReference);
        let t = goe_tridiagonal(400, &mut rng);
        let top = t.kth_largest(1);
        let full = t.spectrum().unwrap();
        assert!((full.largest() - top).abs() < 1e-10);
        tops.push(top);
    }
    let mean = tops.iter().sum::<f64>() / tops.len() as f64;
    // E λ₁ ≈ 2 − 1.21 N^{−2/3}.
    assert!((mean - (2.0 - 1.21 * 400f64.powf(-2.0 / 3.0))).abs() < 0.03, "{mean}");
}
