//! Shared fixtures for the benchmarks.

use sparse_edge::{sample, EnsembleKind, EnsembleSpec, SymMatrix};

/// Erdős–Rényi sample with `q = N^{1/6}`.
pub fn er_matrix(n: usize, seed: u64) -> SymMatrix {
    let q = (n as f64).powf(1.0 / 6.0);
    let spec = EnsembleSpec::new(EnsembleKind::ErdosRenyi, n, q, seed).expect("valid ensemble");
    sample(&spec, 0).expect("sample").h
}

/// ER polynomial with limiting cumulants `1/6`, `1/120`.
pub fn er_poly(q: f64) -> sparse_edge::SCPoly {
    sparse_edge::SCPoly::new(q, 0.0, 1.0 / 6.0, 1.0 / 120.0).expect("valid polynomial")
}
