//! Fast invariant suite.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{exact_x_variance, moments};
use crate::ensemble::{sample, sample_x, EnsembleKind, EnsembleSpec};
use crate::error::Result;
use crate::freeconv::{free_conv_edge, SpectralMeasure};
use crate::linalg::{eigenvalues, green_matrix, m_sc, ComplexPoint, SymMatrix};
use crate::sce::{edge_expansion, stieltjes_m_inf, DensityEvaluator, SCPoly};

#[derive(Debug, Clone, Copy, Default)]
pub struct SelftestOptions {
    /// Flip the sign of the `a₂` term of `R(w)`.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestCheck {
    pub name: String,
    pub passed: bool,
    pub observed: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
    pub passed: bool,
}

fn check(name: &str, observed: f64, bound: f64) -> SelftestCheck {
    SelftestCheck { name: name.into(), passed: observed <= bound, observed, bound }
}

fn ward(seed: u64) -> Result<f64> {
    let spec = EnsembleSpec::new(EnsembleKind::ErdosRenyi, 200, 4.0, seed)?;
    let s = sample(&spec, 0)?;
    let z = ComplexPoint::new(0.4, 0.05)?;
    let g = green_matrix(&s.h, z);
    let mut worst = 0.0_f64;
    for i in 0..s.n() {
        let lhs: f64 = g.row(i).iter().map(|v| v.norm_sqr()).sum();
        let rhs = g.get(i, i).im / z.eta;
        worst = worst.max(((lhs - rhs) / rhs).abs());
    }
    Ok(worst)
}

fn m_sc_residual() -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    (0..10_000).fold(0.0_f64, |w, _| {
        let e = rng.random_range(-5.0..5.0);
        let eta = 5.0 * (1.0 - rng.random::<f64>());
        let z = ComplexPoint { e, eta };
        let m = m_sc(z);
        if m.im <= 0.0 {
            return f64::INFINITY;
        }
        w.max((1.0 + z.z() * m + m * m).norm())
    })
}

fn er_poly(q: f64, inject: bool) -> Result<SCPoly> {
    let p = SCPoly::new(q, 0.0, 1.0 / 6.0, 1.0 / 120.0)?;
    Ok(if inject { p.with_injected_fault() } else { p })
}

/// Largest `|L_root − L_expansion|·q⁶` and the worst distance of the dyadic
/// deviation ratio from the `[16, 256]` window.
fn expansion_checks(inject: bool) -> Result<(f64, f64)> {
    let qs = [8.0, 16.0, 32.0];
    let mut devs = Vec::new();
    let mut worst_scaled = 0.0_f64;
    for &q in &qs {
        let e = er_poly(q, inject)?.solve_edge()?;
        let (_, l_exp) = edge_expansion(1.0, 1.0, q, 0.0)?;
        devs.push((e.l - l_exp).abs());
        worst_scaled = worst_scaled.max((e.l - (2.0 + q.powi(-2) - 1.25 * q.powi(-4))).abs() * q.powi(6));
    }
    let mut ratio_miss = 0.0_f64;
    for w in devs.windows(2) {
        let r = w[0] / w[1];
        ratio_miss = ratio_miss.max(if r < 16.0 { 16.0 / r } else if r > 256.0 { r / 256.0 } else { 1.0 });
    }
    Ok((worst_scaled, ratio_miss))
}

fn inertia_oracle() -> Result<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0_f64;
    for n in 1..=8 {
        let h = SymMatrix::from_lower_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let spec = eigenvalues(&h)?;
        let r = 1.0 + n as f64;
        for k in 1..=n {
            // λ_k: the smallest x with count_below(x) >= n - k + 1
            let (mut lo, mut hi) = (-r, r);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if h.count_below(mid) > n - k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            worst = worst.max((spec.lambda(k) - 0.5 * (lo + hi)).abs());
        }
    }
    Ok(worst)
}

fn sum_rules() -> Result<f64> {
    let spec = EnsembleSpec::new(EnsembleKind::SignedSparse, 300, 5.0, 3)?;
    let s = sample(&spec, 0)?;
    let ev = eigenvalues(&s.h)?;
    let tr = (ev.sum() - s.h.trace()).abs() / s.h.trace().abs().max(1.0);
    let fro = (ev.sum_sq() - s.h.frobenius_sq()).abs() / s.h.frobenius_sq();
    Ok(tr.max(fro))
}

fn polynomial_residual(inject: bool) -> Result<(f64, f64)> {
    let poly = er_poly(5.0, inject)?.with_x(0.004);
    let mut worst = 0.0_f64;
    let mut min_im = f64::INFINITY;
    for i in 0..20 {
        for j in 0..20 {
            let e = -3.0 + 6.0 * i as f64 / 19.0;
            let eta = 1e-6 * (2.0f64 / 1e-6).powf(j as f64 / 19.0);
            let z = ComplexPoint { e, eta };
            let m = stieltjes_m_inf(&poly, z)?;
            worst = worst.max(poly.p(z.z(), m).norm());
            min_im = min_im.min(m.im);
        }
    }
    Ok((worst, min_im))
}

fn density_checks(inject: bool) -> Result<(f64, f64)> {
    let ev = DensityEvaluator::new(er_poly(5.0, inject)?)?;
    let mass = (ev.mass()? - 1.0).abs();
    let mut sym = 0.0_f64;
    for &e in &[0.2, 1.1, 1.9, 2.03] {
        sym = sym.max((ev.rho(e)? - ev.rho(-e)?).abs());
    }
    Ok((mass, sym))
}

fn x_clt() -> Result<(f64, f64)> {
    let n = 1000usize;
    let spec = EnsembleSpec::with_p(EnsembleKind::ErdosRenyi, n, (n as f64).powf(-0.72), 11)?;
    let scale = (n as f64).sqrt() * spec.q();
    let xs: Vec<f64> = (0..2000u64).into_par_iter().map(|i| sample_x(&spec, i).map(|x| scale * x)).collect::<Result<_>>()?;
    let (mean, var, _) = moments(&xs)?;
    let exact = exact_x_variance(&spec)?;
    Ok((mean.abs() / (exact / xs.len() as f64).sqrt(), (var / exact - 1.0).abs()))
}

pub fn run_selftest(opts: SelftestOptions) -> Result<SelftestReport> {
    let inject = opts.inject_fault;
    let mut checks = Vec::new();
    let w = ward(1)?.max(ward(2)?);
    checks.push(check("ward_identity_rel", w, 1e-9));
    checks.push(check("m_sc_quadratic_residual", m_sc_residual(), 1e-13));
    let mu = SpectralMeasure::semicircle(1.0)?;
    let (mut e_dev, mut g_dev) = (0.0_f64, 0.0_f64);
    for &t in &[0.01, 0.1, 0.5] {
        let fc = free_conv_edge(&mu, t)?;
        e_dev = e_dev.max((fc.e_plus - 2.0).abs());
        g_dev = g_dev.max((fc.gamma0 - 1.0).abs());
    }
    checks.push(check("semicircle_free_conv_E_plus", e_dev, 1e-8));
    checks.push(check("semicircle_free_conv_gamma0", g_dev, 1e-3));
    let (scaled, ratio_miss) = expansion_checks(inject)?;
    checks.push(check("er_edge_vs_corollary_q6_scaled", scaled, 10.0));
    checks.push(check("expansion_vs_root_ratio_window", ratio_miss, 1.0));
    checks.push(check("eigensolver_vs_inertia_bisection", inertia_oracle()?, 1e-9));
    checks.push(check("trace_frobenius_sum_rules", sum_rules()?, 1e-10));
    let (res, min_im) = polynomial_residual(inject)?;
    checks.push(check("self_consistent_residual", res, 1e-12));
    checks.push(check("herglotz_min_im_negated", -min_im, 0.0));
    let (mass, sym) = density_checks(inject)?;
    checks.push(check("density_mass", mass, 1e-6));
    checks.push(check("density_symmetry", sym, 1e-10));
    let (mean_se, var_rel) = x_clt()?;
    checks.push(check("x_clt_mean_in_se", mean_se, 4.0));
    checks.push(check("x_clt_variance_vs_exact_rel", var_rel, 0.1));
    let passed = checks.iter().all(|c| c.passed);
    Ok(SelftestReport { checks, passed })
}
