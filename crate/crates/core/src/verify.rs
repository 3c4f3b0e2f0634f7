//! Per-sample numerical diagnostics: local law, edge rigidity, eigenvalue
//! location and the edge counting law.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{green_matrix, m_sc, stieltjes_mn, ComplexPoint, Spectrum, SymMatrix};
use crate::sce::{counting_prediction, stieltjes_m_inf, DensityEvaluator, EdgeSolution, SCPoly};

/// Tunable exponents and thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct VerifyConfig {
    /// Slack exponent `ε` in `N^ε`.
    pub epsilon: f64,
    /// Domain exponent `𝔞` of the rigidity domain.
    pub domain_a: f64,
    /// Exponent `𝔠` of the eigenvalue-location bound.
    pub c_exp: f64,
    /// Relative tolerance of the counting law.
    pub counting_rel_tol: f64,
    /// Minimum predicted count for a conclusive counting check.
    pub counting_min_prediction: f64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self { epsilon: 0.1, domain_a: 0.1, c_exp: 0.15, counting_rel_tol: 0.25, counting_min_prediction: 20.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticReport {
    pub name: String,
    /// `bound − observed`; nonnegative exactly when the check passes.
    pub margin: f64,
    pub bound_used: f64,
    pub observed: f64,
    pub status: Status,
    pub params: BTreeMap<String, f64>,
}

impl DiagnosticReport {
    fn new(name: &str, bound: f64, observed: f64, params: &[(&str, f64)]) -> Self {
        let margin = bound - observed;
        Self {
            name: name.to_string(),
            margin,
            bound_used: bound,
            observed,
            status: if margin >= 0.0 { Status::Pass } else { Status::Fail },
            params: params.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

/// Fraction of conclusive reports that pass; `None` if none are conclusive.
pub fn pass_rate<'a>(reports: impl IntoIterator<Item = &'a DiagnosticReport>) -> Option<f64> {
    let (mut pass, mut total) = (0usize, 0usize);
    for r in reports {
        if r.status != Status::Inconclusive {
            total += 1;
            pass += r.passed() as usize;
        }
    }
    (total > 0).then(|| pass as f64 / total as f64)
}

/// `max_ij |G_ij(z) − δ_ij m_sc(z)|` against
/// `N^ε (1/q + √(Im m_sc/(Nη)) + 1/(Nη))`, requiring `η ≥ 10/N`.
pub fn local_law_check(h: &SymMatrix, q: f64, z_grid: &[ComplexPoint], epsilon: f64) -> Result<Vec<DiagnosticReport>> {
    let n = h.n();
    let nf = n as f64;
    if let Some(z) = z_grid.iter().find(|z| z.eta < 10.0 / nf) {
        return Err(Error::Precondition(format!("local law needs eta >= 10/N = {}, got {}", 10.0 / nf, z.eta)));
    }
    z_grid
        .iter()
        .map(|&z| {
            let g = green_matrix(h, z);
            let msc = m_sc(z);
            let mut worst = 0.0_f64;
            for i in 0..n {
                for (j, v) in g.row(i).iter().enumerate() {
                    let d = if i == j { *v - msc } else { *v };
                    worst = worst.max(d.norm());
                }
            }
            let neta = nf * z.eta;
            let bound = nf.powf(epsilon) * (1.0 / q + (msc.im / neta).sqrt() + 1.0 / neta);
            Ok(DiagnosticReport::new(
                "local_law",
                bound,
                worst,
                &[("N", nf), ("q", q), ("E", z.e), ("eta", z.eta), ("epsilon", epsilon)],
            ))
        })
        .collect()
}

/// `max_{i ≤ k} |λ_i − L − 𝒳|` and `|λ_{N+1−i} + L + 𝒳|` against
/// `N^𝔠 (q^{−6} + N^{−2/3})`. `q = ∞` drops the `q^{−6}` term.
pub fn eigenvalue_location_check(
    spectrum: &Spectrum,
    edge: &EdgeSolution,
    q: f64,
    x: f64,
    k: usize,
    c_exp: f64,
) -> Result<DiagnosticReport> {
    let n = spectrum.n();
    if !(1..=10).contains(&k) || k > n {
        return Err(Error::Precondition(format!("k must lie in 1..=10 and not exceed N, got {k}")));
    }
    let center = edge.l + x;
    let v = spectrum.values();
    let top = v[..k].iter().map(|l| (l - center).abs()).fold(0.0, f64::max);
    let bottom = v[n - k..].iter().map(|l| (l + center).abs()).fold(0.0, f64::max);
    let nf = n as f64;
    let bound = nf.powf(c_exp) * (q.powi(-6) + nf.powf(-2.0 / 3.0));
    Ok(DiagnosticReport::new(
        "eigenvalue_location",
        bound,
        top.max(bottom),
        &[("N", nf), ("q", q), ("k", k as f64), ("c_exp", c_exp), ("X", x), ("L", edge.l), ("top", top), ("bottom", bottom)],
    ))
}

/// Whether `κ + iη` lies in the shifted domain
/// `|κ| ≤ 1, η ≤ 1, |κ| + η ≥ N^𝔞 (1/(q³√N) + 1/(q³Nη) + 1/(Nη)²)`.
pub fn in_domain(z: ComplexPoint, n: usize, q: f64, domain_a: f64) -> bool {
    let nf = n as f64;
    let q3 = q.powi(3);
    let neta = nf * z.eta;
    let lower = nf.powf(domain_a) * (1.0 / (q3 * nf.sqrt()) + 1.0 / (q3 * neta) + 1.0 / (neta * neta));
    z.e.abs() <= 1.0 && z.eta <= 1.0 && z.e.abs() + z.eta >= lower
}

/// `|m_N(z̃) − m̃∞(z̃)|` at `z̃ = ±(L + 𝒳) + z` for each `z = κ + iη` in the domain,
/// against the `κ`-sign-dependent rigidity bound times `N^ε`. `poly` carries `𝒳`.
pub fn rigidity_check(
    spectrum: &Spectrum,
    poly: &SCPoly,
    z_grid: &[ComplexPoint],
    domain_a: f64,
    epsilon: f64,
) -> Result<Vec<DiagnosticReport>> {
    let n = spectrum.n();
    let nf = n as f64;
    let q = poly.q;
    if let Some(z) = z_grid.iter().find(|z| !in_domain(**z, n, q, domain_a)) {
        return Err(Error::Precondition(format!(
            "z = {} + {}i lies outside the rigidity domain",
            z.e, z.eta
        )));
    }
    let edge = poly.solve_edge()?;
    let shift = edge.l + poly.x;
    let mut out = Vec::with_capacity(2 * z_grid.len());
    for &z in z_grid {
        let (kappa, eta) = (z.e, z.eta);
        let neta = nf * eta;
        let q32 = q.powf(1.5);
        let base = if kappa >= 0.0 {
            (1.0 / (nf * eta.sqrt()) + 1.0 / (nf.sqrt() * q32) + 1.0 / (neta * neta) + 1.0 / (q.powi(3) * neta))
                / (kappa.abs() + eta).sqrt()
        } else {
            1.0 / neta + 1.0 / (neta.sqrt() * q32)
        };
        let bound = nf.powf(epsilon) * base;
        for (side, center) in [(1.0, shift), (-1.0, -shift)] {
            // Right edge: z̃ = L + 𝒳 + κ + iη. Left edge mirrors κ.
            let zt = ComplexPoint::new(center + side * kappa, eta)?;
            let obs = (stieltjes_mn(spectrum, zt) - stieltjes_m_inf(poly, zt)?).norm();
            out.push(DiagnosticReport::new(
                if side > 0.0 { "rigidity_right" } else { "rigidity_left" },
                bound,
                obs,
                &[("N", nf), ("q", q), ("kappa", kappa), ("eta", eta), ("epsilon", epsilon), ("X", poly.x)],
            ));
        }
    }
    Ok(out)
}

/// `#{λ_i > L + 𝒳 − κ}` against `N ∫_{L̃−κ}^{L̃} ρ̃∞`; inconclusive when that
/// prediction is below the configured minimum.
pub fn counting_check(
    spectrum: &Spectrum,
    density: &DensityEvaluator,
    kappa: f64,
    cfg: &VerifyConfig,
) -> Result<DiagnosticReport> {
    if !(kappa > 0.0 && kappa <= 0.2) {
        return Err(Error::Precondition(format!("kappa must lie in (0, 0.2], got {kappa}")));
    }
    let nf = spectrum.n() as f64;
    let x = density.poly.x;
    let threshold = density.edge.l + x - kappa;
    let observed = spectrum.values().iter().take_while(|&&l| l > threshold).count() as f64;
    let predicted = nf * density.edge_mass(kappa)?;
    let leading = nf * counting_prediction(kappa);
    let rel = (observed - predicted).abs() / predicted;
    let mut r = DiagnosticReport::new(
        "counting",
        cfg.counting_rel_tol,
        rel,
        &[("N", nf), ("kappa", kappa), ("count", observed), ("predicted", predicted), ("leading", leading), ("X", x)],
    );
    if predicted < cfg.counting_min_prediction {
        r.status = Status::Inconclusive;
    }
    Ok(r)
}
