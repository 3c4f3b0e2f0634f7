//! Edges of the free convolution of a measure `μ` with the semicircle:
//! the law of `e^{−t/2}H + (1 − e^{−t})^{1/2}W`.
//!
//! `ξ₊` is the largest real root of
//! `φ(ξ) = (1 − e^{−t}) ∫ dμ(x)/(e^{−t/2}x − ξ)² − 1`, the spectral edge is
//! `E₊ = ξ₊ − (1 − e^{−t}) e^{t/2} m_μ(e^{t/2}ξ₊)` and the scale is
//! `γ₀ = (−(1 − e^{−t})³ ∫ dμ/(e^{−t/2}x − ξ₊)³)^{−1/3}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::quad;
use crate::sce::{DensityEvaluator, SCPoly};

/// Input measure of the free convolution.
#[derive(Debug, Clone)]
pub enum SpectralMeasure {
    /// Empirical measure, weight `1/N` at each point.
    Discrete { points: Vec<f64> },
    /// Semicircle of the given variance.
    Semicircle { variance: f64 },
    /// `ρ̃∞` of a self-consistent polynomial, evaluated on the real axis.
    Analytic(DensityEvaluator),
    /// Piecewise-linear density through `(x_i, ρ_i)`.
    Grid { x: Vec<f64>, rho: Vec<f64> },
}

impl SpectralMeasure {
    pub fn discrete(spectrum: &Spectrum) -> Result<Self> {
        if spectrum.n() == 0 {
            return Err(Error::EmptySample);
        }
        Ok(Self::Discrete { points: spectrum.values().to_vec() })
    }

    pub fn semicircle(variance: f64) -> Result<Self> {
        if !(variance > 0.0 && variance.is_finite()) {
            return Err(Error::InvalidArgument(format!("variance must be positive, got {variance}")));
        }
        Ok(Self::Semicircle { variance })
    }

    pub fn analytic(poly: SCPoly) -> Result<Self> {
        Ok(Self::Analytic(DensityEvaluator::on_axis(poly)?))
    }

    /// Validates a grid density: increasing abscissae, nonnegative values, unit
    /// trapezoid mass within `1e-6`.
    pub fn grid(x: Vec<f64>, rho: Vec<f64>) -> Result<Self> {
        if x.len() != rho.len() || x.len() < 2 {
            return Err(Error::InvalidArgument("grid needs at least two matching (x, rho) pairs".into()));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || rho.iter().any(|r| !(*r >= 0.0) || !r.is_finite()) {
            return Err(Error::InvalidArgument("grid must be increasing with finite nonnegative density".into()));
        }
        let m = Self::Grid { x, rho };
        let mass = m.mass()?;
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidArgument(format!("grid density has mass {mass}, expected 1")));
        }
        Ok(m)
    }

    pub fn sup_support(&self) -> f64 {
        match self {
            Self::Discrete { points } => points.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Self::Semicircle { variance } => 2.0 * variance.sqrt(),
            Self::Analytic(ev) => ev.edge.ltilde,
            Self::Grid { x, .. } => *x.last().expect("nonempty grid"),
        }
    }

    pub fn mass(&self) -> Result<f64> {
        match self {
            Self::Grid { x, rho } => Ok(x
                .windows(2)
                .zip(rho.windows(2))
                .map(|(xs, rs)| 0.5 * (xs[1] - xs[0]) * (rs[0] + rs[1]))
                .sum()),
            _ => self.integrate(|_| 1.0),
        }
    }

    /// `∫ g dμ`.
    pub fn integrate(&self, g: impl Fn(f64) -> f64) -> Result<f64> {
        const ABS: f64 = 1e-13;
        const REL: f64 = 1e-12;
        match self {
            Self::Discrete { points } => {
                Ok(points.iter().map(|&x| g(x)).sum::<f64>() / points.len() as f64)
            }
            Self::Semicircle { variance } => {
                let r = 2.0 * variance.sqrt();
                // x = r cos θ, ρ dx = (2/π) sin²θ dθ
                quad::integrate_graded(|th| g(r * th.cos()) * 2.0 / PI * th.sin().powi(2), 0.0, PI, ABS, REL)
            }
            Self::Analytic(ev) => ev.integrate_theta(g, ev.edge.ltilde),
            Self::Grid { x, rho } => {
                let mut total = 0.0;
                for i in 0..x.len() - 1 {
                    let (x0, x1, r0, r1) = (x[i], x[i + 1], rho[i], rho[i + 1]);
                    if r0 == 0.0 && r1 == 0.0 {
                        continue;
                    }
                    let h = x1 - x0;
                    total += quad::integrate(
                        |s| g(s) * (r0 + (r1 - r0) * (s - x0) / h),
                        x0,
                        x1,
                        ABS,
                        REL,
                    )?;
                }
                Ok(total)
            }
        }
    }

    /// `m_μ(w) = ∫ dμ(x)/(x − w)` for real `w` right of the support.
    pub fn stieltjes_real(&self, w: f64) -> Result<f64> {
        self.integrate(|x| 1.0 / (x - w))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FreeConvInput {
    Empirical,
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeConvEdge {
    pub t: f64,
    pub xi_plus: f64,
    #[serde(rename = "E_plus")]
    pub e_plus: f64,
    pub gamma0: f64,
    pub input: FreeConvInput,
}

fn check_t(t: f64) -> Result<()> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("t must be positive, got {t}")));
    }
    Ok(())
}

/// `φ(ξ)`.
pub fn phi(mu: &SpectralMeasure, t: f64, xi: f64) -> Result<f64> {
    let s = (-t / 2.0).exp();
    let c = -(-t).exp_m1();
    Ok(c * mu.integrate(|x| {
        let d = s * x - xi;
        1.0 / (d * d)
    })? - 1.0)
}

/// Largest real root of `φ`.
pub fn xi_plus(mu: &SpectralMeasure, t: f64) -> Result<f64> {
    check_t(t)?;
    let base = (-t / 2.0).exp() * mu.sup_support();
    let mut eps = 1e-12_f64;
    let lo = loop {
        let v = phi(mu, t, base + eps);
        match v {
            Ok(v) if v.is_finite() && v > 0.0 => break base + eps,
            Ok(v) if v.is_finite() => {
                return Err(Error::EdgeDegenerate(format!(
                    "phi = {v} <= 0 just right of the support image {base}"
                )))
            }
            _ => {
                eps *= 10.0;
                if eps > 1e-2 {
                    return Err(Error::EdgeDegenerate("phi is not finite near the support".into()));
                }
            }
        }
    };
    let mut hi = base + 10.0;
    if phi(mu, t, hi)? >= 0.0 {
        return Err(Error::EdgeDegenerate(format!("phi still positive at {hi}")));
    }
    let mut lo = lo;
    while hi - lo > 4.0 * f64::EPSILON * hi.abs() {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if phi(mu, t, mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// `E₊ = ξ − (1 − e^{−t}) e^{t/2} m_μ(e^{t/2}ξ)`.
pub fn edge_e_plus(mu: &SpectralMeasure, t: f64, xi: f64) -> Result<f64> {
    check_t(t)?;
    let g = (t / 2.0).exp();
    Ok(xi - (-(-t).exp_m1()) * g * mu.stieltjes_real(g * xi)?)
}

/// `γ₀ = (−(1 − e^{−t})³ ∫ dμ/(e^{−t/2}x − ξ)³)^{−1/3}`.
pub fn gamma0(mu: &SpectralMeasure, t: f64, xi: f64) -> Result<f64> {
    check_t(t)?;
    let s = (-t / 2.0).exp();
    let c = -(-t).exp_m1();
    let i3 = mu.integrate(|x| {
        let d = s * x - xi;
        1.0 / (d * d * d)
    })?;
    let arg = -c * c * c * i3;
    if !(arg > 0.0) || !arg.is_finite() {
        return Err(Error::NumericalInconsistency(format!("cube-root argument {arg} is not positive")));
    }
    Ok(arg.powf(-1.0 / 3.0))
}

/// `ξ₊`, `E₊`, `γ₀` of `μ` at time `t`.
pub fn free_conv_edge(mu: &SpectralMeasure, t: f64) -> Result<FreeConvEdge> {
    let xi = xi_plus(mu, t)?;
    let input = match mu {
        SpectralMeasure::Discrete { .. } => FreeConvInput::Empirical,
        _ => FreeConvInput::Analytic,
    };
    Ok(FreeConvEdge { t, xi_plus: xi, e_plus: edge_e_plus(mu, t, xi)?, gamma0: gamma0(mu, t, xi)?, input })
}

/// Closed-form edge quantities for `ρ̃∞` of `poly`, using `m = w`, `R̃(w) = u`
/// on `(−τ̃, 0)`: `ξ₊` solves `R̃'(w) = e^t − 1`.
pub fn analytic_oracle(poly: &SCPoly, t: f64) -> Result<FreeConvEdge> {
    check_t(t)?;
    let edge = poly.solve_edge()?;
    let target = t.exp_m1();
    let (mut lo, mut hi) = (-edge.tau_tilde, -1e-300_f64.sqrt());
    // R̃' decreases from +∞ at 0⁻ to 0 at −τ̃ when moving left.
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if poly.r1(mid) > target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let w = 0.5 * (lo + hi);
    let u = poly.r(w);
    let xi = (-t / 2.0).exp() * u;
    let c = -(-t).exp_m1();
    let e_plus = xi - c * (t / 2.0).exp() * w;
    let d1 = poly.r1(w);
    let m2 = -poly.r2(w) / (d1 * d1 * d1);
    let arg = -c.powi(3) * (1.5 * t).exp() * m2 / 2.0;
    if !(arg > 0.0) {
        return Err(Error::NumericalInconsistency(format!("cube-root argument {arg} is not positive")));
    }
    Ok(FreeConvEdge { t, xi_plus: xi, e_plus, gamma0: arg.powf(-1.0 / 3.0), input: FreeConvInput::Analytic })
}
