//! Higher-order self-consistent equation
//! `P(z, m) = 1 + zm + (1 + 𝒳)m² + a₂m⁴ + a₃m⁶` and its spectral edge.
//!
//! `P(z, m) = 0` is equivalent to `z = R(m)` with
//! `R(w) = −1/w − (1 + 𝒳)w − a₂w³ − a₃w⁵`. The edge is `L̃ = R(−τ̃)` where
//! `R'(−τ̃) = 0`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensemble::CumulantProfile;
use crate::error::{Error, Result};
use crate::linalg::ComplexPoint;
use crate::quad;

/// Highest power of `m` kept in `P`.
pub const TRUNCATION_ORDER: usize = 6;

/// Spectral parameter used for Stieltjes inversion on the real axis.
pub const INVERSION_ETA: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SCPoly {
    pub q: f64,
    #[serde(rename = "X")]
    pub x: f64,
    pub c4: f64,
    pub c6: f64,
    pub truncation_order: usize,
    #[serde(skip)]
    fault: bool,
}

impl SCPoly {
    pub fn new(q: f64, x: f64, c4: f64, c6: f64) -> Result<Self> {
        Self::with_order(q, x, c4, c6, TRUNCATION_ORDER)
    }

    pub fn with_order(q: f64, x: f64, c4: f64, c6: f64, truncation_order: usize) -> Result<Self> {
        if truncation_order != TRUNCATION_ORDER {
            return Err(Error::InvalidArgument(format!(
                "truncation order must be {TRUNCATION_ORDER}, got {truncation_order}"
            )));
        }
        if !(q > 0.0 && q.is_finite()) {
            return Err(Error::InvalidArgument(format!("q must be positive, got {q}")));
        }
        if !x.is_finite() || x <= -1.0 {
            return Err(Error::InvalidArgument(format!("X must be finite and > -1, got {x}")));
        }
        if !(c4 >= 0.0 && c4.is_finite()) || !c6.is_finite() {
            return Err(Error::InvalidProfile(format!("need finite C4 >= 0 and finite C6, got {c4}, {c6}")));
        }
        Ok(Self { q, x, c4, c6, truncation_order, fault: false })
    }

    /// Coefficients from a cumulant profile; `𝒞₆` is taken as zero when the
    /// profile stops at `K < 6`.
    pub fn build(profile: &CumulantProfile, q: f64, x: f64) -> Result<Self> {
        Self::new(q, x, profile.c4(), profile.c6())
    }

    /// Same polynomial with the sign of the `a₂` term of `R` flipped.
    #[doc(hidden)]
    pub fn with_injected_fault(mut self) -> Self {
        self.fault = true;
        self
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = x;
        self
    }

    /// `P₀`: the same polynomial with `𝒳 = 0`.
    pub fn deterministic(&self) -> Self {
        self.with_x(0.0)
    }

    /// Polynomial of `H(t)`: `𝒞_k ↦ e^{−kt/2}𝒞_k` for `k ≥ 3`.
    pub fn at_time(&self, t: f64) -> Self {
        let mut p = *self;
        p.c4 *= (-2.0 * t).exp();
        p.c6 *= (-3.0 * t).exp();
        p
    }

    /// Coefficient of `m⁴`: `6𝒞₄/q²`.
    pub fn a2(&self) -> f64 {
        6.0 * self.c4 / (self.q * self.q)
    }

    /// Coefficient of `m⁶`: `120𝒞₆/q⁴`.
    pub fn a3(&self) -> f64 {
        120.0 * self.c6 / self.q.powi(4)
    }

    fn a2_r(&self) -> f64 {
        if self.fault {
            -self.a2()
        } else {
            self.a2()
        }
    }

    pub fn p(&self, z: Complex64, m: Complex64) -> Complex64 {
        let m2 = m * m;
        1.0 + z * m + m2 * ((1.0 + self.x) + m2 * (self.a2() + m2 * self.a3()))
    }

    /// `∂P/∂m`.
    pub fn dp_dm(&self, z: Complex64, m: Complex64) -> Complex64 {
        let m2 = m * m;
        z + m * (2.0 * (1.0 + self.x) + m2 * (4.0 * self.a2() + 6.0 * self.a3() * m2))
    }

    /// `Q(m) = P − 1 − zm`.
    pub fn q_part(&self, m: Complex64) -> Complex64 {
        let m2 = m * m;
        m2 * ((1.0 + self.x) + m2 * (self.a2() + m2 * self.a3()))
    }

    pub fn r(&self, w: f64) -> f64 {
        let w2 = w * w;
        -1.0 / w - w * ((1.0 + self.x) + w2 * (self.a2_r() + w2 * self.a3()))
    }

    pub fn r1(&self, w: f64) -> f64 {
        let w2 = w * w;
        1.0 / w2 - (1.0 + self.x) - w2 * (3.0 * self.a2_r() + 5.0 * self.a3() * w2)
    }

    pub fn r2(&self, w: f64) -> f64 {
        let w2 = w * w;
        -2.0 / (w2 * w) - w * (6.0 * self.a2_r() + 20.0 * self.a3() * w2)
    }

    /// Positive root `τ` of `R'(τ) = 0` (`R'` is even).
    pub fn critical_point(&self) -> Result<f64> {
        let c = 10.0 * (6.0 * self.c4 + 120.0 * self.c6.abs() / (self.q * self.q));
        let mut delta = if c > 0.0 { c / (self.q * self.q) } else { 0.05 } + self.x.abs();
        let mut bracket = (0.0, 0.0);
        for _ in 0..2 {
            let lo = (1.0 - delta).max(1e-6);
            let hi = (1.0 + delta).min(3.0);
            bracket = (lo, hi);
            if self.r1(lo) > 0.0 && self.r1(hi) < 0.0 {
                return Ok(bisect_decreasing(|w| self.r1(w), lo, hi));
            }
            delta *= 4.0;
        }
        Err(Error::EdgeNotFound { lo: bracket.0, hi: bracket.1 })
    }

    /// `τ`, `L` (at `𝒳 = 0`) and `L̃`, `F''` (at this `𝒳`).
    pub fn solve_edge(&self) -> Result<EdgeSolution> {
        let p0 = self.deterministic();
        let tau = p0.critical_point()?;
        let l = p0.r(-tau);
        let tau_tilde = self.critical_point()?;
        let ltilde = self.r(-tau_tilde);
        let fpp = self.r2(-tau_tilde);
        if !(fpp > 0.0) {
            return Err(Error::NumericalInconsistency(format!("F''(-tau) = {fpp} is not positive")));
        }
        Ok(EdgeSolution { tau, l, tau_tilde, ltilde, fpp, sqrt_coeff: (2.0 / fpp).sqrt() })
    }

    pub fn edge_report(&self, method: EdgeMethod) -> Result<EdgeReport> {
        let (tau, l, ltilde, fpp) = match method {
            EdgeMethod::Bisect => {
                let e = self.solve_edge()?;
                (e.tau, e.l, e.ltilde, e.fpp)
            }
            EdgeMethod::Expansion => {
                let a = 6.0 * self.c4;
                let b = 120.0 * self.c6;
                let (tau, l) = edge_expansion(a, b, self.q, 0.0)?;
                let (_, lt) = edge_expansion(a, b, self.q, self.x)?;
                (tau, l, lt, 2.0 + 6.0 * a / (self.q * self.q))
            }
        };
        Ok(EdgeReport { q: self.q, c4: self.c4, c6: self.c6, x: self.x, tau, l, ltilde, fpp, method })
    }

    /// For real `u > L̃`: `(m, m', m'')` of `m̃∞` at `u`, from `m = w` with
    /// `R(w) = u`, `w ∈ (−τ̃, 0)`.
    pub fn m_outside(&self, u: f64, edge: &EdgeSolution) -> Result<(f64, f64, f64)> {
        if !(u > edge.ltilde) {
            return Err(Error::InvalidArgument(format!("u = {u} is not right of the edge {}", edge.ltilde)));
        }
        let mut lo = -edge.tau_tilde;
        let mut hi = -f64::MIN_POSITIVE.sqrt();
        if self.r(hi) < u {
            return Err(Error::NumericalInconsistency(format!("R does not reach {u} on (-tau, 0)")));
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.r(mid) < u {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut w = 0.5 * (lo + hi);
        let d1 = self.r1(w);
        if d1 > 0.0 {
            let step = (self.r(w) - u) / d1;
            if (w - step) > lo && (w - step) < hi {
                w -= step;
            }
        }
        let d1 = self.r1(w);
        Ok((w, 1.0 / d1, -self.r2(w) / (d1 * d1 * d1)))
    }
}

fn bisect_decreasing(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeSolution {
    /// Critical point of `R` at `𝒳 = 0`.
    pub tau: f64,
    /// Deterministic edge `R(−τ)`.
    #[serde(rename = "L")]
    pub l: f64,
    /// Critical point of `R̃ = R − 𝒳w`.
    pub tau_tilde: f64,
    /// Shifted edge `R̃(−τ̃)`.
    #[serde(rename = "Ltilde")]
    pub ltilde: f64,
    /// `R̃''(−τ̃)`.
    #[serde(rename = "Fpp")]
    pub fpp: f64,
    /// `√(2/F'')`: `Im m̃∞(L̃ − κ) ≈ sqrt_coeff·√κ`.
    pub sqrt_coeff: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeMethod {
    Bisect,
    Expansion,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeReport {
    pub q: f64,
    #[serde(rename = "C4")]
    pub c4: f64,
    #[serde(rename = "C6")]
    pub c6: f64,
    #[serde(rename = "X")]
    pub x: f64,
    pub tau: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "Ltilde")]
    pub ltilde: f64,
    #[serde(rename = "Fpp")]
    pub fpp: f64,
    pub method: EdgeMethod,
}

/// Closed-form expansion `(τ, L̃)` in powers of `1/q` with `a = 6𝒞₄`, `b = 120𝒞₆`.
pub fn edge_expansion(a: f64, b: f64, q: f64, x: f64) -> Result<(f64, f64)> {
    if !(q >= 3.0) {
        return Err(Error::Precondition(format!("edge expansion needs q >= 3, got {q}")));
    }
    let q2 = q * q;
    let q4 = q2 * q2;
    let tau = 1.0 - 1.5 * a / q2 - 2.5 * b / q4 + 63.0 * a * a / (8.0 * q4) - x / 2.0;
    let l = 2.0 + a / q2 + b / q4 - 9.0 * a * a / (4.0 * q4) + x;
    Ok((tau, l))
}

/// The unhalved `τ` variant `1 − 3a/q² − 5b/q⁴ + 18a²/q⁴ − 𝒳`.
pub fn tau_expansion_statement(a: f64, b: f64, q: f64, x: f64) -> f64 {
    let q2 = q * q;
    let q4 = q2 * q2;
    1.0 - 3.0 * a / q2 - 5.0 * b / q4 + 18.0 * a * a / q4 - x
}

/// Leading counting law `(2/(3π))κ^{3/2}`.
pub fn counting_prediction(kappa: f64) -> f64 {
    if kappa <= 0.0 {
        return 0.0;
    }
    2.0 / (3.0 * std::f64::consts::PI) * kappa.powf(1.5)
}

fn newton(poly: &SCPoly, z: Complex64, mut m: Complex64, max_iter: usize) -> Option<Complex64> {
    for _ in 0..max_iter {
        let d = poly.dp_dm(z, m);
        if d.norm() == 0.0 {
            return None;
        }
        let step = poly.p(z, m) / d;
        m -= step;
        if !m.is_finite() {
            return None;
        }
        let a = m.norm();
        let a2 = a * a;
        let scale = 1.0 + z.norm() * a + a2 * ((1.0 + poly.x).abs() + a2 * (poly.a2() + a2 * poly.a3().abs()));
        if step.norm() <= 4.0 * f64::EPSILON * (1.0 + a) || poly.p(z, m).norm() <= 8.0 * f64::EPSILON * scale {
            // one polishing step
            let d = poly.dp_dm(z, m);
            if d.norm() > 0.0 {
                m -= poly.p(z, m) / d;
            }
            return Some(m);
        }
    }
    None
}

/// `m̃∞(z)`: the root of `P(z, ·)` reached by continuation from `−1/z` along
/// `E + iy`, `y` decreasing from far above the spectrum to `η`.
pub fn stieltjes_m_inf(poly: &SCPoly, z: ComplexPoint) -> Result<Complex64> {
    let fail = || Error::ContinuationFailure { re: z.e, im: z.eta };
    let eta = z.eta;
    let mut y = (10.0 + 2.0 * z.e.abs()).max(eta);
    let start = Complex64::new(z.e, y);
    let mut m = newton(poly, start, -start.inv(), 60).ok_or_else(fail)?;
    if !(m.im > 0.0) {
        return Err(fail());
    }
    let mut ratio = 0.5_f64;
    let mut steps = 0;
    while y > eta {
        steps += 1;
        if steps > 20_000 {
            return Err(fail());
        }
        let mut y_new = eta + (y - eta) * ratio;
        if y_new - eta <= 1e-3 * eta {
            y_new = eta;
        }
        let zc = Complex64::new(z.e, y);
        // dm/dy = i dm/dz = −i m / ∂P/∂m
        let dm_dy = Complex64::new(0.0, -1.0) * m / poly.dp_dm(zc, m);
        let predicted = m + dm_dy * (y_new - y);
        let znew = Complex64::new(z.e, y_new);
        let accepted = newton(poly, znew, predicted, 40).filter(|mn| {
            mn.im > 0.0 && (mn - predicted).norm() <= 0.05 * (m.norm() + (mn - m).norm()) + 1e-300
        });
        match accepted {
            Some(mn) => {
                m = mn;
                y = y_new;
                ratio = (ratio * 0.8).max(0.05);
            }
            None => {
                ratio = ratio.sqrt();
                if ratio > 1.0 - 1e-9 {
                    return Err(fail());
                }
            }
        }
    }
    Ok(m)
}

/// Evaluates `m̃∞` and `ρ̃∞` on the real axis for a fixed polynomial.
#[derive(Debug, Clone, Copy)]
pub struct DensityEvaluator {
    pub poly: SCPoly,
    pub edge: EdgeSolution,
    eta: f64,
}

impl DensityEvaluator {
    /// Evaluator at `η = INVERSION_ETA`.
    pub fn new(poly: SCPoly) -> Result<Self> {
        Ok(Self { edge: poly.solve_edge()?, poly, eta: INVERSION_ETA })
    }

    /// Evaluator on the real axis itself (`η = 0`), continuing to
    /// `INVERSION_ETA` and polishing at `η = 0` when the seeded solve fails.
    pub fn on_axis(poly: SCPoly) -> Result<Self> {
        Ok(Self { edge: poly.solve_edge()?, poly, eta: 0.0 })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// `m̃∞(E + iη)`.
    pub fn m_real(&self, e: f64) -> Result<Complex64> {
        let z = Complex64::new(e, self.eta);
        let lt = self.edge.ltilde;
        let s = e / lt;
        if s.abs() < 1.0 {
            let seed = self.edge.tau_tilde * Complex64::new(-s, (1.0 - s * s).sqrt());
            if let Some(m) = newton(&self.poly, z, seed, 60) {
                if m.im > 0.0 && m.norm() < 3.0 {
                    return Ok(m);
                }
            }
        }
        let m = stieltjes_m_inf(&self.poly, ComplexPoint { e, eta: self.eta.max(INVERSION_ETA) })?;
        if self.eta >= INVERSION_ETA {
            return Ok(m);
        }
        match newton(&self.poly, z, m, 60) {
            Some(p) if p.im > 0.0 => Ok(p),
            _ => Ok(Complex64::new(m.re, 0.0)),
        }
    }

    /// `ρ̃∞(E)`.
    pub fn rho(&self, e: f64) -> Result<f64> {
        if e.abs() > self.edge.ltilde + 1e-6 {
            return Ok(0.0);
        }
        Ok(self.m_real(e)?.im / std::f64::consts::PI)
    }

    /// `∫_{−L̃}^{L̃} ρ̃∞`.
    pub fn mass(&self) -> Result<f64> {
        let lt = self.edge.ltilde;
        self.integrate_theta(|_| 1.0, lt)
    }

    /// `∫ g(x) ρ̃∞(x) dx` over the support, via `x = L̃ cos θ`. Near the edge
    /// `ρ̃∞` carries rounding noise of order `ε/√κ`, so a converged-to-`1e-6`
    /// estimate is accepted when the tighter target is out of reach.
    pub fn integrate_theta(&self, g: impl Fn(f64) -> f64, lt: f64) -> Result<f64> {
        let mut err = None;
        let (v, est, ok) = quad::integrate_graded_estimate(
            |th| {
                let x = lt * th.cos();
                match self.rho(x) {
                    Ok(r) => g(x) * r * lt * th.sin(),
                    Err(e) => {
                        err.get_or_insert(e);
                        0.0
                    }
                }
            },
            0.0,
            std::f64::consts::PI,
            1e-12,
            1e-11,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        if !ok && est > 1e-6 * v.abs() + 1e-12 {
            return Err(Error::NoConvergence(quad::MAX_SEGMENTS));
        }
        Ok(v)
    }

    /// `∫_{L̃−κ}^{L̃} ρ̃∞`, via `x = L̃ − u²`.
    pub fn edge_mass(&self, kappa: f64) -> Result<f64> {
        if kappa <= 0.0 {
            return Ok(0.0);
        }
        let lt = self.edge.ltilde;
        let mut err = None;
        let v = quad::integrate(
            |u| match self.rho(lt - u * u) {
                Ok(r) => 2.0 * u * r,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            kappa.min(2.0 * lt).sqrt(),
            1e-14,
            1e-10,
        )?;
        match err {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

/// `ρ̃∞(E) = Im m̃∞(E + iη)/π` at `η = INVERSION_ETA`.
pub fn density_rho_inf(poly: &SCPoly, e: f64) -> Result<f64> {
    DensityEvaluator::new(*poly)?.rho(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::m_sc;

    fn er(q: f64, x: f64) -> SCPoly {
        SCPoly::new(q, x, 1.0 / 6.0, 1.0 / 120.0).unwrap()
    }

    #[test]
    fn coefficients() {
        let p = er(10.0, 0.0);
        assert!((p.a2() - 0.01).abs() < 1e-15);
        assert!((p.a3() - 1e-4).abs() < 1e-17);
        let p = er(10.0, 0.3);
        assert_eq!(p.p(Complex64::new(1.7, 0.2), Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert!(SCPoly::with_order(10.0, 0.0, 0.1, 0.0, 8).is_err());
    }

    #[test]
    fn semicircle_edge() {
        let e = SCPoly::new(5.0, 0.0, 0.0, 0.0).unwrap().solve_edge().unwrap();
        assert!((e.tau - 1.0).abs() < 1e-14);
        assert!((e.l - 2.0).abs() < 1e-14);
        assert!((e.fpp - 2.0).abs() < 1e-12);
    }

    #[test]
    fn er_edge_q10() {
        let p = er(10.0, 0.0);
        let e = p.solve_edge().unwrap();
        assert!((e.l - 2.009875).abs() < 5e-6);
        assert!(p.r1(-e.tau).abs() < 1e-12);
        let (_, lt) = edge_expansion(1.0, 1.0, 10.0, 0.0).unwrap();
        assert!((lt - 2.009875).abs() < 1e-12);
    }

    #[test]
    fn shifted_edge_vs_expansion() {
        let (q, x) = (10.0, 0.001);
        let p = SCPoly::new(q, x, 1.0 / 6.0, 1.0 / 120.0).unwrap();
        let e = p.solve_edge().unwrap();
        let (_, lt) = edge_expansion(1.0, 1.0, q, x).unwrap();
        assert!((e.ltilde - lt).abs() <= 10.0 * (x / (q * q) + x * x + q.powi(-6)));
    }

    #[test]
    fn edge_shift_derivative_is_tau() {
        let p = er(6.0, 0.0);
        let tau = p.solve_edge().unwrap().tau;
        let h = 1e-6;
        let up = p.with_x(h).solve_edge().unwrap().ltilde;
        let dn = p.with_x(-h).solve_edge().unwrap().ltilde;
        assert!(((up - dn) / (2.0 * h) - tau).abs() < 1e-6);
    }

    #[test]
    fn continuation_matches_semicircle() {
        let p = SCPoly::new(5.0, 0.0, 0.0, 0.0).unwrap();
        for &(e, eta) in &[(0.0, 1.0), (1.9, 1e-6), (2.0, 1e-9), (-3.0, 0.01), (0.5, 1e-9)] {
            let z = ComplexPoint::new(e, eta).unwrap();
            let m = stieltjes_m_inf(&p, z).unwrap();
            assert!((m - m_sc(z)).norm() < 1e-9, "{e} {eta}: {m} vs {}", m_sc(z));
        }
    }

    #[test]
    fn large_y_asymptote() {
        let p = er(4.0, 0.01);
        let y = 1e6;
        let m = stieltjes_m_inf(&p, ComplexPoint::new(0.0, y).unwrap()).unwrap();
        assert!((m * Complex64::new(0.0, y) + 1.0).norm() <= 10.0 / y);
    }

    #[test]
    fn semicircle_density() {
        let p = SCPoly::new(5.0, 0.0, 0.0, 0.0).unwrap();
        assert!((density_rho_inf(&p, 0.0).unwrap() - 1.0 / std::f64::consts::PI).abs() < 1e-9);
        assert_eq!(density_rho_inf(&p, 2.5).unwrap(), 0.0);
    }

    #[test]
    fn fast_path_agrees_with_continuation() {
        let ev = DensityEvaluator::new(er(4.0, 0.02)).unwrap();
        for &e in &[-1.9, -0.3, 0.0, 1.2, 2.0] {
            let a = ev.m_real(e).unwrap();
            let b = stieltjes_m_inf(&ev.poly, ComplexPoint::new(e, INVERSION_ETA).unwrap()).unwrap();
            assert!((a - b).norm() < 1e-10, "{e}: {a} vs {b}");
        }
    }

    #[test]
    fn mass_and_symmetry() {
        let ev = DensityEvaluator::new(er(5.0, 0.0)).unwrap();
        assert!((ev.mass().unwrap() - 1.0).abs() < 1e-6);
        for &e in &[0.1, 0.9, 1.7, 2.02] {
            assert!((ev.rho(e).unwrap() - ev.rho(-e).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn counting_inversion() {
        assert_eq!(counting_prediction(0.0), 0.0);
        let k = (1.5 * std::f64::consts::PI).powf(2.0 / 3.0);
        assert!((counting_prediction(k) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn outside_branch_derivatives() {
        let p = SCPoly::new(5.0, 0.0, 0.0, 0.0).unwrap();
        let e = p.solve_edge().unwrap();
        let u = 2.5;
        let (m, m1, m2) = p.m_outside(u, &e).unwrap();
        let s = (u * u - 4.0f64).sqrt();
        assert!((m - (-u + s) / 2.0).abs() < 1e-14);
        assert!((m1 - 0.5 * (-1.0 + u / s)).abs() < 1e-12);
        assert!((m2 - 0.5 * (1.0 / s - u * u / s.powi(3))).abs() < 1e-10);
    }

    #[test]
    fn fault_moves_the_edge() {
        let good = er(10.0, 0.0).solve_edge().unwrap().l;
        let bad = er(10.0, 0.0).with_injected_fault().solve_edge().unwrap().l;
        assert!((good - bad).abs() > 1e-3);
    }
}
