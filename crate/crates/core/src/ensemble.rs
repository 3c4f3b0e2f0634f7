//! Sparse random matrix ensembles, the edge observable `𝒳`, and the
//! Gaussian-divisible interpolation `H(t)`.

use rand::Rng;
use rand_distr::{Distribution, Geometric, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::SymMatrix;
use crate::rng::{trial_rng, Stream, TrialRng};

/// Largest dimension the dense samplers will allocate.
pub const MAX_DIMENSION: usize = 16_384;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EnsembleKind {
    ErdosRenyi,
    SignedSparse,
    #[serde(rename = "GOE", alias = "Goe")]
    Goe,
    CustomCumulant,
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            EnsembleKind::ErdosRenyi => "ErdosRenyi",
            EnsembleKind::SignedSparse => "SignedSparse",
            EnsembleKind::Goe => "GOE",
            EnsembleKind::CustomCumulant => "CustomCumulant",
        };
        f.write_str(s)
    }
}

/// Normalized cumulants `𝒞_2, …, 𝒞_K` with `𝒞_2 = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct CumulantProfile {
    c: Vec<f64>,
}

impl CumulantProfile {
    /// `values[0]` is `𝒞_2`.
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.len() < 3 {
            return Err(Error::InvalidProfile(format!(
                "need at least C_2..C_4, got {} values",
                values.len()
            )));
        }
        if values[0] != 1.0 {
            return Err(Error::InvalidProfile(format!("C_2 must be exactly 1, got {}", values[0])));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidProfile("non-finite cumulant".into()));
        }
        if values[2] < 0.0 {
            return Err(Error::InvalidProfile(format!("C_4 must be nonnegative, got {}", values[2])));
        }
        Ok(Self { c: values })
    }

    /// Profile with `𝒞_4 = c4`, `𝒞_6 = c6` and vanishing odd cumulants.
    pub fn from_c4_c6(c4: f64, c6: f64) -> Result<Self> {
        Self::new(vec![1.0, 0.0, c4, 0.0, c6])
    }

    /// Truncation order `K`.
    pub fn order(&self) -> usize {
        self.c.len() + 1
    }

    /// `𝒞_k`, zero beyond the truncation order.
    pub fn get(&self, k: usize) -> f64 {
        if k < 2 {
            return 0.0;
        }
        self.c.get(k - 2).copied().unwrap_or(0.0)
    }

    pub fn c4(&self) -> f64 {
        self.get(4)
    }

    pub fn c6(&self) -> f64 {
        self.get(6)
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }
}

impl TryFrom<Vec<f64>> for CumulantProfile {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<CumulantProfile> for Vec<f64> {
    fn from(p: CumulantProfile) -> Self {
        p.c
    }
}

/// Which ensemble to draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpecJson", into = "SpecJson")]
pub struct EnsembleSpec {
    kind: EnsembleKind,
    n: usize,
    q: f64,
    cumulants: Option<CumulantProfile>,
    master_seed: u64,
    truncation: usize,
}

#[derive(Serialize, Deserialize)]
struct SpecJson {
    kind: EnsembleKind,
    #[serde(rename = "N")]
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    q: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    p: Option<f64>,
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_truncation")]
    cumulant_truncation: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    cumulants: Option<CumulantProfile>,
}

fn default_truncation() -> usize {
    6
}

impl TryFrom<SpecJson> for EnsembleSpec {
    type Error = Error;
    fn try_from(j: SpecJson) -> Result<Self> {
        let q = match (j.q, j.p, j.kind) {
            (Some(_), Some(_), _) => {
                return Err(Error::InvalidEnsemble("give either q or p, not both".into()))
            }
            (Some(q), None, _) => q,
            (None, Some(p), _) => (p * j.n as f64).sqrt(),
            (None, None, EnsembleKind::Goe) => (j.n as f64).sqrt(),
            (None, None, _) => return Err(Error::InvalidEnsemble("missing q or p".into())),
        };
        let mut spec = EnsembleSpec::new(j.kind, j.n, q, j.seed)?;
        spec.truncation = j.cumulant_truncation;
        if let Some(c) = j.cumulants {
            spec = spec.with_cumulants(c)?;
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl From<EnsembleSpec> for SpecJson {
    fn from(s: EnsembleSpec) -> Self {
        SpecJson {
            kind: s.kind,
            n: s.n,
            q: Some(s.q),
            p: None,
            seed: s.master_seed,
            cumulant_truncation: s.truncation,
            cumulants: s.cumulants,
        }
    }
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, q: f64, master_seed: u64) -> Result<Self> {
        let spec = Self { kind, n, q, cumulants: None, master_seed, truncation: 6 };
        if kind != EnsembleKind::CustomCumulant {
            spec.validate()?;
        }
        Ok(spec)
    }

    /// Parametrizes by edge probability `p = q²/N`.
    pub fn with_p(kind: EnsembleKind, n: usize, p: f64, master_seed: u64) -> Result<Self> {
        if !(p > 0.0 && p.is_finite()) {
            return Err(Error::InvalidSparsity(p));
        }
        Self::new(kind, n, (p * n as f64).sqrt(), master_seed)
    }

    pub fn goe(n: usize, master_seed: u64) -> Result<Self> {
        Self::new(EnsembleKind::Goe, n, (n as f64).sqrt(), master_seed)
    }

    pub fn custom(n: usize, q: f64, profile: CumulantProfile, master_seed: u64) -> Result<Self> {
        let mut s = Self { kind: EnsembleKind::CustomCumulant, n, q, cumulants: None, master_seed, truncation: 6 };
        s = s.with_cumulants(profile)?;
        s.validate()?;
        Ok(s)
    }

    fn with_cumulants(mut self, c: CumulantProfile) -> Result<Self> {
        if self.kind != EnsembleKind::CustomCumulant {
            return Err(Error::InvalidEnsemble(format!(
                "explicit cumulants only apply to CustomCumulant, not {}",
                self.kind
            )));
        }
        self.truncation = c.order();
        self.cumulants = Some(c);
        Ok(self)
    }

    pub fn with_seed(mut self, master_seed: u64) -> Self {
        self.master_seed = master_seed;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidEnsemble("N must be positive".into()));
        }
        if self.n > MAX_DIMENSION {
            return Err(Error::DimensionOverflow(self.n, MAX_DIMENSION));
        }
        let sqrt_n = (self.n as f64).sqrt();
        if !(self.q > 0.0 && self.q.is_finite()) || self.q > sqrt_n * (1.0 + 1e-12) {
            return Err(Error::InvalidEnsemble(format!(
                "q must lie in (0, sqrt(N)] = (0, {sqrt_n}], got {}",
                self.q
            )));
        }
        let p = self.p();
        match self.kind {
            EnsembleKind::ErdosRenyi if !(p > 0.0 && p < 1.0) => Err(Error::InvalidSparsity(p)),
            EnsembleKind::SignedSparse if !(p > 0.0 && p <= 1.0 + 1e-12) => Err(Error::InvalidSparsity(p)),
            EnsembleKind::CustomCumulant if self.cumulants.is_none() => {
                Err(Error::InvalidEnsemble("CustomCumulant needs a cumulant profile".into()))
            }
            _ => Ok(()),
        }
    }

    pub fn kind(&self) -> EnsembleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    /// `p = q²/N`.
    pub fn p(&self) -> f64 {
        (self.q * self.q / self.n as f64).min(1.0)
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn cumulant_truncation(&self) -> usize {
        self.truncation
    }

    /// The cumulant profile: exact for the built-in kinds, as given for custom ones.
    pub fn profile(&self) -> Result<CumulantProfile> {
        match self.kind {
            EnsembleKind::CustomCumulant => Ok(self.cumulants.clone().expect("validated")),
            k => cumulants_of(k, self.q, self.n, self.truncation.max(6)),
        }
    }

    /// Value of `h_ij` when `a_ij = 1` and `a_ij = 0` for the Erdős–Rényi normalization.
    fn er_values(&self) -> (f64, f64) {
        let p = self.p();
        let denom = self.q * (1.0 - p).sqrt();
        ((1.0 - p) / denom, -p / denom)
    }
}

/// One realized matrix together with its `𝒳`.
#[derive(Debug, Clone)]
pub struct SampleMatrix {
    pub h: SymMatrix,
    pub x: f64,
    pub spec: EnsembleSpec,
    pub trial_index: u64,
}

impl SampleMatrix {
    pub fn n(&self) -> usize {
        self.h.n()
    }

    /// Adjacency matrix recovered from an Erdős–Rényi sample.
    pub fn adjacency(&self) -> Result<SymMatrix> {
        if self.spec.kind != EnsembleKind::ErdosRenyi {
            return Err(Error::UnsupportedKind(format!("adjacency of {}", self.spec.kind)));
        }
        let (one, zero) = self.spec.er_values();
        let half = 0.5 * (one - zero);
        Ok(SymMatrix::from_lower_fn(self.n(), |i, j| {
            if self.h.get(i, j) - zero > half {
                1.0
            } else {
                0.0
            }
        }))
    }
}

/// Visits the upper-triangle positions `(i, j)`, `i <= j`, that are hit with
/// probability `p` each, in increasing row-major order.
fn for_each_hit(rng: &mut TrialRng, n: usize, p: f64, mut visit: impl FnMut(usize, usize, &mut TrialRng)) {
    let total = n * (n + 1) / 2;
    if p >= 1.0 {
        for i in 0..n {
            for j in i..n {
                visit(i, j, rng);
            }
        }
        return;
    }
    let geom = Geometric::new(p).expect("p in (0,1)");
    let mut pos: usize = 0;
    let mut row = 0usize;
    let mut row_start = 0usize;
    loop {
        let skip = geom.sample(rng);
        pos = match usize::try_from(skip).ok().and_then(|s| pos.checked_add(s)) {
            Some(x) if x < total => x,
            _ => break,
        };
        while pos >= row_start + (n - row) {
            row_start += n - row;
            row += 1;
        }
        visit(row, row + (pos - row_start), rng);
        pos += 1;
        if pos >= total {
            break;
        }
    }
}

/// Draws the matrix for `(spec, trial_index)`.
pub fn sample(spec: &EnsembleSpec, trial_index: u64) -> Result<SampleMatrix> {
    spec.validate()?;
    let n = spec.n;
    let mut rng = trial_rng(spec.master_seed, trial_index, Stream::Entries);
    let h = match spec.kind {
        EnsembleKind::ErdosRenyi => {
            let (one, zero) = spec.er_values();
            let mut data = vec![zero; n * n];
            for_each_hit(&mut rng, n, spec.p(), |i, j, _| {
                data[i * n + j] = one;
                data[j * n + i] = one;
            });
            SymMatrix::from_row_major(n, data)?
        }
        EnsembleKind::SignedSparse => {
            let v = 1.0 / spec.q;
            let mut data = vec![0.0; n * n];
            for_each_hit(&mut rng, n, spec.p(), |i, j, rng| {
                let s = if rng.random::<bool>() { v } else { -v };
                data[i * n + j] = s;
                data[j * n + i] = s;
            });
            SymMatrix::from_row_major(n, data)?
        }
        EnsembleKind::Goe => goe_matrix(n, &mut rng),
        EnsembleKind::CustomCumulant => {
            return Err(Error::UnsupportedKind(
                "CustomCumulant profiles are analytic only and cannot be sampled".into(),
            ))
        }
    };
    let x = compute_x(&h);
    Ok(SampleMatrix { h, x, spec: spec.clone(), trial_index })
}

/// `𝒳` of the sample for `(spec, trial_index)` without materializing the
/// matrix. Consumes the same random stream as [`sample`].
pub fn sample_x(spec: &EnsembleSpec, trial_index: u64) -> Result<f64> {
    spec.validate()?;
    let n = spec.n;
    let nf = n as f64;
    let mut rng = trial_rng(spec.master_seed, trial_index, Stream::Entries);
    let mut hits: u64 = 0;
    let mut diag_hits: u64 = 0;
    let visit_count = |i: usize, j: usize, hits: &mut u64, diag: &mut u64| {
        *hits += 1;
        if i == j {
            *diag += 1;
        }
    };
    match spec.kind {
        EnsembleKind::ErdosRenyi | EnsembleKind::SignedSparse => {
            let signed = spec.kind == EnsembleKind::SignedSparse;
            for_each_hit(&mut rng, n, spec.p(), |i, j, rng| {
                if signed {
                    let _: bool = rng.random();
                }
                visit_count(i, j, &mut hits, &mut diag_hits);
            });
            let ordered = (2 * hits - diag_hits) as f64;
            let (one, zero) = if signed { (1.0 / spec.q, 0.0) } else { spec.er_values() };
            let inv = 1.0 / nf;
            let rest = nf * nf - ordered;
            Ok((ordered * (one * one - inv) + rest * (zero * zero - inv)) / nf)
        }
        EnsembleKind::Goe => {
            let h = goe_matrix(n, &mut rng);
            Ok(compute_x(&h))
        }
        EnsembleKind::CustomCumulant => Err(Error::UnsupportedKind(
            "CustomCumulant profiles are analytic only and cannot be sampled".into(),
        )),
    }
}

fn goe_matrix(n: usize, rng: &mut TrialRng) -> SymMatrix {
    let s = (1.0 / n as f64).sqrt();
    let d = (2.0 / n as f64).sqrt();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let g: f64 = StandardNormal.sample(rng);
            let v = if i == j { d * g } else { s * g };
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    SymMatrix::from_row_major(n, data).expect("symmetric by construction")
}

/// `𝒳 = (1/N) Σ_ij (h_ij² − 1/N)` over all ordered pairs, compensated summation.
pub fn compute_x(h: &SymMatrix) -> f64 {
    let n = h.n();
    if n == 0 {
        return 0.0;
    }
    let inv = 1.0 / n as f64;
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for &v in h.as_slice() {
        let term = v * v - inv;
        let t = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    (sum + comp) * inv
}

/// Raw moment `E[h^k]` of one off-diagonal entry.
pub fn entry_moment(kind: EnsembleKind, q: f64, n: usize, k: usize) -> Result<f64> {
    let nf = n as f64;
    let p = q * q / nf;
    match kind {
        EnsembleKind::ErdosRenyi => {
            if !(p > 0.0 && p < 1.0) {
                return Err(Error::InvalidSparsity(p));
            }
            let s = 1.0 / (q * (1.0 - p).sqrt());
            let ki = k as i32;
            Ok(s.powi(ki) * (p * (1.0 - p).powi(ki) + (1.0 - p) * (-p).powi(ki)))
        }
        EnsembleKind::SignedSparse => {
            if k % 2 == 1 {
                Ok(0.0)
            } else if k == 0 {
                Ok(1.0)
            } else {
                Ok(p / q.powi(k as i32))
            }
        }
        EnsembleKind::Goe => {
            if k % 2 == 1 {
                return Ok(0.0);
            }
            // (k-1)!! σ^k with σ² = 1/N
            let dfact: f64 = (1..k).step_by(2).map(|j| j as f64).product();
            Ok(dfact * nf.powf(-(k as f64) / 2.0))
        }
        EnsembleKind::CustomCumulant => Err(Error::UnsupportedKind("CustomCumulant".into())),
    }
}

/// Cumulants from raw moments `m[0..=K]` (`m[0] = 1`).
pub fn moments_to_cumulants(m: &[f64]) -> Vec<f64> {
    let kmax = m.len() - 1;
    let mut kappa = vec![0.0; kmax + 1];
    for n in 1..=kmax {
        let mut s = m[n];
        let mut binom = 1.0; // C(n-1, k-1)
        for k in 1..n {
            s -= binom * kappa[k] * m[n - k];
            binom = binom * (n - k) as f64 / k as f64;
        }
        kappa[n] = s;
    }
    kappa
}

/// Exact `𝒞_k = κ_k N q^{k−2}/(k−1)!` for `k = 2..=K`.
pub fn cumulants_of(kind: EnsembleKind, q: f64, n: usize, k_max: usize) -> Result<CumulantProfile> {
    if k_max < 4 {
        return Err(Error::InvalidProfile(format!("truncation order must be at least 4, got {k_max}")));
    }
    if kind == EnsembleKind::CustomCumulant {
        return Err(Error::UnsupportedKind("CustomCumulant has no intrinsic entry law".into()));
    }
    if kind == EnsembleKind::Goe {
        let mut c = vec![0.0; k_max - 1];
        c[0] = 1.0;
        return CumulantProfile::new(c);
    }
    let m: Vec<f64> = (0..=k_max).map(|k| entry_moment(kind, q, n, k)).collect::<Result<_>>()?;
    let kappa = moments_to_cumulants(&m);
    let nf = n as f64;
    let mut c = Vec::with_capacity(k_max - 1);
    let mut fact = 1.0; // (k-1)!
    for k in 2..=k_max {
        fact *= (k - 1) as f64;
        c.push(kappa[k] * nf * q.powi(k as i32 - 2) / fact);
    }
    // C_2 is 1 up to rounding; pin it.
    c[0] = 1.0;
    CumulantProfile::new(c)
}

/// `H(t) = e^{−t/2} H + (1 − e^{−t})^{1/2} W` with `W` a GOE matrix drawn from
/// the divisible stream of `(master_seed, trial_index)`.
pub fn gaussian_divisible(h: &SampleMatrix, t: f64, trial_index: u64) -> Result<SampleMatrix> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidArgument(format!("interpolation time must be >= 0, got {t}")));
    }
    if t == 0.0 {
        return Ok(h.clone());
    }
    let n = h.n();
    let mut rng = trial_rng(h.spec.master_seed, trial_index, Stream::DivisibleGoe);
    let w = goe_matrix(n, &mut rng);
    let ht = h.h.affine_combination((-t / 2.0).exp(), &w, (-(-t).exp_m1()).sqrt());
    let x = compute_x(&ht);
    Ok(SampleMatrix { h: ht, x, spec: h.spec.clone(), trial_index })
}
