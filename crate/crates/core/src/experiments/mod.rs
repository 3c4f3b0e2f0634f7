//! Monte Carlo harness for the edge statistics.
//!
//! Trials run in parallel with per-trial seeds and are folded in trial order,
//! so results do not depend on the thread count.

mod stats;
pub mod selftest;

use std::collections::{BTreeMap, HashMap};
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use stats::{ks_one_sample, ks_two_sample, moments, normal_cdf};

use crate::ensemble::{entry_moment, gaussian_divisible, sample, sample_x, EnsembleKind, EnsembleSpec};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, tridiagonal::goe_tridiagonal};
use crate::rng::{trial_rng, Stream};
use crate::sce::{edge_expansion, SCPoly};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Statistic {
    /// `√N q (λ₁ − L)`.
    Lambda1Centered,
    /// `√N (μ₂(A) − q L)` for the adjacency matrix `A`.
    #[serde(rename = "Lambda2ER")]
    Lambda2Er,
    /// `N^{2/3} (λ₁ − L − 𝒳)`, see [`TwVariant`].
    Lambda1MinusX,
    /// `N^{2/3} (λ₁ − λ₂)`.
    Gap12,
    /// `√N q 𝒳`.
    XClt,
}

impl Statistic {
    fn file_stem(self) -> &'static str {
        match self {
            Statistic::Lambda1Centered => "lambda1_centered",
            Statistic::Lambda2Er => "lambda2_er",
            Statistic::Lambda1MinusX => "lambda1_minus_x",
            Statistic::Gap12 => "gap12",
            Statistic::XClt => "x_clt",
        }
    }
}

/// Source of the deterministic edge `L`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Centering {
    #[default]
    Bisect,
    Expansion,
    /// `2 + 6𝒞₄/q²`, without the `q^{−4}` terms.
    NoQ4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TwVariant {
    /// `N^{2/3}(λ₁ − L − 𝒳)` against GOE `N^{2/3}(μ₁ − 2)`.
    #[default]
    Subtracted,
    /// `N^{2/3}(λ₁ − L)` against GOE `N^{2/3}(μ₁ − 2)`.
    Raw,
    /// `N^{2/3}(λ₁ − L)` against `N^{2/3}(μ₁ − 2 + 𝒳)`.
    Convolved,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Thresholds {
    /// Maximum KS distance; defaults to 0.08 (Gaussian) or 0.12 (GOE reference).
    pub ks_max: Option<f64>,
    pub var_lo: f64,
    pub var_hi: f64,
    /// Mean tolerance in standard errors.
    pub mean_se: f64,
    /// `|mean|` bound of the `𝒳` CLT.
    pub x_mean_max: f64,
    /// Relative variance tolerance of the `𝒳` CLT.
    pub x_var_rel: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Self { ks_max: None, var_lo: 0.8, var_hi: 1.2, mean_se: 3.0, x_mean_max: 0.07, x_var_rel: 0.1 }
    }
}

fn default_k() -> usize {
    3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ensemble: EnsembleSpec,
    pub trials: usize,
    pub statistic: Statistic,
    #[serde(default)]
    pub t_interp: Option<f64>,
    #[serde(default = "default_k")]
    pub k_top: usize,
    /// Output directory for records, summary and CSV.
    #[serde(default)]
    pub output_path: Option<String>,
    #[serde(default)]
    pub centering: Centering,
    #[serde(default)]
    pub tw_variant: TwVariant,
    #[serde(default)]
    pub thresholds: Thresholds,
}

impl ExperimentConfig {
    pub fn new(ensemble: EnsembleSpec, trials: usize, statistic: Statistic) -> Self {
        Self {
            ensemble,
            trials,
            statistic,
            t_interp: None,
            k_top: default_k(),
            output_path: None,
            centering: Centering::default(),
            tw_variant: TwVariant::default(),
            thresholds: Thresholds::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials < 50 {
            return Err(Error::Config(format!("trials must be at least 50, got {}", self.trials)));
        }
        if !(1..=10).contains(&self.k_top) {
            return Err(Error::Config(format!("k_top must lie in 1..=10, got {}", self.k_top)));
        }
        if matches!(self.statistic, Statistic::Gap12 | Statistic::Lambda2Er) && self.k_top < 2 {
            return Err(Error::Config("this statistic needs k_top >= 2".into()));
        }
        if self.statistic == Statistic::Lambda2Er && self.ensemble.kind() != EnsembleKind::ErdosRenyi {
            return Err(Error::Config("Lambda2ER needs an ErdosRenyi ensemble".into()));
        }
        if let Some(t) = self.t_interp {
            if !(t >= 0.0 && t.is_finite()) {
                return Err(Error::Config(format!("t_interp must be >= 0, got {t}")));
            }
        }
        if self.ensemble.n() < self.k_top {
            return Err(Error::Config("k_top exceeds N".into()));
        }
        Ok(())
    }

    fn ks_max(&self) -> f64 {
        self.thresholds.ks_max.unwrap_or(match self.statistic {
            Statistic::Lambda1Centered | Statistic::Lambda2Er | Statistic::XClt => 0.08,
            Statistic::Lambda1MinusX | Statistic::Gap12 => 0.12,
        })
    }

    /// Self-consistent polynomial at `𝒳 = 0` (at time `t_interp` when set).
    pub fn polynomial(&self) -> Result<SCPoly> {
        let profile = self.ensemble.profile()?;
        let poly = SCPoly::build(&profile, self.ensemble.q(), 0.0)?;
        Ok(match self.t_interp {
            Some(t) => poly.at_time(t),
            None => poly,
        })
    }

    /// Deterministic edge `L` per the configured centering.
    pub fn edge_l(&self) -> Result<f64> {
        let poly = self.polynomial()?;
        let q = poly.q;
        Ok(match self.centering {
            Centering::Bisect => poly.solve_edge()?.l,
            Centering::Expansion => edge_expansion(6.0 * poly.c4, 120.0 * poly.c6, q, 0.0)?.1,
            Centering::NoQ4 => 2.0 + 6.0 * poly.c4 / (q * q),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_index: u64,
    pub seed: u64,
    /// `λ₁ ≥ … ≥ λ_k` (of `A` for `Lambda2ER`).
    pub top_eigs: Vec<f64>,
    /// `λ_N ≤ … ≤ λ_{N−k+1}`.
    pub bottom_eigs: Vec<f64>,
    #[serde(rename = "X")]
    pub x: f64,
    #[serde(rename = "L_used")]
    pub l_used: f64,
    pub stat: f64,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KsReference {
    StdNormal,
    #[serde(rename = "GOESample")]
    GoeSample,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    pub statistic: Statistic,
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub ks_distance: f64,
    pub ks_reference: KsReference,
    pub pass: bool,
    #[serde(rename = "M_effective")]
    pub m_effective: usize,
    pub details: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Overrides the config's `output_path`.
    pub output_dir: Option<PathBuf>,
    /// Reuse records already on disk for the same seed.
    pub resume: bool,
    /// One status line per 10% of trials on standard error.
    pub progress: bool,
}

#[derive(Debug, Clone)]
pub struct ExperimentOutcome {
    pub summary: SummaryStats,
    pub records: Vec<TrialRecord>,
}

fn regime_guard(cfg: &ExperimentConfig, allowed: &[Statistic]) -> Result<()> {
    if !allowed.contains(&cfg.statistic) {
        return Err(Error::RegimeGuard(format!("statistic {:?} does not belong to this experiment", cfg.statistic)));
    }
    let n = cfg.ensemble.n() as f64;
    let q = cfg.ensemble.q();
    let kind = cfg.ensemble.kind();
    match cfg.statistic {
        Statistic::Lambda1Centered | Statistic::Lambda2Er => {
            if kind != EnsembleKind::ErdosRenyi {
                return Err(Error::RegimeGuard(format!("Gaussian regime needs ErdosRenyi, got {kind}")));
            }
            let expo = cfg.ensemble.p().ln() / n.ln();
            let (lo, hi) = (-7.0 / 9.0 + 0.02, -2.0 / 3.0 - 0.02);
            if !(expo > lo && expo < hi) {
                return Err(Error::RegimeGuard(format!("log p / log N = {expo:.4} outside ({lo:.4}, {hi:.4})")));
            }
        }
        Statistic::Lambda1MinusX => {
            if !matches!(kind, EnsembleKind::ErdosRenyi | EnsembleKind::SignedSparse) {
                return Err(Error::RegimeGuard(format!("TW regime needs ErdosRenyi or SignedSparse, got {kind}")));
            }
            let c = q / n.powf(1.0 / 6.0);
            if !(0.5 - 1e-9..=2.0 + 1e-9).contains(&c) {
                return Err(Error::RegimeGuard(format!("q = C N^(1/6) needs C in [0.5, 2], got {c:.4}")));
            }
        }
        Statistic::Gap12 => {
            let min_q = n.powf(1.0 / 9.0 + 0.01);
            if q < min_q {
                return Err(Error::RegimeGuard(format!("gap universality needs q >= {min_q:.4}, got {q}")));
            }
        }
        Statistic::XClt => {}
    }
    Ok(())
}

/// Statistic of one record under `cfg`'s centering and variant.
pub fn statistic_value(cfg: &ExperimentConfig, l: f64, rec: &TrialRecord) -> f64 {
    let n = cfg.ensemble.n() as f64;
    let q = cfg.ensemble.q();
    let n23 = n.powf(2.0 / 3.0);
    match cfg.statistic {
        Statistic::Lambda1Centered => n.sqrt() * q * (rec.top_eigs[0] - l),
        Statistic::Lambda2Er => n.sqrt() * (rec.top_eigs[1] - q * l),
        Statistic::Lambda1MinusX => match cfg.tw_variant {
            TwVariant::Subtracted => n23 * (rec.top_eigs[0] - l - rec.x),
            TwVariant::Raw | TwVariant::Convolved => n23 * (rec.top_eigs[0] - l),
        },
        Statistic::Gap12 => n23 * (rec.top_eigs[0] - rec.top_eigs[1]),
        Statistic::XClt => n.sqrt() * q * rec.x,
    }
}

fn run_trial(cfg: &ExperimentConfig, l: f64, index: u64) -> Result<TrialRecord> {
    let start = Instant::now();
    let spec = &cfg.ensemble;
    let mut rec = TrialRecord {
        trial_index: index,
        seed: spec.master_seed(),
        top_eigs: Vec::new(),
        bottom_eigs: Vec::new(),
        x: 0.0,
        l_used: l,
        stat: 0.0,
        wall_time_ms: 0.0,
    };
    if cfg.statistic == Statistic::XClt && cfg.t_interp.is_none() {
        rec.x = sample_x(spec, index)?;
    } else {
        let mut s = sample(spec, index)?;
        if let Some(t) = cfg.t_interp {
            s = gaussian_divisible(&s, t, index)?;
        }
        rec.x = s.x;
        let spectrum = if cfg.statistic == Statistic::Lambda2Er {
            eigenvalues(&s.adjacency()?)?
        } else {
            eigenvalues(&s.h)?
        };
        rec.top_eigs = spectrum.top(cfg.k_top).to_vec();
        rec.bottom_eigs = spectrum.bottom(cfg.k_top);
    }
    rec.stat = statistic_value(cfg, l, &rec);
    rec.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(rec)
}

fn output_dir(cfg: &ExperimentConfig, opts: &RunOptions) -> Option<PathBuf> {
    opts.output_dir.clone().or_else(|| cfg.output_path.as_ref().map(PathBuf::from))
}

fn records_path(dir: &Path, cfg: &ExperimentConfig) -> PathBuf {
    dir.join(format!("{}.records.jsonl", cfg.statistic.file_stem()))
}

/// Reads a records file, keeping well-formed lines.
pub fn read_records(path: &Path) -> Result<Vec<TrialRecord>> {
    let f = File::open(path)?;
    let mut out = Vec::new();
    for line in BufReader::new(f).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        if let Ok(r) = serde_json::from_str::<TrialRecord>(&line) {
            out.push(r);
        }
    }
    Ok(out)
}

/// Runs (or resumes) all trials, returning records in trial order.
pub fn collect_records(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<Vec<TrialRecord>> {
    cfg.validate()?;
    let l = cfg.edge_l()?;
    let m = cfg.trials as u64;
    let dir = output_dir(cfg, opts);
    let mut done: HashMap<u64, TrialRecord> = HashMap::new();
    if let (Some(d), true) = (&dir, opts.resume) {
        let p = records_path(d, cfg);
        if p.exists() {
            for r in read_records(&p)? {
                if r.seed == cfg.ensemble.master_seed() && r.trial_index < m && r.top_eigs.len() >= expected_k(cfg) {
                    done.insert(r.trial_index, r);
                }
            }
        }
    }
    let mut writer = match &dir {
        Some(d) => {
            fs::create_dir_all(d)?;
            let mut w = BufWriter::new(File::create(records_path(d, cfg))?);
            let mut kept: Vec<&TrialRecord> = done.values().collect();
            kept.sort_by_key(|r| r.trial_index);
            for r in kept {
                writeln!(w, "{}", serde_json::to_string(r)?)?;
            }
            w.flush()?;
            Some(w)
        }
        None => None,
    };
    let todo: Vec<u64> = (0..m).filter(|i| !done.contains_key(i)).collect();
    let chunk = todo.len().div_ceil(10).max(1);
    let mut finished = done.len();
    for part in todo.chunks(chunk) {
        let recs: Vec<TrialRecord> = part.par_iter().map(|&i| run_trial(cfg, l, i)).collect::<Result<_>>()?;
        if let Some(w) = writer.as_mut() {
            for r in &recs {
                writeln!(w, "{}", serde_json::to_string(r)?)?;
            }
            w.flush()?;
        }
        finished += recs.len();
        for r in recs {
            done.insert(r.trial_index, r);
        }
        if opts.progress {
            eprintln!(
                "{}: {}/{} trials ({:.0}%)",
                cfg.statistic.file_stem(),
                finished,
                m,
                100.0 * finished as f64 / m as f64
            );
        }
    }
    let mut out: Vec<TrialRecord> = done.into_values().collect();
    out.sort_by_key(|r| r.trial_index);
    if let Some(d) = &dir {
        let mut w = BufWriter::new(File::create(records_path(d, cfg))?);
        for r in &out {
            writeln!(w, "{}", serde_json::to_string(r)?)?;
        }
        w.flush()?;
    }
    Ok(out)
}

fn expected_k(cfg: &ExperimentConfig) -> usize {
    if cfg.statistic == Statistic::XClt && cfg.t_interp.is_none() {
        0
    } else {
        cfg.k_top
    }
}

/// Top two eigenvalues of `m` GOE matrices of size `n` from the reference stream.
pub fn goe_reference_top2(n: usize, m: usize, master_seed: u64) -> Vec<(f64, f64)> {
    (0..m as u64)
        .into_par_iter()
        .map(|j| {
            let mut rng = trial_rng(master_seed, j, Stream::GoeReference);
            let t = goe_tridiagonal(n, &mut rng);
            (t.kth_largest(1), if n > 1 { t.kth_largest(2) } else { f64::NAN })
        })
        .collect()
}

/// Reference sample matching `cfg`'s statistic.
pub fn reference_sample(cfg: &ExperimentConfig, records: &[TrialRecord]) -> Option<Vec<f64>> {
    let n = cfg.ensemble.n();
    let n23 = (n as f64).powf(2.0 / 3.0);
    match cfg.statistic {
        Statistic::Lambda1MinusX => {
            let goe = goe_reference_top2(n, records.len(), cfg.ensemble.master_seed());
            Some(
                goe.iter()
                    .zip(records)
                    .map(|(&(mu1, _), r)| match cfg.tw_variant {
                        TwVariant::Convolved => n23 * (mu1 - 2.0 + r.x),
                        _ => n23 * (mu1 - 2.0),
                    })
                    .collect(),
            )
        }
        Statistic::Gap12 => {
            let goe = goe_reference_top2(n, records.len(), cfg.ensemble.master_seed());
            Some(goe.iter().map(|&(a, b)| n23 * (a - b)).collect())
        }
        _ => None,
    }
}

/// Exact `Var(√N q 𝒳) = q² Var(h²)(2N − 1)` for the sampled entry law.
pub fn exact_x_variance(spec: &EnsembleSpec) -> Result<f64> {
    let (n, q) = (spec.n(), spec.q());
    let m2 = entry_moment(spec.kind(), q, n, 2)?;
    let m4 = entry_moment(spec.kind(), q, n, 4)?;
    let nf = n as f64;
    if spec.kind() == EnsembleKind::Goe {
        // Var(h_ii²) = 8/N², Var(h_ij²) = 2/N²
        return Ok(q * q * (4.0 * nf + 4.0) / (nf * nf));
    }
    Ok(q * q * (m4 - m2 * m2) * (2.0 * nf - 1.0))
}

/// Aggregates records (statistics recomputed under `cfg`).
pub fn summarize(cfg: &ExperimentConfig, records: &[TrialRecord], reference: Option<&[f64]>) -> Result<SummaryStats> {
    let l = cfg.edge_l()?;
    let values: Vec<f64> =
        records.iter().map(|r| statistic_value(cfg, l, r)).filter(|v| v.is_finite()).collect();
    let (mean, variance, skewness) = moments(&values)?;
    let m = values.len();
    let th = &cfg.thresholds;
    let mut details = BTreeMap::new();
    details.insert("L".to_string(), l);
    let (ks_distance, ks_reference, pass) = match cfg.statistic {
        Statistic::Lambda1Centered | Statistic::Lambda2Er => {
            let ks = ks_one_sample(&values, normal_cdf)?;
            let mean_ok = mean.abs() <= th.mean_se * (variance / m as f64).sqrt();
            details.insert("mean_ok".into(), mean_ok as u8 as f64);
            (ks, KsReference::StdNormal, variance >= th.var_lo && variance <= th.var_hi && ks <= cfg.ks_max() && mean_ok)
        }
        Statistic::XClt => {
            let target = 6.0 * cfg.ensemble.profile()?.c4();
            let sd = target.sqrt();
            let ks = ks_one_sample(&values, |x| normal_cdf(x / sd))?;
            details.insert("target_variance".into(), target);
            if let Ok(v) = exact_x_variance(&cfg.ensemble) {
                details.insert("exact_variance".into(), v);
            }
            let pass = mean.abs() <= th.x_mean_max
                && variance >= (1.0 - th.x_var_rel) * target
                && variance <= (1.0 + th.x_var_rel) * target;
            (ks, KsReference::StdNormal, pass)
        }
        Statistic::Lambda1MinusX | Statistic::Gap12 => {
            let owned;
            let reference = match reference {
                Some(r) => r,
                None => {
                    owned = reference_sample(cfg, records).expect("reference for GOE statistics");
                    &owned
                }
            };
            let ks = ks_two_sample(&values, reference)?;
            let (rm, rv, _) = moments(reference)?;
            let se = (variance / m as f64 + rv / reference.len() as f64).sqrt();
            details.insert("reference_mean".into(), rm);
            details.insert("reference_variance".into(), rv);
            details.insert("mean_diff_se".into(), (mean - rm).abs() / se);
            let mut pass = ks <= cfg.ks_max();
            if cfg.statistic == Statistic::Lambda1MinusX {
                pass &= (mean - rm).abs() <= th.mean_se * se;
            }
            (ks, KsReference::GoeSample, pass)
        }
    };
    Ok(SummaryStats { statistic: cfg.statistic, mean, variance, skewness, ks_distance, ks_reference, pass, m_effective: m, details })
}

fn write_outputs(dir: &Path, cfg: &ExperimentConfig, records: &[TrialRecord], summary: &SummaryStats) -> Result<()> {
    fs::create_dir_all(dir)?;
    let stem = cfg.statistic.file_stem();
    let body = serde_json::json!({ "config": cfg, "summary": summary });
    fs::write(dir.join(format!("{stem}.summary.json")), serde_json::to_string_pretty(&body)? + "\n")?;
    let l = cfg.edge_l()?;
    let mut w = BufWriter::new(File::create(dir.join(format!("{stem}.csv")))?);
    writeln!(w, "trial,lambda1,lambda2,X,stat")?;
    for r in records {
        let l1 = r.top_eigs.first().copied().unwrap_or(f64::NAN);
        let l2 = r.top_eigs.get(1).copied().unwrap_or(f64::NAN);
        writeln!(w, "{},{},{},{},{}", r.trial_index, l1, l2, r.x, statistic_value(cfg, l, r))?;
    }
    w.flush()?;
    Ok(())
}

fn run_checked(cfg: &ExperimentConfig, opts: &RunOptions, allowed: &[Statistic]) -> Result<ExperimentOutcome> {
    cfg.validate()?;
    regime_guard(cfg, allowed)?;
    let records = collect_records(cfg, opts)?;
    let summary = summarize(cfg, &records, None)?;
    if let Some(d) = output_dir(cfg, opts) {
        write_outputs(&d, cfg, &records, &summary)?;
    }
    Ok(ExperimentOutcome { summary, records })
}

/// Gaussian regime `N^{−7/9} ≪ p ≪ N^{−2/3}`: KS against `𝒩(0, 1)`.
pub fn run_gaussian_regime(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutcome> {
    run_checked(cfg, opts, &[Statistic::Lambda1Centered, Statistic::Lambda2Er])
}

/// `q = C N^{1/6}`: two-sample KS against a GOE reference.
pub fn run_tw_regime(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutcome> {
    run_checked(cfg, opts, &[Statistic::Lambda1MinusX])
}

/// Top gap against GOE gaps.
pub fn run_gap(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutcome> {
    run_checked(cfg, opts, &[Statistic::Gap12])
}

/// `√N q 𝒳` against `𝒩(0, 6𝒞₄)`; no eigensolves.
pub fn run_x_clt(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutcome> {
    run_checked(cfg, opts, &[Statistic::XClt])
}

/// Dispatches on the configured statistic.
pub fn run_experiment(cfg: &ExperimentConfig, opts: &RunOptions) -> Result<ExperimentOutcome> {
    match cfg.statistic {
        Statistic::Lambda1Centered | Statistic::Lambda2Er => run_gaussian_regime(cfg, opts),
        Statistic::Lambda1MinusX => run_tw_regime(cfg, opts),
        Statistic::Gap12 => run_gap(cfg, opts),
        Statistic::XClt => run_x_clt(cfg, opts),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn goe_cfg(stat: Statistic) -> ExperimentConfig {
        ExperimentConfig::new(EnsembleSpec::goe(60, 4).unwrap(), 50, stat)
    }

    #[test]
    fn guards() {
        let c = goe_cfg(Statistic::Lambda1Centered);
        assert!(matches!(run_gaussian_regime(&c, &RunOptions::default()), Err(Error::RegimeGuard(_))));
        let n = 2000usize;
        let spec = EnsembleSpec::with_p(EnsembleKind::ErdosRenyi, n, (n as f64).powf(-0.5), 0).unwrap();
        let c = ExperimentConfig::new(spec, 50, Statistic::Lambda1Centered);
        assert!(matches!(run_gaussian_regime(&c, &RunOptions::default()), Err(Error::RegimeGuard(_))));
        let mut c = goe_cfg(Statistic::Gap12);
        c.trials = 10;
        assert!(matches!(c.validate(), Err(Error::Config(_))));
    }

    #[test]
    fn gap_invariant_under_x_shift() {
        let c = goe_cfg(Statistic::Gap12);
        let r = TrialRecord {
            trial_index: 0,
            seed: 0,
            top_eigs: vec![2.01, 1.95],
            bottom_eigs: vec![],
            x: 0.013,
            l_used: 2.0,
            stat: 0.0,
            wall_time_ms: 0.0,
        };
        let mut shifted = r.clone();
        shifted.top_eigs.iter_mut().for_each(|v| *v -= r.x);
        assert_eq!(statistic_value(&c, 2.0, &r), statistic_value(&c, 2.0, &shifted));
    }

    #[test]
    fn thread_count_does_not_change_results() {
        let c = goe_cfg(Statistic::Gap12);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| run_gap(&c, &RunOptions::default())).unwrap();
        let b = four.install(|| run_gap(&c, &RunOptions::default())).unwrap();
        assert_eq!(a.summary, b.summary);
        let strip = |v: &[TrialRecord]| v.iter().map(|r| (r.top_eigs.clone(), r.x)).collect::<Vec<_>>();
        assert_eq!(strip(&a.records), strip(&b.records));
    }

    #[test]
    fn records_roundtrip_and_resume() {
        let dir = tempfile::tempdir().unwrap();
        let c = goe_cfg(Statistic::Gap12);
        let opts = RunOptions { output_dir: Some(dir.path().to_path_buf()), resume: true, progress: false };
        let a = run_gap(&c, &opts).unwrap();
        let path = dir.path().join("gap12.records.jsonl");
        let back = read_records(&path).unwrap();
        assert_eq!(back.len(), 50);
        // drop half the records and resume
        let text = fs::read_to_string(&path).unwrap();
        let half: Vec<&str> = text.lines().take(25).collect();
        fs::write(&path, half.join("\n") + "\n").unwrap();
        let b = run_gap(&c, &opts).unwrap();
        assert_eq!(a.summary, b.summary);
        assert!(dir.path().join("gap12.summary.json").exists());
        let csv = fs::read_to_string(dir.path().join("gap12.csv")).unwrap();
        assert!(csv.starts_with("trial,lambda1,lambda2,X,stat\n"));
        assert_eq!(csv.lines().count(), 51);
    }

    #[test]
    fn config_json() {
        let text = r#"{"ensemble":{"kind":"SignedSparse","N":1000,"q":3.1622776601683795,"seed":7},
                       "trials":400,"statistic":"Lambda1MinusX","k_top":2}"#;
        let c: ExperimentConfig = serde_json::from_str(text).unwrap();
        assert_eq!(c.statistic, Statistic::Lambda1MinusX);
        assert_eq!(c.tw_variant, TwVariant::Subtracted);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"ensemble":{"kind":"GOE","N":10},"trials":50,"statistic":"Gap12","bogus":1}"#).is_err());
    }

    #[test]
    fn exact_x_variance_er() {
        let spec = EnsembleSpec::with_p(EnsembleKind::ErdosRenyi, 2000, 2000f64.powf(-0.72), 0).unwrap();
        let v = exact_x_variance(&spec).unwrap();
        let c4 = spec.profile().unwrap().c4();
        let q2n = spec.q().powi(2) / 2000.0;
        assert!((v - 2.0 * (6.0 * c4 + 2.0 * q2n)).abs() < 1e-2, "{v}");
    }
}
