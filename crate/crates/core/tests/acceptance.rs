//! Acceptance suite: one pass/fail line per criterion.
//!
//! Run a subset with `cargo test -p sparse-edge --test acceptance -- 1 3 7`.

use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;
use sparse_edge::experiments::{summarize, Centering, ExperimentOutcome, TwVariant};
use sparse_edge::freeconv::analytic_oracle;
use sparse_edge::linalg::m_sc;
use sparse_edge::sce::{tau_expansion_statement, DensityEvaluator};
use sparse_edge::verify::pass_rate;
use sparse_edge::{
    counting_check, edge_expansion, eigenvalue_location_check, eigenvalues, free_conv_edge, ks_two_sample,
    local_law_check, rigidity_check, run_gaussian_regime, run_tw_regime, run_x_clt, sample, stieltjes_m_inf,
    ComplexPoint, EnsembleKind, EnsembleSpec, ExperimentConfig, RunOptions, SCPoly, SpectralMeasure, Spectrum,
    Statistic, TrialRecord, VerifyConfig,
};

type Res<T> = Result<T, String>;

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: String) -> Res<Verdict> {
    Ok(Verdict { pass, detail })
}

fn s<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

const ER_C4: f64 = 1.0 / 6.0;
const ER_C6: f64 = 1.0 / 120.0;
const DYADIC_Q: [f64; 4] = [8.0, 16.0, 32.0, 64.0];

fn er_spec(n: usize, p: f64, seed: u64) -> Res<EnsembleSpec> {
    EnsembleSpec::with_p(EnsembleKind::ErdosRenyi, n, p, seed).map_err(s)
}

fn er_spec_q(n: usize, q: f64, seed: u64) -> Res<EnsembleSpec> {
    EnsembleSpec::new(EnsembleKind::ErdosRenyi, n, q, seed).map_err(s)
}

fn progress() -> RunOptions {
    RunOptions { output_dir: None, resume: false, progress: true }
}

fn ratios(v: &[f64]) -> Vec<f64> {
    v.windows(2).map(|w| w[0] / w[1]).collect()
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

// Criterion 1

fn edge_formula() -> Res<Verdict> {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut all = true;
    for q in DYADIC_Q {
        let poly = SCPoly::new(q, 0.0, ER_C4, ER_C6).map_err(s)?;
        let l = poly.solve_edge().map_err(s)?.l;
        let target = 2.0 + q.powi(-2) - 1.25 * q.powi(-4);
        let scaled = (l - target).abs() * q.powi(6);
        worst = worst.max(scaled);
        all &= scaled <= 10.0;
    }
    let secs = start.elapsed().as_secs_f64();
    verdict(all && secs < 1.0, format!("max q^6|L - formula| = {worst:.4} (bound 10), {secs:.4} s (< 1 s)"))
}

// Criterion 2

fn expansion_arbitration() -> Res<Verdict> {
    let start = Instant::now();
    let (a, b) = (6.0 * ER_C4, 120.0 * ER_C6);
    let mut dev_l = Vec::new();
    let mut dev_tau = Vec::new();
    let mut dev_stmt = Vec::new();
    let mut stmt_scaled = Vec::new();
    for q in DYADIC_Q {
        let poly = SCPoly::new(q, 0.0, ER_C4, ER_C6).map_err(s)?;
        let root = poly.solve_edge().map_err(s)?;
        let (tau, l) = edge_expansion(a, b, q, 0.0).map_err(s)?;
        dev_l.push((l - root.l).abs());
        dev_tau.push((tau - root.tau).abs());
        let d = (tau_expansion_statement(a, b, q, 0.0) - root.tau).abs();
        dev_stmt.push(d);
        stmt_scaled.push(d * q * q);
    }
    let (rl, rt, rs) = (ratios(&dev_l), ratios(&dev_tau), ratios(&dev_stmt));
    let in_q6 = |r: &[f64]| r.iter().all(|&x| (16.0..=256.0).contains(&x));
    let q2_order = rs.iter().all(|&x| (2.0..=8.0).contains(&x)) && stmt_scaled.iter().all(|&x| x >= 0.5);
    let secs = start.elapsed().as_secs_f64();
    verdict(
        in_q6(&rl) && in_q6(&rt) && q2_order && secs < 1.0,
        format!(
            "L ratios {} tau ratios {} (target [16, 256]); statement-tau q^2 dev {} ratios {} (q^-2 order); {secs:.4} s",
            fmt_list(&rl),
            fmt_list(&rt),
            fmt_list(&stmt_scaled),
            fmt_list(&rs)
        ),
    )
}

// Criterion 3

fn x_clt() -> Res<Verdict> {
    let n = 2000;
    let spec = er_spec(n, (n as f64).powf(-0.72), 3003)?;
    let cfg = ExperimentConfig::new(spec, 2000, Statistic::XClt);
    let start = Instant::now();
    let out = run_x_clt(&cfg, &RunOptions::default()).map_err(s)?;
    let secs = start.elapsed().as_secs_f64();
    let target = 6.0 * cfg.ensemble.profile().map_err(s)?.c4();
    let sm = &out.summary;
    let exact = sm.details.get("exact_variance").copied().unwrap_or(f64::NAN);
    let ok = sm.mean.abs() <= 0.07 && sm.variance >= 0.9 * target && sm.variance <= 1.1 * target;
    verdict(
        ok && secs < 30.0,
        format!(
            "mean {:.4} (|.| <= 0.07), variance {:.4} vs 6C4 = {:.4} (ratio {:.3}, need [0.9, 1.1]); exact finite-N variance {:.4}; {secs:.1} s (< 30 s)",
            sm.mean,
            sm.variance,
            target,
            sm.variance / target,
            exact
        ),
    )
}

// Criterion 4 (records reused by criterion 9)

const GAUSS_N: usize = 2000;
const GAUSS_P_EXP: f64 = -0.72;

fn gaussian_cfg() -> Res<ExperimentConfig> {
    let spec = er_spec(GAUSS_N, (GAUSS_N as f64).powf(GAUSS_P_EXP), 4004)?;
    Ok(ExperimentConfig::new(spec, 500, Statistic::Lambda1Centered))
}

fn gaussian_outcome() -> &'static Res<(ExperimentOutcome, f64)> {
    static CELL: OnceLock<Res<(ExperimentOutcome, f64)>> = OnceLock::new();
    CELL.get_or_init(|| {
        let cfg = gaussian_cfg()?;
        let start = Instant::now();
        let out = run_gaussian_regime(&cfg, &progress()).map_err(s)?;
        Ok((out, start.elapsed().as_secs_f64()))
    })
}

fn gaussian_regime() -> Res<Verdict> {
    let cfg = gaussian_cfg()?;
    let (out, secs) = gaussian_outcome().as_ref().map_err(Clone::clone)?;
    let sm = &out.summary;
    let ok = (0.8..=1.2).contains(&sm.variance) && sm.ks_distance <= 0.08;

    let n = GAUSS_N as f64;
    let q = cfg.ensemble.q();
    let mut noq4 = cfg.clone();
    noq4.centering = Centering::NoQ4;
    let sm_noq4 = summarize(&noq4, &out.records, None).map_err(s)?;
    let shift = sm_noq4.mean - sm.mean;
    let predicted = 1.25 * n.sqrt() * q.powi(-3);
    let se = (sm.variance / sm.m_effective as f64).sqrt();
    let detected = predicted < 0.5 || (shift.abs() >= 3.0 * se && (shift.abs() / predicted - 1.0).abs() <= 0.5);

    let mut exp = cfg.clone();
    exp.centering = Centering::Expansion;
    // The closed-form expansion needs q >= 3; below that only the root-finder centering exists.
    let (exp_ok, exp_note) = match summarize(&exp, &out.records, None) {
        Ok(sm_exp) => {
            let d = (sm_exp.variance - sm.variance).abs();
            (d <= 0.02, format!("{d:.2e}"))
        }
        Err(e) => (true, format!("n/a ({e})")),
    };

    verdict(
        ok && detected && exp_ok,
        format!(
            "q = {q:.3}, mean {:.4}, variance {:.4} (need [0.8, 1.2]), KS {:.4} (<= 0.08); no-q^-4 mean shift {:.4} vs predicted (5/4)sqrt(N)q^-3 = {:.4} ({:.1} SE); expansion-centering variance diff {}; {secs:.0} s",
            sm.mean,
            sm.variance,
            sm.ks_distance,
            shift,
            predicted,
            shift.abs() / se,
            exp_note
        ),
    )
}

// Criteria 5 and 6

const TW_N: usize = 1000;

fn tw_cfg(c: f64) -> Res<ExperimentConfig> {
    let n = TW_N as f64;
    let spec = er_spec_q(TW_N, c * n.powf(1.0 / 6.0), 5005)?;
    Ok(ExperimentConfig::new(spec, 400, Statistic::Lambda1MinusX))
}

fn tw_outcome(c: f64) -> &'static Res<ExperimentOutcome> {
    static FULL: OnceLock<Res<ExperimentOutcome>> = OnceLock::new();
    static HALF: OnceLock<Res<ExperimentOutcome>> = OnceLock::new();
    let cell = if c == 1.0 { &FULL } else { &HALF };
    cell.get_or_init(|| run_tw_regime(&tw_cfg(c)?, &progress()).map_err(s))
}

fn tw_regime() -> Res<Verdict> {
    let start = Instant::now();
    let out = tw_outcome(1.0).as_ref().map_err(Clone::clone)?;
    let ks = out.summary.ks_distance;

    let half_cfg = tw_cfg(0.5)?;
    let half = tw_outcome(0.5).as_ref().map_err(Clone::clone)?;
    let ks_sub = half.summary.ks_distance;
    let mut raw = half_cfg.clone();
    raw.tw_variant = TwVariant::Raw;
    let ks_raw = summarize(&raw, &half.records, None).map_err(s)?.ks_distance;
    let secs = start.elapsed().as_secs_f64();
    verdict(
        ks <= 0.12 && ks_raw - ks_sub >= 0.05,
        format!(
            "KS vs GOE at q = N^(1/6): {ks:.4} (<= 0.12), mean diff {:.2} SE; ablation at q = 0.5 N^(1/6): raw {ks_raw:.4} - subtracted {ks_sub:.4} = {:.4} (>= 0.05); {secs:.0} s",
            out.summary.details.get("mean_diff_se").copied().unwrap_or(f64::NAN),
            ks_raw - ks_sub
        ),
    )
}

fn gap_universality() -> Res<Verdict> {
    let out = tw_outcome(1.0).as_ref().map_err(Clone::clone)?;
    let mut cfg = tw_cfg(1.0)?;
    cfg.statistic = Statistic::Gap12;
    let sm = summarize(&cfg, &out.records, None).map_err(s)?;

    let l = cfg.edge_l().map_err(s)?;
    let mut invariant = true;
    let mut worst_shift = 0.0_f64;
    for r in &out.records {
        let base = sparse_edge::experiments::statistic_value(&cfg, l, r);
        let mut moved_x = r.clone();
        moved_x.x += 0.37;
        invariant &= sparse_edge::experiments::statistic_value(&cfg, l, &moved_x).to_bits() == base.to_bits();
        let shifted = TrialRecord { top_eigs: r.top_eigs.iter().map(|v| v - r.x).collect(), ..r.clone() };
        let d = (sparse_edge::experiments::statistic_value(&cfg, l, &shifted) - base).abs();
        worst_shift = worst_shift.max(d);
    }
    invariant &= worst_shift <= 1e-10;

    let n = TW_N;
    let n23 = (n as f64).powf(2.0 / 3.0);
    let goe_a = sparse_edge::experiments::goe_reference_top2(n, 400, 61);
    let goe_b = sparse_edge::experiments::goe_reference_top2(n, 400, 62);
    let ga: Vec<f64> = goe_a.iter().map(|&(x, y)| n23 * (x - y)).collect();
    let gb: Vec<f64> = goe_b.iter().map(|&(x, y)| n23 * (x - y)).collect();
    let null = ks_two_sample(&ga, &gb).map_err(s)?;
    let ta: Vec<f64> = goe_a.iter().map(|&(x, _)| n23 * (x - 2.0)).collect();
    let tb: Vec<f64> = goe_b.iter().map(|&(x, _)| n23 * (x - 2.0)).collect();
    let null_top = ks_two_sample(&ta, &tb).map_err(s)?;

    verdict(
        sm.ks_distance <= 0.12 && invariant && null <= 0.1 && null_top <= 0.1,
        format!(
            "gap KS vs GOE {:.4} (<= 0.12); X-shift invariance {} (eigenvalue-shift max diff {worst_shift:.1e}); GOE-vs-GOE null KS gap {null:.4}, top {null_top:.4} (<= 0.1)",
            sm.ks_distance,
            if invariant { "exact" } else { "broken" }
        ),
    )
}

// Criterion 7

fn free_convolution() -> Res<Verdict> {
    let start = Instant::now();
    let sc = SpectralMeasure::semicircle(1.0).map_err(s)?;
    let mut fixed_ok = true;
    let mut fixed = Vec::new();
    for t in [0.01, 0.1, 0.5] {
        let fc = free_conv_edge(&sc, t).map_err(s)?;
        fixed_ok &= (fc.e_plus - 2.0).abs() <= 1e-8 && (fc.gamma0 - 1.0).abs() <= 1e-3;
        fixed.push(format!("t={t}: dE {:.1e}, dgamma {:.1e}", fc.e_plus - 2.0, fc.gamma0 - 1.0));
    }

    let n = 2000usize;
    let nf = n as f64;
    let q = nf.powf(1.0 / 6.0);
    let t = nf.powf(-2.0 / 15.0);
    let spec = er_spec_q(n, q, 7007)?;
    let profile = spec.profile().map_err(s)?;
    let slack = nf.powf(0.05);
    let e_tol = nf.powf(-2.0 / 3.0 - 0.01) * slack;
    let rate = 1.0 / (nf.sqrt() * q.powf(1.5) * t * t) + 1.0 / (nf * t.powi(3));
    let xi_tol = slack * t * t * rate;
    let gamma_tol = slack * rate;
    let base = SCPoly::build(&profile, q, 0.0).map_err(s)?;
    let l_t = base.at_time(t).solve_edge().map_err(s)?.l;
    let (c4, c6) = (profile.c4(), profile.c6());
    let l_display = 2.0 + 6.0 * c4 / (q * q) * (1.0 - 2.0 * t) + 120.0 * c6 / q.powi(4) - 81.0 * c4 * c4 / q.powi(4);

    struct Trial {
        e_dev: f64,
        xi_dev: f64,
        gamma_dev: f64,
        gamma_tilde: f64,
        oracle_dev: f64,
    }
    let trials: Vec<Res<Trial>> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let smp = sample(&spec, i).map_err(s)?;
            let spectrum = eigenvalues(&smp.h).map_err(s)?;
            let poly = SCPoly::build(&profile, q, smp.x).map_err(s)?;
            let hat = free_conv_edge(&SpectralMeasure::discrete(&spectrum).map_err(s)?, t).map_err(s)?;
            let tilde = free_conv_edge(&SpectralMeasure::analytic(poly).map_err(s)?, t).map_err(s)?;
            let oracle = analytic_oracle(&poly, t).map_err(s)?;
            Ok(Trial {
                e_dev: (tilde.e_plus - (l_t + smp.x)).abs(),
                xi_dev: (hat.xi_plus - tilde.xi_plus).abs(),
                gamma_dev: (hat.gamma0 - tilde.gamma0).abs(),
                gamma_tilde: tilde.gamma0,
                oracle_dev: (oracle.e_plus - tilde.e_plus).abs().max((oracle.xi_plus - tilde.xi_plus).abs()),
            })
        })
        .collect();
    let trials: Vec<Trial> = trials.into_iter().collect::<Res<_>>()?;
    let m = trials.len() as f64;
    let e_worst = trials.iter().map(|r| r.e_dev).fold(0.0, f64::max);
    let e_ok = trials.iter().all(|r| r.e_dev <= e_tol);
    let xi_rate = trials.iter().filter(|r| r.xi_dev <= xi_tol).count() as f64 / m;
    let gamma_rate = trials.iter().filter(|r| r.gamma_dev <= gamma_tol).count() as f64 / m;
    let gamma_tilde_ok = trials.iter().all(|r| (r.gamma_tilde - 1.0).abs() <= nf.powf(-0.05));
    let oracle_worst = trials.iter().map(|r| r.oracle_dev).fold(0.0, f64::max);
    let xi_med = median(trials.iter().map(|r| r.xi_dev).collect());
    let gamma_med = median(trials.iter().map(|r| r.gamma_dev).collect());
    let secs = start.elapsed().as_secs_f64();
    verdict(
        fixed_ok && e_ok && xi_rate >= 0.9 && gamma_rate >= 0.9 && gamma_tilde_ok,
        format!(
            "semicircle {}; t = {t:.4}: max |E~ - (L_t + X)| {e_worst:.2e} (<= {e_tol:.2e}; displayed-formula L_t differs by {:.2e}); xi pass {:.0}% (bound {xi_tol:.2e}, median dev {xi_med:.2e}); gamma pass {:.0}% (bound {gamma_tol:.2e}, median dev {gamma_med:.2e}); |gamma~ - 1| <= N^-0.05: {gamma_tilde_ok}; oracle vs quadrature {oracle_worst:.1e}; {secs:.0} s",
            fixed.join("; "),
            (l_display - l_t).abs(),
            100.0 * xi_rate,
            100.0 * gamma_rate
        ),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

// Criterion 8

fn exact_invariants() -> Res<Verdict> {
    let start = Instant::now();
    let report = sparse_edge::experiments::selftest::run_selftest(Default::default()).map_err(s)?;
    let secs = start.elapsed().as_secs_f64();
    let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();

    // Full 100 x 100 grid, E in [-3, 3], eta log-spaced in [1e-6, 2].
    let poly = SCPoly::new(7.0, 0.0, ER_C4, ER_C6).map_err(s)?;
    let mut worst_res = 0.0_f64;
    let mut herglotz = true;
    for i in 0..100 {
        let e = -3.0 + 6.0 * i as f64 / 99.0;
        for j in 0..100 {
            let eta = 1e-6 * (2e6f64).powf(j as f64 / 99.0);
            let z = ComplexPoint::new(e, eta).map_err(s)?;
            let m = stieltjes_m_inf(&poly, z).map_err(s)?;
            worst_res = worst_res.max(poly.p(z.z(), m).norm());
            herglotz &= m.im > 0.0;
        }
    }
    let msc_res = (0..100)
        .map(|i| {
            let z = ComplexPoint::new(-3.0 + 0.06 * i as f64, 1e-3 + 0.02 * i as f64).unwrap();
            let m = m_sc(z);
            (m * m + z.z() * m + Complex64::new(1.0, 0.0)).norm()
        })
        .fold(0.0, f64::max);
    verdict(
        report.passed && failed.is_empty() && secs < 60.0 && worst_res <= 1e-12 && herglotz && msc_res <= 1e-13,
        format!(
            "selftest {} checks, failed {:?}, {secs:.2} s (< 60 s); P residual on 100x100 grid {worst_res:.1e} (<= 1e-12), Herglotz {herglotz}; m_sc residual {msc_res:.1e}",
            report.checks.len(),
            failed
        ),
    )
}

// Criterion 9

fn padded_spectrum(rec: &TrialRecord, n: usize) -> Spectrum {
    let mut v = rec.top_eigs.clone();
    v.resize(n - rec.bottom_eigs.len(), 0.0);
    v.extend(rec.bottom_eigs.iter().rev());
    Spectrum::new(v)
}

fn diagnostics() -> Res<Verdict> {
    let start = Instant::now();
    let cfg = VerifyConfig::default();
    let eps = cfg.epsilon;

    // Local law: ER N = 1000, q = N^0.15, z = 0.5 + i N^-0.5.
    let n = 1000usize;
    let nf = n as f64;
    let spec = er_spec_q(n, nf.powf(0.15), 9001)?;
    let z = [ComplexPoint::new(0.5, nf.powf(-0.5)).map_err(s)?];
    let local: Vec<bool> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let smp = sample(&spec, i).map_err(s)?;
            let r = local_law_check(&smp.h, spec.q(), &z, eps).map_err(s)?;
            Ok(r.iter().all(|d| d.passed()))
        })
        .collect::<Res<_>>()?;
    let local_rate = rate(&local);

    // Rigidity and counting: ER N = 2000, q = N^0.15.
    let n = 2000usize;
    let nf = n as f64;
    let spec = er_spec_q(n, nf.powf(0.15), 9002)?;
    let profile = spec.profile().map_err(s)?;
    let zr = [ComplexPoint::new(0.0, nf.powf(-0.55)).map_err(s)?];
    let kappa = 0.2;
    let per_trial: Vec<(bool, sparse_edge::DiagnosticReport)> = (0..50u64)
        .into_par_iter()
        .map(|i| {
            let smp = sample(&spec, i).map_err(s)?;
            let spectrum = eigenvalues(&smp.h).map_err(s)?;
            let poly = SCPoly::build(&profile, spec.q(), smp.x).map_err(s)?;
            let rig = rigidity_check(&spectrum, &poly, &zr, cfg.domain_a, eps).map_err(s)?;
            let density = DensityEvaluator::new(poly).map_err(s)?;
            let count = counting_check(&spectrum, &density, kappa, &cfg).map_err(s)?;
            Ok((rig.iter().all(|d| d.passed()), count))
        })
        .collect::<Res<_>>()?;
    let rig_rate = rate(&per_trial.iter().map(|p| p.0).collect::<Vec<_>>());
    let counts: Vec<_> = per_trial.iter().map(|p| p.1.clone()).collect();
    let count_rate = pass_rate(&counts).unwrap_or(0.0);
    let predicted = counts[0].params.get("predicted").copied().unwrap_or(f64::NAN);

    // Eigenvalue location on the Gaussian-regime records (first 50 trials).
    let gcfg = gaussian_cfg()?;
    let (out, _) = gaussian_outcome().as_ref().map_err(Clone::clone)?;
    let edge = gcfg.polynomial().map_err(s)?.solve_edge().map_err(s)?;
    let q = gcfg.ensemble.q();
    let mut loc = Vec::new();
    let mut loc_ablate = Vec::new();
    for rec in out.records.iter().take(50) {
        let sp = padded_spectrum(rec, GAUSS_N);
        loc.push(eigenvalue_location_check(&sp, &edge, q, rec.x, 3, cfg.c_exp).map_err(s)?.passed());
        loc_ablate.push(eigenvalue_location_check(&sp, &edge, q, 0.0, 3, cfg.c_exp).map_err(s)?.passed());
    }
    let (loc_rate, abl_rate) = (rate(&loc), rate(&loc_ablate));
    let secs = start.elapsed().as_secs_f64();
    verdict(
        local_rate >= 0.9 && rig_rate >= 0.9 && count_rate >= 0.9 && loc_rate >= 0.9 && loc_rate - abl_rate >= 0.3,
        format!(
            "local law {:.0}%, rigidity {:.0}%, counting (kappa {kappa}, predicted {predicted:.1}) {:.0}%, location {:.0}%, location without X {:.0}% (drop {:.0} points, need >= 30); {secs:.0} s",
            100.0 * local_rate,
            100.0 * rig_rate,
            100.0 * count_rate,
            100.0 * loc_rate,
            100.0 * abl_rate,
            100.0 * (loc_rate - abl_rate)
        ),
    )
}

fn rate(v: &[bool]) -> f64 {
    v.iter().filter(|&&b| b).count() as f64 / v.len() as f64
}

type Criterion = (usize, &'static str, fn() -> Res<Verdict>);

const CRITERIA: [Criterion; 9] = [
    (1, "edge formula consistency", edge_formula),
    (2, "edge expansion arbitration", expansion_arbitration),
    (3, "X CLT", x_clt),
    (4, "Gaussian regime CLT", gaussian_regime),
    (5, "Tracy-Widom regime", tw_regime),
    (6, "gap universality", gap_universality),
    (7, "free convolution edge", free_convolution),
    (8, "exact invariants", exact_invariants),
    (9, "diagnostic pass rates", diagnostics),
];

fn main() -> ExitCode {
    let selected: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failures = 0;
    for (id, name, f) in CRITERIA {
        if !selected.is_empty() && !selected.contains(&id) {
            continue;
        }
        let line = match f() {
            Ok(v) => {
                failures += usize::from(!v.pass);
                format!("criterion {id} [{}] {name}: {}", if v.pass { "PASS" } else { "FAIL" }, v.detail)
            }
            Err(e) => {
                failures += 1;
                format!("criterion {id} [FAIL] {name}: error: {e}")
            }
        };
        println!("{line}");
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failures} criterion(s) failed");
        ExitCode::FAILURE
    }
}
