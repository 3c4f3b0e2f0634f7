//! Subcommand handlers.

use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sparse_edge::experiments::selftest::{run_selftest, SelftestOptions};
use sparse_edge::sce::{DensityEvaluator, EdgeMethod};
use sparse_edge::verify::{pass_rate, Status};
use sparse_edge::{
    counting_check, eigenvalue_location_check, eigenvalues, free_conv_edge, gaussian_divisible, local_law_check,
    rigidity_check, run_experiment, ComplexPoint, CumulantProfile, DiagnosticReport, EnsembleKind,
    EnsembleSpec, ExperimentConfig, RunOptions, SCPoly, SpectralMeasure, VerifyConfig,
};

use crate::config::{apply_override, decode, ensemble_part, load_value};
use crate::{CheckArg, CliError, CmdResult, EdgeArgs, EnsembleArgs, ExperimentArgs, FcEdgeArgs, FcInputArg,
    GlobalOpts, KindArg, MethodArg, SampleArgs, SelftestArgs, VerifyArgs};

fn write_json(dir: Option<&Path>, name: &str, value: &impl Serialize) -> Result<(), CliError> {
    if let Some(d) = dir {
        fs::create_dir_all(d)?;
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Failure(e.to_string()))?;
        fs::write(d.join(name), text + "\n")?;
    }
    Ok(())
}

/// Flag overrides for the `ensemble` object.
fn ensemble_overrides(a: &EnsembleArgs) -> Vec<String> {
    let mut out = Vec::new();
    if let Some(k) = a.kind {
        let name = match k {
            KindArg::Er => "ErdosRenyi",
            KindArg::Signed => "SignedSparse",
            KindArg::Goe => "GOE",
        };
        out.push(format!("kind={name}"));
    }
    if let Some(n) = a.n {
        out.push(format!("N={n}"));
    }
    if let Some(q) = a.q {
        out.push(format!("q={q:?}"));
    }
    if let Some(p) = a.p {
        out.push(format!("p={p:?}"));
    }
    if let Some(s) = a.seed {
        out.push(format!("seed={s}"));
    }
    out
}

fn load_ensemble(g: &GlobalOpts, a: &EnsembleArgs) -> Result<EnsembleSpec, CliError> {
    let doc = load_value(g.config.as_deref(), &g.overrides)?;
    let mut ens = ensemble_part(&doc);
    if !ens.is_object() {
        return Err(CliError::Usage("ensemble config must be a JSON object".into()));
    }
    for o in ensemble_overrides(a) {
        apply_override(&mut ens, &o)?;
    }
    decode(ens, "ensemble")
}

pub fn sample(g: &GlobalOpts, a: &SampleArgs) -> CmdResult {
    let spec = load_ensemble(g, &a.ensemble)?;
    let mut s = sparse_edge::sample(&spec, a.trial)?;
    if let Some(t) = a.t {
        s = gaussian_divisible(&s, t, a.trial)?;
    }
    let spectrum = eigenvalues(&s.h)?;
    let k = a.k.clamp(1, spec.n());
    println!("ensemble {} N={} q={:.6} seed={} trial={}", spec.kind(), spec.n(), spec.q(), spec.master_seed(), a.trial);
    println!("X = {:.6e}", s.x);
    println!("top eigenvalues: {:?}", spectrum.top(k));
    println!("bottom eigenvalues: {:?}", spectrum.bottom(k));
    let mut body = json!({
        "ensemble": spec,
        "trial": a.trial,
        "t": a.t,
        "X": s.x,
        "top_eigs": spectrum.top(k),
        "bottom_eigs": spectrum.bottom(k),
        "trace": s.h.trace(),
        "frobenius_sq": s.h.frobenius_sq(),
    });
    if a.spectrum {
        body["spectrum"] = json!(spectrum.values());
    }
    write_json(g.output_dir.as_deref(), "sample.json", &body)?;
    Ok(true)
}

pub fn edge(g: &GlobalOpts, a: &EdgeArgs) -> CmdResult {
    let mut poly = SCPoly::new(a.q, a.x, a.c4, a.c6)?;
    if a.inject_fault {
        poly = poly.with_injected_fault();
    }
    let method = match a.method {
        MethodArg::Bisect => EdgeMethod::Bisect,
        MethodArg::Expansion => EdgeMethod::Expansion,
    };
    let report = poly.edge_report(method)?;
    println!("L = {:.6}", report.l);
    println!("{}", serde_json::to_string(&report).map_err(|e| CliError::Failure(e.to_string()))?);
    write_json(g.output_dir.as_deref(), "edge.json", &report)?;
    Ok(true)
}

pub fn fc_edge(g: &GlobalOpts, a: &FcEdgeArgs) -> CmdResult {
    let mu = match a.input {
        FcInputArg::Semicircle => SpectralMeasure::semicircle(a.variance)?,
        FcInputArg::Analytic => {
            let (Some(q), Some(c4), Some(c6)) = (a.ensemble.q, a.c4, a.c6) else {
                return Err(CliError::Usage("analytic input needs --q, --c4 and --c6".into()));
            };
            SpectralMeasure::analytic(SCPoly::new(q, a.x, c4, c6)?)?
        }
        FcInputArg::Empirical => {
            let spec = load_ensemble(g, &a.ensemble)?;
            let s = sparse_edge::sample(&spec, a.trial)?;
            SpectralMeasure::discrete(&eigenvalues(&s.h)?)?
        }
    };
    let fc = free_conv_edge(&mu, a.t)?;
    println!("t = {}: xi_plus = {:.10}, E_plus = {:.10}, gamma0 = {:.8}", fc.t, fc.xi_plus, fc.e_plus, fc.gamma0);
    println!("{}", serde_json::to_string(&fc).map_err(|e| CliError::Failure(e.to_string()))?);
    write_json(g.output_dir.as_deref(), "fc_edge.json", &fc)?;
    Ok(true)
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VerifyFile {
    ensemble: EnsembleSpec,
    #[serde(default)]
    trials: Option<usize>,
    #[serde(default)]
    verify: VerifyConfig,
    /// `[E, η]` points; default `0.5 + i N^{−1/2}`.
    #[serde(default)]
    local_law_z: Option<Vec<[f64; 2]>>,
    /// `[κ, η]` points; default `0 + i N^{−0.55}`.
    #[serde(default)]
    rigidity_z: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    kappa: Option<f64>,
    #[serde(default)]
    k: Option<usize>,
    #[serde(default)]
    min_pass_rate: Option<f64>,
}

fn points(v: &[[f64; 2]]) -> Result<Vec<ComplexPoint>, CliError> {
    v.iter().map(|&[e, eta]| ComplexPoint::new(e, eta).map_err(CliError::from)).collect()
}

fn tag(mut r: DiagnosticReport, trial: u64) -> DiagnosticReport {
    r.params.insert("trial".into(), trial as f64);
    r
}

pub fn verify(g: &GlobalOpts, a: &VerifyArgs) -> CmdResult {
    let mut doc = load_value(g.config.as_deref(), &g.overrides)?;
    if !doc.is_object() {
        return Err(CliError::Usage("verify config must be a JSON object".into()));
    }
    if doc.get("ensemble").is_none() {
        doc["ensemble"] = Value::Object(Default::default());
    }
    for o in ensemble_overrides(&a.ensemble) {
        apply_override(&mut doc, &format!("ensemble.{o}"))?;
    }
    let file: VerifyFile = decode(doc, "verify")?;
    let spec = file.ensemble;
    let n = spec.n();
    let nf = n as f64;
    let trials = a.trials.or(file.trials).unwrap_or(50);
    let min_rate = a.min_pass_rate.or(file.min_pass_rate).unwrap_or(0.9);
    if trials == 0 || !(0.0..=1.0).contains(&min_rate) {
        return Err(CliError::Usage("trials must be positive and min_pass_rate in [0, 1]".into()));
    }
    let cfg = file.verify;
    let ll_z = points(&file.local_law_z.unwrap_or_else(|| vec![[0.5, nf.powf(-0.5)]]))?;
    let rig_z = points(&file.rigidity_z.unwrap_or_else(|| vec![[0.0, nf.powf(-0.55)]]))?;
    let kappa = file.kappa.unwrap_or(0.2);
    let k = file.k.unwrap_or(3);
    let goe = spec.kind() == EnsembleKind::Goe;
    let profile: CumulantProfile = spec.profile()?;
    let q = spec.q();
    let base = SCPoly::build(&profile, q, 0.0)?;
    let edge = base.solve_edge()?;
    let want = |c: CheckArg| a.check == CheckArg::All || a.check == c;

    let per_trial: Vec<Result<Vec<DiagnosticReport>, CliError>> = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = sparse_edge::sample(&spec, i)?;
            let mut out = Vec::new();
            if want(CheckArg::LocalLaw) {
                out.extend(local_law_check(&s.h, q, &ll_z, cfg.epsilon)?.into_iter().map(|r| tag(r, i)));
            }
            if want(CheckArg::Rigidity) || want(CheckArg::Location) || want(CheckArg::Counting) {
                let spectrum = eigenvalues(&s.h)?;
                let x = if goe { 0.0 } else { s.x };
                let poly = base.with_x(x);
                if want(CheckArg::Rigidity) {
                    out.extend(
                        rigidity_check(&spectrum, &poly, &rig_z, cfg.domain_a, cfg.epsilon)?
                            .into_iter()
                            .map(|r| tag(r, i)),
                    );
                }
                if want(CheckArg::Location) {
                    let q_eff = if goe { f64::INFINITY } else { q };
                    out.push(tag(eigenvalue_location_check(&spectrum, &edge, q_eff, x, k, cfg.c_exp)?, i));
                }
                if want(CheckArg::Counting) {
                    let density = DensityEvaluator::new(poly)?;
                    out.push(tag(counting_check(&spectrum, &density, kappa, &cfg)?, i));
                }
            }
            Ok(out)
        })
        .collect();
    let mut reports = Vec::new();
    for r in per_trial {
        reports.extend(r?);
    }

    if let Some(d) = g.output_dir.as_deref() {
        fs::create_dir_all(d)?;
        let mut text = String::new();
        for r in &reports {
            text.push_str(&r.to_json_line());
            text.push('\n');
        }
        fs::write(d.join("diagnostics.jsonl"), text)?;
    }

    let mut names: Vec<&str> = reports.iter().map(|r| r.name.as_str()).collect();
    names.sort_unstable();
    names.dedup();
    let mut all_ok = true;
    println!("ensemble {} N={n} q={q:.4}, {trials} trials, required pass rate {min_rate}", spec.kind());
    for name in names {
        let group: Vec<&DiagnosticReport> = reports.iter().filter(|r| r.name == name).collect();
        let inconclusive = group.iter().filter(|r| r.status == Status::Inconclusive).count();
        match pass_rate(group.iter().copied()) {
            Some(rate) => {
                let ok = rate >= min_rate;
                all_ok &= ok;
                println!(
                    "{name}: pass rate {:.1}% ({}){}",
                    100.0 * rate,
                    if ok { "ok" } else { "FAIL" },
                    if inconclusive > 0 { format!(", {inconclusive} inconclusive") } else { String::new() }
                );
            }
            None => println!("{name}: inconclusive ({inconclusive} reports)"),
        }
    }
    Ok(all_ok)
}

pub fn experiment(g: &GlobalOpts, a: &ExperimentArgs) -> CmdResult {
    if g.config.is_none() {
        return Err(CliError::Usage("experiment needs --config".into()));
    }
    let doc = load_value(g.config.as_deref(), &g.overrides)?;
    let cfg: ExperimentConfig = decode(doc, "experiment")?;
    let opts = RunOptions { output_dir: g.output_dir.clone(), resume: a.resume, progress: !a.quiet };
    let out = run_experiment(&cfg, &opts)?;
    let sm = &out.summary;
    println!(
        "{:?}: M = {}, mean {:.4}, variance {:.4}, skewness {:.4}, KS ({:?}) {:.4} -> {}",
        sm.statistic,
        sm.m_effective,
        sm.mean,
        sm.variance,
        sm.skewness,
        sm.ks_reference,
        sm.ks_distance,
        if sm.pass { "PASS" } else { "FAIL" }
    );
    for (k, v) in &sm.details {
        println!("  {k} = {v:.6}");
    }
    Ok(sm.pass)
}

pub fn selftest(g: &GlobalOpts, a: &SelftestArgs) -> CmdResult {
    let report = run_selftest(SelftestOptions { inject_fault: a.inject_fault })?;
    for c in &report.checks {
        println!("[{}] {}: {:.3e} (bound {:.1e})", if c.passed { "ok" } else { "FAIL" }, c.name, c.observed, c.bound);
    }
    println!("selftest {}", if report.passed { "passed" } else { "FAILED" });
    write_json(g.output_dir.as_deref(), "selftest.json", &report)?;
    Ok(report.passed)
}
