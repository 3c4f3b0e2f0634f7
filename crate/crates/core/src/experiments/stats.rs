//! Kolmogorov–Smirnov distances, the normal CDF and sample moments.

use crate::error::{Error, Result};

/// `Φ(x)`, via `erfc`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn sorted(sample: &[f64]) -> Result<Vec<f64>> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    if sample.iter().any(|x| x.is_nan()) {
        return Err(Error::InvalidArgument("sample contains NaN".into()));
    }
    let mut v = sample.to_vec();
    v.sort_by(|a, b| a.total_cmp(b));
    Ok(v)
}

/// `sup_x |F_n(x) − F(x)|` for a continuous `F`.
pub fn ks_one_sample(sample: &[f64], cdf: impl Fn(f64) -> f64) -> Result<f64> {
    let v = sorted(sample)?;
    let n = v.len() as f64;
    Ok(v.iter().enumerate().fold(0.0_f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    }))
}

/// `sup_x |F_a(x) − F_b(x)|`.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<f64> {
    let a = sorted(a)?;
    let b = sorted(b)?;
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (mut i, mut j) = (0, 0);
    let mut d = 0.0_f64;
    while i < a.len() && j < b.len() {
        let x = a[i].min(b[j]);
        while i < a.len() && a[i] <= x {
            i += 1;
        }
        while j < b.len() && b[j] <= x {
            j += 1;
        }
        d = d.max((i as f64 / na - j as f64 / nb).abs());
    }
    Ok(d)
}

/// Mean, unbiased variance and skewness.
pub fn moments(sample: &[f64]) -> Result<(f64, f64, f64)> {
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<f64>() / n;
    let m2 = sample.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n;
    let m3 = sample.iter().map(|x| (x - mean).powi(3)).sum::<f64>() / n;
    let var = if sample.len() > 1 { m2 * n / (n - 1.0) } else { 0.0 };
    let skew = if m2 > 0.0 { m3 / m2.powf(1.5) } else { 0.0 };
    Ok((mean, var, skew))
}
