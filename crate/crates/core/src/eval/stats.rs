//! Bootstrap confidence intervals and the Welch two-sample t-test.

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use super::EvalError;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapResult {
    pub mean: f64,
    pub lower: f64,
    pub upper: f64,
    pub stderr: f64,
}

/// Percentile bootstrap of the mean, deterministic under `seed`. `stderr`
/// is the standard deviation of the resample means.
pub fn bootstrap_ci(
    values: &[f64],
    resamples: usize,
    level: f64,
    seed: u64,
) -> Result<BootstrapResult, EvalError> {
    if values.is_empty() || resamples == 0 {
        return Err(EvalError::EmptyInput);
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    // Zero-variance input: every resample mean equals the sample value, so
    // report the exact degenerate interval instead of accumulating rounding.
    if values.iter().all(|v| *v == values[0]) {
        return Ok(BootstrapResult {
            mean: values[0],
            lower: values[0],
            upper: values[0],
            stderr: 0.0,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let idx = Uniform::new(0, values.len());
    let mut means = Vec::with_capacity(resamples);
    for _ in 0..resamples {
        let sum: f64 = (0..values.len()).map(|_| values[idx.sample(&mut rng)]).sum();
        means.push(sum / values.len() as f64);
    }
    means.sort_by(|a, b| a.partial_cmp(b).expect("means are finite"));
    let alpha = 1.0 - level;
    let lower = percentile(&means, alpha / 2.0);
    let upper = percentile(&means, 1.0 - alpha / 2.0);
    let grand = means.iter().sum::<f64>() / means.len() as f64;
    let var = means.iter().map(|m| (m - grand).powi(2)).sum::<f64>() / means.len() as f64;
    Ok(BootstrapResult {
        mean,
        lower,
        upper,
        stderr: var.sqrt(),
    })
}

/// Linear-interpolation quantile over a sorted slice (type 7 convention).
pub(crate) fn percentile(sorted: &[f64], q: f64) -> f64 {
    if sorted.len() == 1 {
        return sorted[0];
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    if lo == hi {
        sorted[lo]
    } else {
        let frac = pos - lo as f64;
        sorted[lo] * (1.0 - frac) + sorted[hi] * frac
    }
}

/// Welch (unequal-variance) two-sample t-test; p is two-sided.
pub fn compare_groups(a: &[f64], b: &[f64]) -> Result<(f64, f64), EvalError> {
    if a.len() < 2 || b.len() < 2 {
        return Err(EvalError::DegenerateVariance(
            "each group needs at least 2 values".to_string(),
        ));
    }
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    let var = |xs: &[f64], m: f64| {
        xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() - 1) as f64
    };
    let (ma, mb) = (mean(a), mean(b));
    let (va, vb) = (var(a, ma), var(b, mb));
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let se2 = va / na + vb / nb;
    if se2 == 0.0 {
        if ma == mb {
            // Identical constant groups: no evidence of a difference.
            return Ok((0.0, 1.0));
        }
        return Err(EvalError::DegenerateVariance(
            "zero pooled variance with unequal means".to_string(),
        ));
    }
    let t = (ma - mb) / se2.sqrt();
    // Welch-Satterthwaite degrees of freedom
    let df = se2.powi(2)
        / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    let dist = StudentsT::new(0.0, 1.0, df).expect("df > 0");
    let p = 2.0 * dist.cdf(-t.abs());
    Ok((t, p.min(1.0)))
}
