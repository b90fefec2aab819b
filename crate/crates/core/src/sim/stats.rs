//! Statistics over lists of [`SpectralSample`]s.

use serde::Serialize;

use super::ensemble::{EnsembleKind, EnsembleSpec};
use super::mp::MpLaw;
use super::spectrum::{run_trials, SpectralSample};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeanStd {
    pub mean: f64,
    /// Sample standard deviation (`n − 1` denominator); NaN for one value.
    pub std: f64,
}

impl MeanStd {
    pub fn of(values: &[f64]) -> Self {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
        MeanStd {
            mean,
            std: if values.len() > 1 { var.sqrt() } else { f64::NAN },
        }
    }

    pub fn std_error(&self, n: usize) -> f64 {
        self.std / (n as f64).sqrt()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MomentEstimate {
    pub m: u32,
    pub mean: f64,
    pub std_error: f64,
}

/// Mean over samples of `D⁻¹ Σ_i λ_i^m`, with its standard error.
pub fn empirical_moment(samples: &[SpectralSample], m: u32) -> Result<MomentEstimate> {
    if samples.is_empty() {
        return Err(Error::domain("no samples"));
    }
    let per: Vec<f64> = samples
        .iter()
        .map(|s| s.eigenvalues.iter().map(|l| l.powi(m as i32)).sum::<f64>() / s.eigenvalues.len() as f64)
        .collect();
    let ms = MeanStd::of(&per);
    Ok(MomentEstimate {
        m,
        mean: ms.mean,
        std_error: ms.std_error(per.len()),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExtremeStats {
    pub lambda_max: MeanStd,
    /// Over nonzero eigenvalues when `x < 1`.
    pub lambda_min: MeanStd,
    pub trials: usize,
}

/// Smallest eigenvalue, ignoring numerical zeros when the matrix is rank
/// deficient.
pub fn lambda_min(sample: &SpectralSample) -> f64 {
    if sample.ensemble.columns() < sample.ensemble.dimension() {
        sample.nonzero().fold(f64::INFINITY, f64::min)
    } else {
        *sample.eigenvalues.last().unwrap()
    }
}

pub fn extreme_stats(samples: &[SpectralSample]) -> Result<ExtremeStats> {
    if samples.is_empty() {
        return Err(Error::domain("no samples"));
    }
    let maxes: Vec<f64> = samples.iter().map(SpectralSample::lambda_max).collect();
    let mins: Vec<f64> = samples.iter().map(lambda_min).collect();
    Ok(ExtremeStats {
        lambda_max: MeanStd::of(&maxes),
        lambda_min: MeanStd::of(&mins),
        trials: samples.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KsResult {
    pub statistic: f64,
    /// Number of pooled eigenvalues.
    pub n: usize,
    /// Too few eigenvalues for the statistic to mean much.
    pub degenerate: bool,
}

/// Kolmogorov–Smirnov distance between pooled eigenvalues and the MP law.
pub fn ks_distance(samples: &[SpectralSample], x: f64) -> Result<KsResult> {
    let mut values: Vec<f64> = Vec::new();
    for s in samples {
        if x < 1.0 {
            values.extend(s.nonzero());
        } else {
            values.extend(s.eigenvalues.iter().copied());
        }
    }
    ks_distance_values(values, &MpLaw::new(x)?)
}

pub fn ks_distance_values(mut values: Vec<f64>, law: &MpLaw) -> Result<KsResult> {
    if values.is_empty() {
        return Err(Error::domain("no nonzero eigenvalues to compare"));
    }
    values.sort_by(f64::total_cmp);
    let n = values.len() as f64;
    let statistic = values
        .iter()
        .enumerate()
        .map(|(i, &l)| {
            let f = law.cdf(l);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max);
    Ok(KsResult {
        statistic,
        n: values.len(),
        degenerate: values.len() < 20,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConcentrationRow {
    pub d: u64,
    pub p: u64,
    pub lambda_max: MeanStd,
}

/// `std(λ_max)` at fixed `x` for each `d`. `p` is `x d^k` rounded.
pub fn concentration_experiment(
    kind: EnsembleKind,
    x: f64,
    d_list: &[u64],
    k: u32,
    trials: usize,
    seed: u64,
) -> Result<Vec<ConcentrationRow>> {
    if trials < 2 {
        return Err(Error::domain("a standard deviation needs at least two trials"));
    }
    d_list
        .iter()
        .map(|&d| {
            let p = (x * (d as f64).powi(k as i32)).round().max(1.0) as u64;
            let spec = EnsembleSpec::new(kind, p, d, k, seed)?;
            let samples = run_trials(&spec, trials)?;
            let maxes: Vec<f64> = samples.iter().map(SpectralSample::lambda_max).collect();
            Ok(ConcentrationRow {
                d,
                p,
                lambda_max: MeanStd::of(&maxes),
            })
        })
        .collect()
}
