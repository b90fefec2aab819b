//! Eigenvalue CSV and statistics JSON.

use std::io::Write;

use serde_json::{json, Value};

use super::ensemble::EnsembleSpec;
use super::spectrum::SpectralSample;
use super::stats::{empirical_moment, extreme_stats, ks_distance};
use crate::Result;

/// 17 significant digits: round-trips every `f64`.
pub fn format_real(v: f64) -> String {
    format!("{v:.16e}")
}

/// `trial,index,eigenvalue`, one row per eigenvalue in descending order.
pub fn write_eigen_csv<W: Write>(mut w: W, samples: &[SpectralSample]) -> std::io::Result<()> {
    writeln!(w, "trial,index,eigenvalue")?;
    for s in samples {
        for (i, l) in s.eigenvalues.iter().enumerate() {
            writeln!(w, "{},{},{}", s.trial_index, i, format_real(*l))?;
        }
    }
    Ok(())
}

/// The statistics record: `spec`, `trials`, `lambda_max`, `lambda_min`, `ks`
/// and `moments` for `m = 1..=max_m`.
pub fn stats_json(spec: &EnsembleSpec, samples: &[SpectralSample], max_m: u32) -> Result<Value> {
    let ext = extreme_stats(samples)?;
    let ks = ks_distance(samples, spec.x())?;
    let moments = (1..=max_m)
        .map(|m| {
            let e = empirical_moment(samples, m)?;
            Ok(json!({ "m": m, "mean": e.mean, "std_error": e.std_error }))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(json!({
        "spec": spec,
        "trials": samples.len(),
        "lambda_max": { "mean": ext.lambda_max.mean, "std": ext.lambda_max.std },
        "lambda_min": { "mean": ext.lambda_min.mean, "std": ext.lambda_min.std },
        "ks": ks.statistic,
        "moments": moments,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::spectrum::run_trials;

    #[test]
    fn csv_layout() {
        let spec = EnsembleSpec::normalized(1, 4, 1, 7).unwrap();
        let mut out = Vec::new();
        write_eigen_csv(&mut out, &run_trials(&spec, 1).unwrap()).unwrap();
        let text = String::from_utf8(out).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[0], "trial,index,eigenvalue");
        assert!(lines[1].starts_with("0,0,1.0000000000000"));
        let v: f64 = lines[1].split(',').nth(2).unwrap().parse().unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn real_format_round_trips() {
        for v in [0.1, 1.0 / 3.0, 2.0f64.sqrt(), 1e-300, -7.5e12] {
            assert_eq!(format_real(v).parse::<f64>().unwrap(), v);
        }
    }

    #[test]
    fn json_keys() {
        let spec = EnsembleSpec::normalized(3, 4, 1, 7).unwrap();
        let v = stats_json(&spec, &run_trials(&spec, 3).unwrap(), 2).unwrap();
        for key in ["spec", "trials", "lambda_max", "lambda_min", "ks", "moments"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["moments"].as_array().unwrap().len(), 2);
        assert_eq!(v["spec"]["kind"], "normalized");
    }
}
