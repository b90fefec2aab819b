//! Sampling and diagonalising `M = Φ Φ†`.

use faer::{c64, Mat, Side};
use rayon::prelude::*;
use serde::Serialize;

use super::ensemble::{column_matrix, EnsembleSpec};
use crate::{Error, Result};

/// Largest accepted `‖Hv − λv‖ / ‖H‖`.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectralSample {
    /// All `D` eigenvalues of `M`, descending.
    pub eigenvalues: Vec<f64>,
    pub trial_index: usize,
    pub seed_used: u64,
    /// Generator stream, equal to the trial index.
    pub stream: u64,
    pub ensemble: EnsembleSpec,
    pub residual: f64,
}

impl SpectralSample {
    pub fn lambda_max(&self) -> f64 {
        self.eigenvalues[0]
    }

    /// Eigenvalues at or below this are numerical zeros.
    pub fn zero_threshold(&self) -> f64 {
        1e-10 * self.lambda_max().max(1.0)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = f64> + '_ {
        let thr = self.zero_threshold();
        self.eigenvalues.iter().copied().filter(move |&l| l > thr)
    }

    pub fn rank(&self) -> usize {
        self.nonzero().count()
    }

    /// Sum of eigenvalues in index order.
    pub fn trace(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }
}

/// The `D × D` matrix `M` itself, for inspection.
pub fn ensemble_matrix(spec: &EnsembleSpec, trial: u64) -> Mat<c64> {
    let phi = column_matrix(spec, trial);
    &phi * phi.adjoint()
}

/// Eigenvalues (ascending) and the worst relative residual of `h`.
fn hermitian_eigen(h: &Mat<c64>) -> Result<(Vec<f64>, f64)> {
    let evd = h
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Numeric(format!("eigensolver failed on a {}×{} matrix: {e:?}", h.nrows(), h.ncols())))?;
    let n = h.nrows();
    let lambda: Vec<f64> = (0..n).map(|i| evd.S().column_vector()[i].re).collect();
    let u = evd.U();
    let scale = lambda.iter().fold(0.0f64, |m, l| m.max(l.abs())).max(f64::MIN_POSITIVE);
    let hu = h * u;
    let mut worst = 0.0f64;
    for j in 0..n {
        let mut r2 = 0.0;
        for i in 0..n {
            r2 += (hu[(i, j)] - u[(i, j)] * lambda[j]).norm_sqr();
        }
        worst = worst.max(r2.sqrt() / scale);
    }
    if !worst.is_finite() || worst > RESIDUAL_TOLERANCE {
        return Err(Error::Numeric(format!(
            "eigen-equation residual {worst:e} exceeds {RESIDUAL_TOLERANCE:e} (n = {n}, ‖H‖ = {scale:e})"
        )));
    }
    Ok((lambda, worst))
}

/// One trial. Uses the Gram matrix `Φ†Φ` when it is smaller than `M`; both
/// have the same nonzero spectrum.
pub fn spectrum(spec: &EnsembleSpec, trial: usize) -> Result<SpectralSample> {
    let phi = column_matrix(spec, trial as u64);
    let dim = spec.dimension();
    let h = if phi.ncols() < dim { phi.adjoint() * &phi } else { &phi * phi.adjoint() };
    let (mut lambda, residual) = hermitian_eigen(&h)?;
    lambda.reverse();
    lambda.resize(dim, 0.0);
    Ok(SpectralSample {
        eigenvalues: lambda,
        trial_index: trial,
        seed_used: spec.master_seed,
        stream: trial as u64,
        ensemble: *spec,
        residual,
    })
}

/// Same as [`spectrum`] but always diagonalises the `D × D` matrix.
pub fn spectrum_full(spec: &EnsembleSpec, trial: usize) -> Result<SpectralSample> {
    let h = ensemble_matrix(spec, trial as u64);
    let (mut lambda, residual) = hermitian_eigen(&h)?;
    lambda.reverse();
    Ok(SpectralSample {
        eigenvalues: lambda,
        trial_index: trial,
        seed_used: spec.master_seed,
        stream: trial as u64,
        ensemble: *spec,
        residual,
    })
}

/// Trials `0..trials` in parallel on the current rayon pool. Results are in
/// trial order and do not depend on the number of threads.
pub fn run_trials(spec: &EnsembleSpec, trials: usize) -> Result<Vec<SpectralSample>> {
    if trials == 0 {
        return Err(Error::domain("need at least one trial"));
    }
    (0..trials)
        .into_par_iter()
        .map(|t| {
            spectrum(spec, t).map_err(|e| Error::Trial {
                index: t,
                source: Box::new(e),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::ensemble::EnsembleKind;

    #[test]
    fn rank_one_projector() {
        let spec = EnsembleSpec::normalized(1, 4, 1, 7).unwrap();
        let s = spectrum(&spec, 0).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!(s.eigenvalues[1..].iter().all(|&l| l.abs() < 1e-12));
        assert_eq!(s.eigenvalues.len(), 4);
    }

    #[test]
    fn trace_is_p() {
        for (p, d, k) in [(5u64, 3u64, 2u32), (20, 4, 1), (3, 2, 3)] {
            let s = spectrum(&EnsembleSpec::normalized(p, d, k, 1).unwrap(), 0).unwrap();
            assert!((s.trace() - p as f64).abs() <= 1e-8 * p as f64);
            assert!(s.rank() <= (p as usize).min(s.eigenvalues.len()));
        }
    }

    #[test]
    fn gram_and_full_agree() {
        let spec = EnsembleSpec::normalized(5, 3, 2, 11).unwrap();
        let a = spectrum(&spec, 3).unwrap();
        let b = spectrum_full(&spec, 3).unwrap();
        for i in 0..5 {
            assert!((a.eigenvalues[i] - b.eigenvalues[i]).abs() < 1e-8);
        }
        assert_eq!(b.rank(), 5);
    }

    #[test]
    fn gaussian_eigenvalues_are_squared_singular_values() {
        let spec = EnsembleSpec::new(EnsembleKind::Gaussian, 6, 3, 1, 4).unwrap();
        let s = spectrum(&spec, 0).unwrap();
        let sv = column_matrix(&spec, 0).singular_values().unwrap();
        for (i, v) in sv.iter().enumerate() {
            assert!((v * v - s.eigenvalues[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn hermitian_and_psd() {
        let spec = EnsembleSpec::new(EnsembleKind::PartialTrace { d_a: 4, d_b: 2 }, 3, 0, 2, 2).unwrap();
        let m = ensemble_matrix(&spec, 0);
        let s = spectrum(&spec, 0).unwrap();
        let mut asym = 0.0f64;
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                asym = asym.max((m[(i, j)] - m[(j, i)].conj()).norm());
            }
        }
        assert!(asym <= 1e-12 * s.lambda_max());
        assert!(*s.eigenvalues.last().unwrap() >= -1e-8 * s.lambda_max().max(1.0));
        // Each term has rank d_B^k = 4.
        assert!(s.rank() <= spec.max_rank());
        assert!((s.trace() - 3.0).abs() < 1e-10);
    }

    #[test]
    fn trials_are_deterministic_and_distinct() {
        let spec = EnsembleSpec::normalized(6, 3, 1, 99).unwrap();
        let a = run_trials(&spec, 3).unwrap();
        let b = run_trials(&spec, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a[0].eigenvalues, a[1].eigenvalues);
        let other = run_trials(&EnsembleSpec::normalized(6, 3, 1, 100).unwrap(), 1).unwrap();
        assert_ne!(a[0].eigenvalues, other[0].eigenvalues);
        assert!(run_trials(&spec, 0).is_err());
    }

    #[test]
    fn normalized_and_gaussian_are_coupled() {
        // Same seed gives the same raw draws, so M̂ ≈ M when norms are close to 1.
        let (p, d, k) = (8u64, 40u64, 1u32);
        let n = EnsembleSpec::normalized(p, d, k, 5).unwrap();
        let g = EnsembleSpec::new(EnsembleKind::Gaussian, p, d, k, 5).unwrap();
        for t in 0..5 {
            let phi_n = column_matrix(&n, t);
            let phi_g = column_matrix(&g, t);
            let eps = (0..p as usize)
                .map(|c| {
                    let r = phi_g.col(c).norm_l2() / phi_n.col(c).norm_l2();
                    (r * r - 1.0).abs()
                })
                .fold(0.0f64, f64::max)
                * k as f64;
            let ratio = spectrum(&g, t as usize).unwrap().lambda_max() / spectrum(&n, t as usize).unwrap().lambda_max();
            assert!(ratio >= 1.0 - eps && ratio <= 1.0 + 2.0 * eps, "{ratio} {eps}");
        }
    }
}
