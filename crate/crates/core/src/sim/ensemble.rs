//! Ensemble descriptions and random state generation.

use faer::{c64, Mat};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

use crate::moments::perfect_root;
use crate::{Error, Result};

/// Largest matrix dimension `D` sampled.
pub const MAX_DIMENSION: u64 = 4096;
/// Largest number of terms `p`.
pub const MAX_TERMS: u64 = 1_000_000;
/// Largest number of entries in the column matrix `Φ` (`D × columns`).
pub const MAX_ENTRIES: u64 = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum EnsembleKind {
    /// Haar unit vectors in every factor.
    Normalized,
    /// Complex Gaussian factors with `E‖v‖² = 1`.
    Gaussian,
    /// Reduced states on `A` of Haar vectors in `A ⊗ B`.
    PartialTrace { d_a: u64, d_b: u64 },
    /// Factor `j` of term `s` is shared by all `s` with the same `⌈s/q^{k-j}⌉`.
    Repeated,
}

impl EnsembleKind {
    pub fn name(&self) -> &'static str {
        match self {
            EnsembleKind::Normalized => "normalized",
            EnsembleKind::Gaussian => "gaussian",
            EnsembleKind::PartialTrace { .. } => "partial-trace",
            EnsembleKind::Repeated => "repeated",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct EnsembleSpec {
    #[serde(flatten)]
    pub kind: EnsembleKind,
    pub p: u64,
    /// Local dimension; for `PartialTrace` this is `d_A`.
    pub d: u64,
    pub k: u32,
    pub master_seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, p: u64, d: u64, k: u32, master_seed: u64) -> Result<Self> {
        let d = match kind {
            EnsembleKind::PartialTrace { d_a, .. } => d_a,
            _ => d,
        };
        let spec = EnsembleSpec { kind, p, d, k, master_seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn normalized(p: u64, d: u64, k: u32, master_seed: u64) -> Result<Self> {
        Self::new(EnsembleKind::Normalized, p, d, k, master_seed)
    }

    fn validate(&self) -> Result<()> {
        if self.p == 0 || self.d == 0 || self.k == 0 {
            return Err(Error::domain(format!("need p, d, k >= 1, got {self:?}")));
        }
        if let EnsembleKind::PartialTrace { d_b, .. } = self.kind {
            if d_b == 0 {
                return Err(Error::domain("need d_B >= 1"));
            }
        }
        if self.kind == EnsembleKind::Repeated && perfect_root(self.p, self.k).is_none() {
            return Err(Error::domain(format!("p = {} is not of the form q^{}", self.p, self.k)));
        }
        let dim = (self.d as u128).checked_pow(self.k).unwrap_or(u128::MAX);
        if dim > MAX_DIMENSION as u128 {
            return Err(Error::guard("dimension d^k", dim, MAX_DIMENSION));
        }
        if self.p > MAX_TERMS {
            return Err(Error::guard("terms p", self.p, MAX_TERMS));
        }
        let entries = dim.saturating_mul(self.columns() as u128);
        if entries > MAX_ENTRIES as u128 {
            return Err(Error::guard("matrix entries", entries, MAX_ENTRIES));
        }
        Ok(())
    }

    /// `D = d^k` (`d_A^k` for partial traces).
    pub fn dimension(&self) -> usize {
        (self.d as usize).pow(self.k)
    }

    pub fn x(&self) -> f64 {
        self.p as f64 / self.dimension() as f64
    }

    /// Number of rank-one terms in `M = Φ Φ†`.
    pub fn columns(&self) -> usize {
        match self.kind {
            EnsembleKind::PartialTrace { d_b, .. } => self.p as usize * (d_b as usize).pow(self.k),
            _ => self.p as usize,
        }
    }

    /// Generic rank of `M`.
    pub fn max_rank(&self) -> usize {
        self.columns().min(self.dimension())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StateKind {
    /// Haar-random unit vector.
    Unit,
    /// i.i.d. entries with real and imaginary variance `1/2d`.
    GaussianNorm,
}

/// Generator for one trial. Streams are independent for distinct trials.
pub fn trial_rng(master_seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(master_seed);
    rng.set_stream(trial);
    rng
}

/// Standard complex Gaussian, `E|z|² = 1`, by the polar method.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> c64 {
    loop {
        let u: f64 = rng.random_range(-1.0..1.0);
        let v: f64 = rng.random_range(-1.0..1.0);
        let s = u * u + v * v;
        if s > 0.0 && s < 1.0 {
            let f = (-s.ln() / s).sqrt();
            return c64::new(u * f, v * f);
        }
    }
}

fn raw_vector<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Vec<c64> {
    (0..d).map(|_| complex_gaussian(rng)).collect()
}

fn norm(v: &[c64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn scale(v: &mut [c64], by: f64) {
    for z in v {
        *z *= by;
    }
}

/// One random vector in `C^d`.
pub fn sample_state<R: Rng + ?Sized>(d: usize, kind: StateKind, rng: &mut R) -> Vec<c64> {
    let mut v = raw_vector(d, rng);
    let by = match kind {
        StateKind::Unit => 1.0 / norm(&v),
        StateKind::GaussianNorm => 1.0 / (d as f64).sqrt(),
    };
    scale(&mut v, by);
    v
}

/// Column-major Kronecker product of `d_i × c_i` blocks, each stored as a
/// column-major vector.
fn kron_blocks(blocks: &[(Vec<c64>, usize, usize)]) -> (Vec<c64>, usize, usize) {
    let mut acc = (vec![c64::new(1.0, 0.0)], 1usize, 1usize);
    for (b, br, bc) in blocks {
        let (a, ar, ac) = &acc;
        let (rows, cols) = (ar * br, ac * bc);
        let mut out = vec![c64::new(0.0, 0.0); rows * cols];
        for ja in 0..*ac {
            for jb in 0..*bc {
                let col = ja * bc + jb;
                for ia in 0..*ar {
                    let x = a[ja * ar + ia];
                    for ib in 0..*br {
                        out[col * rows + ia * br + ib] = x * b[jb * br + ib];
                    }
                }
            }
        }
        acc = (out, rows, cols);
    }
    acc
}

/// The `D × columns` matrix `Φ` with `M = Φ Φ†` for one trial.
pub fn column_matrix(spec: &EnsembleSpec, trial: u64) -> Mat<c64> {
    let mut rng = trial_rng(spec.master_seed, trial);
    let d = spec.d as usize;
    let k = spec.k as usize;
    let dim = spec.dimension();
    let mut phi = Mat::<c64>::zeros(dim, spec.columns());

    let mut put = |first_col: usize, data: &[c64], ncols: usize| {
        for c in 0..ncols {
            for r in 0..dim {
                phi[(r, first_col + c)] = data[c * dim + r];
            }
        }
    };

    match spec.kind {
        EnsembleKind::Normalized | EnsembleKind::Gaussian => {
            let kind = if spec.kind == EnsembleKind::Normalized { StateKind::Unit } else { StateKind::GaussianNorm };
            for s in 0..spec.p as usize {
                let factors: Vec<_> = (0..k).map(|_| (sample_state(d, kind, &mut rng), d, 1)).collect();
                put(s, &kron_blocks(&factors).0, 1);
            }
        }
        EnsembleKind::PartialTrace { d_a, d_b } => {
            let (da, db) = (d_a as usize, d_b as usize);
            let cols = db.pow(spec.k);
            for s in 0..spec.p as usize {
                let factors: Vec<_> = (0..k)
                    .map(|_| {
                        // Row-major reshape of the A ⊗ B vector, stored column-major.
                        let v = sample_state(da * db, StateKind::Unit, &mut rng);
                        let mut x = vec![c64::new(0.0, 0.0); da * db];
                        for a in 0..da {
                            for b in 0..db {
                                x[b * da + a] = v[a * db + b];
                            }
                        }
                        (x, da, db)
                    })
                    .collect();
                put(s * cols, &kron_blocks(&factors).0, cols);
            }
        }
        EnsembleKind::Repeated => {
            let q = perfect_root(spec.p, spec.k).expect("validated") as usize;
            // pools[j] holds the q^{j+1} distinct vectors of factor j.
            let pools: Vec<Vec<Vec<c64>>> = (1..=k)
                .map(|j| (0..q.pow(j as u32)).map(|_| sample_state(d, StateKind::Unit, &mut rng)).collect())
                .collect();
            for s in 0..spec.p as usize {
                let factors: Vec<_> = (0..k)
                    .map(|j| {
                        let step = q.pow((k - 1 - j) as u32);
                        (pools[j][s / step].clone(), d, 1)
                    })
                    .collect();
                put(s, &kron_blocks(&factors).0, 1);
            }
        }
    }
    phi
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_states_have_unit_norm() {
        let mut rng = trial_rng(1, 0);
        for d in [1, 2, 7, 64] {
            let v = sample_state(d, StateKind::Unit, &mut rng);
            assert!((norm(&v) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn gaussian_states_have_unit_mean_square_norm() {
        let mut rng = trial_rng(2, 0);
        let n = 10_000;
        let vals: Vec<f64> = (0..n).map(|_| norm(&sample_state(5, StateKind::GaussianNorm, &mut rng)).powi(2)).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((mean - 1.0).abs() < 5.0 * (var / n as f64).sqrt());
    }

    #[test]
    fn gaussian_norm_is_scaled_chi_square() {
        // ‖v‖² ~ χ²_{2d}/2d has mean 1 and variance 1/d.
        let mut rng = trial_rng(3, 0);
        let (d, n) = (4usize, 20_000);
        let vals: Vec<f64> = (0..n).map(|_| norm(&sample_state(d, StateKind::GaussianNorm, &mut rng)).powi(2)).collect();
        let mean = vals.iter().sum::<f64>() / n as f64;
        let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!((var - 1.0 / d as f64).abs() < 0.02, "{var}");
    }

    #[test]
    fn streams_differ_and_repeat() {
        let a = sample_state(3, StateKind::Unit, &mut trial_rng(9, 0));
        let b = sample_state(3, StateKind::Unit, &mut trial_rng(9, 0));
        let c = sample_state(3, StateKind::Unit, &mut trial_rng(9, 1));
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn kron_of_vectors() {
        let a = (vec![c64::new(1.0, 0.0), c64::new(2.0, 0.0)], 2, 1);
        let b = (vec![c64::new(3.0, 0.0), c64::new(0.0, 1.0)], 2, 1);
        let (v, r, c) = kron_blocks(&[a, b]);
        assert_eq!((r, c), (4, 1));
        assert_eq!(v, vec![c64::new(3.0, 0.0), c64::new(0.0, 1.0), c64::new(6.0, 0.0), c64::new(0.0, 2.0)]);
    }

    #[test]
    fn guards() {
        assert!(matches!(EnsembleSpec::normalized(10, 65, 2, 0), Err(Error::ResourceGuard { .. })));
        assert!(matches!(EnsembleSpec::normalized(2_000_000, 2, 1, 0), Err(Error::ResourceGuard { .. })));
        assert!(matches!(EnsembleSpec::new(EnsembleKind::Repeated, 5, 2, 2, 0), Err(Error::Domain(_))));
        let pt = EnsembleSpec::new(EnsembleKind::PartialTrace { d_a: 4, d_b: 2 }, 3, 0, 2, 0).unwrap();
        assert_eq!((pt.dimension(), pt.columns()), (16, 12));
    }

    #[test]
    fn repeated_columns_share_factors() {
        let spec = EnsembleSpec::new(EnsembleKind::Repeated, 4, 2, 2, 5).unwrap();
        let phi = column_matrix(&spec, 0);
        // Terms 1 and 2 share the first factor, so their columns are
        // a ⊗ u and a ⊗ v: rows 0..2 and 2..4 are proportional blocks.
        let ratio = |col: usize| phi[(0, col)] / phi[(2, col)];
        assert!((ratio(0) - ratio(1)).norm() < 1e-12);
        assert!((ratio(2) - ratio(3)).norm() < 1e-12);
        assert!((ratio(0) - ratio(2)).norm() > 1e-6);
    }
}
