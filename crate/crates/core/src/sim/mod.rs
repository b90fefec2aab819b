//! Monte Carlo spectra.
//!
//! Each trial builds the `D × columns` matrix `Φ` of sampled product vectors
//! and diagonalises whichever of `ΦΦ†` and `Φ†Φ` is smaller. Trial `t` draws
//! from ChaCha20 stream `t` of the master seed, so results do not depend on
//! scheduling.
//!
//! ```
//! use randtensor::sim::{run_trials, EnsembleSpec, extreme_stats};
//!
//! let spec = EnsembleSpec::normalized(1, 4, 1, 7).unwrap();
//! let samples = run_trials(&spec, 2).unwrap();
//! assert!((extreme_stats(&samples).unwrap().lambda_max.mean - 1.0).abs() < 1e-12);
//! ```

pub mod ensemble;
pub mod io;
pub mod mp;
pub mod spectrum;
pub mod stats;

pub use ensemble::{
    column_matrix, complex_gaussian, sample_state, trial_rng, EnsembleKind, EnsembleSpec, StateKind,
};
pub use io::{format_real, stats_json, write_eigen_csv};
pub use mp::{mp_density, mp_moment, MpLaw};
pub use spectrum::{ensemble_matrix, run_trials, spectrum, spectrum_full, SpectralSample};
pub use stats::{
    concentration_experiment, empirical_moment, extreme_stats, ks_distance, ks_distance_values, lambda_min,
    ConcentrationRow, ExtremeStats, KsResult, MeanStd, MomentEstimate,
};
