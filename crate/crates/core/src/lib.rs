//! Exact moments, recursive bounds and Monte Carlo spectra for sums of random
//! product states.
//!
//! The matrices studied here are
//!
//! ```text
//! M = Σ_{s=1..p} |φ_s⟩⟨φ_s|,   |φ_s⟩ = |φ_s^1⟩ ⊗ … ⊗ |φ_s^k⟩,   φ_s^j ∈ C^d
//! ```
//!
//! with the factors drawn as Haar-random unit vectors (the *normalized*
//! ensemble) or as complex Gaussian vectors of unit expected norm (the
//! *Gaussian* ensemble). With `x = p / d^k` fixed, the spectrum approaches the
//! Marčenko–Pastur law.
//!
//! The crate is organised by engine:
//!
//! * [`combinatorics`], [`permutation`] and [`partition`]: exact integer
//!   primitives (falling/rising factorials, Narayana numbers, `β_m(x)`,
//!   permutation cycles, restricted-growth strings).
//! * [`reduction`]: the two string-simplification rules, reduction classes and
//!   the Narayana bijection for completely reducible strings.
//! * [`moments`]: exact `E[tr M^m]` for every ensemble variant, as
//!   [`BigRational`]s.
//! * [`bounds`]: Schwinger–Dyson recursions, trace-moment bounds and the
//!   rainbow generating-function iteration.
//! * [`sim`]: Monte Carlo sampling, Hermitian eigendecomposition and
//!   spectral statistics.

pub mod bounds;
pub mod combinatorics;
pub mod error;
pub mod moments;
pub mod partition;
pub mod permutation;
pub mod reduction;
pub mod sim;

pub use error::{Error, Result};
pub use num_rational::BigRational;

pub use combinatorics::{beta_eval, catalan, factorial_family, narayana, FactorialKind, NarayanaRow};
pub use moments::{MomentEngine, MomentKind, MomentQuery, MomentResult};
pub use partition::{enumerate_partitions, SetPartitionString};
pub use permutation::{shifted_cycle_count, Permutation};
pub use reduction::{classify, reduce, ReductionClass, ReductionResult};
