//! Exact moments `E^m = E[tr M^m]`.
//!
//! Expanding the trace gives `E^m = Σ_{s ∈ [p]^m} E_d[s]^k`, and `E_d[s]`
//! depends only on which positions of `s` share a letter. Summing over
//! canonical words `σ` instead of raw strings,
//!
//! ```text
//! E^m = Σ_σ (p)_{ℓ(σ)} · w(σ)^k
//! ```
//!
//! where `w` is the single-factor string moment:
//!
//! * normalized: `Σ_{π ∈ S_σ} d^{cyc(C_m π)} / Π_i d(d+1)⋯(d+μ_i−1)`
//! * Gaussian:   `Σ_{π ∈ S_σ} d^{cyc(C_m π) − m}`
//! * partial trace: `Σ_{π ∈ S_σ} d_A^{cyc(C_m π)} d_B^{cyc(π)} / Π_i (d_A d_B)⋯(d_A d_B+μ_i−1)`
//!
//! ```
//! use randtensor::{MomentEngine, MomentQuery, BigRational};
//!
//! let r = MomentEngine::new().ensemble_moment(&MomentQuery::normalized(3, 2, 1, 2)).unwrap();
//! assert_eq!(r.total, BigRational::from_integer(6.into()));
//! ```

mod closed_form;
mod repeated;
mod stabilizer;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;

use crate::combinatorics::{falling, ratio_from, ratio_int, ratio_pow, rising};
use crate::partition::{enumerate_partitions, SetPartitionString, DEFAULT_CAP};
use crate::reduction::{classify, ReductionClass};
use crate::{Error, Result};

pub use closed_form::{gaussian_sandwich_floor, ReferenceTable};
pub use repeated::{letter_maps, perfect_root};
pub use stabilizer::{histogram, CycleHistogram};

/// Largest `|S_σ|` a single string moment will enumerate.
pub const MAX_STABILIZER_ORDER: u128 = 1 << 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StringKind {
    Normalized,
    Gaussian,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MomentKind {
    Normalized,
    Gaussian,
    /// Each factor is the reduced state on `A` of a Haar vector in `A ⊗ B`.
    PartialTrace { d_a: u64, d_b: u64 },
    /// One letter string, coarsened per tensor factor.
    Repeated,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MomentQuery {
    pub p: u64,
    /// Local dimension. Ignored by `PartialTrace`, which carries its own.
    pub d: u64,
    pub k: u32,
    pub m: usize,
    pub kind: MomentKind,
}

impl MomentQuery {
    pub fn normalized(p: u64, d: u64, k: u32, m: usize) -> Self {
        MomentQuery { p, d, k, m, kind: MomentKind::Normalized }
    }

    pub fn gaussian(p: u64, d: u64, k: u32, m: usize) -> Self {
        MomentQuery { p, d, k, m, kind: MomentKind::Gaussian }
    }

    pub fn partial_trace(p: u64, d_a: u64, d_b: u64, k: u32, m: usize) -> Self {
        MomentQuery {
            p,
            d: d_a,
            k,
            m,
            kind: MomentKind::PartialTrace { d_a, d_b },
        }
    }

    pub fn repeated(p: u64, d: u64, k: u32, m: usize) -> Self {
        MomentQuery { p, d, k, m, kind: MomentKind::Repeated }
    }

    /// Local dimension of the output space.
    pub fn local_dim(&self) -> u64 {
        match self.kind {
            MomentKind::PartialTrace { d_a, .. } => d_a,
            _ => self.d,
        }
    }

    /// Matrix dimension `D`.
    pub fn dimension(&self) -> BigRational {
        ratio_pow(&ratio_int(self.local_dim()), self.k)
    }

    /// `x = p / D`.
    pub fn x(&self) -> BigRational {
        ratio_int(self.p) / self.dimension()
    }

    fn validate(&self) -> Result<()> {
        if self.p == 0 || self.k == 0 || self.m == 0 {
            return Err(Error::domain(format!("need p, k, m >= 1, got {self:?}")));
        }
        match self.kind {
            MomentKind::PartialTrace { d_a, d_b } if d_a < 2 || d_b < 2 => {
                Err(Error::domain(format!("need d_A, d_B >= 2, got ({d_a}, {d_b})")))
            }
            MomentKind::PartialTrace { .. } => Ok(()),
            _ if self.d < 2 => Err(Error::domain(format!("need d >= 2, got {}", self.d))),
            _ => Ok(()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentResult {
    /// `E^m`.
    pub total: BigRational,
    /// `e^m = E^m / D`.
    pub normalized: BigRational,
    /// Contribution of words with `ℓ` blocks, for `ℓ = 1..=m`.
    pub by_block_count: BTreeMap<usize, BigRational>,
    pub by_class: BTreeMap<ReductionClass, BigRational>,
}

/// Exact moment computations. The stabilizer histograms behind every string
/// moment are cached process-wide, so engines are cheap to create.
#[derive(Clone, Copy, Debug)]
pub struct MomentEngine {
    cap: usize,
}

impl Default for MomentEngine {
    fn default() -> Self {
        Self::new()
    }
}

impl MomentEngine {
    pub fn new() -> Self {
        MomentEngine { cap: DEFAULT_CAP }
    }

    /// Raises (or lowers) the largest `m` accepted.
    pub fn with_cap(cap: usize) -> Self {
        MomentEngine { cap }
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn string_moment(&self, sigma: &SetPartitionString, d: u64, kind: StringKind) -> Result<BigRational> {
        if d < 2 {
            return Err(Error::domain(format!("need d >= 2, got {d}")));
        }
        self.check_stabilizer(sigma)?;
        let h = histogram(sigma);
        let num = weighted_sum(&h, |a, _| pow_big(d, a));
        Ok(match kind {
            StringKind::Normalized => {
                let den: num_bigint::BigUint = sigma.multiplicities().iter().map(|&mu| rising(d, mu as u64)).product();
                BigRational::new(num, BigInt::from(den))
            }
            StringKind::Gaussian => BigRational::new(num, pow_big(d, sigma.len() as u32)),
        })
    }

    pub fn string_moment_ptrace(&self, sigma: &SetPartitionString, d_a: u64, d_b: u64) -> Result<BigRational> {
        if d_a < 2 || d_b < 2 {
            return Err(Error::domain(format!("need d_A, d_B >= 2, got ({d_a}, {d_b})")));
        }
        self.check_stabilizer(sigma)?;
        let h = histogram(sigma);
        let num = weighted_sum(&h, |a, b| pow_big(d_a, a) * pow_big(d_b, b));
        let den: num_bigint::BigUint = sigma.multiplicities().iter().map(|&mu| rising(d_a * d_b, mu as u64)).product();
        Ok(BigRational::new(num, BigInt::from(den)))
    }

    fn check_stabilizer(&self, sigma: &SetPartitionString) -> Result<()> {
        let order = sigma
            .multiplicities()
            .iter()
            .try_fold(1u128, |acc, &mu| (1..=mu as u128).try_fold(acc, |a, j| a.checked_mul(j)))
            .unwrap_or(u128::MAX);
        if order > MAX_STABILIZER_ORDER {
            return Err(Error::guard("stabilizer order", order, MAX_STABILIZER_ORDER));
        }
        Ok(())
    }

    fn weight(&self, q: &MomentQuery, sigma: &SetPartitionString) -> Result<BigRational> {
        let w = match q.kind {
            MomentKind::Normalized => self.string_moment(sigma, q.d, StringKind::Normalized)?,
            MomentKind::Gaussian => self.string_moment(sigma, q.d, StringKind::Gaussian)?,
            MomentKind::PartialTrace { d_a, d_b } => self.string_moment_ptrace(sigma, d_a, d_b)?,
            MomentKind::Repeated => unreachable!("handled by repeated_moment"),
        };
        Ok(ratio_pow(&w, q.k))
    }

    pub fn ensemble_moment(&self, q: &MomentQuery) -> Result<MomentResult> {
        q.validate()?;
        if q.kind == MomentKind::Repeated {
            return Err(Error::domain("the repeated ensemble is computed by repeated_moment"));
        }
        let words: Vec<SetPartitionString> = enumerate_partitions(q.m, Some(self.cap))?.collect();
        let terms: Vec<(usize, ReductionClass, BigRational)> = words
            .par_iter()
            .map(|s| {
                let l = s.block_count();
                let class = classify(s.word())?;
                let pf = falling(q.p, l as u64);
                let v = if pf.is_zero() {
                    BigRational::zero()
                } else {
                    ratio_from(pf) * self.weight(q, s)?
                };
                Ok((l, class, v))
            })
            .collect::<Result<_>>()?;

        let mut by_block_count: BTreeMap<usize, BigRational> = (1..=q.m).map(|l| (l, BigRational::zero())).collect();
        let mut by_class: BTreeMap<ReductionClass, BigRational> =
            ReductionClass::ALL.iter().map(|&c| (c, BigRational::zero())).collect();
        let mut total = BigRational::zero();
        for (l, class, v) in terms {
            *by_block_count.get_mut(&l).unwrap() += &v;
            *by_class.get_mut(&class).unwrap() += &v;
            total += v;
        }
        let normalized = &total / q.dimension();
        Ok(MomentResult {
            total,
            normalized,
            by_block_count,
            by_class,
        })
    }

    /// `c_ℓ(d, k)` with `E^m = Σ_ℓ c_ℓ (p)_ℓ` for normalized factors.
    pub fn moment_coefficient_table(&self, m: usize, k: u32, d: u64) -> Result<BTreeMap<usize, BigRational>> {
        if d < 2 || k == 0 {
            return Err(Error::domain(format!("need d >= 2 and k >= 1, got d={d}, k={k}")));
        }
        let mut out: BTreeMap<usize, BigRational> = (1..=m).map(|l| (l, BigRational::zero())).collect();
        for s in enumerate_partitions(m, Some(self.cap))? {
            let w = ratio_pow(&self.string_moment(&s, d, StringKind::Normalized)?, k);
            *out.get_mut(&s.block_count()).unwrap() += w;
        }
        Ok(out)
    }

    /// Contribution of one reduction class to `E^m`.
    pub fn class_sum(&self, q: &MomentQuery, class: ReductionClass) -> Result<BigRational> {
        Ok(self.ensemble_moment(q)?.by_class.remove(&class).unwrap_or_default())
    }

    /// `Ẽ^m = Σ_{s ∈ [p]^m} Π_j E_d[s^{(j)}]` for the repeated ensemble.
    pub fn repeated_moment(&self, q: &MomentQuery) -> Result<BigRational> {
        q.validate()?;
        repeated::repeated_moment(self, q)
    }
}

fn weighted_sum(h: &CycleHistogram, f: impl Fn(u32, u32) -> BigInt) -> BigInt {
    h.entries().iter().map(|&((a, b), c)| f(a, b) * BigInt::from(c)).sum()
}

fn pow_big(base: u64, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(base), e as usize)
}

/// Module-level shorthand for [`MomentEngine::string_moment`].
pub fn string_moment(sigma: &SetPartitionString, d: u64, kind: StringKind) -> Result<BigRational> {
    MomentEngine::new().string_moment(sigma, d, kind)
}

/// Module-level shorthand for [`MomentEngine::string_moment_ptrace`].
pub fn string_moment_ptrace(sigma: &SetPartitionString, d_a: u64, d_b: u64) -> Result<BigRational> {
    MomentEngine::new().string_moment_ptrace(sigma, d_a, d_b)
}

/// `E_d[∅] = d`, extended so the reduction identity holds for every word.
pub fn empty_word_moment(d: u64) -> BigRational {
    ratio_int(d)
}
