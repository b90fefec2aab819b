//! Cycle statistics over the stabilizer `S_σ = Π_i Sym(block_i)`.
//!
//! Every string moment is a weighted count of stabilizer permutations by the
//! pair `(cyc(C_m π), cyc(π))`, so the histogram of that pair is computed once
//! per canonical word and shared by all kinds and all `d`.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, OnceLock, RwLock};

use crate::partition::SetPartitionString;
use crate::permutation::{cycle_count_of, lehmer_decode, shifted_cycle_count_of};

/// `counts[(a, b)]` = number of `π ∈ S_σ` with `cyc(C_m π) = a` and
/// `cyc(π) = b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleHistogram {
    m: usize,
    counts: Vec<((u32, u32), u64)>,
}

impl CycleHistogram {
    pub fn compute(sigma: &SetPartitionString) -> Self {
        let m = sigma.len();
        let blocks = sigma.blocks();
        // Every permutation of each block, as position lists.
        let local: Vec<Vec<Vec<usize>>> = blocks
            .iter()
            .map(|b| {
                let n = b.len();
                let total: usize = (1..=n).product();
                (0..total).map(|idx| lehmer_decode(idx, n).into_iter().map(|j| b[j]).collect()).collect()
            })
            .collect();

        let mut hist: BTreeMap<(u32, u32), u64> = BTreeMap::new();
        let mut image: Vec<usize> = (0..m).collect();
        let mut digits = vec![0usize; blocks.len()];
        loop {
            for (bi, block) in blocks.iter().enumerate() {
                for (&src, &dst) in block.iter().zip(&local[bi][digits[bi]]) {
                    image[src] = dst;
                }
            }
            let key = (shifted_cycle_count_of(&image) as u32, cycle_count_of(&image) as u32);
            *hist.entry(key).or_default() += 1;

            // Mixed-radix increment.
            let mut i = 0;
            while i < digits.len() {
                digits[i] += 1;
                if digits[i] < local[i].len() {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
            if i == digits.len() {
                break;
            }
        }
        CycleHistogram {
            m,
            counts: hist.into_iter().collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[((u32, u32), u64)] {
        &self.counts
    }

    /// `|S_σ|`.
    pub fn order(&self) -> u64 {
        self.counts.iter().map(|(_, c)| c).sum()
    }
}

type Cache = RwLock<HashMap<Vec<u32>, Arc<CycleHistogram>>>;

fn cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// Memoized [`CycleHistogram::compute`]. Concurrent callers may compute the
/// same entry twice; the values are identical so either insert wins.
pub fn histogram(sigma: &SetPartitionString) -> Arc<CycleHistogram> {
    if let Some(h) = cache().read().unwrap().get(sigma.word()) {
        return Arc::clone(h);
    }
    let h = Arc::new(CycleHistogram::compute(sigma));
    let mut w = cache().write().unwrap();
    Arc::clone(w.entry(sigma.word().to_vec()).or_insert(h))
}
