//! The repeated ensemble: one letter string `s ∈ [p]^m` feeds every tensor
//! factor, coarsened on factor `j` to `s^{(j)} = ⌈s / q^{k-j}⌉` with
//! `q = p^{1/k}`. The last factor sees `s` itself, the first only `q` letters.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::{MomentEngine, MomentQuery, StringKind};
use crate::combinatorics::ratio_int;
use crate::partition::{canonical_word, SetPartitionString};
use crate::{Error, Result};

/// Largest `p^m` enumerated.
pub const MAX_STRINGS: u64 = 10_000_000;

/// Exact integer `k`-th root of `p`, if there is one.
pub fn perfect_root(p: u64, k: u32) -> Option<u64> {
    if k == 0 {
        return None;
    }
    let guess = (p as f64).powf(1.0 / k as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|&q| q.checked_pow(k) == Some(p))
}

/// `maps[j][s-1] = s^{(j+1)}` for `j = 0..k` and `s = 1..=p`.
pub fn letter_maps(p: u64, k: u32) -> Result<Vec<Vec<u32>>> {
    let q = perfect_root(p, k).ok_or_else(|| Error::domain(format!("p = {p} is not of the form q^{k}")))?;
    Ok((1..=k)
        .map(|j| {
            let step = q.pow(k - j);
            (1..=p).map(|s| s.div_ceil(step) as u32).collect()
        })
        .collect())
}

pub(super) fn repeated_moment(engine: &MomentEngine, q: &MomentQuery) -> Result<BigRational> {
    let maps = letter_maps(q.p, q.k)?;
    let strings = q.p.checked_pow(q.m as u32).filter(|&n| n <= MAX_STRINGS);
    if strings.is_none() {
        let requested = (q.p as u128).saturating_pow(q.m as u32);
        return Err(Error::guard("p^m strings", requested, MAX_STRINGS));
    }

    // Count how often each tuple of canonical factor words occurs, then weigh.
    let mut counts: HashMap<Vec<Vec<u32>>, u64> = HashMap::new();
    let mut s = vec![0usize; q.m];
    loop {
        let key: Vec<Vec<u32>> = maps
            .iter()
            .map(|map| canonical_word(&s.iter().map(|&i| map[i]).collect::<Vec<_>>()))
            .collect();
        *counts.entry(key).or_default() += 1;

        let mut i = 0;
        while i < q.m {
            s[i] += 1;
            if (s[i] as u64) < q.p {
                break;
            }
            s[i] = 0;
            i += 1;
        }
        if i == q.m {
            break;
        }
    }

    let mut memo: HashMap<Vec<u32>, BigRational> = HashMap::new();
    let mut keys: Vec<_> = counts.into_iter().collect();
    keys.sort();
    let mut total = BigRational::zero();
    for (words, count) in keys {
        let mut term = ratio_int(count);
        for w in words {
            let v = match memo.get(&w) {
                Some(v) => v.clone(),
                None => {
                    let v = engine.string_moment(
                        &SetPartitionString::from_canonical_unchecked(w.clone()),
                        q.d,
                        StringKind::Normalized,
                    )?;
                    memo.insert(w, v.clone());
                    v
                }
            };
            term *= v;
        }
        total += term;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn letter_map_example() {
        assert_eq!(letter_maps(4, 2).unwrap(), vec![vec![1, 1, 2, 2], vec![1, 2, 3, 4]]);
        assert_eq!(letter_maps(8, 3).unwrap()[0], vec![1, 1, 1, 1, 2, 2, 2, 2]);
        assert!(matches!(letter_maps(5, 2), Err(Error::Domain(_))));
        assert_eq!(perfect_root(1, 4), Some(1));
        assert_eq!(perfect_root(27, 3), Some(3));
        assert_eq!(perfect_root(26, 3), None);
    }

    #[test]
    fn k_one_matches_normalized() {
        let e = MomentEngine::new();
        for m in 1..=4 {
            for p in 1..=4 {
                let rep = e.repeated_moment(&MomentQuery::repeated(p, 3, 1, m)).unwrap();
                let norm = e.ensemble_moment(&MomentQuery::normalized(p, 3, 1, m)).unwrap().total;
                assert_eq!(rep, norm);
            }
        }
    }

    #[test]
    fn first_moment_is_p() {
        let e = MomentEngine::new();
        for (p, k) in [(4u64, 2u32), (9, 2), (8, 3)] {
            assert_eq!(e.repeated_moment(&MomentQuery::repeated(p, 2, k, 1)).unwrap(), ratio_int(p));
        }
    }

    #[test]
    fn second_moment_by_hand() {
        // p=4, k=2, d=2: 4 diagonal strings give 1; 4 pairs sharing the coarse
        // letter give 1·½; the other 8 give ¼.
        let e = MomentEngine::new();
        assert_eq!(e.repeated_moment(&MomentQuery::repeated(4, 2, 2, 2)).unwrap(), q(8, 1));
    }

    #[test]
    fn guard() {
        let e = MomentEngine::new();
        assert!(matches!(
            e.repeated_moment(&MomentQuery::repeated(100, 2, 2, 4)),
            Err(Error::ResourceGuard { .. })
        ));
    }
}
