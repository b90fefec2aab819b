//! Restricted-growth strings: the canonical encoding of which positions of a
//! length-`m` trace share a letter.
//!
//! A word `w` over `{1, 2, …}` is canonical when `w[1] = 1` and each letter is
//! at most one more than every letter before it, so first occurrences of
//! `1, 2, …, ℓ` appear in increasing order. Every word over an arbitrary
//! alphabet has exactly one canonical relabelling.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Default upper limit on word length for exhaustive enumeration.
pub const DEFAULT_CAP: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartitionString {
    word: Vec<u32>,
    multiplicities: Vec<usize>,
}

impl SetPartitionString {
    /// Wraps a word that is already in restricted-growth form.
    pub fn from_word(word: Vec<u32>) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::domain("set partition strings are nonempty"));
        }
        let mut max = 0u32;
        for &c in &word {
            if c == 0 || c > max + 1 {
                return Err(Error::domain(format!("{word:?} is not a restricted-growth word")));
            }
            max = max.max(c);
        }
        Ok(Self::from_canonical_unchecked(word))
    }

    /// Relabels an arbitrary nonempty word so that letters are numbered in
    /// order of first appearance.
    pub fn canonicalize(word: &[u32]) -> Result<Self> {
        if word.is_empty() {
            return Err(Error::domain("cannot canonicalize the empty word"));
        }
        Ok(Self::from_canonical_unchecked(canonical_word(word)))
    }

    pub(crate) fn from_canonical_unchecked(word: Vec<u32>) -> Self {
        let blocks = word.iter().copied().max().unwrap_or(0) as usize;
        let mut multiplicities = vec![0; blocks];
        for &c in &word {
            multiplicities[c as usize - 1] += 1;
        }
        SetPartitionString { word, multiplicities }
    }

    pub fn word(&self) -> &[u32] {
        &self.word
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Number of distinct letters, ℓ.
    pub fn block_count(&self) -> usize {
        self.multiplicities.len()
    }

    /// `μ_i` = occurrences of letter `i`, for `i = 1..=ℓ`.
    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    /// 0-indexed positions of each letter, in letter order.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (pos, &c) in self.word.iter().enumerate() {
            out[c as usize - 1].push(pos);
        }
        out
    }

    /// 1-indexed position of the first occurrence of each letter.
    pub fn first_occurrences(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.block_count());
        for (pos, &c) in self.word.iter().enumerate() {
            if c as usize > out.len() {
                out.push(pos + 1);
            }
        }
        out
    }

    /// Canonical word obtained by identifying letters `a` and `b` (1-indexed).
    pub fn merge(&self, a: u32, b: u32) -> SetPartitionString {
        let merged: Vec<u32> = self.word.iter().map(|&c| if c == b { a } else { c }).collect();
        Self::from_canonical_unchecked(canonical_word(&merged))
    }
}

pub(crate) fn canonical_word(word: &[u32]) -> Vec<u32> {
    let mut labels: Vec<(u32, u32)> = Vec::new();
    word.iter()
        .map(|&c| match labels.iter().find(|(orig, _)| *orig == c) {
            Some(&(_, l)) => l,
            None => {
                let l = labels.len() as u32 + 1;
                labels.push((c, l));
                l
            }
        })
        .collect()
}

impl fmt::Display for SetPartitionString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.block_count() <= 9 {
            for c in &self.word {
                write!(f, "{c}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.word.iter().map(|c| c.to_string()).collect();
            write!(f, "{}", parts.join(","))
        }
    }
}

impl fmt::Debug for SetPartitionString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

/// Parses `"1212"` (one digit per letter) or `"1,2,10,2"`. The word need not be
/// canonical; it is relabelled.
impl FromStr for SetPartitionString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let word = parse_word(s)?;
        Self::canonicalize(&word)
    }
}

/// Parses a word written as digits (`"11332221"`) or comma-separated letters.
pub fn parse_word(s: &str) -> Result<Vec<u32>> {
    let s = s.trim();
    let bad = || Error::domain(format!("cannot parse word {s:?}"));
    if s.contains(',') {
        s.split(',').map(|t| t.trim().parse::<u32>().map_err(|_| bad())).collect()
    } else {
        s.chars().map(|c| c.to_digit(10).ok_or_else(bad)).collect()
    }
}

/// Iterator over all restricted-growth words of length `m` in lexicographic
/// order.
pub struct RgsIter {
    current: Option<Vec<u32>>,
    /// `prefix_max[i] = max(word[0..=i])`
    prefix_max: Vec<u32>,
}

impl Iterator for RgsIter {
    type Item = SetPartitionString;

    fn next(&mut self) -> Option<SetPartitionString> {
        let cur = self.current.take()?;
        let m = cur.len();
        let mut succ = cur.clone();
        let mut i = m;
        while i > 1 {
            i -= 1;
            if succ[i] <= self.prefix_max[i - 1] {
                succ[i] += 1;
                self.prefix_max[i] = self.prefix_max[i - 1].max(succ[i]);
                for j in i + 1..m {
                    succ[j] = 1;
                    self.prefix_max[j] = self.prefix_max[i];
                }
                self.current = Some(succ);
                break;
            }
        }
        Some(SetPartitionString::from_canonical_unchecked(cur))
    }
}

/// Every restricted-growth word of length `m` (there are Bell(m) of them).
///
/// `cap` bounds `m`; `None` uses [`DEFAULT_CAP`].
pub fn enumerate_partitions(m: usize, cap: Option<usize>) -> Result<RgsIter> {
    let cap = cap.unwrap_or(DEFAULT_CAP);
    if m == 0 {
        return Err(Error::domain("partition length must be positive"));
    }
    if m > cap {
        return Err(Error::guard("word length m", m as u64, cap as u64));
    }
    Ok(RgsIter {
        current: Some(vec![1; m]),
        prefix_max: vec![1; m],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::bell;

    fn words(m: usize) -> Vec<String> {
        enumerate_partitions(m, Some(12)).unwrap().map(|s| s.to_string()).collect()
    }

    #[test]
    fn small_enumerations() {
        assert_eq!(words(1), vec!["1"]);
        assert_eq!(words(2), vec!["11", "12"]);
        assert_eq!(words(3), vec!["111", "112", "121", "122", "123"]);
    }

    #[test]
    fn counts_are_bell_numbers_and_sorted() {
        for m in 1..=10 {
            let all: Vec<SetPartitionString> = enumerate_partitions(m, Some(10)).unwrap().collect();
            assert_eq!(num_bigint::BigUint::from(all.len()), bell(m));
            assert!(all.windows(2).all(|w| w[0].word() < w[1].word()));
            for s in &all {
                assert_eq!(SetPartitionString::from_word(s.word().to_vec()).unwrap(), *s);
                assert_eq!(s.multiplicities().iter().sum::<usize>(), m);
            }
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(enumerate_partitions(9, None), Err(Error::ResourceGuard { .. })));
        assert!(enumerate_partitions(9, Some(9)).is_ok());
        assert!(matches!(enumerate_partitions(0, None), Err(Error::Domain(_))));
    }

    #[test]
    fn canonicalize_relabels_by_first_occurrence() {
        let s: SetPartitionString = "11332221".parse().unwrap();
        assert_eq!(s.to_string(), "11223331");
        assert_eq!(s.multiplicities(), &[3, 2, 3]);
        assert_eq!(s.first_occurrences(), vec![1, 3, 5]);
        assert!(SetPartitionString::from_word(vec![1, 3]).is_err());
        assert!(SetPartitionString::from_word(vec![2]).is_err());
        let wide = SetPartitionString::canonicalize(&[5, 9, 5, 12]).unwrap();
        assert_eq!(wide.word(), &[1, 2, 1, 3]);
    }

    #[test]
    fn merge_identifies_letters() {
        let s: SetPartitionString = "1213".parse().unwrap();
        assert_eq!(s.merge(2, 3).to_string(), "1212");
        assert_eq!(s.merge(1, 2).to_string(), "1112");
    }
}
