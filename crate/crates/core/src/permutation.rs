//! Permutations of `{1..m}` and the cycle statistics that drive the moment
//! formulas.
//!
//! The public API is 1-indexed. Internally images are stored 0-indexed, and
//! the slice helpers [`cycle_count_of`] and [`shifted_cycle_count_of`] work on
//! 0-indexed image arrays for the hot enumeration loops.

use std::fmt;

use crate::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    /// Builds a permutation from 1-indexed images: `images[i-1] = π(i)`.
    pub fn from_images(images: &[usize]) -> Result<Self> {
        let m = images.len();
        let mut seen = vec![false; m];
        let mut image = Vec::with_capacity(m);
        for &v in images {
            if v == 0 || v > m || seen[v - 1] {
                return Err(Error::domain(format!("{images:?} is not a permutation of 1..={m}")));
            }
            seen[v - 1] = true;
            image.push(v - 1);
        }
        Ok(Permutation { image })
    }

    pub fn identity(m: usize) -> Self {
        Permutation { image: (0..m).collect() }
    }

    /// The m-cycle `C_m: i ↦ i+1`, wrapping `m ↦ 1`.
    pub fn cyclic_shift(m: usize) -> Self {
        Permutation {
            image: (0..m).map(|i| (i + 1) % m).collect(),
        }
    }

    /// Builds a permutation of `{1..m}` from disjoint 1-indexed cycles; points
    /// not mentioned are fixed.
    pub fn from_cycles(m: usize, cycles: &[&[usize]]) -> Result<Self> {
        let mut image: Vec<usize> = (0..m).collect();
        let mut touched = vec![false; m];
        for cycle in cycles {
            for (idx, &a) in cycle.iter().enumerate() {
                if a == 0 || a > m || touched[a - 1] {
                    return Err(Error::domain(format!("bad cycle {cycle:?} for m={m}")));
                }
                touched[a - 1] = true;
                let b = cycle[(idx + 1) % cycle.len()];
                image[a - 1] = b - 1;
            }
        }
        Ok(Permutation { image })
    }

    pub(crate) fn from_zero_based(image: Vec<usize>) -> Self {
        Permutation { image }
    }

    pub fn len(&self) -> usize {
        self.image.len()
    }

    pub fn is_empty(&self) -> bool {
        self.image.is_empty()
    }

    /// `π(i)` for 1-indexed `i`.
    pub fn apply(&self, i: usize) -> usize {
        self.image[i - 1] + 1
    }

    /// 1-indexed images.
    pub fn images(&self) -> Vec<usize> {
        self.image.iter().map(|v| v + 1).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        assert_eq!(self.len(), other.len(), "composing permutations of different degree");
        Permutation {
            image: other.image.iter().map(|&j| self.image[j]).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Permutation { image: inv }
    }

    pub fn cycle_count(&self) -> usize {
        cycle_count_of(&self.image)
    }

    /// Disjoint cycles, 1-indexed, each starting at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let m = self.len();
        let mut seen = vec![false; m];
        let mut out = Vec::new();
        for start in 0..m {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut j = start;
            while !seen[j] {
                seen[j] = true;
                cycle.push(j + 1);
                j = self.image[j];
            }
            out.push(cycle);
        }
        out
    }

    /// All of `S_m` in lexicographic order of the image list.
    pub fn all(m: usize) -> impl Iterator<Item = Permutation> {
        let mut next = Some((0..m).collect::<Vec<_>>());
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let mut succ = cur.clone();
            if next_permutation(&mut succ) {
                next = Some(succ);
            }
            Some(Permutation { image: cur })
        })
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation(")?;
        let cycles: Vec<_> = self.cycles().into_iter().filter(|c| c.len() > 1).collect();
        if cycles.is_empty() {
            write!(f, "id")?;
        }
        for c in cycles {
            let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", parts.join(" "))?;
        }
        write!(f, ")")
    }
}

/// Number of cycles of `C_m ∘ π`, i.e. of `i ↦ (π(i) mod m) + 1`.
pub fn shifted_cycle_count(pi: &Permutation) -> usize {
    shifted_cycle_count_of(&pi.image)
}

/// Cycle count of a 0-indexed image array.
pub fn cycle_count_of(image: &[usize]) -> usize {
    let m = image.len();
    // Bitmask fast path covers every size the moment engine enumerates.
    if m <= 64 {
        let mut seen: u64 = 0;
        let mut count = 0;
        for start in 0..m {
            if seen >> start & 1 == 1 {
                continue;
            }
            count += 1;
            let mut j = start;
            while seen >> j & 1 == 0 {
                seen |= 1 << j;
                j = image[j];
            }
        }
        return count;
    }
    Permutation::from_zero_based(image.to_vec()).cycles().len()
}

/// Cycle count of `i ↦ (image[i] + 1) mod m` for a 0-indexed image array.
pub fn shifted_cycle_count_of(image: &[usize]) -> usize {
    let m = image.len();
    if m <= 64 {
        let mut seen: u64 = 0;
        let mut count = 0;
        for start in 0..m {
            if seen >> start & 1 == 1 {
                continue;
            }
            count += 1;
            let mut j = start;
            while seen >> j & 1 == 0 {
                seen |= 1 << j;
                j = (image[j] + 1) % m;
            }
        }
        return count;
    }
    let shifted: Vec<usize> = image.iter().map(|&v| (v + 1) % m).collect();
    cycle_count_of(&shifted)
}

/// Rearranges `v` into its lexicographic successor; false at the last one.
pub(crate) fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Decodes a Lehmer code index `0..n!` into a 0-indexed permutation of `n`
/// points. Index 0 is the identity; indices follow lexicographic order.
pub(crate) fn lehmer_decode(mut index: usize, n: usize) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    let mut fact = (1..n).product::<usize>().max(1);
    let mut out = Vec::with_capacity(n);
    for remaining in (1..=n).rev() {
        let digit = index / fact;
        index %= fact;
        out.push(pool.remove(digit));
        if remaining > 1 {
            fact /= remaining - 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Hand-composed reference: returns `C_m ∘ π` as 1-indexed images.
    fn shift_after(images: &[usize]) -> Vec<usize> {
        let m = images.len();
        images.iter().map(|&v| v % m + 1).collect()
    }

    #[test]
    fn shifted_cycle_examples() {
        assert_eq!(shifted_cycle_count(&Permutation::identity(4)), 1);
        let t13 = Permutation::from_cycles(4, &[&[1, 3]]).unwrap();
        assert_eq!(t13.images(), vec![3, 2, 1, 4]);
        // C_4 ∘ (1 3) = [4, 3, 2, 1] = (1 4)(2 3)
        assert_eq!(shift_after(&t13.images()), vec![4, 3, 2, 1]);
        assert_eq!(shifted_cycle_count(&t13), 2);
        let t13_24 = Permutation::from_cycles(4, &[&[1, 3], &[2, 4]]).unwrap();
        // C_4 ∘ (1 3)(2 4) = [4, 1, 2, 3] = (1 4 3 2)
        assert_eq!(shift_after(&t13_24.images()), vec![4, 1, 2, 3]);
        assert_eq!(shifted_cycle_count(&t13_24), 1);
    }

    #[test]
    fn shifted_count_matches_explicit_composition() {
        for m in 1..=6 {
            let c = Permutation::cyclic_shift(m);
            for pi in Permutation::all(m) {
                assert_eq!(shifted_cycle_count(&pi), c.compose(&pi).cycle_count());
            }
        }
    }

    #[test]
    fn cycle_sum_bound_exhaustive() {
        // cyc(C_m π) + cyc(π) ≤ m + 1 on all of S_m.
        for m in 1..=7 {
            let mut count = 0;
            for pi in Permutation::all(m) {
                assert!(shifted_cycle_count(&pi) + pi.cycle_count() <= m + 1, "{pi:?}");
                count += 1;
            }
            assert_eq!(count, (1..=m).product::<usize>());
        }
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(Permutation::from_images(&[1, 1]).is_err());
        assert!(Permutation::from_images(&[0, 1]).is_err());
        assert!(Permutation::from_images(&[3, 1]).is_err());
        assert!(Permutation::from_cycles(3, &[&[1, 2], &[2, 3]]).is_err());
    }

    #[test]
    fn lehmer_codes_enumerate_in_lex_order() {
        for n in 0..=5 {
            let from_codes: Vec<Vec<usize>> = (0..(1..=n).product::<usize>().max(1))
                .map(|i| lehmer_decode(i, n))
                .collect();
            let lex: Vec<Vec<usize>> = Permutation::all(n).map(|p| p.image).collect();
            assert_eq!(from_codes, lex);
        }
    }

    #[test]
    fn compose_inverse_is_identity() {
        for pi in Permutation::all(5) {
            assert_eq!(pi.compose(&pi.inverse()), Permutation::identity(5));
        }
    }
}
