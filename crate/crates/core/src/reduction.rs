//! String simplification for trace words.
//!
//! Two rules shrink a word `s` without changing `E_d[s]` beyond a power of
//! `1/d`:
//!
//! * **repeats**: a run `aa…a` collapses to `a` because `φ_a² = φ_a`. The word
//!   is cyclic, so runs wrap from the end back to the start.
//! * **unique letters**: a letter occurring once averages to `I/d`, so it is
//!   deleted at the cost of a factor `1/d`.
//!
//! Applying both until neither fires gives `R(s)` and the number `u` of unique
//! letters removed, with `E_d[s] = d^{-u} E_d[R(s)]` and `E_d[∅] = d`.

use std::collections::HashMap;

use crate::partition::{canonical_word, SetPartitionString};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize)]
pub enum ReductionClass {
    /// Reduces to the empty word.
    CompletelyReducible,
    /// Neither rule applies.
    Irreducible,
    /// Shrinks, but not to nothing.
    Mixed,
}

impl ReductionClass {
    pub const ALL: [ReductionClass; 3] = [
        ReductionClass::CompletelyReducible,
        ReductionClass::Irreducible,
        ReductionClass::Mixed,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ReductionClass::CompletelyReducible => "completely-reducible",
            ReductionClass::Irreducible => "irreducible",
            ReductionClass::Mixed => "mixed",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    /// `R(s)` in canonical form, or `None` for the empty word.
    pub reduced: Option<SetPartitionString>,
    /// Number of unique-letter deletions over all rounds.
    pub removed_unique: usize,
    pub class: ReductionClass,
}

/// Which rule to try first in each round. The fixed point does not depend on
/// it; both orders exist so that fact can be checked.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RuleOrder {
    RepeatsFirst,
    UniquesFirst,
}

/// Reduces `word` to its fixed point under both rules.
pub fn reduce(word: &[u32]) -> Result<ReductionResult> {
    reduce_with_order(word, RuleOrder::RepeatsFirst)
}

pub fn reduce_with_order(word: &[u32], order: RuleOrder) -> Result<ReductionResult> {
    if word.is_empty() {
        return Err(Error::domain("cannot reduce the empty word"));
    }
    let mut w = word.to_vec();
    let mut removed_unique = 0;
    loop {
        let before = w.len();
        match order {
            RuleOrder::RepeatsFirst => {
                collapse_cyclic_repeats(&mut w);
                removed_unique += remove_unique_letters(&mut w);
            }
            RuleOrder::UniquesFirst => {
                removed_unique += remove_unique_letters(&mut w);
                collapse_cyclic_repeats(&mut w);
            }
        }
        if w.len() == before {
            break;
        }
    }
    let class = if w.is_empty() {
        ReductionClass::CompletelyReducible
    } else if w.len() == word.len() {
        ReductionClass::Irreducible
    } else {
        ReductionClass::Mixed
    };
    let reduced = (!w.is_empty()).then(|| SetPartitionString::from_canonical_unchecked(canonical_word(&w)));
    Ok(ReductionResult {
        reduced,
        removed_unique,
        class,
    })
}

pub fn classify(word: &[u32]) -> Result<ReductionClass> {
    Ok(reduce(word)?.class)
}

/// Deletes every position equal to its cyclic predecessor. A word made of a
/// single repeated letter keeps one copy.
fn collapse_cyclic_repeats(w: &mut Vec<u32>) {
    let n = w.len();
    if n <= 1 {
        return;
    }
    if w.iter().all(|&c| c == w[0]) {
        w.truncate(1);
        return;
    }
    let kept: Vec<u32> = (0..n).filter(|&i| w[i] != w[(i + n - 1) % n]).map(|i| w[i]).collect();
    *w = kept;
}

/// Deletes letters that occur exactly once, returning how many were deleted.
fn remove_unique_letters(w: &mut Vec<u32>) -> usize {
    let mut counts: HashMap<u32, usize> = HashMap::new();
    for &c in w.iter() {
        *counts.entry(c).or_default() += 1;
    }
    let before = w.len();
    w.retain(|c| counts[c] > 1);
    before - w.len()
}

/// First-occurrence positions `a` and cumulative multiplicities `b` of a
/// completely reducible canonical word.
///
/// Invariants: `1 = a_1 < … < a_ℓ ≤ m`, `1 ≤ b_1 < … < b_ℓ = m`, and
/// `a_{i+1} ≤ b_i + 1`: every position before the first `i+1` holds one of
/// the letters `1..=i`. The last condition implies `a_i ≤ b_i`; that weaker
/// form alone admits pairs such as `a = (1, 3)`, `b = (1, 3)` that no word
/// realises.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AbPair {
    a: Vec<usize>,
    b: Vec<usize>,
}

impl AbPair {
    pub fn new(a: Vec<usize>, b: Vec<usize>, m: usize) -> Result<Self> {
        let bad = |why: &str| Err(Error::domain(format!("invalid (a, b) = ({a:?}, {b:?}) for m={m}: {why}")));
        if a.is_empty() || a.len() != b.len() {
            return bad("a and b must be nonempty and of equal length");
        }
        if a[0] != 1 {
            return bad("a_1 must be 1");
        }
        if *b.last().unwrap() != m {
            return bad("b_ℓ must equal m");
        }
        if a.windows(2).any(|w| w[0] >= w[1]) || b.windows(2).any(|w| w[0] >= w[1]) {
            return bad("a and b must be strictly increasing");
        }
        if b[0] < 1 || *a.last().unwrap() > m {
            return bad("entries out of range");
        }
        if a.iter().zip(&b).any(|(ai, bi)| ai > bi) {
            return bad("need a_i <= b_i");
        }
        if a[1..].iter().zip(&b).any(|(next, bi)| *next > bi + 1) {
            return bad("need a_{i+1} <= b_i + 1");
        }
        Ok(AbPair { a, b })
    }

    pub fn a(&self) -> &[usize] {
        &self.a
    }

    pub fn b(&self) -> &[usize] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    /// All valid pairs with `ℓ` entries for words of length `m`.
    pub fn enumerate(m: usize, l: usize) -> Vec<AbPair> {
        fn increasing(first: usize, last_max: usize, len: usize, fixed_last: Option<usize>) -> Vec<Vec<usize>> {
            // strictly increasing sequences starting at `first`, entries ≤ last_max
            let mut out = Vec::new();
            let mut cur = vec![first];
            fn rec(cur: &mut Vec<usize>, len: usize, max: usize, fixed_last: Option<usize>, out: &mut Vec<Vec<usize>>) {
                if cur.len() == len {
                    if fixed_last.is_none_or(|f| *cur.last().unwrap() == f) {
                        out.push(cur.clone());
                    }
                    return;
                }
                for v in cur.last().unwrap() + 1..=max {
                    cur.push(v);
                    rec(cur, len, max, fixed_last, out);
                    cur.pop();
                }
            }
            rec(&mut cur, len, last_max, fixed_last, &mut out);
            out
        }
        if l == 0 || l > m {
            return Vec::new();
        }
        let a_list = increasing(1, m, l, None);
        let b_list: Vec<Vec<usize>> = (1..=m).flat_map(|b1| increasing(b1, m, l, Some(m))).collect();
        let mut out = Vec::new();
        for a in &a_list {
            for b in &b_list {
                if a[1..].iter().zip(b).all(|(x, y)| *x <= y + 1) {
                    out.push(AbPair { a: a.clone(), b: b.clone() });
                }
            }
        }
        out
    }
}

/// Rebuilds the completely reducible canonical word with first occurrences `a`
/// and cumulative counts `b`.
///
/// Keep placing the current letter until the next first-occurrence position
/// arrives or the letter's budget runs out; in the latter case fall back to
/// the most recent letter that still has budget.
pub fn narayana_decode(ab: &AbPair, m: usize) -> Result<SetPartitionString> {
    let l = ab.len();
    if ab.b.last() != Some(&m) {
        return Err(Error::domain(format!("b_ℓ = {:?} does not match m = {m}", ab.b.last())));
    }
    let mut remaining: Vec<usize> = (0..l).map(|i| ab.b[i] - if i == 0 { 0 } else { ab.b[i - 1] }).collect();
    let mut word = Vec::with_capacity(m);
    // `s` is the 1-indexed current letter; 0 means none available.
    let mut s = 0usize;
    let mut next_first = 0usize;
    for t in 1..=m {
        if next_first < l && ab.a[next_first] == t {
            next_first += 1;
            s = next_first;
        }
        if s == 0 {
            return Err(Error::domain(format!("(a, b) exhausted every letter before position {t}")));
        }
        word.push(s as u32);
        remaining[s - 1] -= 1;
        while s > 0 && remaining[s - 1] == 0 {
            s -= 1;
        }
    }
    let sigma = SetPartitionString::from_word(word)?;
    if sigma.first_occurrences() != ab.a {
        return Err(Error::domain("decoded word does not realise the requested first occurrences"));
    }
    Ok(sigma)
}

/// Reads off first-occurrence positions and cumulative multiplicities.
pub fn narayana_encode(sigma: &SetPartitionString) -> Result<AbPair> {
    if reduce(sigma.word())?.class != ReductionClass::CompletelyReducible {
        return Err(Error::domain(format!("{sigma} is not completely reducible")));
    }
    let a = sigma.first_occurrences();
    let b: Vec<usize> = sigma
        .multiplicities()
        .iter()
        .scan(0, |acc, mu| {
            *acc += mu;
            Some(*acc)
        })
        .collect();
    AbPair::new(a, b, sigma.len())
}
