//! Closed forms for `E^m`, `m ≤ 6`, as polynomials in falling factorials
//! `(p)_t` with coefficients rational in `d`.
//!
//! Two tables are kept. [`ReferenceTable::Literature`] is the table as it is
//! usually quoted. It is exact for `m ≤ 4`, but at `m = 5, 6` it drops
//! several mixed and irreducible terms. [`ReferenceTable::Corrected`] has the
//! missing terms restored and agrees with [`MomentEngine`](super::MomentEngine)
//! for every `p, d, k`.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{falling, ratio_from, ratio_int, ratio_pow};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReferenceTable {
    Literature,
    Corrected,
}

/// `c · a^k · (p)_t · (d^{-i} (d+1)^{-j} (d+2)^{-l} (d+3)^{n})^k`.
#[derive(Clone, Copy, Debug)]
struct Term {
    c: u64,
    a: u64,
    t: u64,
    i: u32,
    j: u32,
    l: u32,
    n: u32,
}

const fn term(c: u64, a: u64, t: u64, i: u32, j: u32, l: u32, n: u32) -> Term {
    Term { c, a, t, i, j, l, n }
}

/// Non-crossing terms `N(m, ℓ) (p)_ℓ / d^{k(ℓ-1)}`, shared by both tables.
const RAINBOW: [&[Term]; 6] = [
    &[term(1, 1, 1, 0, 0, 0, 0)],
    &[term(1, 1, 1, 0, 0, 0, 0), term(1, 1, 2, 1, 0, 0, 0)],
    &[term(1, 1, 1, 0, 0, 0, 0), term(3, 1, 2, 1, 0, 0, 0), term(1, 1, 3, 2, 0, 0, 0)],
    &[
        term(1, 1, 1, 0, 0, 0, 0),
        term(6, 1, 2, 1, 0, 0, 0),
        term(6, 1, 3, 2, 0, 0, 0),
        term(1, 1, 4, 3, 0, 0, 0),
    ],
    &[
        term(1, 1, 1, 0, 0, 0, 0),
        term(10, 1, 2, 1, 0, 0, 0),
        term(20, 1, 3, 2, 0, 0, 0),
        term(10, 1, 4, 3, 0, 0, 0),
        term(1, 1, 5, 4, 0, 0, 0),
    ],
    &[
        term(1, 1, 1, 0, 0, 0, 0),
        term(15, 1, 2, 1, 0, 0, 0),
        term(50, 1, 3, 2, 0, 0, 0),
        term(50, 1, 4, 3, 0, 0, 0),
        term(15, 1, 5, 4, 0, 0, 0),
        term(1, 1, 6, 5, 0, 0, 0),
    ],
];

const LITERATURE_EXTRA: [&[Term]; 6] = [
    &[],
    &[],
    &[],
    &[term(1, 2, 2, 1, 1, 0, 0)],
    &[term(5, 2, 2, 1, 1, 0, 0)],
    &[
        term(15, 2, 2, 1, 1, 0, 0),
        term(1, 1, 2, 2, 2, 0, 1),
        term(1, 6, 3, 1, 1, 1, 0),
    ],
];

const CORRECTED_EXTRA: [&[Term]; 6] = [
    &[],
    &[],
    &[],
    &[term(1, 2, 2, 1, 1, 0, 0)],
    &[term(5, 2, 2, 1, 1, 0, 0), term(5, 2, 3, 2, 1, 0, 0)],
    &[
        term(15, 2, 2, 1, 1, 0, 0),
        term(1, 6, 2, 1, 1, 1, 0),
        term(3, 1, 3, 2, 2, 0, 1),
        term(36, 2, 3, 2, 1, 0, 0),
        term(1, 4, 3, 2, 2, 0, 0),
        term(15, 2, 4, 3, 1, 0, 0),
    ],
];

impl ReferenceTable {
    pub const MAX_M: usize = 6;

    pub fn name(self) -> &'static str {
        match self {
            ReferenceTable::Literature => "literature",
            ReferenceTable::Corrected => "corrected",
        }
    }

    /// `E^m` at `(p, d, k)` from the table.
    pub fn evaluate(self, m: usize, p: u64, d: u64, k: u32) -> Result<BigRational> {
        if m == 0 || m > Self::MAX_M {
            return Err(Error::domain(format!("closed forms are tabulated for 1 <= m <= 6, got {m}")));
        }
        if d < 2 || k == 0 {
            return Err(Error::domain(format!("need d >= 2 and k >= 1, got d={d}, k={k}")));
        }
        let extra = match self {
            ReferenceTable::Literature => LITERATURE_EXTRA[m - 1],
            ReferenceTable::Corrected => CORRECTED_EXTRA[m - 1],
        };
        Ok(RAINBOW[m - 1]
            .iter()
            .chain(extra)
            .map(|t| eval_term(t, p, d, k))
            .fold(BigRational::zero(), |acc, v| acc + v))
    }
}

fn eval_term(t: &Term, p: u64, d: u64, k: u32) -> BigRational {
    let pf = ratio_from(falling(p, t.t));
    if pf.is_zero() {
        return pf;
    }
    let pw = |b: u64, e: u32| ratio_int(b.pow(e));
    let base = ratio_int(t.a) * pw(d + 3, t.n) / (pw(d, t.i) * pw(d + 1, t.j) * pw(d + 2, t.l));
    ratio_int(t.c) * pf * ratio_pow(&base, k)
}

/// Rational `Π_{j=1}^{m-1} (d/(d+j))^k`. It is at least `e^{-m²k/2d}` and at
/// most `E^m / Ê^m`, so `floor · Ê^m ≤ E^m` proves the exponential form.
pub fn gaussian_sandwich_floor(m: usize, d: u64, k: u32) -> BigRational {
    let per = (1..m as u64).fold(BigRational::one(), |acc, j| acc * BigRational::new(d.into(), (d + j).into()));
    ratio_pow(&per, k)
}
