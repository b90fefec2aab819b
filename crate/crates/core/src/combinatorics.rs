//! Exact integer and rational primitives: factorial families, binomials,
//! Narayana and Catalan numbers and the Narayana polynomial
//! `β_m(x) = Σ_ℓ N(m,ℓ) x^ℓ`.
//!
//! Nothing in this module touches floating point except [`beta_eval_f64`],
//! which exists for the bound evaluations that involve irrational factors.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorialKind {
    /// `n (n-1) ⋯ (n-t+1)`, written `(n)_t`.
    Falling,
    /// `n (n+1) ⋯ (n+t-1)`.
    Rising,
}

/// Falling or rising factorial of `n` with `t` factors. The empty product
/// (`t = 0`) is 1, and a falling factorial with `t > n` is 0.
pub fn factorial_family(n: u64, t: u64, kind: FactorialKind) -> BigUint {
    match kind {
        FactorialKind::Falling => {
            if t > n {
                return BigUint::zero();
            }
            (0..t).fold(BigUint::one(), |acc, j| acc * (n - j))
        }
        FactorialKind::Rising => (0..t).fold(BigUint::one(), |acc, j| acc * (n + j)),
    }
}

pub fn falling(n: u64, t: u64) -> BigUint {
    factorial_family(n, t, FactorialKind::Falling)
}

pub fn rising(n: u64, t: u64) -> BigUint {
    factorial_family(n, t, FactorialKind::Rising)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    // Each partial product is itself a binomial coefficient, so the division
    // is exact at every step.
    let mut acc = BigUint::one();
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// The Narayana number `N(m, ℓ) = C(m, ℓ-1) C(m, ℓ) / m`, with `N(0, 0) = 1`.
pub fn narayana(m: u64, l: i64) -> Result<BigUint> {
    if l < 0 || l as u64 > m {
        return Err(Error::domain(format!("narayana: need 0 <= l <= m, got m={m}, l={l}")));
    }
    let l = l as u64;
    if m == 0 {
        return Ok(BigUint::one());
    }
    if l == 0 {
        return Ok(BigUint::zero());
    }
    Ok(binomial(m, l - 1) * binomial(m, l) / m)
}

pub fn catalan(m: u64) -> BigUint {
    binomial(2 * m, m) / (m + 1)
}

pub fn bell(m: usize) -> BigUint {
    // Bell triangle.
    let mut row = vec![BigUint::one()];
    for _ in 0..m {
        let mut next = Vec::with_capacity(row.len() + 1);
        next.push(row.last().cloned().unwrap());
        for v in &row {
            let s = next.last().unwrap() + v;
            next.push(s);
        }
        row = next;
    }
    row[0].clone()
}

/// One row `N(m, 1..=m)` of the Narayana triangle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NarayanaRow {
    m: u64,
    values: Vec<BigUint>,
}

impl NarayanaRow {
    pub fn new(m: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::domain("NarayanaRow needs m >= 1"));
        }
        let values = (1..=m as i64).map(|l| narayana(m, l)).collect::<Result<_>>()?;
        Ok(NarayanaRow { m, values })
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// `values()[ℓ-1] = N(m, ℓ)`.
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn get(&self, l: usize) -> Option<&BigUint> {
        l.checked_sub(1).and_then(|i| self.values.get(i))
    }

    pub fn sum(&self) -> BigUint {
        self.values.iter().sum()
    }

    /// `β_m(x)` evaluated from this row by Horner's rule.
    pub fn eval(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for v in self.values.iter().rev() {
            acc = (acc + BigRational::from_integer(BigInt::from(v.clone()))) * x;
        }
        acc
    }
}

/// `β_m(x) = Σ_{ℓ=1..m} N(m,ℓ) x^ℓ`; `β_0 = 1`.
pub fn beta_eval(m: u64, x: &BigRational) -> BigRational {
    if m == 0 {
        return BigRational::one();
    }
    NarayanaRow::new(m).expect("m >= 1").eval(x)
}

/// Floating-point `β_m(x)`. The coefficients are rounded to `f64` once, so
/// for moderate `m` the relative error stays near machine precision.
pub fn beta_eval_f64(m: u64, x: f64) -> f64 {
    if m == 0 {
        return 1.0;
    }
    let mut acc = 0.0;
    for l in (1..=m as i64).rev() {
        let n = narayana(m, l).expect("l in range");
        acc = (acc + biguint_to_f64(&n)) * x;
    }
    acc
}

pub(crate) fn biguint_to_f64(n: &BigUint) -> f64 {
    use num_traits::ToPrimitive;
    n.to_f64().unwrap_or(f64::INFINITY)
}

pub(crate) fn ratio_from(n: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio_int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact `base^exp` for a rational base.
pub(crate) fn ratio_pow(base: &BigRational, exp: u32) -> BigRational {
    num_traits::pow(base.clone(), exp as usize)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn u(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Dyck words with `m` pairs, as bit strings (1 = open).
    fn dyck_words(m: usize) -> Vec<Vec<bool>> {
        fn rec(w: &mut Vec<bool>, open: usize, close: usize, m: usize, out: &mut Vec<Vec<bool>>) {
            if close == m {
                out.push(w.clone());
                return;
            }
            if open < m {
                w.push(true);
                rec(w, open + 1, close, m, out);
                w.pop();
            }
            if close < open {
                w.push(false);
                rec(w, open, close + 1, m, out);
                w.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), 0, 0, m, &mut out);
        out
    }

    #[test]
    fn factorial_examples() {
        assert_eq!(factorial_family(5, 3, FactorialKind::Falling), u(60));
        assert_eq!(factorial_family(2, 3, FactorialKind::Rising), u(24));
        for n in 0..5 {
            assert_eq!(falling(n, 0), u(1));
            assert_eq!(rising(n, 0), u(1));
        }
        assert_eq!(falling(3, 4), u(0));
        assert_eq!(falling(3, 3), u(6));
    }

    #[test]
    fn narayana_examples() {
        assert_eq!(narayana(4, 2).unwrap(), u(6));
        assert_eq!(narayana(6, 3).unwrap(), u(50));
        for m in 1..30 {
            assert_eq!(narayana(m, 1).unwrap(), u(1));
            assert_eq!(narayana(m, 0).unwrap(), u(0));
        }
        assert_eq!(narayana(0, 0).unwrap(), u(1));
        assert!(matches!(narayana(3, 4), Err(Error::Domain(_))));
        assert!(matches!(narayana(3, -1), Err(Error::Domain(_))));
    }

    #[test]
    fn narayana_counts_peaks_of_dyck_words() {
        for m in 1..=9 {
            let mut by_peaks = vec![0u64; m + 1];
            for w in dyck_words(m) {
                let peaks = w.windows(2).filter(|p| p[0] && !p[1]).count();
                by_peaks[peaks] += 1;
            }
            for l in 1..=m {
                assert_eq!(narayana(m as u64, l as i64).unwrap(), u(by_peaks[l]), "m={m} l={l}");
            }
        }
    }

    /// The inner sum starts at `j = 0` so that the `i = 1` term,
    /// `N(0,0) N(m-1,ℓ)`, cancels the `-N(m-1,ℓ)`; with `j ≥ 1` the identity
    /// already fails at `m = 2`.
    #[test]
    fn narayana_recurrence() {
        let n = |m: u64, l: i64| -> BigInt {
            if l < 0 || l as u64 > m {
                BigInt::zero()
            } else {
                BigInt::from(narayana(m, l).unwrap())
            }
        };
        for m in 1..=12u64 {
            for l in 1..=m as i64 {
                let mut rhs = n(m - 1, l - 1) - n(m - 1, l);
                for i in 1..=m {
                    for j in 0..=((i as i64 - 1).min(l)) {
                        rhs += n(i - 1, j) * n(m - i, l - j);
                    }
                }
                assert_eq!(n(m, l), rhs, "m={m} l={l}");
            }
        }
    }

    #[test]
    fn rows_sum_to_catalan() {
        for m in 1..=20 {
            let row = NarayanaRow::new(m).unwrap();
            assert_eq!(row.sum(), catalan(m));
            assert!(row.values().iter().all(|v| !v.is_zero()));
        }
        assert_eq!(catalan(3), u(5));
        assert_eq!(dyck_words(3).len(), 5);
    }

    #[test]
    fn beta_examples() {
        for (n, d) in [(1, 3), (2, 1), (7, 5)] {
            assert_eq!(beta_eval(1, &q(n, d)), q(n, d));
        }
        // Row sum equals the number of bracketings of 3 pairs.
        assert_eq!(beta_eval(3, &q(1, 1)), q(dyck_words(3).len() as i64, 1));
        // N(2,1)·2 + N(2,2)·4
        assert_eq!(beta_eval(2, &q(2, 1)), q(6, 1));
        assert_eq!(beta_eval(0, &q(5, 1)), q(1, 1));
    }

    #[test]
    fn beta_envelope_exact_at_square_rationals() {
        // x = r², so √x = r is rational and the envelope is exact.
        for r in [q(1, 2), q(1, 1), q(2, 1), q(3, 1)] {
            let x = &r * &r;
            let one_plus = q(1, 1) + &r;
            for m in 1..=50u32 {
                let beta = beta_eval(m as u64, &x);
                let upper = ratio_pow(&one_plus, 2 * m);
                let lower = &x * &upper / (ratio_int(2 * (m as u64).pow(2)) * ratio_pow(&one_plus, 3));
                assert!(lower <= beta, "lower fails m={m} x={x}");
                assert!(beta <= upper, "upper fails m={m} x={x}");
            }
        }
    }

    #[test]
    fn beta_envelope_float_at_other_points() {
        for x in [0.1f64, 0.5, 2.0, 3.7] {
            let s = 1.0 + x.sqrt();
            for m in 1..=50u64 {
                let b = beta_eval_f64(m, x);
                let upper = s.powi(2 * m as i32);
                let lower = x * upper / (2.0 * (m * m) as f64 * s.powi(3));
                assert!(lower <= b * (1.0 + 1e-12), "m={m} x={x}");
                assert!(b <= upper * (1.0 + 1e-12), "m={m} x={x}");
            }
        }
    }

    #[test]
    fn generating_function_identity_through_order_12() {
        // F = 1 + x y F + y (F² − F), coefficient by coefficient.
        for x in [q(1, 4), q(1, 1), q(3, 2), q(9, 1)] {
            let f: Vec<BigRational> = (0..=12).map(|m| beta_eval(m, &x)).collect();
            for mm in 1..=12usize {
                let mut rhs = &x * &f[mm - 1] - &f[mm - 1];
                for i in 0..mm {
                    rhs += &f[i] * &f[mm - 1 - i];
                }
                assert_eq!(f[mm], rhs, "order {mm}");
            }
        }
    }

    #[test]
    fn bell_numbers() {
        let expected = [1u64, 1, 2, 5, 15, 52, 203, 877, 4140, 21147, 115975];
        for (m, b) in expected.iter().enumerate() {
            assert_eq!(bell(m), u(*b));
        }
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 3), u(120));
        assert_eq!(binomial(3, 5), u(0));
        assert_eq!(binomial(40, 20), u(137846528820));
    }
}
