//! Letter-elimination recursions for `e^m`.
//!
//! For `k = 1`,
//!
//! ```text
//! upper[m] = Σ_{l=0}^{m-2} upper[l] upper[m-l-1] + ((p + m³)/d) upper[m-1]
//! lower_p[m] = d/(d+m) · ( Σ_{l=0}^{m-2} lower_p[l] lower_{p-m}[m-l-1] + (p/d) lower_{p-1}[m-1] )
//! ```
//!
//! The lower recursion needs moments at fewer letters. It uses `p − m`, the
//! most letters one elimination step can remove; since `e^m` is nondecreasing
//! in `p` this keeps it a valid lower bound. Letter counts below zero are
//! treated as zero, where every moment but `e^0` vanishes.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::combinatorics::{ratio_int, ratio_pow};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSeries {
    /// `entries[m] = (lower, upper)`.
    entries: Vec<(BigRational, BigRational)>,
}

impl BoundSeries {
    pub fn entries(&self) -> &[(BigRational, BigRational)] {
        &self.entries
    }

    pub fn lower(&self, m: usize) -> &BigRational {
        &self.entries[m].0
    }

    pub fn upper(&self, m: usize) -> &BigRational {
        &self.entries[m].1
    }

    pub fn max_m(&self) -> usize {
        self.entries.len() - 1
    }
}

fn convolve(series: &[BigRational], m: usize) -> BigRational {
    (0..m.saturating_sub(1)).fold(BigRational::zero(), |acc, l| acc + &series[l] * &series[m - l - 1])
}

/// Lower and upper recursion for `k = 1`.
pub fn sd_bounds_k1(p: u64, d: u64, max_m: usize) -> Result<BoundSeries> {
    if d < 2 || p == 0 {
        return Err(Error::domain(format!("need p >= 1 and d >= 2, got p={p}, d={d}")));
    }
    let dq = ratio_int(d);
    let mut upper = vec![BigRational::one()];
    for m in 1..=max_m {
        let coeff = ratio_int(p + (m as u64).pow(3)) / &dq;
        let next = convolve(&upper, m) + coeff * &upper[m - 1];
        upper.push(next);
    }

    let mut lower = LowerTable { d, memo: HashMap::new() };
    let entries = upper
        .into_iter()
        .enumerate()
        .map(|(m, up)| (lower.get(p as i64, m), up))
        .collect();
    Ok(BoundSeries { entries })
}

struct LowerTable {
    d: u64,
    memo: HashMap<(u64, usize), BigRational>,
}

impl LowerTable {
    fn get(&mut self, q: i64, m: usize) -> BigRational {
        let q = q.max(0) as u64;
        if m == 0 {
            return BigRational::one();
        }
        if q == 0 {
            return BigRational::zero();
        }
        if let Some(v) = self.memo.get(&(q, m)) {
            return v.clone();
        }
        let mut sum = BigRational::zero();
        for l in 0..m - 1 {
            let a = self.get(q as i64, l);
            if a.is_zero() {
                continue;
            }
            sum += a * self.get(q as i64 - m as i64, m - l - 1);
        }
        sum += BigRational::new(q.into(), self.d.into()) * self.get(q as i64 - 1, m - 1);
        let v = BigRational::new(self.d.into(), (self.d + m as u64).into()) * sum;
        self.memo.insert((q, m), v.clone());
        v
    }
}

/// Rational `r` with `r ≤ d^{1/k}`, within about `2^-40` of it.
pub(crate) fn root_lower_bound(d: u64, k: u32) -> BigRational {
    let scale: u64 = 1 << 40;
    let approx = (d as f64).powf(1.0 / k as f64);
    let mut num = (approx * scale as f64).floor() as u64;
    let dq = ratio_int(d);
    loop {
        let r = BigRational::new(num.into(), scale.into());
        if ratio_pow(&r, k) <= dq {
            return r;
        }
        num -= 1;
    }
}

/// Upper recursion for general `k`:
///
/// ```text
/// upper[m] = (1 + m^k / d^{1/k}) Σ_{l=0}^{m-2} upper[l] upper[m-l-1]
///          + (p/d^k + 3 m^{k+3} / d^{1/k}) upper[m-1]
/// ```
///
/// `d^{1/k}` is replaced by a rational lower bound, so the result is still an
/// upper bound. Lower entries are zero.
pub fn sd_upper_tensor(p: u64, d: u64, k: u32, max_m: usize) -> Result<BoundSeries> {
    if d < 2 || p == 0 || k == 0 {
        return Err(Error::domain(format!("need p, k >= 1 and d >= 2, got p={p}, d={d}, k={k}")));
    }
    let r = root_lower_bound(d, k);
    let x = ratio_int(p) / ratio_pow(&ratio_int(d), k);
    let mut upper = vec![BigRational::one()];
    for m in 1..=max_m {
        let mm = m as u64;
        let conv_coeff = BigRational::one() + ratio_int(mm.pow(k)) / &r;
        let lin_coeff = &x + ratio_int(3 * mm.pow(k + 3)) / &r;
        let next = conv_coeff * convolve(&upper, m) + lin_coeff * &upper[m - 1];
        upper.push(next);
    }
    Ok(BoundSeries {
        entries: upper.into_iter().map(|u| (BigRational::zero(), u)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn first_entries() {
        for (p, d) in [(3u64, 2u64), (5, 4), (1, 7)] {
            let s = sd_bounds_k1(p, d, 3).unwrap();
            assert_eq!(s.entries()[0], (q(1, 1), q(1, 1)));
            assert_eq!(*s.upper(1), q(p as i64 + 1, d as i64));
            assert!(s.lower(1) <= &q(p as i64, d as i64));
            assert!(&q(p as i64, d as i64) <= s.upper(1));
            for m in 0..=3 {
                assert!(s.lower(m) <= s.upper(m));
            }
        }
    }

    #[test]
    fn lower_first_step() {
        // lower_p[1] = d/(d+1) · p/d
        let s = sd_bounds_k1(3, 2, 1).unwrap();
        assert_eq!(*s.lower(1), q(1, 1));
    }

    #[test]
    fn tensor_dominates_k1() {
        for (p, d) in [(2u64, 2u64), (6, 3), (4, 4)] {
            let a = sd_bounds_k1(p, d, 6).unwrap();
            let b = sd_upper_tensor(p, d, 1, 6).unwrap();
            for m in 0..=6 {
                assert!(b.upper(m) >= a.upper(m));
                assert!(b.lower(m).is_zero());
            }
        }
    }

    #[test]
    fn root_bound_is_below_and_close() {
        for (d, k) in [(2u64, 1u32), (2, 2), (3, 3), (30, 2), (64, 3)] {
            let r = root_lower_bound(d, k);
            assert!(ratio_pow(&r, k) <= ratio_int(d));
            let f: f64 = num_traits::ToPrimitive::to_f64(&r).unwrap();
            assert!(((d as f64).powf(1.0 / k as f64) - f).abs() < 1e-9);
        }
        assert_eq!(root_lower_bound(16, 2), q(4, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert!(sd_bounds_k1(3, 1, 2).is_err());
        assert!(sd_upper_tensor(3, 2, 0, 2).is_err());
    }
}
