//! `(1 − m²/p) β_m(x) ≤ e^m ≤ exp(3 m^{k+4} / (x d^{1/k})) β_m(x)`.
//!
//! The lower bound is only claimed for `m² < p` and is reported as zero
//! otherwise. The upper bound's exponent is large for small `d`, so it is kept
//! in log space as well.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::combinatorics::{beta_eval, ratio_int, ratio_pow};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct TheoremBounds {
    /// Exact `(1 − m²/p) β_m(x)`, or zero when `m² ≥ p`.
    pub lower_exact: BigRational,
    pub lower: f64,
    /// May be `inf`.
    pub upper: f64,
    /// Natural log of `upper`.
    pub ln_upper: f64,
}

impl TheoremBounds {
    /// Whether `lower − slack ≤ e ≤ upper + slack`.
    pub fn contains(&self, e: &BigRational, slack: f64) -> bool {
        let ef = e.to_f64().unwrap_or(f64::INFINITY);
        let lower_ok = self.lower_exact.is_zero() || ef >= self.lower - slack;
        let upper_ok = !self.ln_upper.is_finite() || ef.ln() <= self.ln_upper || ef <= self.upper + slack;
        lower_ok && upper_ok
    }
}

pub fn trace_theorem_bounds(p: u64, d: u64, k: u32, m: usize) -> Result<TheoremBounds> {
    if p == 0 || d < 2 || k == 0 || m == 0 {
        return Err(Error::domain(format!("need p, k, m >= 1 and d >= 2, got p={p}, d={d}, k={k}, m={m}")));
    }
    let x = ratio_int(p) / ratio_pow(&ratio_int(d), k);
    let beta = beta_eval(m as u64, &x);
    let m2 = (m as u64).pow(2);
    let lower_exact = if m2 < p {
        (ratio_int(1) - BigRational::new(m2.into(), p.into())) * &beta
    } else {
        BigRational::zero()
    };
    let xf = x.to_f64().unwrap();
    let exponent = 3.0 * (m as f64).powi(k as i32 + 4) / (xf * (d as f64).powf(1.0 / k as f64));
    let beta_f = beta.to_f64().unwrap();
    let ln_upper = exponent + beta_f.ln();
    Ok(TheoremBounds {
        lower: lower_exact.to_f64().unwrap(),
        lower_exact,
        upper: ln_upper.exp(),
        ln_upper,
    })
}
