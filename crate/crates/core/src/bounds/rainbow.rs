//! The rainbow-diagram generating functions.
//!
//! Starting from `G_s = G_d = 1`,
//!
//! ```text
//! G_s ← 1 + z⁻¹ x G_d G_s
//! G_d ← 1 + z⁻¹ G_s G_d
//! ```
//!
//! For `z ≥ z₀ = (1 + √x)²` the iterates increase to the fixed point
//!
//! ```text
//! G_s = [z⁻¹(1−x) + 1 − √((z⁻¹(1−x) + 1)² − 4z⁻¹)] / (2z⁻¹)
//! ```
//!
//! which is the Narayana generating function `Σ_m β_m(x) z^{-m}`. At `z = z₀`
//! the square root vanishes and `G_s = 1 + √x`; convergence there is only
//! `O(1/a)`.
//!
//! ```
//! use randtensor::bounds::{critical_z, rainbow_gf};
//!
//! let r = rainbow_gf(0.25, 2.0 * critical_z(0.25), 200).unwrap();
//! assert!((r.state.g_s - r.closed_form).abs() < 1e-9);
//! ```

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GfState {
    pub x: f64,
    pub z: f64,
    pub z0: f64,
    /// Number of iterations applied.
    pub a: usize,
    pub g_s: f64,
    pub g_d: f64,
}

pub fn critical_z(x: f64) -> f64 {
    (1.0 + x.sqrt()).powi(2)
}

/// Iterator over `G^{(0)}, G^{(1)}, …`.
#[derive(Clone, Debug)]
pub struct RainbowIter {
    state: GfState,
}

impl RainbowIter {
    pub fn new(x: f64, z: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(format!("need x > 0, got {x}")));
        }
        let z0 = critical_z(x);
        // Allow z₀ computed through a different rounding path.
        if !(z >= z0 * (1.0 - 4.0 * f64::EPSILON)) {
            return Err(Error::domain(format!("z = {z} is below the critical point z0 = {z0}")));
        }
        Ok(RainbowIter {
            state: GfState {
                x,
                z,
                z0,
                a: 0,
                g_s: 1.0,
                g_d: 1.0,
            },
        })
    }
}

impl Iterator for RainbowIter {
    type Item = GfState;

    fn next(&mut self) -> Option<GfState> {
        let cur = self.state;
        let prod = cur.g_s * cur.g_d / cur.z;
        self.state.g_s = 1.0 + cur.x * prod;
        self.state.g_d = 1.0 + prod;
        self.state.a += 1;
        Some(cur)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RainbowResult {
    pub state: GfState,
    pub closed_form: f64,
}

/// Runs `iters` iterations and reports the closed-form fixed point alongside.
pub fn rainbow_gf(x: f64, z: f64, iters: usize) -> Result<RainbowResult> {
    let state = RainbowIter::new(x, z)?.nth(iters).expect("iterator is infinite");
    Ok(RainbowResult {
        state,
        closed_form: rainbow_closed_form(x, z)?,
    })
}

/// Minus-branch fixed point for `G_s`.
pub fn rainbow_closed_form(x: f64, z: f64) -> Result<f64> {
    let z0 = critical_z(x);
    if !(x > 0.0) || !(z >= z0 * (1.0 - 4.0 * f64::EPSILON)) {
        return Err(Error::domain(format!("closed form needs x > 0 and z >= z0 = {z0}, got x={x}, z={z}")));
    }
    let y = 1.0 / z;
    let b = y * (1.0 - x) + 1.0;
    // Rounding can push the discriminant just below zero at z₀.
    let disc = (b * b - 4.0 * y).max(0.0);
    Ok((b - disc.sqrt()) / (2.0 * y))
}

/// `F(x, y) = [1 + (1−x)y − √(1 − 2(1+x)y + (1−x)²y²)] / (2y) = Σ_m β_m(x) y^m`.
pub fn narayana_gf(x: f64, y: f64) -> f64 {
    let disc = (1.0 - 2.0 * (1.0 + x) * y + (1.0 - x).powi(2) * y * y).max(0.0);
    (1.0 + (1.0 - x) * y - disc.sqrt()) / (2.0 * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::beta_eval_f64;

    #[test]
    fn starts_at_one() {
        let s = RainbowIter::new(0.7, 10.0).unwrap().next().unwrap();
        assert_eq!((s.a, s.g_s, s.g_d), (0, 1.0, 1.0));
    }

    #[test]
    fn critical_value_is_one_plus_sqrt_x() {
        assert_eq!(rainbow_closed_form(1.0, 4.0).unwrap(), 2.0);
        assert!((rainbow_closed_form(0.25, 2.25).unwrap() - 1.5).abs() < 1e-12);
        assert!((rainbow_closed_form(4.0, 9.0).unwrap() - 3.0).abs() < 1e-6);
    }

    #[test]
    fn below_critical_is_rejected() {
        assert!(rainbow_gf(1.0, 3.9, 10).is_err());
        assert!(rainbow_gf(-1.0, 3.9, 10).is_err());
    }

    #[test]
    fn monotone_and_bounded_at_critical_point() {
        for x in [0.25, 1.0, 4.0] {
            let cap = 1.0 + f64::sqrt(x);
            let mut prev = 0.0;
            for s in RainbowIter::new(x, critical_z(x)).unwrap().take(100_001) {
                assert!(s.g_s >= prev);
                assert!(s.g_s <= cap + 1e-12);
                prev = s.g_s;
            }
            assert!(cap - prev < 1e-3);
        }
    }

    #[test]
    fn converges_fast_away_from_critical_point() {
        let x = 0.25;
        let z = 2.0 * critical_z(x);
        let cf = rainbow_closed_form(x, z).unwrap();
        let hit = RainbowIter::new(x, z).unwrap().take(201).position(|s| (s.g_s - cf).abs() <= 1e-9);
        assert!(hit.is_some());
    }

    #[test]
    fn matches_series() {
        for (x, z) in [(0.25, 6.0), (1.0, 9.0), (3.0, 20.0)] {
            let y: f64 = 1.0 / z;
            let series: f64 = (0..200).map(|m| beta_eval_f64(m, x) * y.powi(m as i32)).sum();
            assert!((narayana_gf(x, y) - series).abs() < 1e-10);
            assert!((rainbow_closed_form(x, z).unwrap() - narayana_gf(x, y)).abs() < 1e-12);
        }
    }
}
