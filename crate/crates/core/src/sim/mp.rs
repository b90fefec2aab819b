//! The Marčenko–Pastur law with ratio `x = p / D`.
//!
//! The density here describes the `min(p, D)` nonzero eigenvalues:
//!
//! ```text
//! ρ(λ) = √((λ₊ − λ)(λ − λ₋)) / (2π · min(x, 1) · λ),   λ± = (1 ± √x)²
//! ```
//!
//! For `x ≤ 1` this is the usual form. For `x > 1` every eigenvalue is nonzero
//! and the `min` keeps `∫ρ = 1`. Moments are reported per matrix dimension,
//! `mp_moment(x, m) = min(x, 1) ∫ λ^m ρ`, which equals `β_m(x)`.
//!
//! Integrals use `λ = λ₋ + 4√x sin²(θ/2)`, which turns the square-root edges
//! into a smooth integrand on `[0, π]`. It equals `1 + x − 2√x cos θ` but does
//! not cancel near `θ = 0`.

use std::f64::consts::PI;
use std::sync::OnceLock;

use rand::Rng;

use crate::{Error, Result};

/// Absolute tolerance requested from the quadrature.
pub const QUAD_TOLERANCE: f64 = 1e-12;
/// Number of grid intervals for the cached CDF.
pub const CDF_GRID: usize = 10_000;

#[derive(Debug)]
pub struct MpLaw {
    x: f64,
    lambda_minus: f64,
    lambda_plus: f64,
    cdf: OnceLock<Vec<f64>>,
}

impl Clone for MpLaw {
    fn clone(&self) -> Self {
        MpLaw {
            x: self.x,
            lambda_minus: self.lambda_minus,
            lambda_plus: self.lambda_plus,
            cdf: self.cdf.clone(),
        }
    }
}

fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64) -> Result<f64> {
    let out = quadrature::double_exponential::integrate(f, a, b, QUAD_TOLERANCE);
    if !out.integral.is_finite() || out.error_estimate > 1e3 * QUAD_TOLERANCE {
        return Err(Error::Numeric(format!(
            "quadrature on [{a}, {b}] did not converge (estimate {}, error {:e})",
            out.integral, out.error_estimate
        )));
    }
    Ok(out.integral)
}

impl MpLaw {
    pub fn new(x: f64) -> Result<Self> {
        if !(x > 0.0 && x.is_finite()) {
            return Err(Error::domain(format!("need x > 0, got {x}")));
        }
        let s = x.sqrt();
        Ok(MpLaw {
            x,
            lambda_minus: (1.0 - s).powi(2),
            lambda_plus: (1.0 + s).powi(2),
            cdf: OnceLock::new(),
        })
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn lambda_minus(&self) -> f64 {
        self.lambda_minus
    }

    pub fn lambda_plus(&self) -> f64 {
        self.lambda_plus
    }

    fn centre_radius(&self) -> (f64, f64) {
        (1.0 + self.x, 2.0 * self.x.sqrt())
    }

    pub fn density(&self, lambda: f64) -> f64 {
        if lambda <= self.lambda_minus || lambda >= self.lambda_plus || lambda <= 0.0 {
            return 0.0;
        }
        ((self.lambda_plus - lambda) * (lambda - self.lambda_minus)).sqrt() / (2.0 * PI * self.x.min(1.0) * lambda)
    }

    /// `λ(θ) = c − r cos θ`, written so it stays accurate near `λ₋`.
    fn lambda_at(&self, theta: f64) -> f64 {
        let (_, r) = self.centre_radius();
        let h = (theta / 2.0).sin();
        self.lambda_minus + 2.0 * r * h * h
    }

    /// `ρ(λ(θ)) dλ/dθ`.
    fn density_theta(&self, theta: f64) -> f64 {
        let (_, r) = self.centre_radius();
        let lambda = self.lambda_at(theta);
        if lambda <= 0.0 {
            // Only at θ = 0 when x = 1, where the limit is finite.
            return r * r / (2.0 * PI * self.x.min(1.0));
        }
        let s = theta.sin();
        r * r * s * s / (2.0 * PI * self.x.min(1.0) * lambda)
    }

    /// `∫ρ`, which should be 1.
    pub fn total_mass(&self) -> Result<f64> {
        integrate(|t| self.density_theta(t), 0.0, PI)
    }

    /// `min(x, 1) ∫ λ^m ρ(λ) dλ`.
    pub fn moment(&self, m: u32) -> Result<f64> {
        if m == 0 {
            return Ok(1.0);
        }
        let (_, r) = self.centre_radius();
        // λ^m ρ dλ/dθ = λ^{m-1} r² sin²θ / (2π min(x,1)).
        let integral = integrate(
            |t| {
                let s = t.sin();
                self.lambda_at(t).powi(m as i32 - 1) * s * s
            },
            0.0,
            PI,
        )?;
        Ok(r * r * integral / (2.0 * PI))
    }

    /// CDF values at `θ_i = π i / CDF_GRID`, built once.
    fn cdf_table(&self) -> &[f64] {
        self.cdf.get_or_init(|| {
            let h = PI / CDF_GRID as f64;
            let mut acc = 0.0;
            let mut out = Vec::with_capacity(CDF_GRID + 1);
            out.push(0.0);
            for i in 0..CDF_GRID {
                // Each cell is tiny and the integrand smooth; a fixed
                // Gauss–Legendre rule is exact to rounding here.
                acc += gauss5(|t| self.density_theta(t), i as f64 * h, (i + 1) as f64 * h);
                out.push(acc);
            }
            let total = *out.last().unwrap();
            for v in &mut out {
                *v /= total;
            }
            out
        })
    }

    fn theta_of(&self, lambda: f64) -> f64 {
        let (_, r) = self.centre_radius();
        let h = ((lambda - self.lambda_minus) / (2.0 * r)).clamp(0.0, 1.0);
        2.0 * h.sqrt().asin()
    }

    /// Probability of an eigenvalue at most `λ`, among nonzero eigenvalues.
    pub fn cdf(&self, lambda: f64) -> f64 {
        if lambda <= self.lambda_minus {
            return 0.0;
        }
        if lambda >= self.lambda_plus {
            return 1.0;
        }
        let table = self.cdf_table();
        let pos = self.theta_of(lambda) / PI * CDF_GRID as f64;
        let i = (pos.floor() as usize).min(CDF_GRID - 1);
        let frac = pos - i as f64;
        table[i] + frac * (table[i + 1] - table[i])
    }

    /// Inverse-CDF draw.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = rng.random();
        let table = self.cdf_table();
        let i = table.partition_point(|&v| v < u).clamp(1, CDF_GRID);
        let (lo, hi) = (table[i - 1], table[i]);
        let frac = if hi > lo { (u - lo) / (hi - lo) } else { 0.0 };
        self.lambda_at((i as f64 - 1.0 + frac) * PI / CDF_GRID as f64)
    }
}

/// Five-point Gauss–Legendre rule on `[a, b]`.
fn gauss5(f: impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    const NODES: [f64; 5] = [0.0, 0.538_469_310_105_683_1, -0.538_469_310_105_683_1, 0.906_179_845_938_664, -0.906_179_845_938_664];
    const WEIGHTS: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let (mid, half) = ((a + b) / 2.0, (b - a) / 2.0);
    half * NODES.iter().zip(WEIGHTS).map(|(n, w)| w * f(mid + half * n)).sum::<f64>()
}

pub fn mp_density(x: f64, lambda: f64) -> Result<f64> {
    Ok(MpLaw::new(x)?.density(lambda))
}

pub fn mp_moment(x: f64, m: u32) -> Result<f64> {
    MpLaw::new(x)?.moment(m)
}
