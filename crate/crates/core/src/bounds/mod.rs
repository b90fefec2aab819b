//! Bounds on the normalized moments `e^m = E^m / d^k`.
//!
//! * [`schwinger_dyson`]: recursions obtained by removing one letter at a
//!   time from the trace word.
//! * [`theorem`]: the closed sandwich `(1 − m²/p) β_m(x) ≤ e^m ≤
//!   exp(3m^{k+4} / (x d^{1/k})) β_m(x)`.
//! * [`rainbow`]: the generating-function iteration whose fixed point is the
//!   Narayana generating function.

pub mod rainbow;
pub mod schwinger_dyson;
pub mod theorem;

pub use rainbow::{critical_z, narayana_gf, rainbow_closed_form, rainbow_gf, GfState, RainbowIter, RainbowResult};
pub use schwinger_dyson::{sd_bounds_k1, sd_upper_tensor, BoundSeries};
pub use theorem::{trace_theorem_bounds, TheoremBounds};
