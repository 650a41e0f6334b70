//! Rigorous real and complex ball arithmetic.
//!
//! Every value is a midpoint-radius enclosure: the exact quantity is
//! guaranteed to lie within `rad` of `mid`. Midpoints are exact dyadic
//! numbers; radii are rounded upward.

mod bessel;
mod complex;
mod consts;
pub mod decimal;
mod dyadic;
mod mag;
pub mod matrix;
mod real;
mod trig;

pub use bessel::bessel_j_half;
pub use complex::BallComplex;
pub use consts::{gamma_half, pi, sqrt_pi};
pub use dyadic::Dyadic;
pub use mag::Mag;
pub use real::BallReal;
pub use trig::{e_frac, exp_two_pi_i, exp_two_pi_i_rational, sin_cos};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RigorError {
    #[error("divisor ball contains zero")]
    DivisorContainsZero,
    #[error("square root of a ball with negative part")]
    SqrtOfNegative,
    #[error("series tail bound did not become small enough")]
    NonConvergentTail,
}

/// Working precision (bits) sufficient for a target absolute error `eps`.
pub fn default_precision(eps: f64) -> u32 {
    let t = if eps > 0.0 { -eps.log10() } else { 30.0 };
    (3.4 * t.max(1.0)).ceil() as u32 + 64
}
