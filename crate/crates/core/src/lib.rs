//! Numerics for the K3 surfaces attached to six lines in the projective plane.
//!
//! The crate evaluates the four-variable hypergeometric series `F_S`, `F_T`,
//! the periods and normalized period matrix of a configuration, theta
//! constants on the bounded domain of type I₂₂, and two four-term mean
//! iterations whose limits are expressed through `F_S`. The [`identities`]
//! module turns each of the identities linking these objects into a
//! residual report.

pub mod agm;
pub mod configuration;
pub mod domains_groups;
pub mod error;
pub mod hypergeometric;
pub mod identities;
pub mod linalg;
pub mod periods;
pub mod quadrature;
pub mod theta;

#[cfg(test)]
mod properties;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;

/// Shorthand for a complex number from its parts.
#[inline]
pub fn c64(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// `e[x] = exp(2πi x)` for complex `x`, with the real part reduced mod 1.
pub fn e(x: C64) -> C64 {
    let frac = x.re - x.re.round();
    let modulus = (-2.0 * std::f64::consts::PI * x.im).exp();
    let phase = 2.0 * std::f64::consts::PI * frac;
    C64::new(modulus * phase.cos(), modulus * phase.sin())
}
