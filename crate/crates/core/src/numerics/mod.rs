//! Numeric kernel: principal complex powers, complex Gamma, endpoint-singular
//! quadrature and path transport of linear systems.

mod gamma;
mod ode;
mod quad;

pub use gamma::{gamma, ln_gamma_stirling};
pub use ode::{ode_integrate, AffineLocus, PathSpec};
pub use quad::{integrate_singular, integrate_weighted01, QuadratureSpec};

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::ops::{Add, Div, Mul, Neg, Sub};

pub type C64 = Complex64;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Principal power `z^a = exp(a Log z)`, cut on the negative real axis.
/// `0^a` is 1 for `a = 0`, 0 for `Re a > 0` and infinite otherwise.
pub fn cpow(z: C64, a: C64) -> C64 {
    if z == C64::new(0.0, 0.0) {
        if a == C64::new(0.0, 0.0) {
            return re(1.0);
        }
        return if a.re > 0.0 {
            re(0.0)
        } else {
            re(f64::INFINITY)
        };
    }
    (a * z.ln()).exp()
}

pub fn cpowf(z: C64, a: f64) -> C64 {
    cpow(z, re(a))
}

pub fn is_finite(z: C64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Pass a value through, or signal a non-finite result.
pub fn finite(z: C64, what: &str) -> Result<C64> {
    if is_finite(z) {
        Ok(z)
    } else {
        Err(Error::NonFinite(what.to_string()))
    }
}

/// Distance from `z` to the nearest non-positive integer, or infinity when
/// `Re z > 0.5`.
pub fn dist_to_nonpositive_integer(z: C64) -> f64 {
    if z.re > 0.5 {
        return f64::INFINITY;
    }
    let n = z.re.round().min(0.0);
    (z - re(n)).norm()
}

/// Relative distance `|a - b| / max(|b|, tiny)`.
pub fn rel_diff(a: C64, b: C64) -> f64 {
    let d = (a - b).norm();
    let s = b.norm();
    if s > 0.0 {
        d / s
    } else {
        d
    }
}

/// Arithmetic shared by the numeric scalar and the exact expression type, so
/// that a formula written once serves both kinds of check.
pub trait Scalar:
    Clone
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;
    fn powi(&self, n: i64) -> Self;
    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n) / Self::from_i64(d)
    }
}

impl Scalar for C64 {
    fn from_i64(n: i64) -> Self {
        re(n as f64)
    }
    fn powi(&self, n: i64) -> Self {
        Complex64::powi(self, n as i32)
    }
}
