//! Verification engine for the multivariate Clausen identity.
//!
//! The crate evaluates Gauss and Appell hypergeometric functions, the
//! Pfaffian systems they satisfy, periods of superelliptic curves, and checks
//! the fibration identities of the associated generalized Kummer surfaces in
//! exact rational arithmetic.

pub mod error;
pub mod hypergeometric;
pub mod identities;
pub mod kummer;
pub mod numerics;
pub mod pfaffian;
pub mod ratfunc;
pub mod superelliptic;

pub mod cli;

pub use error::{Error, Result};
pub use num_complex::Complex64;
