//! Exact multivariate polynomials and rational functions over the rationals.
//!
//! [`MultiPoly`] and [`RatFunc`] are the plain arithmetic. [`Expr`] is a
//! shared expression tree that formulas are written in, and [`FactorCtx`]
//! reduces such trees exactly while keeping products in factored form, which
//! keeps the large fibration identities tractable without a multivariate gcd.

mod expr;
mod factored;
mod poly;
#[allow(clippy::module_inception)]
mod ratfunc;

pub use expr::{Expr, Node};
pub use factored::{FactorCtx, Factored};
pub use poly::{BigQ, Mono, MultiPoly, TERM_GUARD};
pub use ratfunc::RatFunc;

/// Rational `n/d` as a [`BigQ`].
pub fn bigq(n: i64, d: i64) -> BigQ {
    BigQ::new(n.into(), d.into())
}
