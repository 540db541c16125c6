//! Exact verification of rational maps between curves `y^n = Π f_i^{e_i}`.
//!
//! A map is given by substitutions for the target coordinates and by
//! `y = Π b_j^{m_j/d_j} · η` where `η` is the source fiber coordinate. Both
//! sides are raised to the n-th power, the source equation is inserted for
//! `η^n`, and the difference is reduced over `Q(vars)`.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cpow, re, C64};
use crate::ratfunc::{Expr, FactorCtx};

/// Right-hand side `Π base^exp` of a curve equation `y^power = …`.
#[derive(Debug, Clone)]
pub struct CurveEq {
    pub power: i64,
    pub factors: Vec<(Expr, i64)>,
}

impl CurveEq {
    pub fn new(power: i64, factors: Vec<(Expr, i64)>) -> Self {
        CurveEq { power, factors }
    }

    pub fn rhs(&self) -> Expr {
        Expr::product(self.factors.iter().map(|(b, e)| b.pow(*e)).collect())
    }
}

/// `base^{num/den}` with rational exponent.
#[derive(Debug, Clone)]
pub struct FracPow {
    pub base: Expr,
    pub num: i64,
    pub den: i64,
}

impl FracPow {
    pub fn new(base: Expr, num: i64, den: i64) -> Self {
        FracPow { base, num, den }
    }

    pub fn int(base: Expr, e: i64) -> Self {
        FracPow {
            base,
            num: e,
            den: 1,
        }
    }
}

#[derive(Debug, Clone)]
pub struct CurveMap {
    pub name: String,
    pub vars: Vec<String>,
    pub source: CurveEq,
    pub target: CurveEq,
    pub subs: HashMap<String, Expr>,
    pub y_factors: Vec<FracPow>,
    pub seeds: Vec<Expr>,
    pub sample: Vec<(String, C64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapCertificate {
    pub name: String,
    pub passed: bool,
    pub leading_term: Option<String>,
    /// sheet `k` with `y = ρ^k (target)^{1/n}` at the sample point
    pub sheet: Option<usize>,
    pub branch_residual: f64,
}

impl CurveMap {
    fn y_power(&self) -> Result<Expr> {
        let n = self.target.power;
        let mut items = Vec::with_capacity(self.y_factors.len());
        for f in &self.y_factors {
            if (n * f.num) % f.den != 0 {
                return Err(Error::InvalidArgument(format!(
                    "{}: exponent {}/{} times {n} is not an integer",
                    self.name, f.num, f.den
                )));
            }
            items.push(f.base.pow(n * f.num / f.den));
        }
        Ok(Expr::product(items))
    }

    /// Exact check that the source equation implies the target equation.
    pub fn verify(&self) -> Result<MapCertificate> {
        if self.source.power != self.target.power {
            return Err(Error::InvalidArgument(format!(
                "{}: curve degrees differ",
                self.name
            )));
        }
        let lhs = &self.y_power()? * &self.source.rhs();
        let rhs = self.target.rhs().substitute(&self.subs);
        let vars: Vec<&str> = self.vars.iter().map(|s| s.as_str()).collect();
        let mut ctx = FactorCtx::new(&vars);
        for s in &self.seeds {
            ctx.seed(s)?;
        }
        let outcome = ctx.difference(&lhs, &rhs)?;
        let (sheet, branch_residual) = self.branch_check()?;
        Ok(MapCertificate {
            name: self.name.clone(),
            passed: outcome.is_ok(),
            leading_term: outcome.err(),
            sheet,
            branch_residual,
        })
    }

    /// Numeric spot check on principal branches: `y` computed through the
    /// map agrees with one of the n-th roots of the target right-hand side.
    fn branch_check(&self) -> Result<(Option<usize>, f64)> {
        let env: HashMap<String, C64> = self.sample.iter().cloned().collect();
        let n = self.target.power;
        let s = self.source.rhs().eval_complex(&env)?;
        let eta = cpow(s, re(1.0 / n as f64));
        let mut y = eta;
        for f in &self.y_factors {
            y *= cpow(f.base.eval_complex(&env)?, re(f.num as f64 / f.den as f64));
        }
        let t = self
            .target
            .rhs()
            .substitute(&self.subs)
            .eval_complex(&env)?;
        let root = cpow(t, re(1.0 / n as f64));
        let rho = C64::from_polar(1.0, 2.0 * std::f64::consts::PI / n as f64);
        let mut best = (None, f64::INFINITY);
        let mut w = root;
        for k in 0..n as usize {
            let d = (y - w).norm() / y.norm().max(1e-300);
            if d < best.1 {
                best = (Some(k), d);
            }
            w *= rho;
        }
        Ok(best)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn legendre_scaling() {
        // y² = x(x−1)(x−λ) under x = λ X, y = λ^{3/2} Y from
        // Y² = X(X − 1/λ)(X − 1)
        let (xv, l) = (Expr::var("X"), Expr::var("l"));
        let src = CurveEq::new(2, vec![(xv.clone(), 1), (&xv - &l.inv(), 1), (&xv - 1, 1)]);
        let x = Expr::var("x");
        let tgt = CurveEq::new(2, vec![(x.clone(), 1), (&x - 1, 1), (&x - &l, 1)]);
        let mut m = CurveMap {
            name: "scale".into(),
            vars: vec!["X".into(), "l".into()],
            source: src,
            target: tgt,
            subs: [("x".to_string(), &l * &xv)].into_iter().collect(),
            y_factors: vec![FracPow::new(l.clone(), 3, 2)],
            seeds: vec![],
            sample: vec![("X".into(), c(0.3, 0.2)), ("l".into(), re(0.4))],
        };
        let cert = m.verify().unwrap();
        assert!(cert.passed && cert.branch_residual < 1e-12);
        m.y_factors = vec![FracPow::new(l, 1, 2)];
        let cert = m.verify().unwrap();
        assert!(!cert.passed && cert.leading_term.is_some());
    }
}
