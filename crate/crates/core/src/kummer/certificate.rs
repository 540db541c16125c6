use serde::Serialize;

use crate::error::{Error, Result};
use crate::ratfunc::{Expr, FactorCtx};
use crate::superelliptic::curvemap::CurveMap;

/// Branch spot-check threshold.
pub const BRANCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TwoFormCheck {
    /// expected `det ∂(target)/∂(source) · η/y`
    pub factor: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KummerCertificate {
    pub id: String,
    pub sig: Option<String>,
    pub passed: bool,
    /// canonical form of the reduced difference: `0` on success, otherwise
    /// its leading term
    pub polynomial: String,
    pub sheet: Option<usize>,
    pub branch_residual: f64,
    pub two_form: Option<TwoFormCheck>,
    pub notes: Vec<String>,
    pub timestamp: u64,
}

/// Seconds since the epoch, from `SOURCE_DATE_EPOCH` when set so that
/// certificate files are reproducible; 0 otherwise.
pub fn certificate_timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(0)
}

impl KummerCertificate {
    pub fn into_result(self) -> Result<KummerCertificate> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::VerificationFailed {
                id: self.id.clone(),
                leading_term: self.polynomial.clone(),
            })
        }
    }
}

/// Runs the exact and branch checks of a map without turning a failure into
/// an error.
pub fn check_map(map: &CurveMap, sig: Option<String>) -> Result<KummerCertificate> {
    let cert = map.verify()?;
    let exact = cert.passed;
    let branch_ok = cert.branch_residual <= BRANCH_TOL;
    let polynomial = match (&cert.leading_term, branch_ok) {
        (Some(t), _) => t.clone(),
        (None, true) => "0".into(),
        (None, false) => format!("branch residual {:e}", cert.branch_residual),
    };
    Ok(KummerCertificate {
        id: map.name.clone(),
        sig,
        passed: exact && branch_ok,
        polynomial,
        sheet: cert.sheet,
        branch_residual: cert.branch_residual,
        two_form: None,
        notes: Vec::new(),
        timestamp: certificate_timestamp(),
    })
}

/// `det ∂(s, t)/∂(a, b) / y_int == factor` over the map's context, where
/// `y_int` is the integral `y`-cofactor.
pub fn two_form_check(
    map: &CurveMap,
    coords: [&str; 2],
    src: [&str; 2],
    factor: &Expr,
) -> Result<TwoFormCheck> {
    let s = map
        .subs
        .get(coords[0])
        .cloned()
        .unwrap_or_else(|| Expr::var(coords[0]));
    let t = map
        .subs
        .get(coords[1])
        .cloned()
        .unwrap_or_else(|| Expr::var(coords[1]));
    let det = &(&s.differentiate(src[0]) * &t.differentiate(src[1]))
        - &(&s.differentiate(src[1]) * &t.differentiate(src[0]));
    let mut cof = Vec::new();
    for f in &map.y_factors {
        if f.num % f.den != 0 {
            return Err(Error::InvalidArgument(format!(
                "{}: fractional y-cofactor in two-form check",
                map.name
            )));
        }
        cof.push(f.base.pow(f.num / f.den));
    }
    let lhs = &det / &Expr::product(cof);
    let vars: Vec<&str> = map.vars.iter().map(|s| s.as_str()).collect();
    let mut ctx = FactorCtx::new(&vars);
    for e in &map.seeds {
        ctx.seed(e)?;
    }
    let out = ctx.difference(&lhs, factor)?;
    Ok(TwoFormCheck {
        factor: factor.to_string(),
        passed: out.is_ok(),
    })
}
