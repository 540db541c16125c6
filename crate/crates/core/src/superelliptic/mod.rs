//! Superelliptic curves `y^{2r} = x^{p+q−r}(x−1)^{2r−p}(x−λ)^{2r−p}`:
//! signatures, genus, Puiseux data, periods of `dx/y` and the rational maps
//! to the Legendre-type model.

pub mod curvemap;

use num_integer::Integer;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergeometric::{eval_2f1, Hyp2F1Params};
use crate::numerics::{cpow, gamma, integrate_singular, re, QuadratureSpec, C64};
use crate::ratfunc::{BigQ, Expr, FactorCtx};
pub use curvemap::{CurveEq, CurveMap, FracPow, MapCertificate};

use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CurveSignature {
    pub r: u32,
    pub p: u32,
    pub q: u32,
}

impl std::fmt::Display for CurveSignature {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.r, self.p, self.q)
    }
}

impl CurveSignature {
    pub fn beta1(&self) -> f64 {
        self.q as f64 / (2 * self.r) as f64
    }

    pub fn beta2(&self) -> f64 {
        self.p as f64 / (2 * self.r) as f64
    }

    pub fn beta1_exact(&self) -> BigQ {
        BigQ::new(self.q.into(), (2 * self.r).into())
    }

    pub fn beta2_exact(&self) -> BigQ {
        BigQ::new(self.p.into(), (2 * self.r).into())
    }

    /// `(r, 2r−p, 2r−q)`, which satisfies the same constraints.
    pub fn dual(&self) -> CurveSignature {
        CurveSignature {
            r: self.r,
            p: 2 * self.r - self.p,
            q: 2 * self.r - self.q,
        }
    }

    pub fn ri(&self) -> (i64, i64, i64) {
        (self.r as i64, self.p as i64, self.q as i64)
    }
}

pub fn validate_signature(r: u32, p: u32, q: u32) -> Result<CurveSignature> {
    let fail = |which: &str| {
        Err(Error::ConstraintViolation {
            which: which.to_string(),
        })
    };
    if r == 0 || p == 0 || q == 0 {
        return fail("r, p, q must be positive");
    }
    let (ri, pi, qi) = (r as i64, p as i64, q as i64);
    if !(pi < 2 * ri) {
        return fail("0 < p < 2r");
    }
    if !(qi < 2 * ri) {
        return fail("0 < q < 2r");
    }
    if !(-ri < pi - qi && pi - qi < ri) {
        return fail("-r < p-q < r");
    }
    if !(ri < pi + qi && pi + qi < 3 * ri) {
        return fail("r < p+q < 3r");
    }
    let two_r = 2 * ri;
    if pi.gcd(&two_r) != 1 {
        return fail("gcd(p,2r)=1");
    }
    if (pi + qi - ri).gcd(&two_r) != 1 {
        return fail("gcd(p+q-r,2r)=1");
    }
    if (pi - qi + ri).gcd(&two_r) != 1 {
        return fail("gcd(p-q+r,2r)=1");
    }
    Ok(CurveSignature { r, p, q })
}

/// All valid signatures with `r ≤ r_max`.
pub fn all_signatures(r_max: u32) -> Vec<CurveSignature> {
    let mut out = Vec::new();
    for r in 1..=r_max {
        for p in 1..2 * r {
            for q in 1..2 * r {
                if let Ok(s) = validate_signature(r, p, q) {
                    out.push(s);
                }
            }
        }
    }
    out
}

pub fn genus(sig: &CurveSignature) -> u32 {
    2 * sig.r - 1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PuiseuxRecord {
    pub point: String,
    pub multiplicity: u32,
    pub pair: (u32, u32),
}

pub fn puiseux_table(sig: &CurveSignature) -> Vec<PuiseuxRecord> {
    let (r, p, q) = (sig.r, sig.p, sig.q);
    let rec = |point: &str, m: u32, pair: (u32, u32)| PuiseuxRecord {
        point: point.to_string(),
        multiplicity: m,
        pair,
    };
    vec![
        rec("0", p + q - r, (2 * r, p + q - r)),
        rec("1", 2 * r - p, (2 * r, 2 * r - p)),
        rec("λ", 2 * r - p, (2 * r, 2 * r - p)),
        rec("∞", r + q - p, (3 * r + q - p, r + q - p)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Cycle {
    A,
    B,
}

impl std::str::FromStr for Cycle {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Cycle::A),
            "B" | "b" => Ok(Cycle::B),
            _ => Err(Error::InvalidArgument(format!(
                "cycle must be A or B, got {s}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BranchConstants {
    pub beta1: BigQ,
    pub beta2: BigQ,
    /// `c[k−1] = C_k` for `k = 1..2r−1`
    pub c: Vec<C64>,
    /// `(−1)^{β2} = exp(iπp/(2r))`
    pub phase: C64,
}

pub fn rho(n: u32) -> C64 {
    C64::from_polar(1.0, 2.0 * PI / n as f64)
}

/// `C_k = (ρ_{2r} − 1)/ρ_{2r}^k`.
pub fn cycle_constant(r: u32, k: i64) -> C64 {
    let rh = rho(2 * r);
    (rh - 1.0) * C64::from_polar(1.0, -2.0 * PI * k as f64 / (2 * r) as f64)
}

pub fn branch_constants(sig: &CurveSignature) -> BranchConstants {
    BranchConstants {
        beta1: sig.beta1_exact(),
        beta2: sig.beta2_exact(),
        c: (1..2 * sig.r as i64)
            .map(|k| cycle_constant(sig.r, k))
            .collect(),
        phase: C64::from_polar(1.0, PI * sig.p as f64 / (2 * sig.r) as f64),
    }
}

fn check_k(sig: &CurveSignature, k: u32) -> Result<()> {
    if k == 0 || k >= 2 * sig.r {
        return Err(Error::InvalidArgument(format!(
            "k must lie in 1..{}, got {k}",
            2 * sig.r - 1
        )));
    }
    Ok(())
}

fn check_lambda(l: C64) -> Result<()> {
    if l.norm() < 1e-14 || (l - 1.0).norm() < 1e-14 || !l.re.is_finite() || !l.im.is_finite() {
        return Err(Error::DomainError(format!(
            "λ = {l} is a degenerate modulus"
        )));
    }
    Ok(())
}

/// Closed-form period of `dx/y` over `a_k` or `b_k` with parameters
/// `(β1, β2)`.
fn period_from_betas(
    b1: f64,
    b2: f64,
    phase: C64,
    r: u32,
    cycle: Cycle,
    k: u32,
    l: C64,
) -> Result<C64> {
    let ck = cycle_constant(r, k as i64);
    match cycle {
        Cycle::A => {
            let pre = gamma(re(1.5 - b1 - b2))? * gamma(re(b2))? / gamma(re(1.5 - b1))?;
            let h = eval_2f1(&Hyp2F1Params::real(1.5 - b1 - b2, 1.0 - b2, 1.5 - b1)?, l)?;
            Ok(ck * pre * cpow(l, re(0.5 - b1)) * h)
        }
        Cycle::B => {
            let g = gamma(re(b2))?;
            let pre = g * g / gamma(re(2.0 * b2))?;
            let om = re(1.0) - l;
            let h = eval_2f1(&Hyp2F1Params::real(b1 + b2 - 0.5, b2, 2.0 * b2)?, om)?;
            Ok(phase * ck * pre / cpow(om, re(1.0 - 2.0 * b2)) * h)
        }
    }
}

pub fn period_closed(sig: &CurveSignature, cycle: Cycle, k: u32, l: C64) -> Result<C64> {
    check_k(sig, k)?;
    check_lambda(l)?;
    let phase = branch_constants(sig).phase;
    period_from_betas(sig.beta1(), sig.beta2(), phase, sig.r, cycle, k, l)
}

/// Periods of the dual curve `(r, 2r−p, 2r−q)` written in the parameters
/// `β1 = q/(2r)`, `β2 = p/(2r)` of `sig`.
pub fn period_dual_closed(sig: &CurveSignature, cycle: Cycle, k: u32, l: C64) -> Result<C64> {
    check_k(sig, k)?;
    check_lambda(l)?;
    let (b1, b2) = (sig.beta1(), sig.beta2());
    let ck = cycle_constant(sig.r, k as i64);
    match cycle {
        Cycle::A => {
            let pre = gamma(re(b1 + b2 - 0.5))? * gamma(re(1.0 - b2))? / gamma(re(b1 + 0.5))?;
            let h = eval_2f1(&Hyp2F1Params::real(b1 + b2 - 0.5, b2, b1 + 0.5)?, l)?;
            Ok(ck * pre / cpow(l, re(0.5 - b1)) * h)
        }
        Cycle::B => {
            let phase = C64::from_polar(1.0, PI * (1.0 - b2));
            let g = gamma(re(1.0 - b2))?;
            let om = re(1.0) - l;
            let h = eval_2f1(
                &Hyp2F1Params::real(1.5 - b1 - b2, 1.0 - b2, 2.0 - 2.0 * b2)?,
                om,
            )?;
            Ok(phase * ck * g * g * cpow(om, re(1.0 - 2.0 * b2)) / gamma(re(2.0 - 2.0 * b2))? * h)
        }
    }
}

/// Period by direct integration of `dx/y` along the branch cut, with
/// `y = x^{β1+β2−1/2}(1−x)^{1−β2}(λ−x)^{1−β2}`; λ real in (0,1).
pub fn period_quadrature(
    sig: &CurveSignature,
    cycle: Cycle,
    k: u32,
    l: f64,
    spec: &QuadratureSpec,
) -> Result<C64> {
    check_k(sig, k)?;
    if !(l > 0.0 && l < 1.0) {
        return Err(Error::DomainError(format!(
            "quadrature oracle needs λ in (0,1), got {l}"
        )));
    }
    let (b1, b2) = (sig.beta1(), sig.beta2());
    let ck = cycle_constant(sig.r, k as i64);
    let e0 = -(b1 + b2 - 0.5);
    match cycle {
        Cycle::A => {
            let f = |x: C64| cpow(re(1.0) - x, re(b2 - 1.0));
            Ok(ck * integrate_singular(f, re(0.0), re(l), e0, b2 - 1.0, spec)?)
        }
        Cycle::B => {
            // ∫_1^λ dx/y with (λ − x)^{1−β2} on its principal branch, arg π
            let f = |x: C64| cpow(x, re(e0));
            let v = integrate_singular(f, re(l), re(1.0), b2 - 1.0, b2 - 1.0, spec)?;
            Ok(-ck * C64::from_polar(1.0, -PI * (1.0 - b2)) * v)
        }
    }
}

/// `τ = f'/f`, the B over A period ratio.
pub fn tau_ratio(sig: &CurveSignature, l: C64) -> Result<C64> {
    tau_ratio_k(sig, l, 1)
}

pub fn tau_ratio_k(sig: &CurveSignature, l: C64, k: u32) -> Result<C64> {
    let a = period_closed(sig, Cycle::A, k, l)?;
    if a.norm() == 0.0 {
        return Err(Error::DivisionByZero("A-period vanishes".into()));
    }
    Ok(period_closed(sig, Cycle::B, k, l)? / a)
}

/// `λ1 = ((1+Λ2)/(1−Λ2))²`.
pub fn lambda1_of<S: crate::numerics::Scalar>(l2: &S) -> S {
    let one = S::from_i64(1);
    ((one.clone() + l2.clone()) / (one - l2.clone())).powi(2)
}

/// `u = (1+Λ)²/(4Λ)`.
pub fn u_of<S: crate::numerics::Scalar>(l: &S) -> S {
    (S::from_i64(1) + l.clone()).powi(2) / (S::from_i64(4) * l.clone())
}

#[derive(Debug, Clone)]
pub struct SwModelMaps {
    pub sig: CurveSignature,
    /// `SE(Λ2²)_{r,2r−p,2r−q}` onto the Legendre-type model
    pub legendre1: CurveMap,
    /// the curve with the extra `(ζ1² − λ1)` factor onto the same model
    pub legendre2: CurveMap,
    /// composite, from the `ζ1` curve onto `SE(Λ2²)_{r,2r−p,2r−q}`
    pub legendre3: CurveMap,
}

fn v(name: &str) -> Expr {
    Expr::var(name)
}

/// Target `y^{2r} = x^{3r−p−q}(x² + 2(1−2u)x + 1)^p`.
fn legendre_model(sig: &CurveSignature) -> CurveEq {
    let (r, p, q) = sig.ri();
    let (x, u) = (v("x"), v("u"));
    let quad = Expr::sum(vec![
        &x * &x,
        Expr::int(2) * (Expr::int(1) - Expr::int(2) * u) * x.clone(),
        Expr::int(1),
    ]);
    CurveEq::new(2 * r, vec![(x, 3 * r - p - q), (quad, p)])
}

/// `η^{2r} = ζ^{3r−p−q}(ζ−1)^p(ζ−m)^p`, the dual curve at modulus `m`.
fn dual_curve(sig: &CurveSignature, z: &Expr, m: &Expr) -> CurveEq {
    let (r, p, q) = sig.ri();
    CurveEq::new(
        2 * r,
        vec![(z.clone(), 3 * r - p - q), (z - 1, p), (z - m, p)],
    )
}

/// `η1^{2r} = ζ1^{r−p+q}(ζ1−1)^{3r−p−q}(ζ1−λ1)^{3r−p−q}(ζ1²−λ1)^{2(p−r)}`.
fn zeta1_curve(sig: &CurveSignature, z: &Expr, l1: &Expr) -> CurveEq {
    let (r, p, q) = sig.ri();
    CurveEq::new(
        2 * r,
        vec![
            (z.clone(), r - p + q),
            (z - 1, 3 * r - p - q),
            (z - l1, 3 * r - p - q),
            (&(z * z) - l1, 2 * (p - r)),
        ],
    )
}

pub fn swmodel_maps(sig: &CurveSignature) -> Result<SwModelMaps> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    let (r, p, q) = sig.ri();
    // y-scaling exponent 3/2 + p/(2r) − q/(2r)
    let e_num = 3 * r + p - q;
    let e_den = 2 * r;
    let one = Expr::int(1);

    let (z2, l2) = (v("Z2"), v("L2"));
    let legendre1 = CurveMap {
        name: format!("legendre1{sig}"),
        vars: vec!["Z2".into(), "L2".into()],
        source: dual_curve(&sig, &z2, &(&l2 * &l2)),
        target: legendre_model(&sig),
        subs: [("x".to_string(), &z2 / &l2), ("u".to_string(), u_of(&l2))]
            .into_iter()
            .collect(),
        y_factors: vec![FracPow::new(l2.clone(), -e_num, e_den)],
        seeds: vec![z2.clone(), l2.clone(), &z2 - 1, &z2 - &(&l2 * &l2)],
        sample: vec![
            ("Z2".into(), C64::new(0.37, 0.11)),
            ("L2".into(), C64::new(0.29, 0.05)),
        ],
    };

    let (z1, l1) = (v("Z1"), v("l1"));
    let legendre2 = CurveMap {
        name: format!("legendre2{sig}"),
        vars: vec!["Z1".into(), "l1".into()],
        source: zeta1_curve(&sig, &z1, &l1),
        target: legendre_model(&sig),
        subs: [
            (
                "x".to_string(),
                &(&(&z1 - 1) * &(&z1 - &l1)) / &(&z1 * &(&one - &l1)),
            ),
            ("u".to_string(), &l1 / &(&l1 - 1)),
        ]
        .into_iter()
        .collect(),
        y_factors: vec![
            FracPow::int(&(&z1 * &z1) - &l1, 1),
            FracPow::int(z1.clone(), -2),
            FracPow::new(&one - &l1, -e_num, e_den),
        ],
        seeds: vec![
            z1.clone(),
            l1.clone(),
            &z1 - 1,
            &z1 - &l1,
            &(&z1 * &z1) - &l1,
            &l1 - 1,
        ],
        sample: vec![
            ("Z1".into(), C64::new(0.43, -0.17)),
            ("l1".into(), C64::new(2.3, 0.2)),
        ],
    };

    let legendre3 = legendre3_map(&sig, false)?;
    Ok(SwModelMaps {
        sig,
        legendre1,
        legendre2,
        legendre3,
    })
}

fn legendre3_map(sig: &CurveSignature, eq_r: bool) -> Result<CurveMap> {
    let (r, p, q) = sig.ri();
    let e_num = 3 * r + p - q;
    let e_den = 2 * r;
    let one = Expr::int(1);
    let (z1, l2) = (v("Z1"), v("L2"));
    let l1 = lambda1_of(&l2);
    let om = &one - &l2;
    let zeta2 = -(&(&(&(&z1 - 1) * &(&z1 - &l1)) * &om.pow(2)) / &(Expr::int(4) * z1.clone()));
    let source = if eq_r {
        // SE(λ1)_{r,q,r}
        CurveEq::new(
            2 * r,
            vec![
                (z1.clone(), q),
                (&z1 - 1, 2 * r - q),
                (&z1 - &l1, 2 * r - q),
            ],
        )
    } else {
        zeta1_curve(sig, &z1, &l1)
    };
    Ok(CurveMap {
        name: format!("legendre3{}{sig}", if eq_r { "_p=r" } else { "" }),
        vars: vec!["Z1".into(), "L2".into()],
        source,
        target: dual_curve(sig, &v("Z2t"), &(&l2 * &l2)),
        subs: [("Z2t".to_string(), zeta2)].into_iter().collect(),
        y_factors: vec![
            FracPow::new(Expr::int(-1), e_num, e_den),
            FracPow::int(&(&z1 * &z1) - &l1, 1),
            FracPow::new(om.clone(), 2 * e_num, e_den),
            FracPow::new(Expr::int(2), -2 * e_num, e_den),
            FracPow::int(z1.clone(), -2),
        ],
        seeds: vec![z1.clone(), l2.clone(), &z1 - 1, &l2 - 1, &l2 + 1],
        sample: vec![
            ("Z1".into(), C64::new(0.43, -0.17)),
            ("L2".into(), C64::new(0.31, 0.04)),
        ],
    })
}

/// The composite map for `p = r` read literally as a map from
/// `SE(λ1)_{r,q,r}`.
pub fn legendre3_p_eq_r(sig: &CurveSignature) -> Result<CurveMap> {
    if sig.p != sig.r {
        return Err(Error::ConstraintViolation {
            which: format!("p = r required, got {sig}"),
        });
    }
    legendre3_map(sig, true)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorrespondenceCertificate {
    pub r: u32,
    pub q: u32,
    pub passed: bool,
    pub leading_term: Option<String>,
}

/// The `(8r−q, 4r−q)` correspondence between `SE(λ1)_{r,q,r}` and
/// `SE(Λ2²)_{r,r,2r−q}`, checked on the graph of the composite map.
pub fn verify_correspondence(r: u32, q: u32) -> Result<CorrespondenceCertificate> {
    let (ri, qi) = (r as i64, q as i64);
    let (z1, l2) = (v("Z1"), v("L2"));
    let l1 = lambda1_of(&l2);
    let one = Expr::int(1);
    let z2 =
        -(&(&(&(&z1 - 1) * &(&z1 - &l1)) * &(&one - &l2).pow(2)) / &(Expr::int(4) * z1.clone()));
    let sign = if q.is_multiple_of(2) { 1 } else { -1 };
    let lhs = Expr::product(vec![
        Expr::int(sign),
        Expr::int(4).pow(qi - 4 * ri),
        z1.pow(qi),
        (&z1 - 1).pow(2 * ri - qi),
        (&z1 - &l1).pow(2 * ri - qi),
        (&(&z1 * &z1) - &l1).pow(2 * ri),
    ]);
    let rhs = Expr::product(vec![
        z1.pow(4 * ri),
        z2.pow(2 * ri - qi),
        (&z2 - 1).pow(ri),
        (&z2 - &(&l2 * &l2)).pow(ri),
        (&l2 - 1).pow(2 * qi - 8 * ri),
    ]);
    let mut ctx = FactorCtx::new(&["Z1", "L2"]);
    for s in [z1.clone(), l2.clone(), &z1 - 1, &l2 - 1, &l2 + 1] {
        ctx.seed(&s)?;
    }
    let out = ctx.difference(&lhs, &rhs)?;
    Ok(CorrespondenceCertificate {
        r,
        q,
        passed: out.is_ok(),
        leading_term: out.err(),
    })
}
