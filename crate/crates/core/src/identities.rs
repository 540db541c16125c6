//! Top-level identity checks: the multivariate Clausen identity and its
//! duality branches, the swap symmetry, the Clausen 3F2 identities, the F2
//! period integral, period equality on the Kummer surface and the mirror map.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hypergeometric::{
    eval_2f1, eval_3f2, eval_f2, eval_f2_at_z2_one, eval_f2_series, kummer_identity,
    AppellF2Params, Hyp2F1Params,
};
use crate::kummer::{kummer_period, moduli_ab, two_form_scale, ModuliPoint};
use crate::numerics::{c, cpowf, gamma, integrate_singular, re, QuadratureSpec, Scalar, C64};
use crate::pfaffian::moduli_map_t;
use crate::ratfunc::{Expr, FactorCtx};
use crate::superelliptic::{cycle_constant, tau_ratio, validate_signature, CurveSignature};

/// Tolerance for identities between series values.
pub const SERIES_TOL: f64 = 1e-9;
/// Tolerance for identities involving two-dimensional quadrature.
pub const QUAD_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexValue {
    pub re: f64,
    pub im: f64,
}

impl From<C64> for ComplexValue {
    fn from(z: C64) -> Self {
        ComplexValue { re: z.re, im: z.im }
    }
}

impl From<ComplexValue> for C64 {
    fn from(z: ComplexValue) -> Self {
        C64::new(z.re, z.im)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub name: String,
    pub inputs: Value,
    pub lhs: ComplexValue,
    pub rhs: ComplexValue,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl IdentityReport {
    pub fn new(name: &str, inputs: Value, lhs: C64, rhs: C64, tolerance: f64) -> Self {
        let abs = (lhs - rhs).norm();
        let rel = if rhs.norm() > 0.0 {
            abs / rhs.norm()
        } else {
            abs
        };
        let ok = |x: f64| x.is_finite() && x <= tolerance;
        let passed = ok(rel) || (rhs.norm() < 1.0 && ok(abs));
        IdentityReport {
            name: name.into(),
            inputs,
            lhs: lhs.into(),
            rhs: rhs.into(),
            abs_residual: abs,
            rel_residual: rel,
            tolerance,
            passed,
        }
    }
}

fn cv(z: C64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn check_betas(b1: f64, b2: f64) -> Result<()> {
    if !(b1.is_finite() && b2.is_finite()) || b1 <= 0.0 || b2 <= 0.0 {
        return Err(Error::DomainError(format!(
            "needs Re β1, Re β2 > 0, got ({b1}, {b2})"
        )));
    }
    Ok(())
}

fn quadric(b1: f64, b2: f64) -> Result<AppellF2Params> {
    AppellF2Params::real(b1 + b2 - 0.5, b1, b2, 2.0 * b1, 2.0 * b2)
}

/// `2F1(α, β2; β1+½; Λ1²) · 2F1(α, β2; 2β2; 1−Λ2²)`.
fn gauss_product(b1: f64, b2: f64, l1: C64, l2: C64) -> Result<C64> {
    let a = b1 + b2 - 0.5;
    Ok(eval_2f1(&Hyp2F1Params::real(a, b2, b1 + 0.5)?, l1 * l1)?
        * eval_2f1(&Hyp2F1Params::real(a, b2, 2.0 * b2)?, 1.0 - l2 * l2)?)
}

/// `F2(α; β1, β2; 2β1, 2β2; z1, z2) = (Λ1+Λ2)^{2α} 2F1(α,β2;β1+½;Λ1²) 2F1(α,β2;2β2;1−Λ2²)`
/// with `(z1, z2) = (4Λ1Λ2/(Λ1+Λ2)², −(Λ1²−1)(Λ2²−1)/(Λ1+Λ2)²)`.
pub fn verify_multivariate_clausen(b1: f64, b2: f64, mp: &ModuliPoint) -> Result<IdentityReport> {
    check_betas(b1, b2)?;
    let (l1, l2) = (mp.lambda1, mp.lambda2);
    let m = moduli_map_t(l1, l2)?;
    if m.z1.norm() + m.z2.norm() >= 0.95 {
        return Err(Error::DomainError(format!(
            "|z1|+|z2| = {:.3} outside the series domain",
            m.z1.norm() + m.z2.norm()
        )));
    }
    if (l1 * l1).norm() >= 1.0 || (1.0 - l2 * l2).norm() >= 1.0 {
        return Err(Error::DomainError("needs |Λ1²| < 1 and |1−Λ2²| < 1".into()));
    }
    let lhs = eval_f2_series(&quadric(b1, b2)?, m.z1, m.z2)?;
    let rhs = cpowf(l1 + l2, 2.0 * (b1 + b2) - 1.0) * gauss_product(b1, b2, l1, l2)?;
    let inputs = json!({"beta1": b1, "beta2": b2, "Lambda1": cv(l1), "Lambda2": cv(l2), "z1": cv(m.z1), "z2": cv(m.z2)});
    Ok(IdentityReport::new(
        "multivariate_clausen",
        inputs,
        lhs,
        rhs,
        SERIES_TOL,
    ))
}

/// The 100-point grid: `(β1, β2) ∈ {1/8, …, 5/8}²` at four moduli points.
pub fn default_clausen_grid() -> Vec<(f64, f64, ModuliPoint)> {
    let betas = [0.125, 0.25, 0.375, 0.5, 0.625];
    let points = [(0.2, 0.9), (0.15, 0.85), (0.1, 0.8), (0.25, 0.95)];
    let mut out = Vec::new();
    for &(l1, l2) in &points {
        let mp = ModuliPoint::real(l1, l2).expect("grid point on the generic locus");
        for &b1 in &betas {
            for &b2 in &betas {
                out.push((b1, b2, mp));
            }
        }
    }
    out
}

/// Columns `(A, B, z1, z2, h)` of one duality row.
pub fn duality_row_exprs<S: Scalar>(n: u8, l1: &S, l2: &S) -> Result<[S; 5]> {
    let one = S::from_i64(1);
    let four = S::from_i64(4);
    let p = l1.clone() * l2.clone();
    let d = four.clone() * p.clone();
    let sq = |x: S| x.clone() * x;
    let m = (sq(l1.clone()) - one.clone()) * (sq(l2.clone()) - one.clone());
    let (sum, dif) = (l1.clone() + l2.clone(), l1.clone() - l2.clone());
    let (pp, pm) = (p.clone() + one.clone(), p.clone() - one.clone());
    Ok(match n {
        1 => [
            sq(sum.clone()) / d.clone(),
            sq(pp) / d.clone(),
            d.clone() / sq(sum.clone()),
            -(m / sq(sum.clone())),
            sum,
        ],
        2 => [
            -(sq(dif.clone()) / d.clone()),
            -(sq(pm) / d.clone()),
            -(d.clone() / sq(dif.clone())),
            -(m / sq(dif.clone())),
            -dif,
        ],
        3 => [
            sq(pp.clone()) / d.clone(),
            sq(sum) / d.clone(),
            d.clone() / sq(pp.clone()),
            m / sq(pp.clone()),
            pp,
        ],
        4 => [
            -(sq(pm.clone()) / d.clone()),
            -(sq(dif) / d.clone()),
            -(d.clone() / sq(pm.clone())),
            m / sq(pm.clone()),
            -pm,
        ],
        _ => {
            return Err(Error::InvalidArgument(format!(
                "duality row must be 1..4, got {n}"
            )))
        }
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityRow {
    pub row: u8,
    #[serde(rename = "A")]
    pub a: ComplexValue,
    #[serde(rename = "B")]
    pub b: ComplexValue,
    pub z1: ComplexValue,
    pub z2: ComplexValue,
    pub h: ComplexValue,
    /// `(z1, z2) = (1/A, 1 − B/A)` as rational functions of `(Λ1, Λ2)`
    pub exact_relations: bool,
    pub report: IdentityReport,
}

/// Exact check of `(z1, z2) = (1/A, 1 − B/A)` for a row.
pub fn duality_row_exact(n: u8) -> Result<bool> {
    let (l1, l2) = (Expr::var("L1"), Expr::var("L2"));
    let [a, b, z1, z2, _] = duality_row_exprs(n, &l1, &l2)?;
    let mut ctx = FactorCtx::new(&["L1", "L2"]);
    for s in [
        l1.clone(),
        l2.clone(),
        &l1 - 1,
        &l1 + 1,
        &l2 - 1,
        &l2 + 1,
        &l1 + &l2,
        &l1 - &l2,
    ] {
        ctx.seed(&s)?;
    }
    Ok(ctx.difference(&z1, &a.inv())?.is_ok() && ctx.difference(&z2, &(1 - &b / &a))?.is_ok())
}

/// One row of the duality table with the identity
/// `F2(z1, z2) = h^{2α} 2F1(α,β2;β1+½;Λ1²) 2F1(α,β2;2β2;1−Λ2²)`.
pub fn duality_row(n: u8, b1: f64, b2: f64, mp: &ModuliPoint) -> Result<DualityRow> {
    check_betas(b1, b2)?;
    let (l1, l2) = (mp.lambda1, mp.lambda2);
    let [a, b, z1, z2, h] = duality_row_exprs(n, &l1, &l2)?;
    for (v, what) in [(a, "A"), (b, "B"), (z1, "z1"), (z2, "z2"), (h, "h")] {
        if !(v.re.is_finite() && v.im.is_finite()) || (what == "A" && v.norm() < 1e-14) {
            return Err(Error::SingularLocus(format!("{what} of row {n}")));
        }
    }
    let lhs = eval_f2(&quadric(b1, b2)?, z1, z2)?;
    let rhs = cpowf(h, 2.0 * (b1 + b2) - 1.0) * gauss_product(b1, b2, l1, l2)?;
    let inputs = json!({"row": n, "beta1": b1, "beta2": b2, "Lambda1": cv(l1), "Lambda2": cv(l2)});
    Ok(DualityRow {
        row: n,
        a: a.into(),
        b: b.into(),
        z1: z1.into(),
        z2: z2.into(),
        h: h.into(),
        exact_relations: duality_row_exact(n)?,
        report: IdentityReport::new(&format!("duality_row_{n}"), inputs, lhs, rhs, SERIES_TOL),
    })
}

/// `(A, B) ↦ (A/(A−B), (A−1)/(A−B))`.
pub fn symmetry_ab<S: Scalar>(a: &S, b: &S) -> (S, S) {
    let d = a.clone() - b.clone();
    (a.clone() / d.clone(), (a.clone() - S::from_i64(1)) / d)
}

/// `(Λ1, Λ2) ↦ (−(1−Λ2)/(1+Λ2), (1+Λ1)/(1−Λ1))`.
pub fn symmetry_moduli<S: Scalar>(l1: &S, l2: &S) -> (S, S) {
    let one = S::from_i64(1);
    (
        -((one.clone() - l2.clone()) / (one.clone() + l2.clone())),
        (one.clone() + l1.clone()) / (one - l1.clone()),
    )
}

/// The swap `(z1, z2, β1, β2) → (z2, z1, β2, β1)` of the F2 side against the
/// right side at the transformed moduli; the latter equality is the content
/// of the two Kummer quadratic identities.
pub fn verify_symmetry_swap(b1: f64, b2: f64, mp: &ModuliPoint) -> Result<Vec<IdentityReport>> {
    check_betas(b1, b2)?;
    let (l1, l2) = (mp.lambda1, mp.lambda2);
    let (t1, t2) = symmetry_moduli(&l1, &l2);
    let m = moduli_map_t(l1, l2)?;
    let mt = moduli_map_t(t1, t2)?;
    let p = quadric(b1, b2)?;
    let f = eval_f2(&p, m.z1, m.z2)?;
    let fs = eval_f2(&p.swapped(), m.z2, m.z1)?;
    let inputs = json!({"beta1": b1, "beta2": b2, "Lambda1": cv(l1), "Lambda2": cv(l2), "Lambda1'": cv(t1), "Lambda2'": cv(t2)});
    let mut out = vec![IdentityReport::new(
        "symmetry_f2_terms",
        inputs.clone(),
        fs,
        f,
        SERIES_TOL,
    )];
    // transformed point lands on the swapped coordinates
    let dz = (mt.z1 - m.z2).norm() + (mt.z2 - m.z1).norm();
    out.push(IdentityReport::new(
        "symmetry_moduli",
        inputs.clone(),
        re(dz),
        re(0.0),
        SERIES_TOL,
    ));
    let rhs = cpowf(l1 + l2, 2.0 * (b1 + b2) - 1.0) * gauss_product(b1, b2, l1, l2)?;
    let rhs_t = cpowf(t1 + t2, 2.0 * (b1 + b2) - 1.0) * gauss_product(b2, b1, t1, t2)?;
    out.push(IdentityReport::new(
        "symmetry_rhs",
        inputs,
        rhs_t,
        rhs,
        SERIES_TOL,
    ));
    Ok(out)
}

/// Kummer quadratic identity `which` as a report.
pub fn verify_kummer_quadratic(which: u8, b1: f64, b2: f64, lambda: C64) -> Result<IdentityReport> {
    check_betas(b1, b2)?;
    let (lhs, rhs) = kummer_identity(which, b1, b2, lambda)?;
    let inputs = json!({"which": which, "beta1": b1, "beta2": b2, "Lambda": cv(lambda)});
    Ok(IdentityReport::new(
        &format!("kummer_quadratic_{which}"),
        inputs,
        lhs,
        rhs,
        SERIES_TOL,
    ))
}

/// Clausen's identity `3F2(α, β1, β1−β2+½; 2β1, β1+½; z) = 2F1(a, b; β1+½; z)²`
/// and its quadratic-transformed form with `z = −4Λ1²/(1−Λ1²)²`.
pub fn verify_clausen_3f2(b1: f64, b2: f64, l1: C64) -> Result<[IdentityReport; 2]> {
    check_betas(b1, b2)?;
    let a = b1 + b2 - 0.5;
    let m = l1 * l1;
    let z = -4.0 * m / ((1.0 - m) * (1.0 - m));
    if z.norm() > 0.95 {
        return Err(Error::DomainError(format!(
            "|z1| = {:.3} outside the 3F2 series domain",
            z.norm()
        )));
    }
    let f32 = eval_3f2(
        re(a),
        re(b1),
        re(b1 - b2 + 0.5),
        re(2.0 * b1),
        re(b1 + 0.5),
        z,
    )?;
    let g = eval_2f1(
        &Hyp2F1Params::real(
            b1 / 2.0 + b2 / 2.0 - 0.25,
            b1 / 2.0 - b2 / 2.0 + 0.25,
            b1 + 0.5,
        )?,
        z,
    )?;
    let h = eval_2f1(&Hyp2F1Params::real(a, b2, b1 + 0.5)?, m)?;
    let inputs = json!({"beta1": b1, "beta2": b2, "Lambda1": cv(l1), "z1": cv(z)});
    Ok([
        IdentityReport::new("clausen_3f2_a", inputs.clone(), f32, g * g, SERIES_TOL),
        IdentityReport::new(
            "clausen_3f2_b",
            inputs,
            f32,
            cpowf(1.0 - m, 2.0 * a) * h * h,
            SERIES_TOL,
        ),
    ])
}

/// `F2(α; β1, β2; 2β1, 2β2; z1, 1)` against the factorized value with
/// `Λ2 = Λ1`. The boundary value is only computed where the outer series
/// terminates (see [`eval_f2_at_z2_one`]), so outside that subfamily this
/// returns a `DomainError`.
pub fn verify_f2_boundary(b1: f64, b2: f64, l1: C64) -> Result<IdentityReport> {
    check_betas(b1, b2)?;
    let m = l1 * l1;
    let z = -4.0 * m / ((1.0 - m) * (1.0 - m));
    let lhs = eval_f2_at_z2_one(&quadric(b1, b2)?, z)?;
    let rhs = cpowf(1.0 - m, 2.0 * (b1 + b2) - 1.0) * gauss_product(b1, b2, l1, l1)?;
    let inputs = json!({"beta1": b1, "beta2": b2, "Lambda1": cv(l1), "z1": cv(z)});
    Ok(IdentityReport::new(
        "f2_boundary_z2_one",
        inputs,
        lhs,
        rhs,
        SERIES_TOL,
    ))
}

fn gamma_prefactor(b1: f64, b2: f64) -> Result<C64> {
    let a = b1 + b2 - 0.5;
    Ok(
        gamma(re(a))? * gamma(re(1.0 - b2))? * gamma(re(b2))? * gamma(re(b2))?
            / (gamma(re(b1 + 0.5))? * gamma(re(2.0 * b2))?),
    )
}

/// The period of `dU ∧ dX/Y` as an iterated integral, outer variable on
/// `[A, B]`, against `e^{iπβ2} C_k C_l G/4^α · F2(1/A, 1−B/A)/(A^α (A−B)^{1−2β2})`.
pub fn f2_period_double_integral(
    sig: &CurveSignature,
    a: f64,
    b: f64,
    k: u32,
    l: u32,
    spec: &QuadratureSpec,
) -> Result<IdentityReport> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    if !(1.0 < a && a < b && b.is_finite()) {
        return Err(Error::DomainError(format!(
            "needs 1 < A < B, got ({a}, {b})"
        )));
    }
    let (b1, b2) = (sig.beta1(), sig.beta2());
    let al = b1 + b2 - 0.5;
    let pre = gamma(re(al))? * gamma(re(1.0 - b2))? / gamma(re(b1 + 0.5))?;
    let hp = Hyp2F1Params::real(al, b2, b1 + 0.5)?;
    let inner = |u: C64| -> C64 {
        let z = 2.0 * u - 1.0 - 2.0 * (u * u - u).sqrt();
        match eval_2f1(&hp, z * z) {
            Ok(h) => cpowf(z, al) * pre * h,
            Err(_) => C64::new(f64::NAN, f64::NAN),
        }
    };
    let integral = integrate_singular(inner, re(a), re(b), b2 - 1.0, b2 - 1.0, spec)?;
    let ck = cycle_constant(sig.r, k as i64) * cycle_constant(sig.r, l as i64);
    let phase = C64::from_polar(1.0, PI * b2);
    // (A−u)^{β2−1}(u−B)^{β2−1} on principal branches, both bases negative
    let lhs = -phase * ck * C64::from_polar(1.0, 2.0 * PI * (b2 - 1.0)) * integral;
    let (ac, bc) = (re(a), re(b));
    let f2 = eval_f2(&quadric(b1, b2)?, 1.0 / ac, 1.0 - bc / ac)?;
    let rhs = phase * ck * gamma_prefactor(b1, b2)? / 4f64.powf(al) * f2
        / (cpowf(ac, al) * cpowf(ac - bc, 1.0 - 2.0 * b2));
    let inputs = json!({"sig": sig.to_string(), "A": a, "B": b, "k": k, "l": l});
    Ok(IdentityReport::new(
        "f2_period_double_integral",
        inputs,
        lhs,
        rhs,
        QUAD_TOL,
    ))
}

/// How the F2 value in the period equality is obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum F2Route {
    /// F2 evaluated directly at `(1/A, 1 − B/A)`
    Direct,
    /// F2 replaced by the factorized right side of the Clausen identity
    Factorized,
}

/// Periods of `ω` over `a_i × b_j` on `S0^{(r,2r−p,2r−q)}` against the F2
/// expression; orientation of the two-cycle gives the overall sign −1.
pub fn verify_period_equality(
    sig: &CurveSignature,
    mp: &ModuliPoint,
    i: u32,
    j: u32,
) -> Result<IdentityReport> {
    verify_period_equality_route(sig, mp, i, j, F2Route::Direct)
}

pub fn verify_period_equality_route(
    sig: &CurveSignature,
    mp: &ModuliPoint,
    i: u32,
    j: u32,
    route: F2Route,
) -> Result<IdentityReport> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    if sig.r < 2 {
        return Err(Error::DomainError("period equality needs r ≥ 2".into()));
    }
    if i == 0 || j == 0 || i >= sig.r || j >= sig.r {
        return Err(Error::InvalidArgument(format!(
            "i, j must lie in 1..={}",
            sig.r - 1
        )));
    }
    let (l1, l2) = (mp.lambda1, mp.lambda2);
    let lhs = kummer_period(&sig.dual(), mp, i, j, 2)?;
    let (b1, b2) = (sig.beta1(), sig.beta2());
    let al = b1 + b2 - 0.5;
    let (a, b) = moduli_ab(&l1, &l2);
    let f2 = match route {
        F2Route::Direct => eval_f2(&quadric(b1, b2)?, 1.0 / a, 1.0 - b / a)?,
        F2Route::Factorized => cpowf(l1 + l2, 2.0 * al) * gauss_product(b1, b2, l1, l2)?,
    };
    let r = sig.r as i64;
    let ck = cycle_constant(sig.r, i as i64) * cycle_constant(sig.r, j as i64 + r);
    let per = C64::from_polar(1.0, PI * b2) * ck * gamma_prefactor(b1, b2)? / 4f64.powf(al)
        * cpowf(a, -al)
        * cpowf(a - b, 2.0 * b2 - 1.0)
        * f2;
    let rhs = -per / two_form_scale(&sig, mp)?;
    let inputs = json!({"sig": sig.to_string(), "Lambda1": cv(l1), "Lambda2": cv(l2), "i": i, "j": j,
        "route": format!("{route:?}")});
    Ok(IdentityReport::new(
        "period_equality",
        inputs,
        lhs,
        rhs,
        1e-8,
    ))
}

/// Coefficients of `Λ = (ϑ2/ϑ3)²` in powers of `q^{1/4}`, `q^{3/4}`, …
/// (odd powers of `q^{1/4}` only), for `q = e^{2πiτ}`.
pub fn mirror_series_coefficients(n: usize) -> Vec<i64> {
    // in the theta nome s = e^{iπτ}: ϑ2² = 4 s^{1/2} (Σ s^{k(k+1)})², ϑ3 = 1 + 2Σ s^{k²}
    let mut num = vec![0i64; n];
    let mut den = vec![0i64; n];
    let mut t2 = vec![0i64; n];
    for k in 0.. {
        let e = k * (k + 1);
        if e >= n {
            break;
        }
        t2[e] += 1;
    }
    for a in 0..n {
        for b in 0..n - a {
            num[a + b] += t2[a] * t2[b];
        }
    }
    let mut t3 = vec![0i64; n];
    t3[0] = 1;
    for k in 1.. {
        if k * k >= n {
            break;
        }
        t3[k * k] += 2;
    }
    for a in 0..n {
        for b in 0..n - a {
            den[a + b] += t3[a] * t3[b];
        }
    }
    // num / den as a power series, den[0] = 1
    let mut out = vec![0i64; n];
    for m in 0..n {
        let mut s = num[m];
        for k in 1..=m {
            s -= den[k] * out[m - k];
        }
        out[m] = s;
    }
    out.into_iter().map(|x| 4 * x).collect()
}

fn theta_quotient(s: C64, s4: C64) -> Result<C64> {
    // ϑ2 = 2 s^{1/4} Σ s^{k(k+1)}, ϑ3 = 1 + 2 Σ s^{k²}
    let mut t2 = re(0.0);
    let mut t3 = re(1.0);
    for k in 0..200u32 {
        let a = s.powu(k * (k + 1));
        t2 += a;
        if k > 0 {
            t3 += 2.0 * s.powu(k * k);
        }
        if a.norm() < 1e-18 {
            break;
        }
    }
    let v = 4.0 * s4 * s4 * t2 * t2 / (t3 * t3);
    crate::numerics::finite(v, "theta quotient")
}

/// `λ ↦ τ = f_B/f_A ↦ Λ = (ϑ2/ϑ3)²` against `Λ = √λ`.
pub fn mirror_map_check(lambda: f64) -> Result<IdentityReport> {
    if !(lambda > 0.0 && lambda < 0.2) {
        return Err(Error::DomainError(format!(
            "mirror map check needs λ in (0, 0.2), got {lambda}"
        )));
    }
    let sig = validate_signature(1, 1, 1)?;
    let tau = tau_ratio(&sig, re(lambda))?;
    let s = (C64::i() * PI * tau).exp();
    let s4 = (C64::i() * PI * tau / 4.0).exp();
    let lam = theta_quotient(s, s4)?;
    let inputs = json!({"lambda": lambda, "tau": cv(tau), "q": cv(s * s)});
    Ok(IdentityReport::new(
        "mirror_map",
        inputs,
        lam,
        re(lambda.sqrt()),
        SERIES_TOL,
    ))
}

/// The expansion `Λ = 4q^{1/4}(1 − 4q^{1/2} + 14q + …)` against the
/// theta quotient.
pub fn mirror_coefficients_check() -> IdentityReport {
    let got = mirror_series_coefficients(3);
    let want = [4.0, -16.0, 56.0];
    let d: f64 = got
        .iter()
        .zip(want)
        .map(|(&g, w)| (g as f64 - w).abs())
        .sum();
    let inputs = json!({"coefficients": got});
    IdentityReport::new("mirror_coefficients", inputs, re(d), re(0.0), 1e-12)
}

/// A moduli point from `(re, im)` pairs.
pub fn point(l1: (f64, f64), l2: (f64, f64)) -> Result<ModuliPoint> {
    ModuliPoint::new(c(l1.0, l1.1), c(l2.0, l2.1))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clausen_examples() {
        let r =
            verify_multivariate_clausen(0.5, 0.5, &ModuliPoint::real(0.2, 0.9).unwrap()).unwrap();
        assert!(r.passed && r.rel_residual <= 1e-9, "{r:?}");
        let r = verify_multivariate_clausen(0.25, 0.375, &ModuliPoint::real(0.15, 0.85).unwrap())
            .unwrap();
        assert!(r.passed, "{r:?}");
        assert!(
            verify_multivariate_clausen(-0.5, 0.5, &ModuliPoint::real(0.2, 0.9).unwrap()).is_err()
        );
        assert!(
            verify_multivariate_clausen(0.5, 0.5, &ModuliPoint::real(0.3, 0.4).unwrap()).is_err()
        );
    }

    #[test]
    fn clausen_small_lambda1() {
        let (b1, b2) = (0.5, 0.25);
        let mp = ModuliPoint::real(1e-6, 0.9).unwrap();
        let r = verify_multivariate_clausen(b1, b2, &mp).unwrap();
        assert!(r.passed);
        let a = b1 + b2 - 0.5;
        let lim = 0.9f64.powf(2.0 * a)
            * eval_2f1(
                &Hyp2F1Params::real(a, b2, 2.0 * b2).unwrap(),
                re(1.0 - 0.81),
            )
            .unwrap();
        assert!((C64::from(r.lhs) - lim).norm() / lim.norm() < 1e-5);
    }

    #[test]
    fn duality_rows() {
        let mp = ModuliPoint::real(0.2, 0.5).unwrap();
        let r = duality_row(2, 0.5, 0.25, &mp).unwrap();
        assert!((C64::from(r.h) - 0.3).norm() < 1e-15);
        assert!(r.exact_relations && r.report.passed, "{r:?}");
        let mp = ModuliPoint::real(0.2, 0.9).unwrap();
        for n in 1..=4 {
            let r = duality_row(n, 0.25, 0.375, &mp).unwrap();
            assert!(r.exact_relations && r.report.passed, "{n}: {:?}", r.report);
        }
        let h4 = duality_row(4, 0.5, 0.5, &mp).unwrap().h;
        assert!((C64::from(h4) - (1.0 - 0.18)).norm() < 1e-15);
        assert!(duality_row(5, 0.5, 0.5, &mp).is_err());
    }

    #[test]
    fn symmetry() {
        for (b1, b2, l1, l2) in [(0.5, 0.5, 0.1, 0.8), (0.25, 0.375, 0.12, 0.9)] {
            for r in verify_symmetry_swap(b1, b2, &ModuliPoint::real(l1, l2).unwrap()).unwrap() {
                assert!(r.passed, "{r:?}");
            }
        }
        let (a, b) = (Expr::var("A"), Expr::var("B"));
        let (a1, b1) = symmetry_ab(&a, &b);
        let (a2, b2) = symmetry_ab(&a1, &b1);
        let mut ctx = FactorCtx::new(&["A", "B"]);
        assert!(ctx.difference(&a2, &a).unwrap().is_ok());
        assert!(ctx.difference(&b2, &b).unwrap().is_ok());
    }

    #[test]
    fn clausen_3f2() {
        for (b1, b2, l) in [(0.25, 0.25, 0.2), (0.5, 0.25, 0.15), (0.5, 0.25, 0.0)] {
            for r in verify_clausen_3f2(b1, b2, re(l)).unwrap() {
                assert!(r.passed, "{r:?}");
            }
        }
        let [a, _] = verify_clausen_3f2(0.3, 0.4, re(0.0)).unwrap();
        assert_eq!(C64::from(a.lhs), re(1.0));
    }

    #[test]
    fn boundary_subfamily() {
        let r = verify_f2_boundary(0.25, 0.25, re(0.3)).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(verify_f2_boundary(0.5, 0.5, re(0.3))
            .unwrap_err()
            .is_domain());
    }

    #[test]
    fn period_lemma() {
        let spec = QuadratureSpec::default();
        let s = validate_signature(1, 1, 1).unwrap();
        let r = f2_period_double_integral(&s, 25.0 / 24.0, 49.0 / 24.0, 1, 1, &spec).unwrap();
        assert!(r.passed, "{r:?}");
        let s = validate_signature(2, 1, 2).unwrap();
        let r = f2_period_double_integral(&s, 1.2, 2.0, 1, 1, &spec).unwrap();
        assert!(r.passed, "{r:?}");
        let s = validate_signature(3, 5, 3).unwrap();
        let r11 = f2_period_double_integral(&s, 1.2, 2.0, 1, 1, &spec).unwrap();
        let r21 = f2_period_double_integral(&s, 1.2, 2.0, 2, 1, &spec).unwrap();
        let rho = crate::superelliptic::rho(6);
        assert!((C64::from(r21.lhs) - C64::from(r11.lhs) / rho).norm() < 1e-8);
        assert!(f2_period_double_integral(&s, 0.5, 2.0, 1, 1, &spec).is_err());
    }

    #[test]
    fn period_equality() {
        let s = validate_signature(2, 1, 2).unwrap();
        let mp = ModuliPoint::real(0.3, 0.4).unwrap();
        let r = verify_period_equality(&s, &mp, 1, 1).unwrap();
        let f = verify_period_equality_route(&s, &mp, 1, 1, F2Route::Factorized).unwrap();
        assert!(f.passed, "{f:?}");
        assert!(r.passed, "{r:?}");
        let s = validate_signature(3, 5, 3).unwrap();
        let r = verify_period_equality(&s, &ModuliPoint::real(0.25, 0.35).unwrap(), 1, 2).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(verify_period_equality(&validate_signature(1, 1, 1).unwrap(), &mp, 1, 1).is_err());
    }

    #[test]
    fn mirror() {
        assert_eq!(mirror_series_coefficients(3), vec![4, -16, 56]);
        assert!(mirror_coefficients_check().passed);
        for l in [0.005, 0.01, 0.02] {
            let r = mirror_map_check(l).unwrap();
            assert!(r.passed, "{r:?}");
        }
        assert!(mirror_map_check(0.5).is_err());
    }

    #[test]
    fn report_serializes() {
        let r = IdentityReport::new("x", json!({}), c(1.0, 2.0), c(1.0, 2.0), 1e-9);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"lhs\":{\"re\":1.0,\"im\":2.0}"));
        let back: IdentityReport = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
    }
}
