//! Base changes, twists and the Legendre-pencil links between the
//! fibrations `J6`, `J7` and the Euler-type family of `F2`.

use serde::Serialize;

use super::certificate::{certificate_timestamp, check_map, two_form_check, KummerCertificate};
use super::fibrations::{fibration_data, FibrationId};
use super::{moduli_ab, moduli_ab_j6};
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::ratfunc::{Expr, FactorCtx};
use crate::superelliptic::curvemap::{CurveEq, CurveMap, FracPow};
use crate::superelliptic::{validate_signature, CurveSignature};

fn v(s: &str) -> Expr {
    Expr::var(s)
}

fn names(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

fn require_q_eq_r(sig: &CurveSignature, what: &str) -> Result<CurveSignature> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    if sig.q != sig.r {
        return Err(Error::ConstraintViolation {
            which: format!("{what} requires q = r (got {sig})"),
        });
    }
    Ok(sig)
}

/// `y^{2r} = (u−A)^{2r−q}(u−B)^{2r−q} x^{2r−p}(x−1)^{2r−p}(x−u)^{p+q−r}`.
fn twisted_legendre(sig: &CurveSignature, u: &Expr, x: &Expr, a: &Expr, b: &Expr) -> CurveEq {
    let (r, p, q) = sig.ri();
    CurveEq::new(
        2 * r,
        vec![
            (u - a, 2 * r - q),
            (u - b, 2 * r - q),
            (x.clone(), 2 * r - p),
            (x - 1, 2 * r - p),
            (x - u, p + q - r),
        ],
    )
}

/// `y^{2r} = (u−A)^{2r−p}(u−B)^{2r−p} x^{3r−p−q}(x² + 2(1−2u)x + 1)^p`.
fn j7_pencil(sig: &CurveSignature, u: &Expr, x: &Expr, a: &Expr, b: &Expr) -> CurveEq {
    let (r, p, q) = sig.ri();
    CurveEq::new(
        2 * r,
        vec![
            (u - a, 2 * r - p),
            (u - b, 2 * r - p),
            (x.clone(), 3 * r - p - q),
            (quad(u, x), p),
        ],
    )
}

fn quad(u: &Expr, x: &Expr) -> Expr {
    Expr::sum(vec![
        x.pow(2),
        Expr::int(2) * (1 - Expr::int(2) * u.clone()) * x.clone(),
        Expr::int(1),
    ])
}

/// The twisted pencil `ỹ^{2r} = (ũ−1)^{r−p+q}(ũ−Ã)^{2r−q}(ũ−B̃)^{2r−q} x̃^{2r−p}(x̃−1)^{p−q+r}(x̃−ũ)^{p+q−r}`.
fn twisted_pencil(sig: &CurveSignature, ut: &Expr, xt: &Expr, at: &Expr, bt: &Expr) -> CurveEq {
    let (r, p, q) = sig.ri();
    CurveEq::new(
        2 * r,
        vec![
            (ut - 1, -p + q + r),
            (ut - at, 2 * r - q),
            (ut - bt, 2 * r - q),
            (xt.clone(), 2 * r - p),
            (xt - 1, p - q + r),
            (xt - ut, p + q - r),
        ],
    )
}

/// The `J6` fiber in the form produced by the degree-two base change; it
/// agrees with the `J6` fiber equation exactly when `q = r`.
fn j6_pullback_fiber(sig: &CurveSignature) -> CurveEq {
    let (r, p, q) = sig.ri();
    let (uu, xx, l1, l2) = (v("U"), v("X"), v("L1"), v("L2"));
    let (m1, m2) = (&l1 * &l1, &l2 * &l2);
    CurveEq::new(
        2 * r,
        vec![
            (1 - m1.clone(), 2 * (r - p)),
            (uu.clone(), -2 * p + q + r),
            (&uu - &m1, q - r),
            (&(&m2 * &uu) - 1, q - r),
            (&(&m2 * &uu.pow(2)) - &m1, 2 * (r - q)),
            (xx.clone(), 2 * r - p),
            (
                &xx - &Expr::product(vec![uu.clone(), &uu - &m1, &(&m2 * &uu) - 1]),
                p + q - r,
            ),
            (
                &xx - &Expr::product(vec![uu.clone(), &uu - 1, &(&m2 * &uu) - &m1]),
                p + q - r,
            ),
        ],
    )
}

struct BaseChange {
    ut: Expr,
    xt: Expr,
    at: Expr,
    bt: Expr,
    y: Vec<FracPow>,
}

/// `(ũ, x̃, ỹ/Y, Ã, B̃)` with `(α, β) = (Λ1, 1/Λ2)`.
fn base_change_data(sig: &CurveSignature) -> BaseChange {
    let (r, p, q) = sig.ri();
    let (uu, xx, l1, l2) = (v("U"), v("X"), v("L1"), v("L2"));
    let (al, be) = (l1.clone(), l2.inv());
    let (a2, b2) = (&al * &al, &be * &be);
    let ab = &al * &be;
    let ut = &(&(&uu - 1) * &(&uu - &(&ab * &ab))) / &(&(&uu - &a2) * &(&uu - &b2));
    let xt = &(&b2 * &xx) / &Expr::product(vec![uu.clone(), &uu - &a2, &uu - &b2]);
    let at = (&ab + 1).pow(2) / (&al + &be).pow(2);
    let bt = (&ab - 1).pow(2) / (&al - &be).pow(2);
    let n = 2 * r;
    let y = vec![
        FracPow::new(be.clone(), 6 * r + 2 * p - 2 * q, n),
        FracPow::new(&a2 - 1, 3 * r + p - q, n),
        FracPow::new(1 - b2.clone(), 5 * r - p - q, n),
        FracPow::int(&uu.pow(2) - &(&ab * &ab), 1),
        FracPow::int(uu.clone(), -1),
        FracPow::int(&uu - &a2, -3),
        FracPow::int(&uu - &b2, -3),
        FracPow::new(&a2 - &b2, -(4 * r - 2 * q), n),
    ];
    BaseChange { ut, xt, at, bt, y }
}

fn base_change_seeds() -> Vec<Expr> {
    let (uu, xx, l1, l2) = (v("U"), v("X"), v("L1"), v("L2"));
    let (m1, m2) = (&l1 * &l1, &l2 * &l2);
    vec![
        uu.clone(),
        xx.clone(),
        l1.clone(),
        l2.clone(),
        &l1 - 1,
        &l1 + 1,
        &l2 - 1,
        &l2 + 1,
        &uu - 1,
        &uu - &m1,
        &(&m2 * &uu) - 1,
        &(&l2 * &uu) - &l1,
        &(&l2 * &uu) + &l1,
        &(&l1 * &l2) + 1,
        &(&l1 * &l2) - 1,
        &l1 + &l2,
        &l1 - &l2,
        &xx - &Expr::product(vec![uu.clone(), &uu - &m1, &(&m2 * &uu) - 1]),
        &xx - &Expr::product(vec![uu.clone(), &uu - 1, &(&m2 * &uu) - &m1]),
    ]
}

fn base_change_sample() -> Vec<(String, C64)> {
    vec![
        ("U".into(), C64::new(0.37, 0.21)),
        ("X".into(), C64::new(0.52, -0.14)),
        ("L1".into(), C64::new(0.41, 0.06)),
        ("L2".into(), C64::new(0.73, -0.09)),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BaseChangeReading {
    /// `u = 1/(1 − ũ(U))`, the composite of the twist and the base change
    Composite,
    /// `1/(1 − u) = ũ(U)` read literally
    Printed,
}

/// The composite bundle from the `J6` fiber to the twisted Legendre pencil
/// `y^{2r} = (u−A)^{2r−q}(u−B)^{2r−q} x^{2r−p}(x−1)^{2r−p}(x−u)^{p+q−r}`.
pub fn base_change_map(sig: &CurveSignature, reading: BaseChangeReading) -> Result<CurveMap> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    let (r, _, q) = sig.ri();
    let bc = base_change_data(&sig);
    let (l1, l2) = (v("L1"), v("L2"));
    let (a, b) = moduli_ab_j6(&l1, &l2);
    let u = match reading {
        BaseChangeReading::Composite => (1 - bc.ut.clone()).inv(),
        BaseChangeReading::Printed => 1 - bc.ut.inv(),
    };
    let x = (1 - bc.xt.clone()).inv();
    let mut y = bc.y.clone();
    y.push(FracPow::int(1 - bc.xt.clone(), -2));
    y.push(FracPow::int(1 - bc.ut.clone(), -2));
    y.push(FracPow::new(
        &(1 - bc.at.clone()) * &(1 - bc.bt.clone()),
        -(2 * r - q),
        2 * r,
    ));
    let name = match reading {
        BaseChangeReading::Composite => "base_change_j6",
        BaseChangeReading::Printed => "base_change_j6_printed",
    };
    Ok(CurveMap {
        name: name.into(),
        vars: names(&["U", "X", "L1", "L2"]),
        source: j6_pullback_fiber(&sig),
        target: twisted_legendre(&sig, &v("u"), &v("x"), &a, &b),
        subs: [("u".to_string(), u), ("x".to_string(), x)]
            .into_iter()
            .collect(),
        y_factors: y,
        seeds: base_change_seeds(),
        sample: base_change_sample(),
    })
}

/// The two steps separately: `J6` fiber to the twisted pencil, and the
/// Möbius change `(u, x) = (1/(1−ũ), 1/(1−x̃))` with free `Ã, B̃`.
fn base_change_steps(sig: &CurveSignature) -> [CurveMap; 2] {
    let (r, _, q) = sig.ri();
    let bc = base_change_data(sig);
    let tw2 = CurveMap {
        name: "twist_base_change".into(),
        vars: names(&["U", "X", "L1", "L2"]),
        source: j6_pullback_fiber(sig),
        target: twisted_pencil(sig, &v("ut"), &v("xt"), &bc.at, &bc.bt),
        subs: [
            ("ut".to_string(), bc.ut.clone()),
            ("xt".to_string(), bc.xt.clone()),
        ]
        .into_iter()
        .collect(),
        y_factors: bc.y.clone(),
        seeds: base_change_seeds(),
        sample: base_change_sample(),
    };
    let (ut, xt, at, bt) = (v("ut"), v("xt"), v("At"), v("Bt"));
    let a = (1 - at.clone()).inv();
    let b = (1 - bt.clone()).inv();
    let tw1 = CurveMap {
        name: "twist_mobius".into(),
        vars: names(&["ut", "xt", "At", "Bt"]),
        source: twisted_pencil(sig, &ut, &xt, &at, &bt),
        target: twisted_legendre(sig, &v("u"), &v("x"), &a, &b),
        subs: [
            ("u".to_string(), (1 - ut.clone()).inv()),
            ("x".to_string(), (1 - xt.clone()).inv()),
        ]
        .into_iter()
        .collect(),
        y_factors: vec![
            FracPow::int(1 - xt.clone(), -2),
            FracPow::int(1 - ut.clone(), -2),
            FracPow::new(&(1 - at.clone()) * &(1 - bt.clone()), -(2 * r - q), 2 * r),
        ],
        seeds: vec![
            ut.clone(),
            xt.clone(),
            at.clone(),
            bt.clone(),
            &ut - 1,
            &xt - 1,
            &at - 1,
            &bt - 1,
            &ut - &at,
            &ut - &bt,
            &xt - &ut,
        ],
        sample: vec![
            ("ut".into(), C64::new(0.23, 0.31)),
            ("xt".into(), C64::new(0.61, -0.12)),
            ("At".into(), C64::new(1.7, 0.2)),
            ("Bt".into(), C64::new(2.9, -0.4)),
        ],
    };
    [tw2, tw1]
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RamificationCheck {
    /// `∂ũ/∂U` vanishes at `U = ±αβ`
    pub critical: bool,
    /// `ũ(αβ) = B̃`
    pub plus_to_b: bool,
    /// `ũ(−αβ) = Ã`
    pub minus_to_a: bool,
    /// `ũ(αβ) = Ã`, the assignment with the signs exchanged
    pub plus_to_a: bool,
}

/// Critical points and values of `U ↦ (U−1)(U−α²β²)/((U−α²)(U−β²))`.
pub fn ramification_check() -> Result<RamificationCheck> {
    let (uu, al, be) = (v("U"), v("a"), v("b"));
    let (a2, b2, ab) = (&al * &al, &be * &be, &al * &be);
    let ut = &(&(&uu - 1) * &(&uu - &(&ab * &ab))) / &(&(&uu - &a2) * &(&uu - &b2));
    let at = (&ab + 1).pow(2) / (&al + &be).pow(2);
    let bt = (&ab - 1).pow(2) / (&al - &be).pow(2);
    let at_point =
        |e: &Expr, pt: &Expr| e.substitute(&[("U".to_string(), pt.clone())].into_iter().collect());
    let mut ctx = FactorCtx::new(&["U", "a", "b"]);
    for s in [
        al.clone(),
        be.clone(),
        &al - 1,
        &al + 1,
        &be - 1,
        &be + 1,
        &al - &be,
        &al + &be,
        &ab - 1,
        &ab + 1,
    ] {
        ctx.seed(&s)?;
    }
    let d = ut.differentiate("U");
    let zero = Expr::int(0);
    let critical = ctx.difference(&at_point(&d, &ab), &zero)?.is_ok()
        && ctx.difference(&at_point(&d, &(-&ab)), &zero)?.is_ok();
    let plus = at_point(&ut, &ab);
    let minus = at_point(&ut, &(-&ab));
    Ok(RamificationCheck {
        critical,
        plus_to_b: ctx.difference(&plus, &bt)?.is_ok(),
        minus_to_a: ctx.difference(&minus, &at)?.is_ok(),
        plus_to_a: ctx.difference(&plus, &at)?.is_ok(),
    })
}

fn all_passed(certs: Vec<KummerCertificate>) -> Result<Vec<KummerCertificate>> {
    for c in &certs {
        if !c.passed {
            return c.clone().into_result().map(|_| certs.clone());
        }
    }
    Ok(certs)
}

/// The base change of the `J6` fibration onto the twisted Legendre pencil:
/// both steps, their composite, and the ramification data.
pub fn verify_base_change_j6(sig: &CurveSignature) -> Result<Vec<KummerCertificate>> {
    let sig = require_q_eq_r(sig, "the J6 base change")?;
    let s = Some(sig.to_string());
    let mut certs = Vec::new();
    for m in base_change_steps(&sig) {
        certs.push(check_map(&m, s.clone())?);
    }
    let mut comp = check_map(
        &base_change_map(&sig, BaseChangeReading::Composite)?,
        s.clone(),
    )?;
    comp.notes
        .push("u = 1/(1 − ũ(U)); the literal 1/(1 − u) = ũ(U) fails".into());
    certs.push(comp);
    let ram = ramification_check()?;
    let ok = ram.critical && ram.plus_to_b && ram.minus_to_a;
    certs.push(KummerCertificate {
        id: "base_change_ramification".into(),
        sig: None,
        passed: ok,
        polynomial: if ok { "0".into() } else { format!("{ram:?}") },
        sheet: None,
        branch_residual: 0.0,
        two_form: None,
        notes: vec!["critical points U = ±αβ map to B̃ and Ã respectively".into()],
        timestamp: certificate_timestamp(),
    });
    all_passed(certs)
}

/// Pull-back of the `J7` pencil along `u = (1+z)²/(4z)`.
pub fn double_cover_map(sig: &CurveSignature) -> Result<CurveMap> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    let (r, p, q) = sig.ri();
    let (z, xt, a, b) = (v("z"), v("Xt"), v("a"), v("b"));
    let cover = |w: &Expr| (1 + w.clone()).pow(2) / (Expr::int(4) * w.clone());
    let source = CurveEq::new(
        2 * r,
        vec![
            (z.clone(), p + q - r),
            (&z - &a, 2 * r - p),
            (&z - &a.inv(), 2 * r - p),
            (&z - &b, 2 * r - p),
            (&z - &b.inv(), 2 * r - p),
            (Expr::int(2), 4 * p),
            (xt.clone(), 3 * r - p - q),
            (&xt - 1, p),
            (&xt - &z.pow(2), p),
        ],
    );
    Ok(CurveMap {
        name: "double_cover".into(),
        vars: names(&["z", "Xt", "a", "b"]),
        source,
        target: j7_pencil(&sig, &v("u"), &v("x"), &cover(&a), &cover(&b)),
        subs: [("u".to_string(), cover(&z)), ("x".to_string(), &xt / &z)]
            .into_iter()
            .collect(),
        y_factors: vec![FracPow::int(Expr::int(16) * z.pow(3), -1)],
        seeds: vec![
            z.clone(),
            xt.clone(),
            a.clone(),
            b.clone(),
            &z - &a,
            &(&a * &z) - 1,
            &z - &b,
            &(&b * &z) - 1,
            &xt - 1,
            &xt - &z,
            &xt + &z,
            &z - 1,
            &z + 1,
            &a - 1,
            &a + 1,
            &b - 1,
            &b + 1,
        ],
        sample: vec![
            ("z".into(), C64::new(0.42, 0.19)),
            ("Xt".into(), C64::new(0.33, -0.27)),
            ("a".into(), C64::new(0.21, 0.05)),
            ("b".into(), C64::new(0.64, -0.07)),
        ],
    })
}

/// The pull-back identity and `g̃*(du ∧ dx/y) = 4(z²−1) dz ∧ dX̃/Ỹ`.
pub fn verify_double_cover(sig: &CurveSignature) -> Result<KummerCertificate> {
    let map = double_cover_map(sig)?;
    let mut cert = check_map(&map, Some(sig.to_string()))?;
    let z = v("z");
    let tf = two_form_check(
        &map,
        ["u", "x"],
        ["z", "Xt"],
        &(Expr::int(4) * (z.pow(2) - 1)),
    )?;
    if !tf.passed {
        cert.passed = false;
        cert.polynomial = "two-form factor differs from 4(z²−1)".into();
    }
    cert.two_form = Some(tf);
    cert.into_result()
}

/// `(a)`: the Euler-type family `X3^{2r} = …` onto the twisted Legendre
/// pencil; `(b)`: the `J7` pencil onto the family with `p, q` exchanged.
pub fn legendre_link_maps(sig: &CurveSignature) -> Result<[CurveMap; 2]> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    let (r, p, q) = sig.ri();
    let n = 2 * r;
    let (x1, x2, a, b) = (v("X1"), v("X2"), v("A"), v("B"));
    let (z1, z2) = (a.inv(), 1 - &b / &a);
    let euler = CurveEq::new(
        n,
        vec![
            (x1.clone(), 2 * r - p),
            (1 - x1.clone(), 2 * r - p),
            (x2.clone(), 2 * r - q),
            (1 - x2.clone(), 2 * r - q),
            (
                Expr::sum(vec![Expr::int(1), -(&z1 * &x1), -(&z2 * &x2)]),
                p + q - r,
            ),
        ],
    );
    let transformb = CurveMap {
        name: "legendre_link_a".into(),
        vars: names(&["X1", "X2", "A", "B"]),
        source: euler,
        target: twisted_legendre(&sig, &v("u"), &v("x"), &a, &b),
        subs: [
            ("x".to_string(), x1.clone()),
            ("u".to_string(), &a + &(&(&b - &a) * &x2)),
        ]
        .into_iter()
        .collect(),
        y_factors: vec![
            FracPow::new(Expr::int(-1), 1, 2),
            FracPow::new(a.clone(), p + q - r, n),
            FracPow::new(&a - &b, 4 * r - 2 * q, n),
        ],
        seeds: vec![
            x1.clone(),
            x2.clone(),
            a.clone(),
            b.clone(),
            &x1 - 1,
            &x2 - 1,
            &a - &b,
        ],
        sample: vec![
            ("X1".into(), C64::new(0.27, 0.13)),
            ("X2".into(), C64::new(0.39, -0.21)),
            ("A".into(), C64::new(1.9, 0.3)),
            ("B".into(), C64::new(3.1, -0.2)),
        ],
    };

    let (u, x) = (v("u"), v("x"));
    let qd = quad(&u, &x);
    let xo = v("xo");
    let target = CurveEq::new(
        n,
        vec![
            (&u - &a, 2 * r - p),
            (&u - &b, 2 * r - p),
            (xo.clone(), 2 * r - q),
            (&xo - 1, 2 * r - q),
            (&xo - &u, p + q - r),
        ],
    );
    let transfo = CurveMap {
        name: "legendre_link_b".into(),
        vars: names(&["u", "x", "A", "B"]),
        source: j7_pencil(&sig, &u, &x, &a, &b),
        target,
        subs: [("xo".to_string(), &(&qd / &(Expr::int(4) * x.clone())) + &u)]
            .into_iter()
            .collect(),
        y_factors: vec![
            FracPow::new(x.pow(2) - 1, 4 * r - 2 * q, n),
            FracPow::new(qd.clone(), q - r, n),
            FracPow::new(Expr::int(2), -(6 * r + 2 * p - 2 * q), n),
            FracPow::new(x.clone(), -(6 * r - 2 * q), n),
        ],
        seeds: vec![
            u.clone(),
            x.clone(),
            a.clone(),
            b.clone(),
            &u - &a,
            &u - &b,
            &x - 1,
            &x + 1,
            qd,
        ],
        sample: vec![
            ("u".into(), C64::new(0.47, 0.16)),
            ("x".into(), C64::new(0.36, -0.24)),
            ("A".into(), C64::new(1.9, 0.3)),
            ("B".into(), C64::new(3.1, -0.2)),
        ],
    };
    Ok([transformb, transfo])
}

pub fn verify_legendre_links(sig: &CurveSignature) -> Result<Vec<KummerCertificate>> {
    let sig = require_q_eq_r(sig, "the Legendre links")?;
    let s = Some(sig.to_string());
    let mut certs = Vec::new();
    for m in legendre_link_maps(&sig)? {
        certs.push(check_map(&m, s.clone())?);
    }
    certs[0]
        .notes
        .push("A enters with exponent (p+q−r)/(2r)".into());
    certs[1].notes.push("y-cofactor uses (x²−1)^{2−q/r}".into());
    all_passed(certs)
}

/// The `J7` fibration on `S0^{(r,2r−p,2r−q)}` onto the pencil
/// `y^{2r} = (u−A)^{2r−p}(u−B)^{2r−p} x^{3r−p−q}(x²+2(1−2u)x+1)^p`.
pub fn sw_fibration_map(sig: &CurveSignature) -> Result<CurveMap> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    let (r, p, q) = sig.ri();
    let n = 2 * r;
    let j7 = fibration_data(FibrationId::J7, &sig.dual())?;
    let (uu, xx, l1, l2) = (v("U"), v("X"), v("L1"), v("L2"));
    let (a, b) = moduli_ab(&l1, &l2);
    let (m1, m2) = (&l1 * &l1, &l2 * &l2);
    let l12 = &l1 * &l2;
    let subs = [
        ("u".to_string(), &b + &(&(&b - &a) / &(&uu - 1))),
        (
            "x".to_string(),
            &xx / &Expr::product(vec![l12.clone(), uu.clone(), (&uu - 1).pow(2)]),
        ),
    ];
    Ok(CurveMap {
        name: "sw_fibration".into(),
        vars: names(&["U", "X", "L1", "L2"]),
        source: j7.target,
        target: j7_pencil(&sig, &v("u"), &v("x"), &a, &b),
        subs: subs.into_iter().collect(),
        y_factors: vec![
            FracPow::int(Expr::int(-1), 1),
            FracPow::new(&a - &b, 4 * r - 2 * p, n),
            FracPow::new(l2.clone(), 2 * r - 2 * q, n),
            FracPow::new(l12.clone(), -(3 * r + p - q), n),
            FracPow::new(1 - m2.clone(), -(2 * r - 2 * p), n),
            FracPow::int(uu.clone(), -1),
            FracPow::int(&uu - 1, -4),
        ],
        seeds: vec![
            uu.clone(),
            xx.clone(),
            l1.clone(),
            l2.clone(),
            &uu - 1,
            &l1 - 1,
            &l1 + 1,
            &l2 - 1,
            &l2 + 1,
            &l1 + &l2,
            &l12 + 1,
            Expr::sum(vec![
                xx.pow(2),
                -Expr::product(vec![
                    uu.clone(),
                    &uu - 1,
                    Expr::sum(vec![
                        (&(&m1 * &m2) + 1) * uu.clone(),
                        -m1.clone(),
                        -m2.clone(),
                    ]),
                    xx.clone(),
                ]),
                Expr::product(vec![&m1 * &m2, uu.pow(2), (&uu - 1).pow(4)]),
            ]),
        ],
        sample: vec![
            ("U".into(), C64::new(0.37, 0.21)),
            ("X".into(), C64::new(0.52, -0.14)),
            ("L1".into(), C64::new(0.41, 0.06)),
            ("L2".into(), C64::new(0.73, -0.09)),
        ],
    })
}

pub fn verify_sw_fibration(sig: &CurveSignature) -> Result<KummerCertificate> {
    let map = sw_fibration_map(sig)?;
    check_map(&map, Some(sig.to_string()))?.into_result()
}
