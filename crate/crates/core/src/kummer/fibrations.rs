use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::certificate::{check_map, two_form_check, KummerCertificate};
use crate::error::{Error, Result};
use crate::numerics::C64;
use crate::ratfunc::Expr;
use crate::superelliptic::curvemap::{CurveEq, CurveMap, FracPow};
use crate::superelliptic::{validate_signature, CurveSignature};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum FibrationId {
    J4a,
    J4b,
    J5,
    J6,
    J7,
    J8,
}

impl FibrationId {
    pub const ALL: [FibrationId; 6] = [
        FibrationId::J4a,
        FibrationId::J4b,
        FibrationId::J5,
        FibrationId::J6,
        FibrationId::J7,
        FibrationId::J8,
    ];
}

impl fmt::Display for FibrationId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FromStr for FibrationId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        FibrationId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidArgument(format!("unknown fibration {s}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignatureConstraint {
    None,
    QEqualsR,
    QEquals3rMinus2p,
}

impl SignatureConstraint {
    pub fn holds(&self, sig: &CurveSignature) -> bool {
        match self {
            SignatureConstraint::None => true,
            SignatureConstraint::QEqualsR => sig.q == sig.r,
            SignatureConstraint::QEquals3rMinus2p => {
                sig.q as i64 == 3 * sig.r as i64 - 2 * sig.p as i64
            }
        }
    }

    pub fn describe(&self) -> &'static str {
        match self {
            SignatureConstraint::None => "none",
            SignatureConstraint::QEqualsR => "q = r",
            SignatureConstraint::QEquals3rMinus2p => "q = 3r - 2p",
        }
    }
}

/// A fibration `U, X ∈ Q(ζ1, ζ2, Λ1, Λ2)`, `Y = Y' η1η2` with its fiber
/// equation `Y^{2r} = Π f_i(U, X)^{e_i}`.
#[derive(Debug, Clone)]
pub struct FibrationData {
    pub id: FibrationId,
    pub sig: CurveSignature,
    pub u: Expr,
    pub x: Expr,
    pub y_prefactor: Expr,
    pub target: CurveEq,
    pub constraint: SignatureConstraint,
    /// `det ∂(U,X)/∂(ζ1,ζ2) / Y'`
    pub two_form_sign: i64,
    pub notes: Vec<String>,
}

fn v(s: &str) -> Expr {
    Expr::var(s)
}

pub(super) struct Vars {
    pub z1: Expr,
    pub z2: Expr,
    pub l1: Expr,
    pub l2: Expr,
    pub m1: Expr,
    pub m2: Expr,
}

pub(super) fn vars() -> Vars {
    let (l1, l2) = (v("L1"), v("L2"));
    Vars {
        z1: v("Z1"),
        z2: v("Z2"),
        m1: &l1 * &l1,
        m2: &l2 * &l2,
        l1,
        l2,
    }
}

/// `η1^{2r}η2^{2r}` from the two curve equations.
fn product_source(sig: &CurveSignature, w: &Vars) -> CurveEq {
    let (r, p, q) = sig.ri();
    CurveEq::new(
        2 * r,
        vec![
            (w.z1.clone(), p + q - r),
            (&w.z1 - 1, 2 * r - p),
            (&w.z1 - &w.m1, 2 * r - p),
            (w.z2.clone(), 3 * r - p - q),
            (&w.z2 - 1, p),
            (&w.z2 - &w.m2, p),
        ],
    )
}

pub fn fibration_data(id: FibrationId, sig: &CurveSignature) -> Result<FibrationData> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    let (r, p, q) = sig.ri();
    let w = vars();
    let (z1, z2, m1, m2) = (&w.z1, &w.z2, &w.m1, &w.m2);
    let (uu, xx) = (v("U"), v("X"));
    let one = Expr::int(1);
    let constraint = match id {
        FibrationId::J5 | FibrationId::J8 => SignatureConstraint::QEquals3rMinus2p,
        _ => SignatureConstraint::None,
    };
    if !constraint.holds(&sig) {
        return Err(Error::ConstraintViolation {
            which: format!("{id} requires {} (got {sig})", constraint.describe()),
        });
    }
    let mut notes = Vec::new();
    let l2z1_z2 = &(m2 * z1) - z2;
    let (u, x, y, factors, sign) = match id {
        FibrationId::J4a | FibrationId::J4b => {
            let (a, b) = if id == FibrationId::J4a {
                (&uu, &xx)
            } else {
                (&xx, &uu)
            };
            let f = vec![
                (a.clone(), p + q - r),
                (a - 1, 2 * r - p),
                (a - m1, 2 * r - p),
                (b.clone(), 3 * r - p - q),
                (b - 1, p),
                (b - m2, p),
            ];
            let (u, x) = if id == FibrationId::J4a {
                (z1.clone(), z2.clone())
            } else {
                (z2.clone(), z1.clone())
            };
            (
                u,
                x,
                one.clone(),
                f,
                if id == FibrationId::J4a { 1 } else { -1 },
            )
        }
        FibrationId::J5 => {
            let d1 = Expr::sum(vec![z1.clone(), (m1 - 1) * z2.clone(), -m1]);
            let n1 = Expr::sum(vec![m2 * z1, (m1 - 1) * z2.clone(), -(m1 * m2)]);
            let u = &(&(z1 - z2) * &n1) / &(&l2z1_z2 * &d1);
            let rr = cofactor_r5(&u, m1, m2);
            let x = &(&rr * &(z1 - z2)) * &(z1 - m1) / (z1 * &d1);
            let y = Expr::product(vec![
                rr.clone(),
                m1.clone(),
                &one - m1,
                &u - 1,
                z2.clone(),
                z1 - z2,
            ]) / Expr::product(vec![z1.pow(2), l2z1_z2.clone(), d1.pow(2)]);
            let m12 = m1 * m2;
            let c1 = Expr::product(vec![
                m1.clone(),
                m2 - 1,
                &uu - 1,
                Expr::sum(vec![(&m12 - 1) * uu.clone(), -m1, one.clone()]),
                Expr::sum(vec![
                    Expr::sum(vec![m12.clone(), -m1, -m2]) * uu.clone(),
                    m2.clone(),
                ]),
            ]);
            let c2 = Expr::product(vec![
                m1.clone(),
                m2 - 1,
                uu.clone(),
                &uu - 1,
                Expr::sum(vec![uu.clone(), -one.clone(), m1 * &(&one - m2)]),
                Expr::sum(vec![(&one - m1) * m2.clone() * uu.clone(), m1.clone(), -m2]),
            ]);
            let f = vec![
                (w.l1.clone(), -4 * p),
                (&one - m1, 2 * (r - p)),
                (&one - m2, -2 * r),
                (&uu - 1, 4 * (r - p)),
                (xx.clone(), 2 * r - p),
                (&xx + &c1, p),
                (&xx + &c2, p),
            ];
            (u, x, y, f, 1)
        }
        FibrationId::J6 => {
            let u = z1 / z2;
            let x = Expr::product(vec![z1.clone(), z1 - m1, z1 - z2, l2z1_z2.clone()])
                / (z2.pow(3) * (z1 - 1));
            let y = Expr::product(vec![m1 - 1, z1.pow(2), z1 - z2, l2z1_z2.clone()])
                / (z2.pow(5) * (z1 - 1).pow(2));
            let f = vec![
                (&one - m1, 2 * (r - p)),
                (uu.clone(), -2 * p + q + r),
                (xx.clone(), 2 * r - p),
                (
                    &xx - &Expr::product(vec![uu.clone(), &uu - m1, &(m2 * &uu) - 1]),
                    p,
                ),
                (
                    &xx - &Expr::product(vec![uu.clone(), &uu - 1, &(m2 * &uu) - m1]),
                    p,
                ),
            ];
            (u, x, y, f, 1)
        }
        FibrationId::J7 => {
            let u = &(&(z2 - m2) * &(z1 - z2)) / &(&(z2 - 1) * &l2z1_z2);
            let x = Expr::product(vec![
                m2.clone(),
                (m2 - 1).pow(2),
                z1.clone(),
                z2.clone(),
                (z1 - 1).pow(2),
                z2 - m2,
                z1 - z2,
            ]) / ((z2 - 1).pow(3) * l2z1_z2.pow(3));
            let y = -(Expr::product(vec![
                m2.clone(),
                (m2 - 1).pow(3),
                (z1 - 1).pow(2),
                z2.clone(),
                z2 - m2,
                (z1 - z2).pow(2),
            ]) / (l2z1_z2.pow(4) * (z2 - 1).pow(5)));
            let m12 = m1 * m2;
            let quad = Expr::sum(vec![
                xx.pow(2),
                -Expr::product(vec![
                    uu.clone(),
                    &uu - 1,
                    Expr::sum(vec![(&m12 + 1) * uu.clone(), -m1, -m2]),
                    xx.clone(),
                ]),
                Expr::product(vec![m12.clone(), uu.pow(2), (&uu - 1).pow(4)]),
            ]);
            let f = vec![
                (w.l2.clone(), 2 * (r - q)),
                (m2 - 1, 2 * (p - r)),
                (uu.clone(), 2 * p - q - r),
                (&uu - 1, 2 * (r - q)),
                (xx.clone(), p + q - r),
                (quad, 2 * r - p),
            ];
            (u, x, y, f, 1)
        }
        FibrationId::J8 => {
            let u = -(&(&(z1 - z2) * &(z2 - m2))
                / &Expr::product(vec![m2.clone(), m2 - 1, z1.clone(), z1 - 1]));
            let k = &((m1 - 1) * (m2 - 1) * u.clone()) - 1;
            let x = Expr::product(vec![u.clone(), k.clone(), z2 - 1, l2z1_z2.clone()])
                / Expr::product(vec![m2 - 1, z2.clone(), z1 - 1]);
            let y = Expr::product(vec![m2.clone(), u.pow(3), k.clone(), l2z1_z2.clone()])
                / Expr::product(vec![z2.pow(2), z1 - 1, z2 - m2]);
            let m12 = m1 * m2;
            let ku = &((m1 - 1) * (m2 - 1) * uu.clone()) - 1;
            let quad = Expr::sum(vec![
                xx.pow(2),
                -Expr::product(vec![
                    uu.clone(),
                    Expr::sum(vec![
                        Expr::sum(vec![Expr::int(2) * m12.clone(), -m1, -m2, Expr::int(2)])
                            * uu.clone(),
                        Expr::int(-2),
                    ]),
                    xx.clone(),
                ]),
                -Expr::product(vec![uu.pow(2), &uu - 1, &(&m12 * &uu) - 1, ku]),
            ]);
            let f = vec![
                (w.l2.clone(), 4 * (p - r)),
                (&one - m2, 2 * (p - r)),
                (uu.clone(), 4 * (p - r)),
                (xx.clone(), p),
                (quad, 2 * r - p),
            ];
            notes.push("Y factor (Λ2²ζ1 − ζ) read with ζ = ζ2".into());
            notes.push("fiber constant (1−Λ2²)^{2(p−r)} in place of (1−Λ1²)^{2(p−r)}".into());
            (u, x, y, f, 1)
        }
    };
    Ok(FibrationData {
        id,
        sig,
        u,
        x,
        y_prefactor: y,
        target: CurveEq::new(2 * r, factors),
        constraint,
        two_form_sign: sign,
        notes,
    })
}

/// `R(U) = Λ1²(Λ2²−1)(U−1)(U−1+Λ1²(1−Λ2²))((Λ1²Λ2²−Λ1²−Λ2²)U+Λ2²)`.
fn cofactor_r5(u: &Expr, m1: &Expr, m2: &Expr) -> Expr {
    let one = Expr::int(1);
    Expr::product(vec![
        m1.clone(),
        m2 - 1,
        u - 1,
        Expr::sum(vec![u.clone(), -one.clone(), m1 * &(&one - m2)]),
        Expr::sum(vec![
            Expr::sum(vec![m1 * m2, -m1, -m2.clone()]) * u.clone(),
            m2.clone(),
        ]),
    ])
}

impl FibrationData {
    pub fn curve_map(&self) -> CurveMap {
        let w = vars();
        let seeds = vec![
            w.z1.clone(),
            w.z2.clone(),
            w.l1.clone(),
            w.l2.clone(),
            &w.z1 - 1,
            &w.z2 - 1,
            &w.l1 - 1,
            &w.l1 + 1,
            &w.l2 - 1,
            &w.l2 + 1,
            &w.z1 - &w.m1,
            &w.z2 - &w.m2,
            &w.z1 - &w.z2,
            &(&w.m2 * &w.z1) - &w.z2,
        ];
        CurveMap {
            name: self.id.to_string(),
            vars: ["Z1", "Z2", "L1", "L2"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            source: product_source(&self.sig, &w),
            target: self.target.clone(),
            subs: [
                ("U".to_string(), self.u.clone()),
                ("X".to_string(), self.x.clone()),
            ]
            .into_iter()
            .collect(),
            y_factors: vec![FracPow::int(self.y_prefactor.clone(), 1)],
            seeds,
            sample: vec![
                ("Z1".into(), C64::new(0.31, 0.17)),
                ("Z2".into(), C64::new(0.58, -0.23)),
                ("L1".into(), C64::new(0.43, 0.08)),
                ("L2".into(), C64::new(0.67, -0.11)),
            ],
        }
    }
}

/// Exact check of the fiber equation together with the two-form relation
/// `π*(dU ∧ dX/Y) = ±dζ1/η1 ∧ dζ2/η2`.
pub fn verify_fibration_exact(id: FibrationId, sig: &CurveSignature) -> Result<KummerCertificate> {
    let data = fibration_data(id, sig)?;
    let map = data.curve_map();
    let mut cert = check_map(&map, Some(data.sig.to_string()))?;
    let tf = two_form_check(
        &map,
        ["U", "X"],
        ["Z1", "Z2"],
        &Expr::int(data.two_form_sign),
    )?;
    if !tf.passed {
        cert.passed = false;
        if cert.polynomial == "0" {
            cert.polynomial = format!("two-form factor differs from {}", data.two_form_sign);
        }
    }
    cert.two_form = Some(tf);
    cert.notes = data.notes.clone();
    cert.notes.push(format!(
        "signature constraint: {}",
        data.constraint.describe()
    ));
    cert.into_result()
}
