//! Generalized Kummer surfaces `S0 = (C1 × C2)/Z2` built from the curves
//! `SE(Λ1²)_{r,p,q}` and `SE(Λ2²)_{r,2r−p,2r−q}`: invariants, product
//! periods, and exact checks of the fibration and base-change identities.

mod certificate;
mod fibrations;
mod links;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::Scalar;
use crate::numerics::{cpowf, C64};
use crate::superelliptic::{period_closed, validate_signature, CurveSignature, Cycle};

pub use certificate::{
    certificate_timestamp, check_map, KummerCertificate, TwoFormCheck, BRANCH_TOL,
};
pub use fibrations::{
    fibration_data, verify_fibration_exact, FibrationData, FibrationId, SignatureConstraint,
};
pub use links::{
    base_change_map, double_cover_map, legendre_link_maps, ramification_check, sw_fibration_map,
    verify_base_change_j6, verify_double_cover, verify_legendre_links, verify_sw_fibration,
    BaseChangeReading, RamificationCheck,
};

/// Default signatures for the fibration certificates.
pub const DEFAULT_SIGNATURES: [(u32, u32, u32); 4] = [(1, 1, 1), (2, 1, 2), (3, 5, 3), (4, 3, 6)];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SurfaceInvariants {
    #[serde(rename = "K2")]
    pub k2: i64,
    pub euler: i64,
    pub chi: i64,
    pub tau: i64,
    pub irregularity: i64,
    pub pg: i64,
    pub h11: i64,
}

impl SurfaceInvariants {
    /// Noether, signature, `χ = 1 − q + p_g` and `τ = 2p_g + 2 − h^{1,1}`.
    pub fn consistency(&self) -> [bool; 4] {
        [
            12 * self.chi == self.k2 + self.euler,
            3 * self.tau == self.k2 - 2 * self.euler,
            self.chi == 1 - self.irregularity + self.pg,
            self.tau == 2 * self.pg + 2 - self.h11,
        ]
    }
}

pub fn surface_invariants(r: u32) -> Result<SurfaceInvariants> {
    if r == 0 {
        return Err(Error::InvalidArgument("r must be positive".into()));
    }
    let r = r as i64;
    let s = (r - 1) * (r - 1);
    Ok(SurfaceInvariants {
        k2: 16 * s,
        euler: 24 + 8 * s,
        chi: 2 + 2 * s,
        tau: -16,
        irregularity: 4 * (r - 1),
        pg: 1 + 2 * (r * r - 1),
        // forced by τ = 2p_g + 2 − h^{1,1}
        h11: 20 + 4 * (r * r - 1),
    })
}

/// Square roots `(Λ1, Λ2)` of the two curve moduli.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModuliPoint {
    pub lambda1: C64,
    pub lambda2: C64,
}

const LOCUS_TOL: f64 = 1e-12;

impl ModuliPoint {
    /// Checks the generic locus `Λi ∉ {0, ±1}`, `Λ1Λ2 ≠ ±1`, `Λ1 ≠ ±Λ2`.
    pub fn new(lambda1: C64, lambda2: C64) -> Result<Self> {
        let bad = |z: C64, what: &str| -> Result<()> {
            if !(z.re.is_finite() && z.im.is_finite()) {
                return Err(Error::NonFinite(what.into()));
            }
            if z.norm() < LOCUS_TOL {
                return Err(Error::SingularLocus(format!("{what} = 0")));
            }
            Ok(())
        };
        for (z, n) in [(lambda1, "Λ1"), (lambda2, "Λ2")] {
            bad(z, n)?;
            bad(z - 1.0, &format!("{n} − 1"))?;
            bad(z + 1.0, &format!("{n} + 1"))?;
        }
        let pr = lambda1 * lambda2;
        bad(pr - 1.0, "Λ1Λ2 − 1")?;
        bad(pr + 1.0, "Λ1Λ2 + 1")?;
        bad(lambda1 - lambda2, "Λ1 − Λ2")?;
        bad(lambda1 + lambda2, "Λ1 + Λ2")?;
        Ok(ModuliPoint { lambda1, lambda2 })
    }

    pub fn real(l1: f64, l2: f64) -> Result<Self> {
        Self::new(C64::new(l1, 0.0), C64::new(l2, 0.0))
    }

    pub fn lambdas(&self) -> (C64, C64) {
        (self.lambda1 * self.lambda1, self.lambda2 * self.lambda2)
    }
}

/// Periods over `π_*(γ1 × γ2)` with `γ1 ∈ {a_k, b_k}` on `C1` and
/// `γ2 ∈ {a_l, b_l}` on `C2`; `which` = 1..4 in the order aa, ab, ba, bb.
pub fn kummer_period(
    sig: &CurveSignature,
    mp: &ModuliPoint,
    k: u32,
    l: u32,
    which: u8,
) -> Result<C64> {
    let sig = validate_signature(sig.r, sig.p, sig.q)?;
    let kmax = (sig.r - 1).max(1);
    for (n, v) in [("k", k), ("l", l)] {
        if v == 0 || v > kmax {
            return Err(Error::InvalidArgument(format!(
                "{n} must lie in 1..={kmax}, got {v}"
            )));
        }
    }
    let (c1, c2) = match which {
        1 => (Cycle::A, Cycle::A),
        2 => (Cycle::A, Cycle::B),
        3 => (Cycle::B, Cycle::A),
        4 => (Cycle::B, Cycle::B),
        _ => {
            return Err(Error::InvalidArgument(format!(
                "which must be 1..4, got {which}"
            )))
        }
    };
    let (l1, l2) = mp.lambdas();
    Ok(period_closed(&sig, c1, k, l1)? * period_closed(&sig.dual(), c2, l, l2)?)
}

/// `F1·F4 − F2·F3`.
pub fn quadratic_relation_residual(
    sig: &CurveSignature,
    mp: &ModuliPoint,
    k: u32,
    l: u32,
) -> Result<C64> {
    let f: Vec<C64> = (1..=4)
        .map(|w| kummer_period(sig, mp, k, l, w))
        .collect::<Result<_>>()?;
    Ok(f[0] * f[3] - f[1] * f[2])
}

/// `A = (Λ1+Λ2)²/(4Λ1Λ2)`, `B = (Λ1Λ2+1)²/(4Λ1Λ2)`.
pub fn moduli_ab<S: Scalar>(l1: &S, l2: &S) -> (S, S) {
    let one = S::from_i64(1);
    let d = S::from_i64(4) * l1.clone() * l2.clone();
    let a = (l1.clone() + l2.clone()).powi(2) / d.clone();
    let b = (l1.clone() * l2.clone() + one).powi(2) / d;
    (a, b)
}

/// `A = (Λ1Λ2+1)²/((Λ1²−1)(Λ2²−1))`, `B = (Λ1Λ2−1)²/((Λ1²−1)(Λ2²−1))`.
pub fn moduli_ab_j6<S: Scalar>(l1: &S, l2: &S) -> (S, S) {
    let one = S::from_i64(1);
    let d = (l1.clone().powi(2) - one.clone()) * (l2.clone().powi(2) - one.clone());
    let p = l1.clone() * l2.clone();
    (
        (p.clone() + one.clone()).powi(2) / d.clone(),
        (p - one).powi(2) / d,
    )
}

#[allow(non_snake_case)]
pub fn moduli_AB(mp: &ModuliPoint) -> (C64, C64) {
    moduli_ab(&mp.lambda1, &mp.lambda2)
}

#[allow(non_snake_case)]
pub fn moduli_AB_j6(mp: &ModuliPoint) -> (C64, C64) {
    moduli_ab_j6(&mp.lambda1, &mp.lambda2)
}

/// `2^{2−2p/r} Λ1^{3/2−p/2r−q/2r} Λ2^{1/2−p/2r+q/2r} / (Λ1²−1)^{1−p/r}` on
/// principal branches.
pub fn two_form_scale(sig: &CurveSignature, mp: &ModuliPoint) -> Result<C64> {
    let (r, p, q) = (sig.r as f64, sig.p as f64, sig.q as f64);
    let (l1, l2) = (mp.lambda1, mp.lambda2);
    let d = l1 * l1 - 1.0;
    if d.norm() < LOCUS_TOL {
        return Err(Error::SingularLocus("Λ1² = 1".into()));
    }
    let s = C64::new(2f64.powf(2.0 - 2.0 * p / r), 0.0)
        * cpowf(l1, 1.5 - p / (2.0 * r) - q / (2.0 * r))
        * cpowf(l2, 0.5 - p / (2.0 * r) + q / (2.0 * r))
        / cpowf(d, 1.0 - p / r);
    crate::numerics::finite(s, "two_form_scale")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, re};
    use crate::ratfunc::{Expr, FactorCtx};
    use num_rational::BigRational;

    fn sig(r: u32, p: u32, q: u32) -> CurveSignature {
        validate_signature(r, p, q).unwrap()
    }

    #[test]
    fn invariants() {
        let t = |i: SurfaceInvariants| (i.k2, i.euler, i.chi, i.tau, i.irregularity, i.pg, i.h11);
        assert_eq!(t(surface_invariants(1).unwrap()), (0, 24, 2, -16, 0, 1, 20));
        assert_eq!(
            t(surface_invariants(2).unwrap()),
            (16, 32, 4, -16, 4, 7, 32)
        );
        assert_eq!(
            t(surface_invariants(3).unwrap()),
            (64, 56, 10, -16, 8, 17, 52)
        );
        for r in 1..=10 {
            assert_eq!(surface_invariants(r).unwrap().consistency(), [true; 4]);
        }
        assert!(surface_invariants(0).is_err());
    }

    #[test]
    fn quadratic_relation() {
        let mp = ModuliPoint::real(0.4, 0.3).unwrap();
        let s = sig(2, 1, 2);
        let res = quadratic_relation_residual(&s, &mp, 1, 1).unwrap();
        assert!(res.norm() < 1e-10, "{res}");
        let f1 = kummer_period(&s, &mp, 1, 1, 1).unwrap();
        let direct = period_closed(&s, Cycle::A, 1, re(0.16)).unwrap()
            * period_closed(&s.dual(), Cycle::A, 1, re(0.09)).unwrap();
        assert_eq!(f1, direct);
        assert!(kummer_period(&s, &mp, 2, 1, 1).is_err());
        assert!(kummer_period(&s, &mp, 1, 1, 5).is_err());
    }

    #[test]
    fn moduli_point_locus() {
        assert!(ModuliPoint::real(0.5, 0.5).is_err());
        assert!(ModuliPoint::real(0.5, 2.0).is_err());
        assert!(ModuliPoint::real(1.0, 0.3).is_err());
        assert!(ModuliPoint::new(c(0.2, 0.1), c(0.4, -0.3)).is_ok());
    }

    #[test]
    fn moduli_maps() {
        let q = |n: i64, d: i64| BigRational::new(n.into(), d.into());
        let ab = moduli_ab(&Expr::rat(1, 3), &Expr::rat(1, 2));
        assert_eq!(ab.0.as_const().unwrap(), &q(25, 24));
        assert_eq!(ab.1.as_const().unwrap(), &q(49, 24));
        let ab6 = moduli_ab_j6(&Expr::rat(1, 3), &Expr::rat(1, 2));
        assert_eq!(ab6.0.as_const().unwrap(), &q(49, 24));
        let (a, _) = moduli_ab(&re(0.37), &re(0.37));
        assert!((a - 1.0).norm() < 1e-15);

        let (l1, l2) = (Expr::var("L1"), Expr::var("L2"));
        let mut ctx = FactorCtx::new(&["L1", "L2"]);
        for s in [l1.clone(), l2.clone(), &l1 - 1, &l1 + 1, &l2 - 1, &l2 + 1] {
            ctx.seed(&s).unwrap();
        }
        // Λ2 ↦ 1/Λ2 exchanges A and B
        let (a, b) = moduli_ab(&l1, &l2);
        let (a2, b2) = moduli_ab(&l1, &l2.inv());
        assert!(ctx.difference(&a, &b2).unwrap().is_ok());
        assert!(ctx.difference(&b, &a2).unwrap().is_ok());
        let (a6, b6) = moduli_ab_j6(&l1, &l2);
        let want = Expr::int(4) * &l1 * &l2 / ((l1.pow(2) - 1) * (l2.pow(2) - 1));
        assert!(ctx.difference(&(&a6 - &b6), &want).unwrap().is_ok());
        let (a6n, b6n) = moduli_ab_j6(&(-&l1), &l2);
        assert!(ctx.difference(&a6, &b6n).unwrap().is_ok());
        assert!(ctx.difference(&b6, &a6n).unwrap().is_ok());
    }

    #[test]
    fn two_form_scale_values() {
        let s = sig(1, 1, 1);
        let mp = ModuliPoint::real(0.3, 0.6).unwrap();
        let v = two_form_scale(&s, &mp).unwrap();
        assert!((v - (0.18f64).sqrt()).norm() < 1e-14);
        let s = sig(2, 1, 2);
        let v = two_form_scale(&s, &ModuliPoint::real(0.2, 0.7).unwrap()).unwrap();
        assert!(v.norm() > 0.0 && v.norm().is_finite());
    }
}
