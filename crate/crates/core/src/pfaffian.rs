//! Pfaffian systems of F2 and of 2F1 ⊗ 2F1, the gauge matrix relating them
//! under the moduli map `T`, and numeric and exact checks of that relation.
//!
//! Solution vectors are ordered `(F, θ1 F, θ2 F, θ1 θ2 F)` with `θi` the
//! Euler operator in the i-th coordinate.

use std::collections::HashMap;
use std::sync::OnceLock;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{cpow, re, Scalar, C64};
use crate::ratfunc::{BigQ, Expr, FactorCtx};

const LOCUS_TOL: f64 = 1e-8;

pub type Mat<S> = Vec<Vec<S>>;

fn zeros<S: Scalar>(n: usize) -> Mat<S> {
    vec![vec![S::from_i64(0); n]; n]
}

fn mat_mul<S: Scalar>(a: &Mat<S>, b: &Mat<S>) -> Mat<S> {
    let n = a.len();
    let mut out = zeros(n);
    for i in 0..n {
        for k in 0..n {
            let mut acc: Option<S> = None;
            for m in 0..n {
                let t = a[i][m].clone() * b[m][k].clone();
                acc = Some(match acc {
                    None => t,
                    Some(s) => s + t,
                });
            }
            out[i][k] = acc.unwrap_or_else(|| S::from_i64(0));
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionForm {
    pub dim: usize,
    pub coeff: Vec<DMatrix<C64>>,
    pub coords: Vec<String>,
}

impl ConnectionForm {
    fn from_entries(m: Vec<Mat<C64>>, coords: &[&str]) -> Self {
        let dim = m[0].len();
        let coeff = m
            .into_iter()
            .map(|e| DMatrix::from_fn(dim, dim, |i, j| e[i][j]))
            .collect();
        ConnectionForm {
            dim,
            coeff,
            coords: coords.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// Contract with a tangent vector.
    pub fn apply(&self, v: &[C64]) -> DMatrix<C64> {
        let mut out = DMatrix::zeros(self.dim, self.dim);
        for (m, x) in self.coeff.iter().zip(v) {
            out += m * *x;
        }
        out
    }
}

/// `α = β1 + β2 − 1/2`.
pub fn alpha_of<S: Scalar>(b1: &S, b2: &S) -> S {
    b1.clone() + b2.clone() - S::ratio(1, 2)
}

/// Coefficients of `dz1` and `dz2` of the F2 connection.
pub fn f2_connection<S: Scalar>(b1: &S, b2: &S, z1: &S, z2: &S) -> [Mat<S>; 2] {
    let one = || S::from_i64(1);
    let n = |k: i64| S::from_i64(k);
    let a = alpha_of(b1, b2);
    let (b1, b2, z1, z2) = (b1.clone(), b2.clone(), z1.clone(), z2.clone());
    let z1m = z1.clone() - one();
    let z2m = z2.clone() - one();
    let d = z1.clone() + z2.clone() - one();
    let mut w1 = zeros::<S>(4);
    let mut w2 = zeros::<S>(4);
    w1[0][1] = one() / z1.clone();
    w2[0][2] = one() / z2.clone();

    w1[1][0] = -(a.clone() * b1.clone()) / z1m.clone();
    w1[1][1] = -((a.clone() + b1.clone()) * z1.clone() - n(2) * b1.clone() + one())
        / (z1.clone() * z1m.clone());
    w1[1][2] = -b1.clone() / z1m.clone();
    w1[1][3] = -one() / z1m.clone();
    w2[1][3] = one() / z2.clone();

    w2[2][0] = -(a.clone() * b2.clone()) / z2m.clone();
    w2[2][1] = -b2.clone() / z2m.clone();
    w2[2][2] = -((a.clone() + b2.clone()) * z2.clone() - n(2) * b2.clone() + one())
        / (z2.clone() * z2m.clone());
    w2[2][3] = -one() / z2m.clone();
    w1[2][3] = one() / z1.clone();

    let ab = a.clone() * b1.clone() * b2.clone();
    w1[3][0] = ab.clone() * z2.clone() / (z1m.clone() * d.clone());
    w2[3][0] = ab * z1.clone() / (z2m.clone() * d.clone());
    w1[3][1] =
        b2.clone() * (a.clone() - b1.clone() + one()) * z2.clone() / (z1m.clone() * d.clone());
    w2[3][1] = -(b2.clone()
        * ((a.clone() - n(2) * b1.clone() + one()) * z2.clone()
            - b1.clone() * z1.clone()
            - a.clone()
            + n(2) * b1.clone()
            - one()))
        / (z2m.clone() * d.clone());
    w2[3][2] =
        b1.clone() * (a.clone() - b2.clone() + one()) * z1.clone() / (z2m.clone() * d.clone());
    w1[3][2] = -(b1.clone()
        * ((a.clone() - n(2) * b2.clone() + one()) * z1.clone()
            - b2.clone() * z2.clone()
            - a.clone()
            + n(2) * b2.clone()
            - one()))
        / (z1m.clone() * d.clone());
    w1[3][3] = -((a.clone() + b1.clone() - n(2) * b2.clone() + one()) * z1.clone() * z1.clone()
        + ((n(2) * b1.clone() - b2.clone() - one()) * z2.clone() - a.clone() - n(3) * b1.clone()
            + n(2) * b2.clone())
            * z1.clone()
        + (one() - n(2) * b1.clone()) * z2.clone()
        + n(2) * b1.clone()
        - one())
        / (z1.clone() * z1m.clone() * d.clone());
    w2[3][3] = -((a.clone() + b2.clone() - n(2) * b1.clone() + one()) * z2.clone() * z2.clone()
        + ((n(2) * b2.clone() - b1.clone() - one()) * z1.clone() - a.clone() - n(3) * b2.clone()
            + n(2) * b1.clone())
            * z2.clone()
        + (one() - n(2) * b2.clone()) * z1.clone()
        + n(2) * b2.clone()
        - one())
        / (z2.clone() * z2m * d);
    [w1, w2]
}

/// Coefficient of `dΛ` of the 2F1 connection for
/// `(f, θ f)`, `f = 2F1(α, β2; β1 + 1/2; Λ²)`.
pub fn gauss_connection<S: Scalar>(b1: &S, b2: &S, l: &S) -> Mat<S> {
    let one = || S::from_i64(1);
    let n = |k: i64| S::from_i64(k);
    let l2m = l.clone() * l.clone() - one();
    let mut m = zeros::<S>(2);
    m[0][1] = one() / l.clone();
    m[1][0] = -(n(2) * (n(2) * b1.clone() + n(2) * b2.clone() - one()) * b2.clone() * l.clone())
        / l2m.clone();
    m[1][1] = -((n(2) * b1.clone() + n(4) * b2.clone() - one()) * l.clone() * l.clone()
        - n(2) * b1.clone()
        + one())
        / (l.clone() * l2m);
    m
}

/// Outer tensor product connection `Ω ⊠ 1 + 1 ⊠ Ω`, in the solution basis
/// `(f1 f2, θf1 f2, f1 θf2, θf1 θf2)`.
pub fn tensor_connection<S: Scalar>(b1: &S, b2: &S, l1: &S, l2: &S) -> [Mat<S>; 2] {
    let o1 = gauss_connection(b1, b2, l1);
    let o2 = gauss_connection(b1, b2, l2);
    let mut k1 = zeros::<S>(4);
    let mut k2 = zeros::<S>(4);
    // index = i1 + 2 i2
    for i1 in 0..2 {
        for i2 in 0..2 {
            for j in 0..2 {
                k1[i1 + 2 * i2][j + 2 * i2] = o1[i1][j].clone();
                k2[i1 + 2 * i2][i1 + 2 * j] = o2[i2][j].clone();
            }
        }
    }
    [k1, k2]
}

/// Tensor connection with the sign of the `(4,3)` entry as in the commonly
/// quoted display: `+2(2β1+2β2−1)β2 Λ1/(Λ1²−1)`. Not flat; kept as a
/// negative control.
pub fn tensor_connection_printed<S: Scalar>(b1: &S, b2: &S, l1: &S, l2: &S) -> [Mat<S>; 2] {
    let mut k = tensor_connection(b1, b2, l1, l2);
    k[0][3][2] = -k[0][3][2].clone();
    k
}

/// Rational part `g̃` of the gauge matrix, `g = (Λ1+Λ2)^{2α} g̃`.
pub fn gauge_tilde<S: Scalar>(b1: &S, b2: &S, l1: &S, l2: &S) -> Mat<S> {
    let one = || S::from_i64(1);
    let n = |k: i64| S::from_i64(k);
    let a = alpha_of(b1, b2);
    let (b1, b2, l1, l2) = (b1.clone(), b2.clone(), l1.clone(), l2.clone());
    let c = l1.clone() * l2.clone();
    let cm = c.clone() - one();
    let cp = c.clone() + one();
    let l1s = l1.clone() * l1.clone() - one();
    let l2s = l2.clone() * l2.clone() - one();
    let dl = l1.clone() - l2.clone();
    let c2m = c.clone() * c.clone() - one();
    let mut g = zeros::<S>(4);
    g[0][0] = one();
    g[1][0] = -(n(2) * a.clone() * c.clone()) / cm.clone();
    g[1][1] = -(l2.clone() * l1s.clone()) / (cm.clone() * dl.clone());
    g[1][2] = l1.clone() * l2s.clone() / (cm.clone() * dl.clone());
    let ss = l1s.clone() * l2s.clone();
    g[2][0] = a.clone() * ss.clone() / c2m.clone();
    g[2][1] = ss.clone() / (n(2) * c2m.clone());
    g[2][2] = ss.clone() / (n(2) * c2m);
    let cm3 = cm.clone().powi(3);
    g[3][0] = -(a.clone()
        * c.clone()
        * ss.clone()
        * ((n(2) * b1.clone() - one()) * c.clone() - n(2) * b1.clone() - one()))
        / (cp.clone() * cm3.clone());
    let inner = |x: &S| {
        n(2) * a.clone() * c.clone() * c.clone()
            - ((n(2) * b1.clone() - one()) * x.clone() * x.clone() + n(2) * b1.clone() + one())
                * c.clone()
            + (n(2) * b1.clone() + one()) * x.clone() * x.clone()
            - n(2) * b2.clone()
    };
    g[3][1] = l2.clone() * ss.clone() * inner(&l1) / (n(2) * cm3.clone() * cp.clone() * dl.clone());
    g[3][2] = -(l1.clone() * ss.clone() * inner(&l2)) / (n(2) * cm3 * cp * dl);
    g[3][3] = -ss / (n(2) * cm.powi(2));
    g
}

/// Moduli map `(z1, z2) = (4Λ1Λ2/(Λ1+Λ2)², −(Λ1²−1)(Λ2²−1)/(Λ1+Λ2)²)`.
pub fn moduli_map<S: Scalar>(l1: &S, l2: &S) -> (S, S) {
    let one = || S::from_i64(1);
    let s2 = (l1.clone() + l2.clone()).powi(2);
    let z1 = S::from_i64(4) * l1.clone() * l2.clone() / s2.clone();
    let z2 = -((l1.clone() * l1.clone() - one()) * (l2.clone() * l2.clone() - one())) / s2;
    (z1, z2)
}

/// Jacobian `∂(z1,z2)/∂(Λ1,Λ2)` of the moduli map in closed form; rows
/// index `z`, columns index `Λ`.
pub fn moduli_jacobian<S: Scalar>(l1: &S, l2: &S) -> [[S; 2]; 2] {
    let one = || S::from_i64(1);
    let n = |k: i64| S::from_i64(k);
    let s = l1.clone() + l2.clone();
    let s3 = s.clone().powi(3);
    // d/dΛ1 of 4Λ1Λ2/s² = 4Λ2(Λ2−Λ1)/s³
    let dz1_1 = n(4) * l2.clone() * (l2.clone() - l1.clone()) / s3.clone();
    let dz1_2 = n(4) * l1.clone() * (l1.clone() - l2.clone()) / s3.clone();
    // d/dΛ1 of −(Λ1²−1)(Λ2²−1)/s² = −2(Λ2²−1)(Λ1Λ2+1)/s³
    let dz2_1 = -(n(2) * (l2.clone() * l2.clone() - one()) * (l1.clone() * l2.clone() + one()))
        / s3.clone();
    let dz2_2 =
        -(n(2) * (l1.clone() * l1.clone() - one()) * (l1.clone() * l2.clone() + one())) / s3;
    [[dz1_1, dz1_2], [dz2_1, dz2_2]]
}

/// Pull back of the F2 connection along the moduli map; coefficients of dΛ1
/// and dΛ2.
pub fn pulled_back_f2<S: Scalar>(b1: &S, b2: &S, l1: &S, l2: &S) -> [Mat<S>; 2] {
    let (z1, z2) = moduli_map(l1, l2);
    let [w1, w2] = f2_connection(b1, b2, &z1, &z2);
    let jac = moduli_jacobian(l1, l2);
    let mut out = [zeros::<S>(4), zeros::<S>(4)];
    for (j, o) in out.iter_mut().enumerate() {
        for r in 0..4 {
            for c in 0..4 {
                o[r][c] =
                    w1[r][c].clone() * jac[0][j].clone() + w2[r][c].clone() * jac[1][j].clone();
            }
        }
    }
    out
}

fn near(x: C64, y: f64) -> bool {
    (x - y).norm() < LOCUS_TOL
}

fn check_f2_point(z1: C64, z2: C64) -> Result<()> {
    for (v, label) in [
        (z1, "z1 = 0"),
        (z1 - 1.0, "z1 = 1"),
        (z2, "z2 = 0"),
        (z2 - 1.0, "z2 = 1"),
        (z1 + z2 - 1.0, "z1 + z2 = 1"),
    ] {
        if v.norm() < LOCUS_TOL {
            return Err(Error::SingularLocus(format!(
                "({z1}, {z2}) lies on {label}"
            )));
        }
    }
    Ok(())
}

fn check_lambda(l: C64) -> Result<()> {
    if near(l, 0.0) || near(l, 1.0) || near(l, -1.0) {
        return Err(Error::SingularLocus(format!("Λ = {l} is in {{0, ±1}}")));
    }
    Ok(())
}

fn check_gauge_point(l1: C64, l2: C64) -> Result<()> {
    check_lambda(l1)?;
    check_lambda(l2)?;
    let c = l1 * l2;
    for (v, label) in [
        (c - 1.0, "Λ1Λ2 = 1"),
        (c + 1.0, "Λ1Λ2 = −1"),
        (l1 - l2, "Λ1 = Λ2"),
        (l1 + l2, "Λ1 = −Λ2"),
    ] {
        if v.norm() < LOCUS_TOL {
            return Err(Error::SingularLocus(format!(
                "({l1}, {l2}) lies on {label}"
            )));
        }
    }
    Ok(())
}

pub fn omega_f2_at(b1: f64, b2: f64, z1: C64, z2: C64) -> Result<ConnectionForm> {
    check_f2_point(z1, z2)?;
    let m = f2_connection(&re(b1), &re(b2), &z1, &z2);
    Ok(ConnectionForm::from_entries(m.to_vec(), &["z1", "z2"]))
}

pub fn omega_2f1_at(b1: f64, b2: f64, l: C64) -> Result<ConnectionForm> {
    check_lambda(l)?;
    Ok(ConnectionForm::from_entries(
        vec![gauss_connection(&re(b1), &re(b2), &l)],
        &["Λ"],
    ))
}

pub fn omega_tensor_at(b1: f64, b2: f64, l1: C64, l2: C64) -> Result<ConnectionForm> {
    check_lambda(l1)?;
    check_lambda(l2)?;
    let m = tensor_connection(&re(b1), &re(b2), &l1, &l2);
    Ok(ConnectionForm::from_entries(m.to_vec(), &["Λ1", "Λ2"]))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaugeEval {
    pub g: DMatrix<C64>,
    /// `g̃ = (Λ1+Λ2)^{−2α} g`
    pub g_tilde: DMatrix<C64>,
    /// coefficients of dΛ1, dΛ2 in `d log (Λ1+Λ2)^{2α}`
    pub dlog_extra: [C64; 2],
}

pub fn gauge_at(b1: f64, b2: f64, l1: C64, l2: C64) -> Result<GaugeEval> {
    check_gauge_point(l1, l2)?;
    let gt = gauge_tilde(&re(b1), &re(b2), &l1, &l2);
    let g_tilde = DMatrix::from_fn(4, 4, |i, j| gt[i][j]);
    let a = b1 + b2 - 0.5;
    let pre = cpow(l1 + l2, re(2.0 * a));
    let det = g_tilde.determinant();
    let scale = g_tilde.iter().map(|x| x.norm()).fold(0.0, f64::max).powi(4);
    if det.norm() <= 1e-12 * scale {
        return Err(Error::SingularLocus(format!(
            "gauge matrix is singular at ({l1}, {l2})"
        )));
    }
    let d = re(2.0 * a) / (l1 + l2);
    Ok(GaugeEval {
        g: &g_tilde * pre,
        g_tilde,
        dlog_extra: [d, d],
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModuliMap {
    pub z1: C64,
    pub z2: C64,
    /// `jacobian[i][j] = ∂z_i/∂Λ_j`
    pub jacobian: [[C64; 2]; 2],
}

pub fn moduli_map_t(l1: C64, l2: C64) -> Result<ModuliMap> {
    if (l1 + l2).norm() < LOCUS_TOL {
        return Err(Error::SingularLocus("Λ1 + Λ2 = 0".into()));
    }
    let (z1, z2) = moduli_map(&l1, &l2);
    Ok(ModuliMap {
        z1,
        z2,
        jacobian: moduli_jacobian(&l1, &l2),
    })
}

/// Symbolic `g̃` and its partial derivatives in the variables
/// `b1, b2, L1, L2`, built once.
struct GaugeSymbols {
    g: Mat<Expr>,
    dg: [Mat<Expr>; 2],
}

fn gauge_symbols() -> &'static GaugeSymbols {
    static CELL: OnceLock<GaugeSymbols> = OnceLock::new();
    CELL.get_or_init(|| {
        let (b1, b2, l1, l2) = (
            Expr::var("b1"),
            Expr::var("b2"),
            Expr::var("L1"),
            Expr::var("L2"),
        );
        let g = gauge_tilde(&b1, &b2, &l1, &l2);
        let d = |v: &str| {
            g.iter()
                .map(|row| row.iter().map(|e| e.differentiate(v)).collect())
                .collect()
        };
        GaugeSymbols {
            dg: [d("L1"), d("L2")],
            g,
        }
    })
}

/// `∂g̃/∂Λ1`, `∂g̃/∂Λ2` at a point, from the exact derivative.
pub fn gauge_tilde_derivative(b1: f64, b2: f64, l1: C64, l2: C64) -> Result<[DMatrix<C64>; 2]> {
    let sym = gauge_symbols();
    let env: HashMap<String, C64> = [("b1", re(b1)), ("b2", re(b2)), ("L1", l1), ("L2", l2)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect();
    let ev = |m: &Mat<Expr>| -> Result<DMatrix<C64>> {
        let mut out = DMatrix::zeros(4, 4);
        for i in 0..4 {
            for j in 0..4 {
                out[(i, j)] = m[i][j].eval_complex(&env)?;
            }
        }
        Ok(out)
    };
    debug_assert_eq!(sym.g.len(), 4);
    Ok([ev(&sym.dg[0])?, ev(&sym.dg[1])?])
}

fn to_dmat(m: &Mat<C64>) -> DMatrix<C64> {
    DMatrix::from_fn(m.len(), m.len(), |i, j| m[i][j])
}

/// Max-norm of `Ω⊗ − (g⁻¹ (T*Ω^{F2}) g − g⁻¹ dg)` over both coefficient
/// matrices.
pub fn decomposition_residual(b1: f64, b2: f64, l1: C64, l2: C64) -> Result<f64> {
    decomposition_residual_with(b1, b2, l1, l2, tensor_connection)
}

fn decomposition_residual_with(
    b1: f64,
    b2: f64,
    l1: C64,
    l2: C64,
    tensor: fn(&C64, &C64, &C64, &C64) -> [Mat<C64>; 2],
) -> Result<f64> {
    let gauge = gauge_at(b1, b2, l1, l2)?;
    let m = moduli_map_t(l1, l2)?;
    check_f2_point(m.z1, m.z2)?;
    let k = tensor(&re(b1), &re(b2), &l1, &l2);
    let p = pulled_back_f2(&re(b1), &re(b2), &l1, &l2);
    let dg = gauge_tilde_derivative(b1, b2, l1, l2)?;
    let ginv = gauge
        .g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularLocus("gauge matrix not invertible".into()))?;
    let gtinv = gauge
        .g_tilde
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::SingularLocus("gauge matrix not invertible".into()))?;
    let mut worst = 0.0f64;
    for j in 0..2 {
        let dlog = &gtinv * &dg[j] + DMatrix::identity(4, 4) * gauge.dlog_extra[j];
        let rhs = &ginv * to_dmat(&p[j]) * &gauge.g - dlog;
        let diff = to_dmat(&k[j]) - rhs;
        worst = worst.max(diff.iter().map(|x| x.norm()).fold(0.0, f64::max));
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EntryFailure {
    pub coord: String,
    pub row: usize,
    pub col: usize,
    pub leading_term: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionCertificate {
    pub beta1: String,
    pub beta2: String,
    pub entries_checked: usize,
    pub passed: bool,
    pub failures: Vec<EntryFailure>,
}

/// Deliberate change to one gauge entry, for negative controls.
#[derive(Debug, Clone)]
pub struct GaugePerturbation {
    pub row: usize,
    pub col: usize,
    pub delta: Expr,
}

/// Exact check of `g̃ K_j − P_j g̃ + ∂_j g̃ + 2α/(Λ1+Λ2) g̃ = 0` for
/// `j = 1, 2`, entry by entry, over `Q(Λ1, Λ2)`.
pub fn decomposition_check_exact(b1: &BigQ, b2: &BigQ) -> Result<DecompositionCertificate> {
    decomposition_check_exact_with(b1, b2, None)
}

pub fn decomposition_check_exact_with(
    b1: &BigQ,
    b2: &BigQ,
    perturb: Option<&GaugePerturbation>,
) -> Result<DecompositionCertificate> {
    let (eb1, eb2) = (Expr::constant(b1.clone()), Expr::constant(b2.clone()));
    let (l1, l2) = (Expr::var("L1"), Expr::var("L2"));
    let mut g = gauge_tilde(&eb1, &eb2, &l1, &l2);
    if let Some(p) = perturb {
        g[p.row][p.col] = &g[p.row][p.col] + &p.delta;
    }
    let k = tensor_connection(&eb1, &eb2, &l1, &l2);
    let pb = pulled_back_f2(&eb1, &eb2, &l1, &l2);
    let two_a = Expr::int(2) * alpha_of(&eb1, &eb2);
    let dlog = &two_a / &(&l1 + &l2);

    let mut ctx = FactorCtx::new(&["L1", "L2"]);
    for s in [
        l1.clone(),
        l2.clone(),
        &l1 + &l2,
        &l1 - &l2,
        &l1 - 1,
        &l1 + 1,
        &l2 - 1,
        &l2 + 1,
        &(&l1 * &l2) - 1,
        &(&l1 * &l2) + 1,
    ] {
        ctx.seed(&s)?;
    }
    let mut failures = Vec::new();
    let mut checked = 0;
    for (j, var) in ["L1", "L2"].iter().enumerate() {
        let gk = mat_mul(&g, &k[j]);
        let pg = mat_mul(&pb[j], &g);
        for r in 0..4 {
            for c in 0..4 {
                let lhs = Expr::sum(vec![
                    gk[r][c].clone(),
                    g[r][c].differentiate(var),
                    &dlog * &g[r][c],
                ]);
                checked += 1;
                if let Err(lt) = ctx.difference(&lhs, &pg[r][c])? {
                    failures.push(EntryFailure {
                        coord: format!("d{var}"),
                        row: r + 1,
                        col: c + 1,
                        leading_term: lt,
                    });
                }
            }
        }
    }
    Ok(DecompositionCertificate {
        beta1: b1.to_string(),
        beta2: b2.to_string(),
        entries_checked: checked,
        passed: failures.is_empty(),
        failures,
    })
}

/// Integrability residual `max |∂_2 M_1 − ∂_1 M_2 + [M_1, M_2]|` of a
/// connection in two coordinates, by central differences with one
/// Richardson step.
pub fn flatness_residual<F>(form: F, x: [C64; 2], h: f64) -> Result<f64>
where
    F: Fn(C64, C64) -> Result<[DMatrix<C64>; 2]>,
{
    let d = |k: usize, j: usize, h: f64| -> Result<DMatrix<C64>> {
        let (mut p, mut m) = (x, x);
        p[j] += h;
        m[j] -= h;
        Ok((form(p[0], p[1])?[k].clone() - form(m[0], m[1])?[k].clone()) / re(2.0 * h))
    };
    let rich = |k: usize, j: usize| -> Result<DMatrix<C64>> {
        let a = d(k, j, h)?;
        let b = d(k, j, h / 2.0)?;
        Ok((b * re(4.0) - a) / re(3.0))
    };
    let [m1, m2] = form(x[0], x[1])?;
    let curl = rich(0, 1)? - rich(1, 0)? + (&m1 * &m2 - &m2 * &m1);
    Ok(curl.iter().map(|z| z.norm()).fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hypergeometric::{eval_2f1, Hyp2F1Params};
    use crate::numerics::{c, ode_integrate, AffineLocus, PathSpec};
    use crate::ratfunc::bigq;
    use nalgebra::DVector;

    fn f2_form(b1: f64, b2: f64) -> impl Fn(C64, C64) -> Result<[DMatrix<C64>; 2]> {
        move |z1, z2| {
            let w = omega_f2_at(b1, b2, z1, z2)?;
            Ok([w.coeff[0].clone(), w.coeff[1].clone()])
        }
    }

    #[test]
    fn f2_connection_entries() {
        let z1 = c(0.3, 0.1);
        let w = omega_f2_at(0.3, 0.4, z1, re(0.2)).unwrap();
        assert_eq!(w.coeff[0][(0, 1)], re(1.0) / z1);
        assert!((w.coeff[1][(0, 2)] - 5.0).norm() < 1e-14);
        for j in [0, 2, 3] {
            assert_eq!(w.coeff[0][(0, j)], re(0.0));
        }
        let w = omega_f2_at(0.3, 0.4, re(2.0), re(0.2)).unwrap();
        let a = 0.3 + 0.4 - 0.5;
        assert!((w.coeff[0][(1, 0)] + a * 0.3).norm() < 1e-15);
        assert!(matches!(
            omega_f2_at(0.3, 0.4, re(0.5), re(0.5)),
            Err(Error::SingularLocus(_))
        ));
    }

    #[test]
    fn f2_connection_is_flat() {
        let r = flatness_residual(f2_form(0.3, 0.4), [c(0.3, 0.1), re(0.2)], 1e-5).unwrap();
        assert!(r < 1e-9, "{r}");
        let r = flatness_residual(f2_form(0.15, 0.55), [c(-0.4, 0.3), c(0.7, -0.2)], 1e-5).unwrap();
        assert!(r < 1e-6, "{r}");
    }

    /// `(F, θ1F, θ2F, θ1θ2F)` by direct double summation.
    fn f2_vector(b1: f64, b2: f64, z1: C64, z2: C64) -> DVector<C64> {
        let a = b1 + b2 - 0.5;
        let (g1, g2) = (2.0 * b1, 2.0 * b2);
        let mut v = [re(0.0); 4];
        let mut row = re(1.0);
        for m in 0..120 {
            let mf = m as f64;
            let mut t = row;
            for n in 0..120 {
                let nf = n as f64;
                v[0] += t;
                v[1] += t * mf;
                v[2] += t * nf;
                v[3] += t * mf * nf;
                t *= (a + mf + nf) * (b2 + nf) / ((g2 + nf) * (nf + 1.0)) * z2;
            }
            row *= (a + mf) * (b1 + mf) / ((g1 + mf) * (mf + 1.0)) * z1;
        }
        DVector::from_vec(v.to_vec())
    }

    #[test]
    fn f2_solution_vector_is_horizontal() {
        let (b1, b2) = (0.35, 0.45);
        let (z1, z2) = (re(0.2), c(0.25, 0.1));
        let w = omega_f2_at(b1, b2, z1, z2).unwrap();
        let v = f2_vector(b1, b2, z1, z2);
        let h = 1e-5;
        let d1 = (f2_vector(b1, b2, z1 + h, z2) - f2_vector(b1, b2, z1 - h, z2)) / re(2.0 * h);
        let d2 = (f2_vector(b1, b2, z1, z2 + h) - f2_vector(b1, b2, z1, z2 - h)) / re(2.0 * h);
        assert!((d1 - &w.coeff[0] * &v).norm() < 1e-8);
        assert!((d2 - &w.coeff[1] * &v).norm() < 1e-8);
    }

    #[test]
    fn gauss_connection_transport() {
        let (b1, b2) = (0.3, 0.45);
        let a = b1 + b2 - 0.5;
        let p = Hyp2F1Params::real(a, b2, b1 + 0.5).unwrap();
        let q = Hyp2F1Params::real(a + 1.0, b2 + 1.0, b1 + 1.5).unwrap();
        // θ_Λ f = 2Λ² f'(Λ²)
        let vec_at = |l: f64| {
            let z = re(l * l);
            let f = eval_2f1(&p, z).unwrap();
            let df = eval_2f1(&q, z).unwrap() * (a * b2 / (b1 + 0.5));
            DVector::from_vec(vec![f, 2.0 * z * df])
        };
        let path = PathSpec::segment(
            re(0.1),
            re(0.4),
            1e-3,
            vec![
                AffineLocus::new(&[1.0], 0.0, "Λ = 0"),
                AffineLocus::new(&[1.0], -1.0, "Λ = 1"),
                AffineLocus::new(&[1.0], 1.0, "Λ = −1"),
            ],
        );
        let y = ode_integrate(
            |x| Ok(vec![omega_2f1_at(b1, b2, x[0])?.coeff[0].clone()]),
            &path,
            &vec_at(0.1),
        )
        .unwrap();
        assert!((y - vec_at(0.4)).norm() < 1e-9);
    }

    #[test]
    fn gauss_entries_by_hand() {
        let w = omega_2f1_at(0.25, 0.375, re(0.3)).unwrap();
        let m = &w.coeff[0];
        assert!((m[(0, 1)] - 1.0 / 0.3).norm() < 1e-15);
        let e10 = -2.0 * (0.5 + 0.75 - 1.0) * 0.375 * 0.3 / (0.09 - 1.0);
        let e11 = -((0.5 + 1.5 - 1.0) * 0.09 - 0.5 + 1.0) / (0.3 * (0.09 - 1.0));
        assert!((m[(1, 0)] - e10).norm() < 1e-15);
        assert!((m[(1, 1)] - e11).norm() < 1e-14);
    }

    #[test]
    fn tensor_assembly() {
        let (b1, b2, l1, l2) = (0.3, 0.45, re(0.2), re(0.5));
        let t = omega_tensor_at(b1, b2, l1, l2).unwrap();
        let o1 = omega_2f1_at(b1, b2, l1).unwrap().coeff[0].clone();
        let o2 = omega_2f1_at(b1, b2, l2).unwrap().coeff[0].clone();
        let id = DMatrix::<C64>::identity(2, 2);
        // nalgebra's kron puts the first factor's index major: (i1, i2) -> 2 i1 + i2
        let perm = DMatrix::from_fn(4, 4, |i, j| {
            let (a, b) = (i % 2, i / 2);
            re(if j == 2 * a + b { 1.0 } else { 0.0 })
        });
        let k1 = &perm * o1.kronecker(&id) * perm.transpose();
        let k2 = &perm * id.kronecker(&o2) * perm.transpose();
        assert_eq!((&t.coeff[0] - k1).norm(), 0.0);
        assert_eq!((&t.coeff[1] - k2).norm(), 0.0);
        // (4,4) carries both differentials
        assert!(t.coeff[0][(3, 3)].norm() > 0.0 && t.coeff[1][(3, 3)].norm() > 0.0);
    }

    #[test]
    fn tensor_solution_is_horizontal() {
        let (b1, b2) = (0.3, 0.45);
        let a = b1 + b2 - 0.5;
        let p = Hyp2F1Params::real(a, b2, b1 + 0.5).unwrap();
        let q = Hyp2F1Params::real(a + 1.0, b2 + 1.0, b1 + 1.5).unwrap();
        let fv = |l: f64| {
            let z = re(l * l);
            (
                eval_2f1(&p, z).unwrap(),
                2.0 * z * eval_2f1(&q, z).unwrap() * (a * b2 / (b1 + 0.5)),
            )
        };
        let h_at = |l1: f64, l2: f64| {
            let ((f1, t1), (f2, t2)) = (fv(l1), fv(l2));
            DVector::from_vec(vec![f1 * f2, t1 * f2, f1 * t2, t1 * t2])
        };
        let (l1, l2, h) = (0.2, 0.3, 1e-5);
        let t = omega_tensor_at(b1, b2, re(l1), re(l2)).unwrap();
        let hv = h_at(l1, l2);
        let d1 = (h_at(l1 + h, l2) - h_at(l1 - h, l2)) / re(2.0 * h);
        let d2 = (h_at(l1, l2 + h) - h_at(l1, l2 - h)) / re(2.0 * h);
        assert!((d1 - &t.coeff[0] * &hv).norm() < 1e-8);
        assert!((d2 - &t.coeff[1] * &hv).norm() < 1e-8);
    }

    #[test]
    fn printed_tensor_sign_breaks_flatness() {
        let (b1, b2) = (0.3, 0.45);
        let good = |l1: C64, l2: C64| {
            let m = tensor_connection(&re(b1), &re(b2), &l1, &l2);
            Ok([to_dmat(&m[0]), to_dmat(&m[1])])
        };
        let bad = |l1: C64, l2: C64| {
            let m = tensor_connection_printed(&re(b1), &re(b2), &l1, &l2);
            Ok([to_dmat(&m[0]), to_dmat(&m[1])])
        };
        let x = [re(0.2), re(0.5)];
        assert!(flatness_residual(good, x, 1e-5).unwrap() < 1e-8);
        assert!(flatness_residual(bad, x, 1e-5).unwrap() > 1e-2);
        let r = decomposition_residual_with(b1, b2, x[0], x[1], tensor_connection_printed).unwrap();
        assert!(r > 1e-2);
    }

    #[test]
    fn gauge_entries() {
        let (b1, b2) = (0.3, 0.45);
        let a = b1 + b2 - 0.5;
        let g = gauge_at(b1, b2, re(0.2), re(0.3)).unwrap();
        assert!((g.g[(0, 0)] - 0.5f64.powf(2.0 * a)).norm() < 1e-15);
        for j in 1..4 {
            assert_eq!(g.g[(0, j)], re(0.0));
        }
        assert!(gauge_at(b1, b2, re(0.3), re(0.3)).is_err());
    }

    #[test]
    fn gauge_derivative_matches_differences() {
        let (b1, b2, l1, l2) = (0.25, 0.375, c(0.3, 0.1), re(0.45));
        let dg = gauge_tilde_derivative(b1, b2, l1, l2).unwrap();
        let gt = |x: C64, y: C64| to_dmat(&gauge_tilde(&re(b1), &re(b2), &x, &y));
        let h = 1e-6;
        let fd1 = (gt(l1 + h, l2) - gt(l1 - h, l2)) / re(2.0 * h);
        let fd2 = (gt(l1, l2 + h) - gt(l1, l2 - h)) / re(2.0 * h);
        assert!((fd1 - &dg[0]).norm() < 1e-6);
        assert!((fd2 - &dg[1]).norm() < 1e-6);
    }

    #[test]
    fn moduli_map_values() {
        let m = moduli_map_t(re(1.0 / 3.0), re(0.5)).unwrap();
        assert!((m.z1 - 24.0 / 25.0).norm() < 1e-15);
        let (ez1, ez2) = moduli_map(&Expr::rat(1, 3), &Expr::rat(1, 2));
        assert_eq!(ez1.as_const().unwrap(), &bigq(24, 25));
        // (1/9 − 1)(1/4 − 1)/(25/36) → −(−8/9)(−3/4)·36/25 = −24/25
        assert_eq!(ez2.as_const().unwrap(), &bigq(-24, 25));
        let l = 0.37;
        let m = moduli_map_t(re(l), re(l)).unwrap();
        assert!((m.z1 - 1.0).norm() < 1e-15);
        assert!((m.z2 + (l * l - 1.0f64).powi(2) / (4.0 * l * l)).norm() < 1e-15);
        // Jacobian against the exact derivative of the map
        let (x, y) = (Expr::var("L1"), Expr::var("L2"));
        let (t1, t2) = moduli_map(&x, &y);
        let jac = moduli_jacobian(&x, &y);
        let mut ctx = FactorCtx::new(&["L1", "L2"]);
        for (i, t) in [t1, t2].iter().enumerate() {
            for (j, v) in ["L1", "L2"].iter().enumerate() {
                assert!(ctx
                    .difference(&t.differentiate(v), &jac[i][j])
                    .unwrap()
                    .is_ok());
            }
        }
    }

    #[test]
    fn residual_examples() {
        for (b1, b2, l1, l2) in [
            (0.5, 0.5, re(0.2), re(0.5)),
            (0.25, 0.375, c(0.3, 0.1), re(0.45)),
            (0.75, 0.125, re(-0.2), re(0.6)),
        ] {
            let r = decomposition_residual(b1, b2, l1, l2).unwrap();
            assert!(r <= 1e-9, "({b1},{b2}) at ({l1},{l2}): {r}");
        }
    }

    #[test]
    fn exact_certificates() {
        for (b1, b2) in [(bigq(1, 2), bigq(1, 2)), (bigq(1, 4), bigq(3, 8))] {
            let cert = decomposition_check_exact(&b1, &b2).unwrap();
            assert!(cert.passed, "{:?}", cert.failures);
            assert_eq!(cert.entries_checked, 32);
        }
        let bad = GaugePerturbation {
            row: 3,
            col: 1,
            delta: Expr::var("L1"),
        };
        let cert = decomposition_check_exact_with(&bigq(1, 2), &bigq(1, 2), Some(&bad)).unwrap();
        assert!(!cert.passed);
        assert!(!cert.failures[0].leading_term.is_empty());
    }

    #[test]
    fn f2_transport_around_loop() {
        let (b1, b2) = (0.35, 0.45);
        let z0 = [re(0.2), re(0.3)];
        let y0 = f2_vector(b1, b2, z0[0], z0[1]);
        let loc = vec![
            AffineLocus::new(&[1.0, 0.0], 0.0, "z1 = 0"),
            AffineLocus::new(&[1.0, 0.0], -1.0, "z1 = 1"),
            AffineLocus::new(&[0.0, 1.0], 0.0, "z2 = 0"),
            AffineLocus::new(&[0.0, 1.0], -1.0, "z2 = 1"),
            AffineLocus::new(&[1.0, 1.0], -1.0, "z1 + z2 = 1"),
        ];
        let wp = vec![
            z0.to_vec(),
            vec![c(0.25, 0.05), c(0.3, 0.05)],
            vec![c(0.2, 0.1), re(0.25)],
            z0.to_vec(),
        ];
        let path = PathSpec::new(wp, 1e-2, loc);
        let form = |x: &[C64]| {
            let w = omega_f2_at(b1, b2, x[0], x[1])?;
            Ok(w.coeff)
        };
        let y = ode_integrate(form, &path, &y0).unwrap();
        assert!((&y - &y0).norm() < 1e-8);
    }
}
