//! Gauss 2F1, generalized 3F2 and Appell F2 by series and Euler integrals.
//!
//! Branches are principal throughout: 2F1 has its cut on `[1, ∞)` and the
//! Euler integrands use principal powers.

use crate::error::{Error, Result};
use crate::numerics::{
    cpow, dist_to_nonpositive_integer, gamma, integrate_weighted01, re, QuadratureSpec, C64,
};
use crate::ratfunc::BigQ;

const POLE_TOL: f64 = 1e-12;
const SERIES_RADIUS: f64 = 0.95;
const SERIES_TOL: f64 = 1e-16;
const MAX_TERMS: usize = 200_000;

fn check_pole(x: C64) -> Result<()> {
    if dist_to_nonpositive_integer(x) < POLE_TOL {
        return Err(Error::PoleError { re: x.re, im: x.im });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyp2F1Params {
    pub a: C64,
    pub b: C64,
    pub c: C64,
}

impl Hyp2F1Params {
    pub fn new(a: C64, b: C64, c: C64) -> Result<Self> {
        check_pole(c)?;
        Ok(Hyp2F1Params { a, b, c })
    }

    pub fn real(a: f64, b: f64, c: f64) -> Result<Self> {
        Hyp2F1Params::new(re(a), re(b), re(c))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppellF2Params {
    pub alpha: C64,
    pub beta1: C64,
    pub beta2: C64,
    pub gamma1: C64,
    pub gamma2: C64,
}

impl AppellF2Params {
    pub fn new(alpha: C64, beta1: C64, beta2: C64, gamma1: C64, gamma2: C64) -> Result<Self> {
        check_pole(gamma1)?;
        check_pole(gamma2)?;
        Ok(AppellF2Params {
            alpha,
            beta1,
            beta2,
            gamma1,
            gamma2,
        })
    }

    pub fn real(alpha: f64, beta1: f64, beta2: f64, gamma1: f64, gamma2: f64) -> Result<Self> {
        AppellF2Params::new(re(alpha), re(beta1), re(beta2), re(gamma1), re(gamma2))
    }

    /// Swap the roles of the two variables.
    pub fn swapped(&self) -> Self {
        AppellF2Params {
            alpha: self.alpha,
            beta1: self.beta2,
            beta2: self.beta1,
            gamma1: self.gamma2,
            gamma2: self.gamma1,
        }
    }

    pub fn is_quadric(&self, tol: f64) -> bool {
        (self.alpha - (self.beta1 + self.beta2 - 0.5)).norm() <= tol
            && (self.gamma1 - 2.0 * self.beta1).norm() <= tol
            && (self.gamma2 - 2.0 * self.beta2).norm() <= tol
    }
}

/// The quadric subfamily `α = β1 + β2 − 1/2`, `γi = 2βi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadricParams {
    pub beta1: f64,
    pub beta2: f64,
}

impl QuadricParams {
    pub fn new(beta1: f64, beta2: f64) -> Result<Self> {
        let ok = |b: f64| b > 0.0 && b < 1.0;
        if !ok(beta1) || !ok(beta2) {
            return Err(Error::DomainError(format!(
                "quadric parameters must lie in (0,1), got ({beta1}, {beta2})"
            )));
        }
        Ok(QuadricParams { beta1, beta2 })
    }

    pub fn alpha(&self) -> f64 {
        self.beta1 + self.beta2 - 0.5
    }

    pub fn f2_params(&self) -> Result<AppellF2Params> {
        AppellF2Params::real(
            self.alpha(),
            self.beta1,
            self.beta2,
            2.0 * self.beta1,
            2.0 * self.beta2,
        )
    }
}

/// Exact `(α, β1, β2, γ1, γ2)` of the quadric subfamily.
pub fn quadric_exact(beta1: &BigQ, beta2: &BigQ) -> [BigQ; 5] {
    let half = BigQ::new(1.into(), 2.into());
    let two = BigQ::from_integer(2.into());
    [
        beta1 + beta2 - half,
        beta1.clone(),
        beta2.clone(),
        &two * beta1,
        &two * beta2,
    ]
}

pub fn is_quadric_exact(p: &[BigQ; 5]) -> bool {
    let half = BigQ::new(1.into(), 2.into());
    let two = BigQ::from_integer(2.into());
    p[0] == &p[1] + &p[2] - half && p[3] == &two * &p[1] && p[4] == &two * &p[2]
}

/// Rising factorial `(a)_n`.
pub fn pochhammer(a: C64, n: u32) -> C64 {
    let mut p = re(1.0);
    for k in 0..n {
        p *= a + k as f64;
    }
    p
}

/// Sum terms produced by `next(n, t_n) = t_{n+1}` until three consecutive
/// terms are small and a geometric tail bound certifies the remainder.
fn sum_series<F: FnMut(usize, C64) -> C64>(first: C64, mut next: F, what: &str) -> Result<C64> {
    let mut s = first;
    let mut t = first;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        let t1 = next(n, t);
        s += t1;
        if t1 == re(0.0) && t != re(0.0) {
            return Ok(s);
        }
        let scale = s.norm().max(1e-300);
        if t1.norm() < SERIES_TOL * scale {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 {
            let rho = if t.norm() > 0.0 {
                t1.norm() / t.norm()
            } else {
                0.0
            };
            if rho < 1.0 && t1.norm() * rho / (1.0 - rho) < SERIES_TOL * scale * 10.0 {
                return Ok(s);
            }
        }
        t = t1;
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonFinite(what.to_string()));
        }
    }
    Err(Error::NoConvergence(format!("{what} series")))
}

/// Power series of 2F1; requires `|z| < 1`.
pub fn eval_2f1_series(p: &Hyp2F1Params, z: C64) -> Result<C64> {
    if z.norm() >= 1.0 {
        return Err(Error::DomainError(format!(
            "2F1 series needs |z| < 1, got {z}"
        )));
    }
    sum_series(
        re(1.0),
        |n, t| {
            let n = n as f64;
            t * (p.a + n) * (p.b + n) / ((p.c + n) * (n + 1.0)) * z
        },
        "2F1",
    )
}

fn euler_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-16,
        rel_tol: 1e-13,
        max_level: 14,
    }
}

/// Euler integral representation of 2F1; requires `Re c > Re b > 0` and `z`
/// off the cut `[1, ∞)`.
pub fn eval_2f1_euler(p: &Hyp2F1Params, z: C64) -> Result<C64> {
    if !(p.c.re > p.b.re && p.b.re > 0.0) {
        return Err(Error::DomainError(
            "Euler integral needs Re c > Re b > 0".into(),
        ));
    }
    if z.im.abs() <= 1e-15 * z.norm().max(1.0) && z.re >= 1.0 {
        return Err(Error::DomainError(format!(
            "z = {z} lies on the cut [1, ∞)"
        )));
    }
    let cb = p.c - p.b;
    let (ib, icb) = (C64::new(0.0, p.b.im), C64::new(0.0, cb.im));
    let one_minus_z = re(1.0) - z;
    let g = |t: f64, s: f64| {
        let w = if t <= 0.5 {
            re(1.0) - z * t
        } else {
            one_minus_z + z * s
        };
        let mut v = cpow(w, -p.a);
        if ib.im != 0.0 {
            v *= cpow(re(t), ib);
        }
        if icb.im != 0.0 {
            v *= cpow(re(s), icb);
        }
        v
    };
    let integral = integrate_weighted01(g, p.b.re - 1.0, cb.re - 1.0, &euler_spec())?;
    Ok(gamma(p.c)? / (gamma(p.b)? * gamma(cb)?) * integral)
}

/// Gauss hypergeometric function on the principal branch.
pub fn eval_2f1(p: &Hyp2F1Params, z: C64) -> Result<C64> {
    check_pole(p.c)?;
    if z == re(0.0) {
        return Ok(re(1.0));
    }
    if z.norm() <= SERIES_RADIUS {
        return eval_2f1_series(p, z);
    }
    if p.c.re > p.b.re && p.b.re > 0.0 {
        return eval_2f1_euler(p, z);
    }
    let swapped = Hyp2F1Params {
        a: p.b,
        b: p.a,
        c: p.c,
    };
    if swapped.c.re > swapped.b.re && swapped.b.re > 0.0 {
        return eval_2f1_euler(&swapped, z);
    }
    Err(Error::DomainError(format!(
        "2F1({}, {}; {}; {z}) is outside the series disk and the Euler regime",
        p.a, p.b, p.c
    )))
}

/// Generalized 3F2 by its power series, `|z| ≤ 0.95`.
pub fn eval_3f2(a1: C64, a2: C64, a3: C64, b1: C64, b2: C64, z: C64) -> Result<C64> {
    check_pole(b1)?;
    check_pole(b2)?;
    if z.norm() > SERIES_RADIUS {
        return Err(Error::DomainError(format!(
            "3F2 series needs |z| ≤ 0.95, got {z}"
        )));
    }
    if z == re(0.0) {
        return Ok(re(1.0));
    }
    sum_series(
        re(1.0),
        |n, t| {
            let n = n as f64;
            t * (a1 + n) * (a2 + n) * (a3 + n) / ((b1 + n) * (b2 + n) * (n + 1.0)) * z
        },
        "3F2",
    )
}

/// Double series of F2 summed diagonal by diagonal in `m + n`.
pub fn eval_f2_series(p: &AppellF2Params, z1: C64, z2: C64) -> Result<C64> {
    if z1.norm() + z2.norm() >= 1.0 {
        return Err(Error::DomainError("F2 series needs |z1|+|z2| < 1".into()));
    }
    // diag[m] = T(m, d - m)
    let mut diag = vec![re(1.0)];
    let mut s = re(1.0);
    let mut prev_norm = 1.0f64;
    let mut small = 0;
    for d in 0..MAX_TERMS / 10 {
        let df = d as f64;
        let mut next = Vec::with_capacity(d + 2);
        for (m, t) in diag.iter().enumerate() {
            let n = (d - m) as f64;
            next.push(t * (p.alpha + df) * (p.beta2 + n) / ((p.gamma2 + n) * (n + 1.0)) * z2);
        }
        let m = d as f64;
        let last = diag[d] * (p.alpha + df) * (p.beta1 + m) / ((p.gamma1 + m) * (m + 1.0)) * z1;
        next.push(last);
        let dn: f64 = next.iter().map(|t| t.norm()).sum();
        for t in &next {
            s += t;
        }
        diag = next;
        let scale = s.norm().max(1e-300);
        if dn == 0.0 {
            // the series terminates unless later diagonals revive; they cannot
            // once (α)_{m+n} vanishes
            if (p.alpha + df).norm() == 0.0 {
                return Ok(s);
            }
        }
        if dn < SERIES_TOL * scale {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 {
            let rho = if prev_norm > 0.0 { dn / prev_norm } else { 0.0 };
            if rho < 1.0 && dn * rho / (1.0 - rho) < SERIES_TOL * scale * 10.0 {
                return Ok(s);
            }
        }
        prev_norm = dn;
        if !(s.re.is_finite() && s.im.is_finite()) {
            return Err(Error::NonFinite("F2 series".into()));
        }
    }
    Err(Error::NoConvergence("F2 series".into()))
}

/// Smallest real value of `1 − z1 x − z2 u` over the unit square where it is
/// real, or `None` if it never meets the real axis.
fn euler_square_min_real(z1: C64, z2: C64) -> Option<f64> {
    let corners = [re(1.0), re(1.0) - z1, re(1.0) - z1 - z2, re(1.0) - z2];
    let scale = corners.iter().map(|w| w.norm()).fold(1.0, f64::max);
    let eps = 1e-14 * scale;
    let mut lo: Option<f64> = None;
    let mut push = |x: f64| lo = Some(lo.map_or(x, |l: f64| l.min(x)));
    for k in 0..4 {
        let a = corners[k];
        let b = corners[(k + 1) % 4];
        if a.im.abs() <= eps {
            push(a.re);
        }
        if (a.im > eps && b.im < -eps) || (a.im < -eps && b.im > eps) {
            let t = a.im / (a.im - b.im);
            push(a.re + t * (b.re - a.re));
        }
    }
    lo
}

/// Two-dimensional Euler integral for F2; needs `Re γi > Re βi > 0` and
/// `1 − z1 x − z2 u` off the closed negative real axis on the unit square.
pub fn eval_f2_euler(p: &AppellF2Params, z1: C64, z2: C64, spec: &QuadratureSpec) -> Result<C64> {
    if !(p.gamma1.re > p.beta1.re
        && p.beta1.re > 0.0
        && p.gamma2.re > p.beta2.re
        && p.beta2.re > 0.0)
    {
        return Err(Error::DomainError(
            "F2 Euler integral needs Re γi > Re βi > 0".into(),
        ));
    }
    if let Some(lo) = euler_square_min_real(z1, z2) {
        if lo <= 0.0 {
            return Err(Error::DomainError(format!(
                "1 − z1 x − z2 u reaches the branch cut for (z1, z2) = ({z1}, {z2})"
            )));
        }
    }
    let (gb1, gb2) = (p.gamma1 - p.beta1, p.gamma2 - p.beta2);
    let phase = |t: f64, s: f64, b: C64, cb: C64| {
        let mut v = re(1.0);
        if b.im != 0.0 {
            v *= cpow(re(t), C64::new(0.0, b.im));
        }
        if cb.im != 0.0 {
            v *= cpow(re(s), C64::new(0.0, cb.im));
        }
        v
    };
    let inner_spec = QuadratureSpec {
        abs_tol: spec.abs_tol * 1e-2,
        rel_tol: spec.rel_tol * 1e-1,
        max_level: spec.max_level,
    };
    let err = std::cell::RefCell::new(None);
    let outer = |u: f64, us: f64| -> C64 {
        let base = re(1.0) - z2 * u;
        let g = |x: f64, xs: f64| {
            let w = if x <= 0.5 {
                base - z1 * x
            } else {
                base - z1 + z1 * xs
            };
            cpow(w, -p.alpha) * phase(x, xs, p.beta1, gb1)
        };
        match integrate_weighted01(g, p.beta1.re - 1.0, gb1.re - 1.0, &inner_spec) {
            Ok(v) => v * phase(u, us, p.beta2, gb2),
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                re(0.0)
            }
        }
    };
    let v = integrate_weighted01(outer, p.beta2.re - 1.0, gb2.re - 1.0, spec)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let pre = gamma(p.gamma1)? * gamma(p.gamma2)?
        / (gamma(p.beta1)? * gamma(p.beta2)? * gamma(gb1)? * gamma(gb2)?);
    Ok(pre * v)
}

fn f2_euler_default_spec() -> QuadratureSpec {
    QuadratureSpec {
        abs_tol: 1e-14,
        rel_tol: 1e-12,
        max_level: 12,
    }
}

/// Appell F2 on the principal branch: series inside `|z1|+|z2| ≤ 0.95`,
/// otherwise the 2D Euler integral when admissible.
pub fn eval_f2(p: &AppellF2Params, z1: C64, z2: C64) -> Result<C64> {
    check_pole(p.gamma1)?;
    check_pole(p.gamma2)?;
    if z1 == re(0.0) && z2 == re(0.0) {
        return Ok(re(1.0));
    }
    if z1.norm() + z2.norm() <= SERIES_RADIUS {
        return eval_f2_series(p, z1, z2);
    }
    eval_f2_euler(p, z1, z2, &f2_euler_default_spec())
}

/// `A^{−α} F2(α; β1, β2; γ1, γ2; 1/A, 1 − B/A)` from the one-dimensional
/// integral over the segment `[A, B]` against 2F1 at `1/U`.
pub fn f2_euler_transform(
    p: &AppellF2Params,
    a: C64,
    b: C64,
    spec: &QuadratureSpec,
) -> Result<C64> {
    if !(p.gamma2.re > p.beta2.re && p.beta2.re > 0.0) {
        return Err(Error::DomainError("needs Re γ2 > Re β2 > 0".into()));
    }
    if segment_meets_unit_interval(a, b) {
        return Err(Error::DomainError(format!(
            "segment [{a}, {b}] meets [0, 1]"
        )));
    }
    let gb2 = p.gamma2 - p.beta2;
    let inner = Hyp2F1Params::new(p.alpha, p.beta1, p.gamma1)?;
    let err = std::cell::RefCell::new(None);
    let d = b - a;
    let g = |t: f64, s: f64| -> C64 {
        let u = if t <= 0.5 { a + d * t } else { b - d * s };
        let mut v = cpow(u, -p.alpha);
        match eval_2f1(&inner, re(1.0) / u) {
            Ok(h) => v *= h,
            Err(e) => {
                err.borrow_mut().get_or_insert(e);
                return re(0.0);
            }
        }
        if p.beta2.im != 0.0 {
            v *= cpow(re(t), C64::new(0.0, p.beta2.im));
        }
        if gb2.im != 0.0 {
            v *= cpow(re(s), C64::new(0.0, gb2.im));
        }
        v
    };
    let integral = integrate_weighted01(g, p.beta2.re - 1.0, gb2.re - 1.0, spec)?;
    if let Some(e) = err.into_inner() {
        return Err(e);
    }
    let amb = a - b;
    // (A−U) = (A−B) t, (U−B) = (A−B)(1−t), dU = (B−A) dt
    let weights = cpow(amb, p.beta2 - 1.0) * cpow(amb, gb2 - 1.0) * (b - a);
    let pre = -gamma(p.gamma2)? * cpow(amb, re(1.0) - p.gamma2) / (gamma(p.beta2)? * gamma(gb2)?);
    Ok(pre * weights * integral)
}

fn segment_meets_unit_interval(a: C64, b: C64) -> bool {
    let on = |x: f64| (0.0..=1.0).contains(&x);
    if a.im == 0.0 && b.im == 0.0 {
        let (lo, hi) = (a.re.min(b.re), a.re.max(b.re));
        return hi >= 0.0 && lo <= 1.0;
    }
    if a.im == 0.0 && on(a.re) || b.im == 0.0 && on(b.re) {
        return true;
    }
    if a.im.signum() != b.im.signum() && a.im != 0.0 && b.im != 0.0 {
        let t = a.im / (a.im - b.im);
        return on(a.re + t * (b.re - a.re));
    }
    false
}

/// Induced map on the pair `(A, B)` of a linear transformation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbMap {
    /// `(A, B) ↦ (B, A)`
    Swap,
    /// `(A, B) ↦ (1 − A, 1 − B)`
    Reflect,
}

impl AbMap {
    pub fn apply(&self, a: C64, b: C64) -> (C64, C64) {
        match self {
            AbMap::Swap => (b, a),
            AbMap::Reflect => (re(1.0) - a, re(1.0) - b),
        }
    }
}

/// Parameter part of the two linear transformations: `which = 1` sends
/// `β2 ↦ γ2 − β2` with `(A, B) ↦ (B, A)`; `which = 2` sends `β1 ↦ γ1 − β1`
/// with `(A, B) ↦ (1 − A, 1 − B)`.
pub fn linear_transform_params(which: u8, p: &AppellF2Params) -> Result<(AppellF2Params, AbMap)> {
    match which {
        1 => Ok((
            AppellF2Params {
                beta2: p.gamma2 - p.beta2,
                ..*p
            },
            AbMap::Swap,
        )),
        2 => Ok((
            AppellF2Params {
                beta1: p.gamma1 - p.beta1,
                ..*p
            },
            AbMap::Reflect,
        )),
        _ => Err(Error::InvalidArgument(format!(
            "linear transformation {which} does not exist"
        ))),
    }
}

/// Both sides `(lhs, rhs)` of quadratic identity `which` (1 or 2).
pub fn kummer_identity(which: u8, beta1: f64, beta2: f64, lambda: C64) -> Result<(C64, C64)> {
    let alpha = beta1 + beta2 - 0.5;
    let one = re(1.0);
    match which {
        1 => {
            let w = (one - lambda) / (one + lambda);
            let lhs = eval_2f1(&Hyp2F1Params::real(alpha, beta2, beta1 + 0.5)?, w * w)?;
            let rhs = cpow((one + lambda) / 2.0, re(2.0 * alpha))
                * eval_2f1(
                    &Hyp2F1Params::real(alpha, beta1, 2.0 * beta1)?,
                    one - lambda * lambda,
                )?;
            Ok((lhs, rhs))
        }
        2 => {
            let w = (one + lambda) / (one - lambda);
            let lhs = eval_2f1(&Hyp2F1Params::real(alpha, beta2, 2.0 * beta2)?, one - w * w)?;
            let rhs = cpow(one - lambda, re(2.0 * alpha))
                * eval_2f1(
                    &Hyp2F1Params::real(alpha, beta1, beta2 + 0.5)?,
                    lambda * lambda,
                )?;
            Ok((lhs, rhs))
        }
        _ => Err(Error::InvalidArgument(format!(
            "quadratic identity {which} does not exist"
        ))),
    }
}

/// Both sides of the two quadratic transformations,
/// `[lhs1, rhs1, lhs2, rhs2]`.
pub fn kummer_quadratic_pair(beta1: f64, beta2: f64, lambda: C64) -> Result<[C64; 4]> {
    let (l1, r1) = kummer_identity(1, beta1, beta2, lambda)?;
    let (l2, r2) = kummer_identity(2, beta1, beta2, lambda)?;
    Ok([l1, r1, l2, r2])
}

/// F2 on the boundary line `z2 = 1` as `Σ_m c_m z1^m 2F1(α+m, β2; γ2; 1)`
/// with each inner value from Gauss' sum. Only admitted when every needed
/// inner value is either a terminating sum or a convergent Gauss sum, which
/// for the inner series means `Re(γ2 − α − m − β2) > 0` unless `α + m` is a
/// non-positive integer.
pub fn eval_f2_at_z2_one(p: &AppellF2Params, z1: C64) -> Result<C64> {
    check_pole(p.gamma1)?;
    check_pole(p.gamma2)?;
    let terminating = |x: C64| dist_to_nonpositive_integer(x) < POLE_TOL;
    let n_alpha = if terminating(p.alpha) {
        Some((-p.alpha.re).round() as u32)
    } else {
        None
    };
    let n_beta1 = if terminating(p.beta1) {
        Some((-p.beta1.re).round() as u32)
    } else {
        None
    };
    let m_max = match (n_alpha, n_beta1) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(Error::DomainError(
                "boundary value z2 = 1 needs a terminating outer series in this artifact".into(),
            ))
        }
    };
    let mut s = re(0.0);
    let mut cm = re(1.0);
    for m in 0..=m_max {
        let mf = m as f64;
        let a_m = p.alpha + mf;
        let inner = if terminating(a_m) {
            // Chu–Vandermonde: 2F1(−n, b; c; 1) = (c − b)_n / (c)_n
            let n = (-a_m.re).round() as u32;
            pochhammer(p.gamma2 - p.beta2, n) / pochhammer(p.gamma2, n)
        } else {
            let e = p.gamma2 - a_m - p.beta2;
            if e.re <= 0.0 {
                return Err(Error::DomainError(format!(
                    "Gauss sum diverges at m = {m} (Re(γ2 − α − m − β2) = {})",
                    e.re
                )));
            }
            gamma(p.gamma2)? * gamma(e)? / (gamma(p.gamma2 - a_m)? * gamma(p.gamma2 - p.beta2)?)
        };
        s += cm * inner;
        cm *= (p.alpha + mf) * (p.beta1 + mf) / ((p.gamma1 + mf) * (mf + 1.0)) * z1;
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{c, integrate_singular};
    use std::f64::consts::PI;

    fn agm(a: f64, b: f64) -> f64 {
        let (mut a, mut b) = (a, b);
        for _ in 0..60 {
            let (x, y) = ((a + b) / 2.0, (a * b).sqrt());
            a = x;
            b = y;
        }
        a
    }

    #[test]
    fn pochhammer_values() {
        assert_eq!(pochhammer(re(3.0), 4), re(360.0));
        assert_eq!(pochhammer(c(0.3, 0.2), 0), re(1.0));
        assert_eq!(pochhammer(re(-2.0), 4), re(0.0));
    }

    #[test]
    fn gauss_known_values() {
        let p = Hyp2F1Params::real(1.0, 1.0, 2.0).unwrap();
        assert!((eval_2f1(&p, re(0.5)).unwrap() - 2.0 * 2f64.ln()).norm() < 1e-14);
        assert_eq!(eval_2f1(&p, re(0.0)).unwrap(), re(1.0));
        // 2F1(1/2,1/2;1;m) = 2K(m)/π = 1/agm(1, sqrt(1-m))
        let p = Hyp2F1Params::real(0.5, 0.5, 1.0).unwrap();
        let oracle = 1.0 / agm(1.0, 0.5f64.sqrt());
        let v = eval_2f1(&p, re(0.5)).unwrap();
        assert!((v.re - oracle).abs() < 1e-14);
        assert!((v.re - 1.180_340_599_016_096_2).abs() < 1e-14);
    }

    #[test]
    fn euler_route_beyond_disk() {
        let p = Hyp2F1Params::real(0.5, 0.5, 1.0).unwrap();
        for m in [0.96, 0.99, -3.0] {
            let oracle = 1.0 / agm(1.0, (1.0f64 - m).sqrt());
            let v = eval_2f1(&p, re(m)).unwrap();
            assert!(
                (v.re - oracle).abs() < 1e-11 * oracle,
                "m={m}: {v} vs {oracle}"
            );
        }
        assert!(matches!(eval_2f1(&p, re(1.5)), Err(Error::DomainError(_))));
        let bad = Hyp2F1Params::real(2.0, 3.0, 1.0).unwrap();
        assert!(matches!(
            eval_2f1(&bad, re(0.99)),
            Err(Error::DomainError(_))
        ));
    }

    #[test]
    fn pole_in_c() {
        assert!(matches!(
            Hyp2F1Params::real(1.0, 1.0, -2.0),
            Err(Error::PoleError { .. })
        ));
    }

    #[test]
    fn three_f2_reduction_and_clausen() {
        let z = c(0.3, -0.2);
        let v = eval_3f2(re(0.3), re(0.7), re(1.9), re(1.4), re(1.9), z).unwrap();
        let w = eval_2f1(&Hyp2F1Params::real(0.3, 0.7, 1.4).unwrap(), z).unwrap();
        assert!((v - w).norm() < 1e-12);
        assert_eq!(
            eval_3f2(re(0.3), re(0.7), re(1.9), re(1.4), re(1.9), re(0.0)).unwrap(),
            re(1.0)
        );
        // Clausen with (β1, β2) = (1/2, 1/4)
        let (b1, b2) = (0.5, 0.25);
        let a = b1 + b2 - 0.5;
        let l = eval_3f2(
            re(a),
            re(b1),
            re(b1 - b2 + 0.5),
            re(2.0 * b1),
            re(b1 + 0.5),
            re(0.2),
        )
        .unwrap();
        let h = eval_2f1(
            &Hyp2F1Params::real(
                b1 / 2.0 + b2 / 2.0 - 0.25,
                b1 / 2.0 - b2 / 2.0 + 0.25,
                b1 + 0.5,
            )
            .unwrap(),
            re(0.2),
        )
        .unwrap();
        assert!((l - h * h).norm() < 1e-12);
    }

    #[test]
    fn f2_special_cases() {
        let p = AppellF2Params::real(0.4, 0.0, 0.3, 0.8, 0.9).unwrap();
        let v = eval_f2(&p, re(0.3), re(0.4)).unwrap();
        let w = eval_2f1(&Hyp2F1Params::real(0.4, 0.3, 0.9).unwrap(), re(0.4)).unwrap();
        assert!((v - w).norm() < 1e-12);
        assert_eq!(eval_f2(&p, re(0.0), re(0.0)).unwrap(), re(1.0));
    }

    #[test]
    fn f2_series_against_nested_quadrature() {
        let p = AppellF2Params::real(0.5, 0.5, 0.5, 1.0, 1.0).unwrap();
        let (z1, z2) = (0.2, 0.3);
        let v = eval_f2(&p, re(z1), re(z2)).unwrap();
        let spec = QuadratureSpec::default();
        let outer = |u: C64| {
            integrate_singular(
                |x: C64| cpow(re(1.0) - x * z1 - u * z2, re(-0.5)),
                re(0.0),
                re(1.0),
                -0.5,
                -0.5,
                &spec,
            )
            .unwrap()
        };
        let o = integrate_singular(outer, re(0.0), re(1.0), -0.5, -0.5, &spec).unwrap() / (PI * PI);
        assert!((v - o).norm() < 1e-10, "{v} vs {o}");
        let e = eval_f2_euler(&p, re(z1), re(z2), &f2_euler_default_spec()).unwrap();
        assert!((v - e).norm() < 1e-10);
    }

    #[test]
    fn f2_symmetry() {
        let p = AppellF2Params::real(0.3, 0.2, 0.7, 1.1, 1.6).unwrap();
        let (z1, z2) = (c(0.2, 0.1), c(-0.3, 0.2));
        let a = eval_f2(&p, z1, z2).unwrap();
        let b = eval_f2(&p.swapped(), z2, z1).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn euler_transform_examples() {
        let q = QuadricParams::new(0.5, 0.5).unwrap().f2_params().unwrap();
        let spec = QuadratureSpec {
            abs_tol: 1e-13,
            rel_tol: 1e-11,
            max_level: 12,
        };
        let (a, b) = (re(25.0 / 24.0), re(49.0 / 24.0));
        let t = f2_euler_transform(&q, a, b, &spec).unwrap();
        let direct = cpow(a, -q.alpha) * eval_f2(&q, re(1.0) / a, re(1.0) - b / a).unwrap();
        assert!((t - direct).norm() < 1e-8, "{t} vs {direct}");
        // swap (A, B, β2) -> (B, A, γ2 − β2)
        let q2 = AppellF2Params::real(0.4, 0.3, 0.35, 0.9, 1.2).unwrap();
        let (a, b) = (re(1.7), re(2.6));
        let t1 = f2_euler_transform(&q2, a, b, &spec).unwrap();
        let q3 = AppellF2Params {
            beta2: q2.gamma2 - q2.beta2,
            ..q2
        };
        let t2 = f2_euler_transform(&q3, b, a, &spec).unwrap();
        assert!((t1 - t2).norm() < 1e-8, "{t1} vs {t2}");
        // collapse at A ≈ B
        let (a, b) = (re(3.0), re(3.0001));
        let t = f2_euler_transform(&q2, a, b, &spec).unwrap();
        let h = eval_2f1(
            &Hyp2F1Params::new(q2.alpha, q2.beta1, q2.gamma1).unwrap(),
            re(1.0) / a,
        )
        .unwrap();
        assert!((t - cpow(a, -q2.alpha) * h).norm() < 1e-5);
        assert!(f2_euler_transform(&q2, re(0.5), re(2.0), &spec).is_err());
    }

    #[test]
    fn linear_transforms() {
        let p = AppellF2Params::real(0.5, 0.25, 0.25, 0.5, 0.5).unwrap();
        let (p2, m) = linear_transform_params(2, &p).unwrap();
        assert_eq!(p2.beta1, re(0.25));
        assert_eq!(m.apply(re(2.0), re(3.0)), (re(-1.0), re(-2.0)));
        let g = AppellF2Params::real(0.3, 0.2, 0.7, 1.1, 1.6).unwrap();
        let (g1, _) = linear_transform_params(1, &g).unwrap();
        let (g2, _) = linear_transform_params(1, &g1).unwrap();
        assert!((g2.beta2 - g.beta2).norm() < 1e-15);
        let q = QuadricParams::new(0.3, 0.45).unwrap().f2_params().unwrap();
        let (q1, _) = linear_transform_params(1, &q).unwrap();
        assert!((q1.beta2 - q.beta2).norm() < 1e-15);
    }

    #[test]
    fn kummer_pairs() {
        for (b1, b2, l) in [(0.3, 0.45, 0.1), (0.5, 0.5, 0.2)] {
            let [l1, r1, l2, r2] = kummer_quadratic_pair(b1, b2, re(l)).unwrap();
            assert!((l1 - r1).norm() < 1e-10 * r1.norm(), "{l1} {r1}");
            assert!((l2 - r2).norm() < 1e-10 * r2.norm(), "{l2} {r2}");
        }
        // identity 1 leaves its disk for Λ < 0; identity 2 alone is checked
        assert!(kummer_quadratic_pair(0.3, 0.45, re(-0.15)).is_err());
        let (l2, r2) = kummer_identity(2, 0.3, 0.45, re(-0.15)).unwrap();
        assert!((l2 - r2).norm() < 1e-10 * r2.norm());
    }

    #[test]
    fn boundary_series_terminating() {
        // α = −1: F2(−1; 1/4, −3/4; 1/2, −3/2; z1, 1) = (1 − z1)/2
        let p = AppellF2Params::real(-1.0, 0.25, -0.75, 0.5, -1.5).unwrap();
        let v = eval_f2_at_z2_one(&p, re(0.3)).unwrap();
        assert!((v - 0.35).norm() < 1e-14);
        let g = AppellF2Params::real(0.3, 0.2, 0.4, 0.4, 0.8).unwrap();
        assert!(matches!(
            eval_f2_at_z2_one(&g, re(0.3)),
            Err(Error::DomainError(_))
        ));
    }
}
