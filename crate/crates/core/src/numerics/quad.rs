use super::{cpowf, is_finite, re, C64};
use crate::error::{Error, Result};
use std::f64::consts::PI;

/// Tolerances for the tanh-sinh rule.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_level: u32,
}

impl QuadratureSpec {
    pub fn new(abs_tol: f64, rel_tol: f64, max_level: u32) -> Result<Self> {
        let ok = |t: f64| t > 0.0 && t < 1.0;
        if !ok(abs_tol) || !ok(rel_tol) || !(3..=15).contains(&max_level) {
            return Err(Error::InvalidArgument(format!(
                "quadrature spec abs_tol={abs_tol} rel_tol={rel_tol} max_level={max_level}"
            )));
        }
        Ok(QuadratureSpec {
            abs_tol,
            rel_tol,
            max_level,
        })
    }
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            max_level: 12,
        }
    }
}

// Half-width of the truncated t-range; beyond it the weights are below
// exp(-1000 * (1 + e)) and the remainder is added in closed form.
const T_MAX: f64 = 6.5;

/// `∫_0^1 g(t, 1 - t) t^ea (1 - t)^eb dt` for `ea, eb > -1`.
///
/// `g` receives both `t` and `1 - t`, each computed without cancellation, and
/// should be bounded at the endpoints.
pub fn integrate_weighted01<G>(g: G, ea: f64, eb: f64, spec: &QuadratureSpec) -> Result<C64>
where
    G: Fn(f64, f64) -> C64,
{
    if !(ea > -1.0 && eb > -1.0) {
        return Err(Error::DomainError(format!(
            "endpoint exponents {ea}, {eb} must exceed -1"
        )));
    }
    let node = |t: f64| -> Result<C64> {
        let s = PI * t.sinh();
        // ln u and ln(1-u) for u = 1/(1+e^{-s})
        let (lu, lv) = if s >= 0.0 {
            let e = (-s).exp();
            (-e.ln_1p(), -s - e.ln_1p())
        } else {
            let e = s.exp();
            (s - e.ln_1p(), -e.ln_1p())
        };
        let lw = (PI * t.cosh()).ln() + (1.0 + ea) * lu + (1.0 + eb) * lv;
        if lw < -745.0 {
            return Ok(re(0.0));
        }
        let u = lu.exp();
        let v = lv.exp();
        let gv = g(u, v);
        if !is_finite(gv) {
            return Err(Error::NonFinite(format!("integrand at t = {u:e}")));
        }
        Ok(gv * lw.exp())
    };

    let mut h = 1.0;
    let n0 = T_MAX as i64;
    let mut sum = node(0.0)?;
    for k in 1..=n0 {
        let t = k as f64;
        sum += node(t)? + node(-t)?;
    }
    let mut prev = sum * h;
    for level in 1..=spec.max_level {
        h *= 0.5;
        let n = (T_MAX / h) as i64;
        let mut k = 1;
        while k <= n {
            let t = k as f64 * h;
            sum += node(t)? + node(-t)?;
            k += 2;
        }
        let cur = sum * h;
        let err = (cur - prev).norm();
        if level >= 3 && err <= spec.abs_tol.max(spec.rel_tol * cur.norm()) {
            return Ok(cur + tails(&g, ea, eb));
        }
        prev = cur;
    }
    Err(Error::NoConvergence(format!(
        "tanh-sinh did not settle by level {}",
        spec.max_level
    )))
}

fn tails<G: Fn(f64, f64) -> C64>(g: &G, ea: f64, eb: f64) -> C64 {
    // ln of the truncation point u(-T_MAX)
    let ld = -PI * T_MAX.sinh();
    let mut t = re(0.0);
    let g0 = g(0.0, 1.0);
    if is_finite(g0) {
        t += g0 * ((1.0 + ea) * ld).exp() / (1.0 + ea);
    }
    let g1 = g(1.0, 0.0);
    if is_finite(g1) {
        t += g1 * ((1.0 + eb) * ld).exp() / (1.0 + eb);
    }
    t
}

/// `∫_a^b f(z) (z - a)^ea (b - z)^eb dz` along the straight segment, with the
/// weights on the principal branch: `(z - a) = (b - a) t` and
/// `(b - z) = (b - a)(1 - t)` for `t ∈ (0, 1)`.
pub fn integrate_singular<F>(
    f: F,
    a: C64,
    b: C64,
    ea: f64,
    eb: f64,
    spec: &QuadratureSpec,
) -> Result<C64>
where
    F: Fn(C64) -> C64,
{
    let d = b - a;
    if d.norm() == 0.0 {
        return Ok(re(0.0));
    }
    let g = |t: f64, s: f64| if t <= s { f(a + d * t) } else { f(b - d * s) };
    let inner = integrate_weighted01(g, ea, eb, spec)?;
    Ok(inner * cpowf(d, ea) * cpowf(d, eb) * d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn beta_half_half() {
        let v = integrate_singular(|_| re(1.0), re(0.0), re(1.0), -0.5, -0.5, &spec()).unwrap();
        assert!((v - PI).norm() < 1e-13);
    }

    #[test]
    fn constant_one() {
        let v = integrate_singular(|_| re(1.0), re(0.0), re(1.0), 0.0, 0.0, &spec()).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn elliptic_type_against_series() {
        // π 2F1(1/2,1/2;1;1/2) by direct summation
        let mut term = 1.0f64;
        let mut s = 1.0f64;
        for n in 0..200 {
            let n = n as f64;
            term *= (0.5 + n) * (0.5 + n) / ((1.0 + n) * (1.0 + n)) * 0.5;
            s += term;
        }
        let oracle = PI * s;
        let v = integrate_singular(
            |x| cpowf(re(1.0) - x / 2.0, -0.5),
            re(0.0),
            re(1.0),
            -0.5,
            -0.5,
            &spec(),
        )
        .unwrap();
        assert!((v.re - 3.708_149_354_602_743_8).abs() < 1e-12);
        assert!((v.re - oracle).abs() < 1e-12);
    }

    #[test]
    fn strong_singularity_uses_tail() {
        // ∫_0^1 x^{-0.95} dx = 20
        let v = integrate_singular(|_| re(1.0), re(0.0), re(1.0), -0.95, 0.0, &spec()).unwrap();
        assert!((v - 20.0).norm() < 1e-10, "{v}");
    }

    #[test]
    fn complex_segment() {
        // ∫ along 0 -> 1+i of z dz = (1+i)^2 / 2
        let b = c(1.0, 1.0);
        let v = integrate_singular(|z| z, re(0.0), b, 0.0, 0.0, &spec()).unwrap();
        assert!((v - b * b / 2.0).norm() < 1e-13);
    }

    #[test]
    fn splitting_is_consistent() {
        let f = |x: C64| (x * 3.0).sin() * cpowf(re(2.0) - x, 0.3);
        let whole = integrate_singular(f, re(0.0), re(1.0), 0.0, 0.0, &spec()).unwrap();
        let l = integrate_singular(f, re(0.0), re(0.37), 0.0, 0.0, &spec()).unwrap();
        let r = integrate_singular(f, re(0.37), re(1.0), 0.0, 0.0, &spec()).unwrap();
        assert!((whole - l - r).norm() < 1e-11);
    }

    #[test]
    fn rejects_bad_exponent() {
        assert!(integrate_singular(|_| re(1.0), re(0.0), re(1.0), -1.0, 0.0, &spec()).is_err());
        assert!(QuadratureSpec::new(1e-10, 1e-10, 2).is_err());
    }
}
