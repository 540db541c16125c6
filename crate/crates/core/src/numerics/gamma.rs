use super::{dist_to_nonpositive_integer, re, C64};
use crate::error::{Error, Result};
use std::f64::consts::PI;

// Lanczos approximation with Godfrey's coefficients, g = 671/128.
const G: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const P: [f64; 15] = [
    0.999_999_999_999_997_092,
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];

/// Complex Gamma function. Reflection is used for `Re z < 1/2`.
pub fn gamma(z: C64) -> Result<C64> {
    if dist_to_nonpositive_integer(z) < 1e-12 {
        return Err(Error::PoleError { re: z.re, im: z.im });
    }
    let v = if z.re < 0.5 {
        let s = (z * PI).sin();
        re(PI) / (s * lanczos(re(1.0) - z))
    } else {
        lanczos(z)
    };
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::NonFinite(format!("gamma({z})")))
    }
}

fn lanczos(z: C64) -> C64 {
    let mut ser = re(P[0]);
    for (j, p) in P.iter().enumerate().skip(1) {
        ser += *p / (z + j as f64);
    }
    let t = z + G;
    let lg = (z + 0.5) * t.ln() - t;
    lg.exp() * ser * (2.0 * PI).sqrt() / z
}

// Bernoulli numbers B_2k / (2k (2k - 1)), k = 1..10
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360_360.0,
    1.0 / 156.0,
    -3617.0 / 122_400.0,
    43_867.0 / 244_188.0,
    -174_611.0 / 125_400.0,
];

/// `ln Γ(z)` from the Stirling series after shifting `Re z` above 30.
/// Independent of the Lanczos route and used as its test oracle; valid for
/// `Re z > 0`.
pub fn ln_gamma_stirling(z: C64) -> C64 {
    let mut shift = re(0.0);
    let mut w = z;
    while w.norm() < 30.0 || w.re < 10.0 {
        shift += w.ln();
        w += 1.0;
    }
    let mut s = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let w2 = w * w;
    let mut wp = w;
    for b in STIRLING {
        s += b / wp;
        wp *= w2;
    }
    s - shift
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    #[test]
    fn trivial_values() {
        assert!((gamma(re(1.0)).unwrap() - 1.0).norm() < 1e-14);
        assert!((gamma(re(0.5)).unwrap() - PI.sqrt()).norm() < 1e-14);
        assert!((gamma(re(5.0)).unwrap() - 24.0).norm() < 1e-12);
    }

    #[test]
    fn one_plus_i() {
        let g = gamma(c(1.0, 1.0)).unwrap();
        let expect = c(0.498_015_668_118_356, -0.154_949_828_301_811);
        assert!((g - expect).norm() < 1e-14);
        // reflection oracle
        let z = c(1.0, 1.0);
        let prod = g * gamma(re(1.0) - z).unwrap();
        let r = re(PI) / (z * PI).sin();
        assert!((prod - r).norm() / r.norm() < 1e-13);
    }

    #[test]
    fn poles() {
        for n in 0..5 {
            assert!(matches!(
                gamma(re(-(n as f64))),
                Err(Error::PoleError { .. })
            ));
        }
        assert!(gamma(re(-2.0 + 1e-9)).is_ok());
    }

    #[test]
    fn against_stirling_on_disk() {
        let mut worst: f64 = 0.0;
        for i in 0..40 {
            for j in 0..40 {
                let z = c(0.3 + 19.5 * i as f64 / 39.0, -19.0 + 38.0 * j as f64 / 39.0);
                if z.norm() > 20.0 {
                    continue;
                }
                let g = gamma(z).unwrap();
                let o = ln_gamma_stirling(z).exp();
                worst = worst.max((g - o).norm() / o.norm());
            }
        }
        assert!(worst < 1e-13, "worst relative error {worst:e}");
    }

    #[test]
    fn reflection_region() {
        for &z in &[c(-0.5, 0.3), c(-3.7, 1.2), c(-10.2, -4.0), c(0.2, -7.0)] {
            let lhs = gamma(z).unwrap() * gamma(re(1.0) - z).unwrap();
            let rhs = re(PI) / (z * PI).sin();
            assert!((lhs - rhs).norm() / rhs.norm() < 1e-13);
        }
    }
}
