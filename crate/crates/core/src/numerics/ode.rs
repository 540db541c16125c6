use super::{re, C64};
use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Affine hyperplane `Σ coeffs[i] z_i + constant = 0` in C^n.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineLocus {
    pub coeffs: Vec<C64>,
    pub constant: C64,
    pub label: String,
}

impl AffineLocus {
    pub fn new(coeffs: &[f64], constant: f64, label: &str) -> Self {
        AffineLocus {
            coeffs: coeffs.iter().map(|&c| re(c)).collect(),
            constant: re(constant),
            label: label.to_string(),
        }
    }

    fn eval(&self, z: &[C64]) -> C64 {
        self.coeffs
            .iter()
            .zip(z)
            .fold(self.constant, |s, (a, x)| s + a * x)
    }

    /// Euclidean distance from the segment `[za, zb]` to the hyperplane.
    pub fn segment_distance(&self, za: &[C64], zb: &[C64]) -> f64 {
        let n: f64 = self.coeffs.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let la = self.eval(za);
        let d = self.eval(zb) - la;
        let s = if d.norm_sqr() > 0.0 {
            (-(d.conj() * la).re / d.norm_sqr()).clamp(0.0, 1.0)
        } else {
            0.0
        };
        (la + d * s).norm() / n
    }
}

/// Piecewise-linear path with a declared singular locus.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    pub waypoints: Vec<Vec<C64>>,
    pub clearance: f64,
    pub locus: Vec<AffineLocus>,
}

impl PathSpec {
    pub fn new(waypoints: Vec<Vec<C64>>, clearance: f64, locus: Vec<AffineLocus>) -> Self {
        PathSpec {
            waypoints,
            clearance,
            locus,
        }
    }

    pub fn segment(a: C64, b: C64, clearance: f64, locus: Vec<AffineLocus>) -> Self {
        PathSpec::new(vec![vec![a], vec![b]], clearance, locus)
    }

    fn validate(&self) -> Result<()> {
        if self.waypoints.len() < 2 {
            return Err(Error::InvalidArgument("a path needs two waypoints".into()));
        }
        let dim = self.waypoints[0].len();
        for w in self.waypoints.windows(2) {
            if w[1].len() != dim || w[0].len() != dim {
                return Err(Error::InvalidArgument("waypoint dimensions differ".into()));
            }
            if w[0] == w[1] {
                return Err(Error::InvalidArgument(
                    "consecutive waypoints coincide".into(),
                ));
            }
            for l in &self.locus {
                let d = l.segment_distance(&w[0], &w[1]);
                if d < self.clearance {
                    return Err(Error::SingularProximity {
                        distance: d,
                        clearance: self.clearance,
                    });
                }
            }
        }
        Ok(())
    }
}

// Dormand-Prince 5(4) tableau
const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

const ATOL: f64 = 1e-12;
const RTOL: f64 = 1e-11;

/// Transport `y' = (Σ_j M_j(z) dz_j) y` along the path, where `rhs(z)`
/// returns one coefficient matrix per coordinate.
pub fn ode_integrate<F>(rhs: F, path: &PathSpec, y0: &DVector<C64>) -> Result<DVector<C64>>
where
    F: Fn(&[C64]) -> Result<Vec<DMatrix<C64>>>,
{
    path.validate()?;
    let mut y = y0.clone();
    for w in path.waypoints.windows(2) {
        y = segment(&rhs, &w[0], &w[1], y)?;
    }
    Ok(y)
}

fn segment<F>(rhs: &F, za: &[C64], zb: &[C64], y0: DVector<C64>) -> Result<DVector<C64>>
where
    F: Fn(&[C64]) -> Result<Vec<DMatrix<C64>>>,
{
    let dz: Vec<C64> = za.iter().zip(zb).map(|(a, b)| b - a).collect();
    let length: f64 = dz.iter().map(|d| d.norm_sqr()).sum::<f64>().sqrt();
    let field = |s: f64, y: &DVector<C64>| -> Result<DVector<C64>> {
        let z: Vec<C64> = za.iter().zip(&dz).map(|(a, d)| a + d * s).collect();
        let ms = rhs(&z)?;
        let mut out = DVector::from_element(y.len(), re(0.0));
        for (m, d) in ms.iter().zip(&dz) {
            out += (m * y) * *d;
        }
        Ok(out)
    };
    let tol_scale = length.max(1e-300);
    let mut s = 0.0;
    let mut h = 0.05f64.min(1.0);
    let mut y = y0;
    let mut err_prev: f64 = 1e-4;
    let mut k = vec![field(0.0, &y)?];
    while s < 1.0 {
        if s + h > 1.0 {
            h = 1.0 - s;
        }
        if h < 1e-13 {
            return Err(Error::StepUnderflow { at: s });
        }
        k.truncate(1);
        for i in 1..7 {
            let mut yi = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if A[i][j] != 0.0 {
                    yi += kj * re(h * A[i][j]);
                }
            }
            k.push(field(s + C[i] * h, &yi)?);
        }
        let mut y5 = y.clone();
        let mut e = DVector::from_element(y.len(), re(0.0));
        for i in 0..7 {
            y5 += &k[i] * re(h * B5[i]);
            e += &k[i] * re(h * (B5[i] - B4[i]));
        }
        let mut err: f64 = 0.0;
        for i in 0..y.len() {
            // error per unit arc length
            let sc = (ATOL + RTOL * y[i].norm().max(y5[i].norm())) * h * tol_scale;
            err = err.max(e[i].norm() / sc.max(1e-300));
        }
        if !err.is_finite() {
            return Err(Error::NonFinite("ode step".into()));
        }
        if err <= 1.0 {
            s += h;
            y = y5;
            let last = k.pop().expect("stage");
            k.clear();
            k.push(last);
            let fac = 0.9 * err.max(1e-10).powf(-0.7 / 5.0) * err_prev.powf(0.4 / 5.0);
            h *= fac.clamp(0.2, 5.0);
            err_prev = err.max(1e-4);
        } else {
            let fac = 0.9 * err.powf(-0.2);
            h *= fac.clamp(0.1, 0.9);
        }
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::c;

    fn origin() -> Vec<AffineLocus> {
        vec![AffineLocus::new(&[1.0], 0.0, "z=0")]
    }

    #[test]
    fn zero_field_is_identity() {
        let y0 = DVector::from_vec(vec![c(1.0, 2.0), c(-3.0, 0.5)]);
        let p = PathSpec::new(
            vec![vec![re(0.0)], vec![c(1.0, 1.0)], vec![re(2.0)]],
            1e-6,
            vec![],
        );
        let y = ode_integrate(|_| Ok(vec![DMatrix::zeros(2, 2)]), &p, &y0).unwrap();
        assert_eq!(y, y0);
    }

    #[test]
    fn solution_z() {
        let p = PathSpec::segment(re(1.0), re(2.0), 1e-3, origin());
        let y0 = DVector::from_vec(vec![re(1.0)]);
        let y = ode_integrate(
            |z| Ok(vec![DMatrix::from_element(1, 1, re(1.0) / z[0])]),
            &p,
            &y0,
        )
        .unwrap();
        assert!((y[0] - 2.0).norm() < 1e-11);
    }

    #[test]
    fn log_around_origin_picks_up_monodromy() {
        // y' = y/(2z): y = sqrt(z), one loop gives a sign flip
        let pts = [re(1.0), c(0.0, 1.0), re(-1.0), c(0.0, -1.0), re(1.0)];
        let p = PathSpec::new(pts.iter().map(|&z| vec![z]).collect(), 0.1, origin());
        let y0 = DVector::from_vec(vec![re(1.0)]);
        let y = ode_integrate(
            |z| Ok(vec![DMatrix::from_element(1, 1, re(0.5) / z[0])]),
            &p,
            &y0,
        )
        .unwrap();
        assert!((y[0] + 1.0).norm() < 1e-10);
    }

    #[test]
    fn composition_and_refinement() {
        let f = |z: &[C64]| {
            Ok(vec![DMatrix::from_row_slice(
                2,
                2,
                &[re(0.0), re(1.0), -z[0], re(0.0)],
            )])
        };
        let y0 = DVector::from_vec(vec![re(1.0), re(0.0)]);
        let a = re(0.0);
        let m = c(0.7, 0.4);
        let b = re(1.5);
        let p1 = PathSpec::new(vec![vec![a], vec![m]], 1e-3, vec![]);
        let p2 = PathSpec::new(vec![vec![m], vec![b]], 1e-3, vec![]);
        let p12 = PathSpec::new(vec![vec![a], vec![m], vec![b]], 1e-3, vec![]);
        let y1 = ode_integrate(f, &p1, &y0).unwrap();
        let y2 = ode_integrate(f, &p2, &y1).unwrap();
        let y12 = ode_integrate(f, &p12, &y0).unwrap();
        assert!((&y2 - &y12).norm() < 1e-9);
        let straight = PathSpec::new(vec![vec![a], vec![b]], 1e-3, vec![]);
        let ys = ode_integrate(f, &straight, &y0).unwrap();
        // entire field: homotopy invariance
        assert!((&ys - &y12).norm() < 1e-9);
    }

    #[test]
    fn clearance_violation() {
        let p = PathSpec::segment(re(-1.0), re(1.0), 1e-3, origin());
        let y0 = DVector::from_vec(vec![re(1.0)]);
        let r = ode_integrate(
            |z| Ok(vec![DMatrix::from_element(1, 1, re(1.0) / z[0])]),
            &p,
            &y0,
        );
        assert!(matches!(r, Err(Error::SingularProximity { .. })));
    }
}
