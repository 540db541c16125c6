//! Verification suites: each maps a configuration to a list of cases.

use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::identities::{self as id, IdentityReport};
use crate::kummer::{
    self, fibration_data, surface_invariants, FibrationId, KummerCertificate, ModuliPoint,
    BRANCH_TOL,
};
use crate::numerics::{c, re, QuadratureSpec, C64};
use crate::pfaffian::{decomposition_check_exact, decomposition_residual, moduli_map_t};
use crate::ratfunc::BigQ;
use crate::superelliptic::{
    all_signatures, period_closed, period_quadrature, validate_signature, CurveSignature, Cycle,
};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Clausen,
    Duality,
    KummerQuadratic,
    Clausen3f2,
    Pfaffian,
    Fibrations,
    Periods,
    Mirror,
    All,
}

impl Suite {
    pub const EACH: [Suite; 8] = [
        Suite::Clausen,
        Suite::Duality,
        Suite::KummerQuadratic,
        Suite::Clausen3f2,
        Suite::Pfaffian,
        Suite::Fibrations,
        Suite::Periods,
        Suite::Mirror,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Clausen => "clausen",
            Suite::Duality => "duality",
            Suite::KummerQuadratic => "kummer-quadratic",
            Suite::Clausen3f2 => "clausen3f2",
            Suite::Pfaffian => "pfaffian",
            Suite::Fibrations => "fibrations",
            Suite::Periods => "periods",
            Suite::Mirror => "mirror",
            Suite::All => "all",
        }
    }

    // per-suite stream so that suites draw the same points alone or in `all`
    fn stream(&self) -> u64 {
        Suite::EACH.iter().position(|s| s == self).unwrap_or(0) as u64 + 1
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .iter()
            .chain([Suite::All].iter())
            .find(|x| x.name() == s.to_ascii_lowercase())
            .copied()
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s}")))
    }
}

/// Which points a suite runs on.
#[derive(Debug, Clone, PartialEq)]
pub enum Grid {
    /// the fixed grid of each suite
    Default,
    /// `n` pseudo-random admissible points from the configured seed
    Random(usize),
    /// one user-supplied point
    Point {
        beta1: f64,
        beta2: f64,
        lambda1: C64,
        lambda2: C64,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub grid: Grid,
    pub sigs: Vec<CurveSignature>,
    /// overrides each case's own tolerance
    pub tolerance: Option<f64>,
    pub parallelism: usize,
    pub seed: u64,
    /// certificates are written here when set
    pub cert_dir: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            grid: Grid::Default,
            sigs: kummer::DEFAULT_SIGNATURES
                .iter()
                .map(|&(r, p, q)| validate_signature(r, p, q).unwrap())
                .collect(),
            tolerance: None,
            parallelism: 1,
            seed: 20240607,
            cert_dir: None,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if let Some(t) = self.tolerance {
            if !(t > 0.0 && t.is_finite()) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance must be positive, got {t}"
                )));
            }
        }
        if self.parallelism == 0 {
            return Err(Error::InvalidArgument(
                "parallelism must be at least 1".into(),
            ));
        }
        if let Grid::Point { beta1, beta2, .. } = self.grid {
            if !(beta1 > 0.0 && beta2 > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "needs β1, β2 > 0, got ({beta1}, {beta2})"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub version: String,
    pub cases: Vec<IdentityReport>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn new(suite: &str, cases: Vec<IdentityReport>) -> Self {
        let passed = cases.iter().filter(|c| c.passed).count();
        SuiteReport {
            suite: suite.into(),
            version: VERSION.into(),
            summary: Summary {
                total: cases.len(),
                passed,
            },
            cases,
        }
    }

    pub fn all_passed(&self) -> bool {
        self.summary.passed == self.summary.total
    }
}

type Job = Box<dyn Fn() -> Result<Vec<IdentityReport>> + Send + Sync>;

/// A case whose evaluation raised an error: recorded as failed with the
/// message in `inputs.error` and unit residuals.
fn error_case(name: &str, inputs: Value, e: &Error) -> IdentityReport {
    let mut inputs = inputs;
    if let Value::Object(m) = &mut inputs {
        m.insert("error".into(), Value::String(e.to_string()));
    }
    IdentityReport {
        name: name.into(),
        inputs,
        lhs: re(0.0).into(),
        rhs: re(0.0).into(),
        abs_residual: 1.0,
        rel_residual: 1.0,
        tolerance: 0.0,
        passed: false,
    }
}

fn job<F>(name: &'static str, inputs: Value, f: F) -> Job
where
    F: Fn() -> Result<Vec<IdentityReport>> + Send + Sync + 'static,
{
    Box::new(move || Ok(f().unwrap_or_else(|e| vec![error_case(name, inputs.clone(), &e)])))
}

fn retolerate(r: &mut IdentityReport, tol: f64) {
    let ok = |x: f64| x.is_finite() && x <= tol;
    if r.inputs.get("error").is_none() {
        let rhs = C64::from(r.rhs).norm();
        r.passed = ok(r.rel_residual) || (rhs < 1.0 && ok(r.abs_residual));
        r.tolerance = tol;
    }
}

/// Runs one suite.
pub fn run_suite(suite: Suite, cfg: &RunConfig) -> Result<SuiteReport> {
    cfg.validate()?;
    let suites: Vec<Suite> = if suite == Suite::All {
        Suite::EACH.to_vec()
    } else {
        vec![suite]
    };
    let mut jobs: Vec<Job> = Vec::new();
    for s in suites {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        rng.set_stream(s.stream());
        jobs.extend(suite_jobs(s, cfg, &mut rng)?);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let results: Vec<Result<Vec<IdentityReport>>> =
        pool.install(|| jobs.par_iter().map(|j| j()).collect());
    let mut cases = Vec::new();
    for r in results {
        cases.extend(r?);
    }
    if let Some(t) = cfg.tolerance {
        cases.iter_mut().for_each(|c| retolerate(c, t));
    }
    Ok(SuiteReport::new(suite.name(), cases))
}

fn uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    rng.gen_range(lo..hi)
}

fn random_beta(rng: &mut ChaCha8Rng) -> f64 {
    uniform(rng, 0.1, 0.7)
}

fn point_of(cfg: &RunConfig) -> Option<(f64, f64, C64, C64)> {
    match cfg.grid {
        Grid::Point {
            beta1,
            beta2,
            lambda1,
            lambda2,
        } => Some((beta1, beta2, lambda1, lambda2)),
        _ => None,
    }
}

fn n_random(cfg: &RunConfig, default: usize) -> usize {
    match cfg.grid {
        Grid::Random(n) => n,
        _ => default,
    }
}

fn suite_jobs(s: Suite, cfg: &RunConfig, rng: &mut ChaCha8Rng) -> Result<Vec<Job>> {
    let mut jobs: Vec<Job> = Vec::new();
    let user = point_of(cfg);
    match s {
        Suite::Clausen => {
            let pts: Vec<(f64, f64, ModuliPoint)> = match (&cfg.grid, user) {
                (_, Some((b1, b2, l1, l2))) => vec![(b1, b2, ModuliPoint::new(l1, l2)?)],
                (Grid::Random(n), _) => (0..*n)
                    .map(|_| {
                        let b = (random_beta(rng), random_beta(rng));
                        // rejection keeps the point inside the series domain
                        loop {
                            let (l1, l2) = (uniform(rng, 0.05, 0.25), uniform(rng, 0.8, 0.95));
                            let m = moduli_map_t(re(l1), re(l2))?;
                            if m.z1.norm() + m.z2.norm() < 0.9 {
                                return ModuliPoint::real(l1, l2).map(|m| (b.0, b.1, m));
                            }
                        }
                    })
                    .collect::<Result<_>>()?,
                _ => id::default_clausen_grid(),
            };
            for (b1, b2, mp) in pts {
                let inputs = json!({"beta1": b1, "beta2": b2});
                jobs.push(job("multivariate_clausen", inputs, move || {
                    Ok(vec![id::verify_multivariate_clausen(b1, b2, &mp)?])
                }));
            }
        }
        Suite::Duality => {
            let pts: Vec<(f64, f64, ModuliPoint)> = match user {
                Some((b1, b2, l1, l2)) => vec![(b1, b2, ModuliPoint::new(l1, l2)?)],
                None => (0..n_random(cfg, 10))
                    .map(|_| {
                        let b = (random_beta(rng), random_beta(rng));
                        let mp =
                            ModuliPoint::real(uniform(rng, 0.05, 0.35), uniform(rng, 0.75, 0.95));
                        mp.map(|m| (b.0, b.1, m))
                    })
                    .collect::<Result<_>>()?,
            };
            for n in 1..=4u8 {
                for &(b1, b2, mp) in &pts {
                    let inputs = json!({"row": n, "beta1": b1, "beta2": b2});
                    jobs.push(job("duality_row", inputs, move || {
                        let row = id::duality_row(n, b1, b2, &mp)?;
                        let mut r = row.report;
                        if !row.exact_relations {
                            r.passed = false;
                        }
                        if let Value::Object(m) = &mut r.inputs {
                            m.insert("exact_relations".into(), Value::Bool(row.exact_relations));
                            m.insert("h".into(), json!(row.h));
                        }
                        Ok(vec![r])
                    }));
                }
            }
            for (b1, b2, mp) in pts.into_iter().take(2) {
                let inputs = json!({"beta1": b1, "beta2": b2});
                jobs.push(job("symmetry_swap", inputs, move || {
                    let l1 = mp.lambda1.re.clamp(0.05, 0.2);
                    let l2 = mp.lambda2.re.clamp(0.8, 0.95);
                    id::verify_symmetry_swap(b1, b2, &ModuliPoint::real(l1, l2)?)
                }));
            }
        }
        Suite::KummerQuadratic => {
            let pts: Vec<(f64, f64, C64)> = match user {
                Some((b1, b2, l, _)) => vec![(b1, b2, l)],
                None => (0..n_random(cfg, 20))
                    .map(|_| {
                        (
                            random_beta(rng),
                            random_beta(rng),
                            re(uniform(rng, 0.1, 0.6)),
                        )
                    })
                    .collect(),
            };
            for (b1, b2, l) in pts {
                for which in [1u8, 2] {
                    let inputs = json!({"which": which, "beta1": b1, "beta2": b2});
                    jobs.push(job("kummer_quadratic", inputs, move || {
                        Ok(vec![id::verify_kummer_quadratic(which, b1, b2, l)?])
                    }));
                }
            }
        }
        Suite::Clausen3f2 => {
            let pts: Vec<(f64, f64, C64)> = match user {
                Some((b1, b2, l, _)) => vec![(b1, b2, l)],
                None => (0..n_random(cfg, 20))
                    .map(|_| {
                        (
                            random_beta(rng),
                            random_beta(rng),
                            re(uniform(rng, 0.0, 0.35)),
                        )
                    })
                    .collect(),
            };
            for (b1, b2, l) in pts {
                let inputs = json!({"beta1": b1, "beta2": b2});
                jobs.push(job("clausen_3f2", inputs, move || {
                    Ok(id::verify_clausen_3f2(b1, b2, l)?.to_vec())
                }));
            }
            jobs.push(job("f2_boundary_z2_one", json!({}), || {
                Ok(vec![id::verify_f2_boundary(0.25, 0.25, re(0.3))?])
            }));
        }
        Suite::Pfaffian => {
            let cert_dir = cfg.cert_dir.clone();
            for (n1, d1, n2, d2) in [(1, 2, 1, 2), (1, 4, 3, 8)] {
                let dir = cert_dir.clone();
                let inputs = json!({"beta1": format!("{n1}/{d1}"), "beta2": format!("{n2}/{d2}")});
                jobs.push(job("pfaffian_decomposition_exact", inputs, move || {
                    let cert = decomposition_check_exact(
                        &BigQ::new(n1.into(), d1.into()),
                        &BigQ::new(n2.into(), d2.into()),
                    )?;
                    let mut inputs = json!({"beta1": cert.beta1, "beta2": cert.beta2,
                        "entries_checked": cert.entries_checked, "failures": cert.failures});
                    if let Some(d) = &dir {
                        let p = write_json(d, &format!("pfaffian_{n1}_{d1}_{n2}_{d2}"), &cert)?;
                        inputs["certificate"] = json!(p);
                    }
                    let f = cert.failures.len() as f64;
                    let mut r = IdentityReport::new(
                        "pfaffian_decomposition_exact",
                        inputs,
                        re(f),
                        re(0.0),
                        0.0,
                    );
                    r.passed = cert.passed;
                    Ok(vec![r])
                }));
            }
            let pts: Vec<(f64, f64, C64, C64)> = match user {
                Some(p) => vec![p],
                None => (0..n_random(cfg, 50))
                    .map(|_| {
                        let b = (random_beta(rng), random_beta(rng));
                        let l1 = c(uniform(rng, 0.1, 0.45), uniform(rng, -0.2, 0.2));
                        let l2 = c(uniform(rng, 0.55, 0.9), uniform(rng, -0.2, 0.2));
                        (b.0, b.1, l1, l2)
                    })
                    .collect(),
            };
            for (b1, b2, l1, l2) in pts {
                let inputs = json!({"beta1": b1, "beta2": b2, "Lambda1": [l1.re, l1.im], "Lambda2": [l2.re, l2.im]});
                let inp = inputs.clone();
                jobs.push(job("pfaffian_decomposition_numeric", inputs, move || {
                    let res = decomposition_residual(b1, b2, l1, l2)?;
                    Ok(vec![IdentityReport::new(
                        "pfaffian_decomposition_numeric",
                        inp.clone(),
                        re(res),
                        re(0.0),
                        1e-9,
                    )])
                }));
            }
        }
        Suite::Fibrations => {
            for sig in cfg.sigs.clone() {
                for fid in FibrationId::ALL {
                    let d = match fibration_data(fid, &sig) {
                        Ok(d) => d,
                        Err(Error::ConstraintViolation { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    if !d.constraint.holds(&sig) {
                        continue;
                    }
                    let dir = cfg.cert_dir.clone();
                    jobs.push(job(
                        "fibration",
                        json!({"sig": sig.to_string(), "id": fid.to_string()}),
                        move || {
                            let cert = kummer::verify_fibration_exact(fid, &sig)?;
                            Ok(vec![cert_case(&cert, dir.as_deref())?])
                        },
                    ));
                }
                let dir = cfg.cert_dir.clone();
                jobs.push(job(
                    "double_cover",
                    json!({"sig": sig.to_string()}),
                    move || {
                        Ok(vec![cert_case(
                            &kummer::verify_double_cover(&sig)?,
                            dir.as_deref(),
                        )?])
                    },
                ));
                let dir = cfg.cert_dir.clone();
                jobs.push(job(
                    "sw_fibration",
                    json!({"sig": sig.to_string()}),
                    move || {
                        Ok(vec![cert_case(
                            &kummer::verify_sw_fibration(&sig)?,
                            dir.as_deref(),
                        )?])
                    },
                ));
                if sig.q == sig.r {
                    let dir = cfg.cert_dir.clone();
                    jobs.push(job(
                        "base_change_j6",
                        json!({"sig": sig.to_string()}),
                        move || {
                            kummer::verify_base_change_j6(&sig)?
                                .iter()
                                .map(|c| cert_case(c, dir.as_deref()))
                                .collect()
                        },
                    ));
                    let dir = cfg.cert_dir.clone();
                    jobs.push(job(
                        "legendre_links",
                        json!({"sig": sig.to_string()}),
                        move || {
                            kummer::verify_legendre_links(&sig)?
                                .iter()
                                .map(|c| cert_case(c, dir.as_deref()))
                                .collect()
                        },
                    ));
                }
            }
            jobs.push(job("surface_invariants", json!({}), || invariant_cases(10)));
        }
        Suite::Periods => {
            let spec = QuadratureSpec::default();
            for sig in all_signatures(4) {
                for cycle in [Cycle::A, Cycle::B] {
                    for k in 1..2 * sig.r {
                        for l in [0.2, 0.5, 0.8] {
                            let inputs = json!({"sig": sig.to_string(), "cycle": format!("{cycle:?}"), "k": k, "lambda": l});
                            let inp = inputs.clone();
                            jobs.push(job("period_closed_form", inputs, move || {
                                let closed = period_closed(&sig, cycle, k, re(l))?;
                                let quad = period_quadrature(&sig, cycle, k, l, &spec)?;
                                Ok(vec![IdentityReport::new(
                                    "period_closed_form",
                                    inp.clone(),
                                    closed,
                                    quad,
                                    1e-8,
                                )])
                            }));
                        }
                    }
                }
            }
            for (r, p, q) in [(1, 1, 1), (2, 1, 2)] {
                for (a, b) in [(25.0 / 24.0, 49.0 / 24.0), (1.2, 2.0)] {
                    jobs.push(job(
                        "f2_period_double_integral",
                        json!({"A": a, "B": b}),
                        move || {
                            let sig = validate_signature(r, p, q)?;
                            Ok(vec![id::f2_period_double_integral(
                                &sig, a, b, 1, 1, &spec,
                            )?])
                        },
                    ));
                }
            }
            for ((r, p, q), pts) in [
                ((2, 1, 2), [(0.3, 0.4), (0.1, 0.8)]),
                ((3, 5, 3), [(0.25, 0.35), (0.15, 0.7)]),
            ] {
                for (l1, l2) in pts {
                    for i in 1..r {
                        for j in 1..r {
                            jobs.push(job("period_equality", json!({"i": i, "j": j}), move || {
                                let sig = validate_signature(r, p, q)?;
                                let mp = ModuliPoint::real(l1, l2)?;
                                let direct = id::verify_period_equality(&sig, &mp, i, j)?;
                                let fact = id::verify_period_equality_route(
                                    &sig,
                                    &mp,
                                    i,
                                    j,
                                    id::F2Route::Factorized,
                                )?;
                                let inputs = direct.inputs.clone();
                                let agree = IdentityReport::new(
                                    "period_route_consistency",
                                    inputs,
                                    direct.lhs.into(),
                                    fact.rhs.into(),
                                    1e-8,
                                );
                                Ok(vec![direct, agree])
                            }));
                        }
                    }
                }
            }
        }
        Suite::Mirror => {
            jobs.push(job("mirror_coefficients", json!({}), || {
                Ok(vec![id::mirror_coefficients_check()])
            }));
            for l in [0.005, 0.01, 0.02] {
                jobs.push(job("mirror_map", json!({"lambda": l}), move || {
                    Ok(vec![id::mirror_map_check(l)?])
                }));
            }
        }
        Suite::All => unreachable!("expanded by run_suite"),
    }
    Ok(jobs)
}

fn invariant_cases(r_max: u32) -> Result<Vec<IdentityReport>> {
    let mut out = Vec::new();
    for r in 1..=r_max {
        let inv = surface_invariants(r)?;
        let ok = inv.consistency().iter().filter(|&&b| b).count() as f64;
        let mut rep = IdentityReport::new(
            "surface_invariants",
            json!({"r": r, "invariants": inv}),
            re(ok),
            re(4.0),
            0.0,
        );
        if r == 1 {
            let got = [
                inv.k2,
                inv.euler,
                inv.chi,
                inv.tau,
                inv.irregularity,
                inv.pg,
                inv.h11,
            ];
            let k3 = [0, 24, 2, -16, 0, 1, 20];
            if got != k3 {
                rep.passed = false;
            }
        }
        out.push(rep);
    }
    Ok(out)
}

fn slug(s: &str) -> String {
    let mapped: String = s
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { ' ' })
        .collect();
    mapped.split_whitespace().collect::<Vec<_>>().join("_")
}

fn write_json<T: Serialize>(dir: &Path, stem: &str, v: &T) -> Result<String> {
    std::fs::create_dir_all(dir)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", dir.display())))?;
    let path = dir.join(format!("{}.json", slug(stem)));
    let text =
        serde_json::to_string_pretty(v).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    std::fs::write(&path, text + "\n")
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?;
    Ok(path.display().to_string())
}

/// A certificate as a report case, with `lhs` the branch residual.
pub fn cert_case(cert: &KummerCertificate, dir: Option<&Path>) -> Result<IdentityReport> {
    let mut inputs = json!({
        "id": cert.id,
        "sig": cert.sig,
        "polynomial": cert.polynomial,
        "sheet": cert.sheet,
        "two_form": cert.two_form,
        "notes": cert.notes,
    });
    if let Some(d) = dir {
        let stem = format!("{}_{}", cert.id, cert.sig.clone().unwrap_or_default());
        inputs["certificate"] = json!(write_json(d, &stem, cert)?);
    }
    let res = cert.branch_residual;
    let mut r = IdentityReport::new(&cert.id, inputs, re(res), re(0.0), BRANCH_TOL);
    r.passed = cert.passed;
    Ok(r)
}
