//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verification case failed, 2 bad arguments or
//! malformed input, 3 an input outside an operation's domain.

pub mod suites;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::hypergeometric::{eval_2f1, eval_3f2, eval_f2, AppellF2Params, Hyp2F1Params};
use crate::kummer::surface_invariants;
use crate::numerics::{c, C64};
use crate::superelliptic::{period_closed, validate_signature, CurveSignature, Cycle};

pub use suites::{run_suite, Grid, RunConfig, Suite, SuiteReport, Summary};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "clausen",
    version,
    about = "Evaluate and verify hypergeometric identities on Kummer surfaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a single function value
    Eval {
        #[command(subcommand)]
        kind: EvalKind,
    },
    /// Run a verification suite and write its report
    Verify(VerifyArgs),
    /// Summarize report files as CSV
    Report {
        inputs: Vec<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
#[command(allow_negative_numbers = true)]
enum EvalKind {
    /// Gauss 2F1(a, b; c; z)
    #[command(name = "2f1", allow_negative_numbers = true)]
    Hyp2f1 {
        #[arg(long)]
        a: f64,
        #[arg(long)]
        b: f64,
        #[arg(long)]
        c: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 0.0)]
        z_im: f64,
    },
    /// 3F2(a1, a2, a3; b1, b2; z) inside the unit disc
    #[command(name = "3f2", allow_negative_numbers = true)]
    Hyp3f2 {
        #[arg(long)]
        a1: f64,
        #[arg(long)]
        a2: f64,
        #[arg(long)]
        a3: f64,
        #[arg(long)]
        b1: f64,
        #[arg(long)]
        b2: f64,
        #[arg(long)]
        z: f64,
        #[arg(long, default_value_t = 0.0)]
        z_im: f64,
    },
    /// Appell F2(α; β1, β2; γ1, γ2; z1, z2)
    #[command(allow_negative_numbers = true)]
    F2 {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        beta1: f64,
        #[arg(long)]
        beta2: f64,
        #[arg(long)]
        gamma1: f64,
        #[arg(long)]
        gamma2: f64,
        #[arg(long)]
        z1: f64,
        #[arg(long)]
        z2: f64,
        #[arg(long, default_value_t = 0.0)]
        z1_im: f64,
        #[arg(long, default_value_t = 0.0)]
        z2_im: f64,
    },
    /// Closed-form period of η^k dx/y over a cycle
    #[command(allow_negative_numbers = true)]
    Period {
        /// signature as r,p,q
        #[arg(long)]
        sig: String,
        #[arg(long, default_value = "A")]
        cycle: String,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long)]
        lambda: f64,
        #[arg(long, default_value_t = 0.0)]
        lambda_im: f64,
    },
    /// Numerical invariants of the generalized Kummer surface
    Invariants {
        #[arg(long)]
        r: u32,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, clap::Args)]
#[command(allow_negative_numbers = true)]
struct VerifyArgs {
    /// clausen, duality, kummer-quadratic, clausen3f2, pfaffian, fibrations, periods, mirror or all
    suite: String,
    /// `default` or `random`
    #[arg(long, default_value = "default")]
    grid: String,
    /// number of random points per suite with `--grid random`
    #[arg(long, default_value_t = 10)]
    points: usize,
    #[arg(long, default_value_t = 20240607)]
    seed: u64,
    #[arg(long)]
    beta1: Option<f64>,
    #[arg(long)]
    beta2: Option<f64>,
    #[arg(long)]
    lambda1: Option<f64>,
    #[arg(long)]
    lambda2: Option<f64>,
    /// signatures as `r,p,q;r,p,q;…`
    #[arg(long)]
    sigs: Option<String>,
    #[arg(long, env = "CLAUSEN_TOL")]
    tol: Option<f64>,
    #[arg(long, env = "CLAUSEN_PAR", default_value_t = 1)]
    par: usize,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// directory for certificate files
    #[arg(long)]
    cert_dir: Option<PathBuf>,
}

/// Formats a real with 15 significant digits.
pub fn fmt_real(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let e = x.abs().log10().floor() as i32;
    if (-5..15).contains(&e) {
        format!("{:.*}", (14 - e).max(0) as usize, x)
    } else {
        format!("{x:.14e}")
    }
}

pub fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        fmt_real(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{} {sign} {}i", fmt_real(z.re), fmt_real(z.im.abs()))
    }
}

pub fn parse_sig(s: &str) -> Result<CurveSignature> {
    let parts: Vec<&str> = s
        .trim()
        .trim_matches(|c| c == '(' || c == ')')
        .split(',')
        .collect();
    let bad = || Error::InvalidArgument(format!("signature must be r,p,q, got {s:?}"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let n: Vec<u32> = parts
        .iter()
        .map(|p| p.trim().parse().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    validate_signature(n[0], n[1], n[2])
}

pub fn parse_sigs(s: &str) -> Result<Vec<CurveSignature>> {
    s.split(';')
        .filter(|p| !p.trim().is_empty())
        .map(parse_sig)
        .collect()
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) | Error::ConstraintViolation { .. } => EXIT_USAGE,
        e if e.is_domain() => EXIT_DOMAIN,
        _ => EXIT_FAILED,
    }
}

fn eval(kind: &EvalKind) -> Result<String> {
    Ok(match kind {
        EvalKind::Hyp2f1 {
            a,
            b,
            c: cc,
            z,
            z_im,
        } => fmt_complex(eval_2f1(&Hyp2F1Params::real(*a, *b, *cc)?, c(*z, *z_im))?),
        EvalKind::Hyp3f2 {
            a1,
            a2,
            a3,
            b1,
            b2,
            z,
            z_im,
        } => {
            let r = |x: f64| c(x, 0.0);
            fmt_complex(eval_3f2(
                r(*a1),
                r(*a2),
                r(*a3),
                r(*b1),
                r(*b2),
                c(*z, *z_im),
            )?)
        }
        EvalKind::F2 {
            alpha,
            beta1,
            beta2,
            gamma1,
            gamma2,
            z1,
            z2,
            z1_im,
            z2_im,
        } => {
            let p = AppellF2Params::real(*alpha, *beta1, *beta2, *gamma1, *gamma2)?;
            fmt_complex(eval_f2(&p, c(*z1, *z1_im), c(*z2, *z2_im))?)
        }
        EvalKind::Period {
            sig,
            cycle,
            k,
            lambda,
            lambda_im,
        } => {
            let sig = parse_sig(sig)?;
            let cycle: Cycle = cycle.parse()?;
            fmt_complex(period_closed(&sig, cycle, *k, c(*lambda, *lambda_im))?)
        }
        EvalKind::Invariants { r } => {
            let inv = surface_invariants(*r)?;
            serde_json::to_string_pretty(&inv).map_err(|e| Error::InvalidArgument(e.to_string()))?
        }
    })
}

fn run_config(a: &VerifyArgs) -> Result<RunConfig> {
    let grid = match (a.beta1, a.beta2) {
        (Some(b1), Some(b2)) => Grid::Point {
            beta1: b1,
            beta2: b2,
            lambda1: c(a.lambda1.unwrap_or(0.2), 0.0),
            lambda2: c(a.lambda2.unwrap_or(0.9), 0.0),
        },
        (None, None) => match a.grid.as_str() {
            "default" => Grid::Default,
            "random" => Grid::Random(a.points),
            g => {
                return Err(Error::InvalidArgument(format!(
                    "grid must be default or random, got {g}"
                )))
            }
        },
        _ => {
            return Err(Error::InvalidArgument(
                "--beta1 and --beta2 go together".into(),
            ))
        }
    };
    let mut cfg = RunConfig {
        grid,
        tolerance: a.tol,
        parallelism: a.par,
        seed: a.seed,
        cert_dir: a.cert_dir.clone(),
        ..RunConfig::default()
    };
    if let Some(s) = &a.sigs {
        cfg.sigs = parse_sigs(s)?;
    }
    cfg.validate()?;
    Ok(cfg)
}

/// CSV summary with columns `suite,name,inputs,abs_residual,rel_residual,tolerance,passed`; a
/// footer row carries the pass and fail counts when there is at least one case.
pub fn report_csv(reports: &[SuiteReport]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    w.write_record([
        "suite",
        "name",
        "inputs",
        "abs_residual",
        "rel_residual",
        "tolerance",
        "passed",
    ])
    .map_err(io)?;
    let (mut pass, mut fail) = (0, 0);
    for rep in reports {
        for case in &rep.cases {
            if case.passed {
                pass += 1;
            } else {
                fail += 1;
            }
            w.write_record([
                rep.suite.clone(),
                case.name.clone(),
                case.inputs.to_string(),
                format!("{:e}", case.abs_residual),
                format!("{:e}", case.rel_residual),
                format!("{:e}", case.tolerance),
                if case.passed { "pass" } else { "fail" }.to_string(),
            ])
            .map_err(io)?;
        }
    }
    if pass + fail > 0 {
        let counts = format!("passed={pass};failed={fail}");
        w.write_record([
            "summary",
            "",
            counts.as_str(),
            "",
            "",
            "",
            if fail == 0 { "pass" } else { "fail" },
        ])
        .map_err(io)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn write_out(out: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| Error::InvalidArgument(e.to_string())),
    }
}

fn verify(a: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32> {
    let suite: Suite = a.suite.parse()?;
    let cfg = run_config(a)?;
    let rep = run_suite(suite, &cfg)?;
    let text = match a.format {
        Format::Json => {
            serde_json::to_string_pretty(&rep).map_err(|e| Error::InvalidArgument(e.to_string()))?
                + "\n"
        }
        Format::Csv => report_csv(std::slice::from_ref(&rep))?,
    };
    write_out(&a.out, &text, stdout)?;
    Ok(if rep.all_passed() {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

fn report(inputs: &[PathBuf], out: &Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32> {
    let mut reps = Vec::new();
    for p in inputs {
        let text = std::fs::read_to_string(p)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display())))?;
        let rep: SuiteReport = serde_json::from_str(&text)
            .map_err(|e| Error::InvalidArgument(format!("{}: {e}", p.display())))?;
        reps.push(rep);
    }
    write_out(out, &report_csv(&reps)?, stdout)?;
    Ok(EXIT_OK)
}

/// Parses `args` (including the program name) and runs the command,
/// returning the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let res = match &cli.command {
        Command::Eval { kind } => eval(kind).and_then(|s| {
            writeln!(stdout, "{s}").map_err(|e| Error::InvalidArgument(e.to_string()))?;
            Ok(EXIT_OK)
        }),
        Command::Verify(a) => verify(a, stdout),
        Command::Report { inputs, out } => report(inputs, out, stdout),
    };
    match res {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut all = vec!["clausen"];
        all.extend_from_slice(args);
        let code = run(all, &mut o, &mut e);
        (
            code,
            String::from_utf8(o).unwrap(),
            String::from_utf8(e).unwrap(),
        )
    }

    #[test]
    fn formatting() {
        assert_eq!(fmt_real(1.180340599016096), "1.18034059901610");
        assert_eq!(fmt_real(-2.5), "-2.50000000000000");
        assert_eq!(fmt_real(1.5e-7), "1.50000000000000e-7");
        assert_eq!(
            fmt_complex(c(1.0, -2.0)),
            "1.00000000000000 - 2.00000000000000i"
        );
    }

    #[test]
    fn eval_commands() {
        let (code, out, _) = run_str(&[
            "eval", "2f1", "--a", "0.5", "--b", "0.5", "--c", "1", "--z", "0.5",
        ]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1.18034059901610");
        let (code, out, _) = run_str(&["eval", "invariants", "--r", "1"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["K2"], 0);
        assert_eq!(v["h11"], 20);
        let (code, out, _) = run_str(&[
            "eval", "period", "--sig", "1,1,1", "--cycle", "A", "--k", "1", "--lambda", "0.3",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("6.85555779271"), "{out}");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["eval", "2f1", "--a", "0.5"]).0, EXIT_USAGE);
        assert_eq!(
            run_str(&["eval", "period", "--sig", "1,2,1", "--lambda", "0.3"]).0,
            EXIT_USAGE
        );
        assert_eq!(
            run_str(&["eval", "2f1", "--a", "1", "--b", "1", "--c", "-2", "--z", "0.5"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(
            run_str(&["eval", "period", "--sig", "1,1,1", "--lambda", "0"]).0,
            EXIT_DOMAIN
        );
        assert_eq!(
            run_str(&["verify", "clausen", "--beta1", "-0.5", "--beta2", "0.5"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_str(&["verify", "nonsense"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["verify", "mirror", "--par", "0"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn verify_and_report() {
        let (code, out, _) = run_str(&["verify", "mirror"]);
        assert_eq!(code, 0);
        let rep: SuiteReport = serde_json::from_str(&out).unwrap();
        assert_eq!(rep.suite, "mirror");
        assert_eq!(rep.summary.total, 4);
        // a tolerance below the achieved residuals turns passes into failures
        let (code, _, _) = run_str(&["verify", "mirror", "--tol", "1e-300"]);
        assert_eq!(code, EXIT_FAILED);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("m.json");
        std::fs::write(&path, &out).unwrap();
        let (code, csv, _) = run_str(&["report", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 1 + 4 + 1);
        assert!(lines[0].starts_with("suite,name,inputs"));
        assert!(lines[5].contains("passed=4;failed=0"));

        let (code, csv, _) = run_str(&["report"]);
        assert_eq!((code, csv.lines().count()), (0, 1));
        let bad = dir.path().join("bad.json");
        std::fs::write(&bad, "{").unwrap();
        assert_eq!(run_str(&["report", bad.to_str().unwrap()]).0, EXIT_USAGE);
    }

    #[test]
    fn sig_parsing() {
        assert_eq!(parse_sigs("1,1,1;2,1,2").unwrap().len(), 2);
        assert!(parse_sig("1,1").is_err());
        assert!(parse_sig("(3,5,3)").is_ok());
    }
}
