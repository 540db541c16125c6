use std::path::PathBuf;
use std::process::Command;

use clausen_ffi::*;

#[test]
fn header_declares_the_abi() {
    let h =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/clausen.h")).unwrap();
    for name in [
        "typedef struct ClausenReport ClausenReport;",
        "clausen_hyp2f1",
        "clausen_appell_f2",
        "clausen_period",
        "clausen_verify_identity",
        "clausen_verify_suite",
        "clausen_report_counts",
        "clausen_report_json",
        "clausen_report_free",
        "clausen_last_error",
        "#define CLAUSEN_ERR_DOMAIN -3",
    ] {
        assert!(h.contains(name), "{name} missing from header");
    }
}

#[test]
fn report_handles() {
    let mut rep = std::ptr::null_mut();
    assert_eq!(
        unsafe { clausen_verify_identity(0.25, 0.375, 0.15, 0.85, &mut rep) },
        CLAUSEN_OK
    );
    let (mut t, mut p) = (0u64, 0u64);
    assert_eq!(
        unsafe { clausen_report_counts(rep, &mut t, &mut p) },
        CLAUSEN_OK
    );
    assert_eq!((t, p), (1, 1));
    let json = unsafe { std::ffi::CStr::from_ptr(clausen_report_json(rep)) }
        .to_str()
        .unwrap()
        .to_string();
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["summary"]["passed"], 1);
    unsafe { clausen_report_free(rep) };
    // moduli with |z1|+|z2| beyond the series domain
    assert_eq!(
        unsafe { clausen_verify_identity(0.5, 0.5, 0.3, 0.4, &mut rep) },
        CLAUSEN_ERR_DOMAIN
    );
    assert!(rep.is_null());
}

// cargo test does not produce the staticlib, so build it into a private
// target directory (the outer one is locked while tests run)
fn build_staticlib() -> PathBuf {
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("staticlib");
    let status = Command::new(env!("CARGO"))
        .args(["build", "-q", "-p", "clausen-ffi", "--lib"])
        .env("CARGO_TARGET_DIR", &target)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .status()
        .expect("cargo");
    assert!(status.success());
    target.join("debug/libclausen_ffi.a")
}

#[test]
fn c_program_links_and_runs() {
    let lib = build_staticlib();
    let out = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("clausen_smoke");
    let dir = env!("CARGO_MANIFEST_DIR");
    let status = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-o"])
        .arg(&out)
        .arg(format!("{dir}/tests/smoke.c"))
        .arg(format!("-I{dir}/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm"])
        .status()
        .expect("C compiler");
    assert!(status.success());
    let run = Command::new(&out).output().unwrap();
    assert!(
        run.status.success(),
        "{}",
        String::from_utf8_lossy(&run.stderr)
    );
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok 0.1.0"));
}
