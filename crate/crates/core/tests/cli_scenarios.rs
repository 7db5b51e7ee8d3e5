//! Catalog replay against golden reports, and the binary's exit-code contract.
//!
//! Set `PRISMDISP_BLESS=1` to rewrite the golden files from the current output.

use std::path::{Path, PathBuf};
use std::process::Command;

use prismdisp::cli::{builtin_catalog, catalog_files, report_emit, run_scenario_file, Format, RunOptions, Scenario};

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prismdisp"))
}

fn tmp(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("prismdisp-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn catalog_matches_golden_reports() {
    let bless = std::env::var_os("PRISMDISP_BLESS").is_some();
    let files = catalog_files(&builtin_catalog()).unwrap();
    assert!(files.len() >= 3);
    for f in files {
        let rep = run_scenario_file(&f, &RunOptions::default()).unwrap();
        assert!(rep.as_expected(), "{}: {:?} vs {:?}", f.display(), rep.status, rep.expected);
        let out = report_emit(&rep, Format::Json);
        assert!(out.is_ascii());
        let golden = golden_dir().join(f.file_stem().unwrap()).with_extension("json");
        if bless {
            std::fs::create_dir_all(golden_dir()).unwrap();
            std::fs::write(&golden, &out).unwrap();
        } else {
            let want = std::fs::read_to_string(&golden).unwrap_or_else(|e| panic!("{}: {e}", golden.display()));
            assert_eq!(out, want, "{} drifted from its golden report", f.display());
        }
    }
}

#[test]
fn catalog_scenarios_round_trip() {
    for f in catalog_files(&builtin_catalog()).unwrap() {
        let sc = Scenario::load(&f).unwrap();
        assert_eq!(Scenario::parse(&sc.to_toml()).unwrap(), sc, "{}", f.display());
    }
}

#[test]
fn exit_codes_follow_status() {
    let cat = builtin_catalog();
    let code = |args: &[&str]| bin().args(args).output().unwrap().status.code();
    assert_eq!(code(&["run", cat.join("gl2_descent.scn").to_str().unwrap()]), Some(0));
    assert_eq!(code(&["run", cat.join("nondisplayed.scn").to_str().unwrap()]), Some(2));
    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["run", "/nonexistent.scn"]), Some(1));
    assert_eq!(code(&["descend", "--mu", "1,0", "--x", "1,0;0"]), Some(1));
    // Decision precision 1 leaves the classification undecided.
    assert_eq!(
        code(&["bk", "--p", "3", "--n", "4", "--m", "6", "--e", "3 + t", "--mu", "1,1,1", "--x", "1,0,0;0,1,0;0,0,1"]),
        Some(3)
    );
}

#[test]
fn parse_errors_report_line_and_column() {
    let p = tmp("bad.scn", "id = \"x\"\ncommand = \"bk\"\ne = \"2 + t\"\nf = [[\"1 + q\"]]\n[coeff]\np = 2\nn = 3\n[series]\nr = 1\nm = 4\n");
    let out = bin().arg("run").arg(&p).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4, column 12"), "{err}");
}

#[test]
fn subcommands_build_scenarios() {
    let out = bin().args(["--format", "json", "descend", "--mu", "1,0"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["certificates"]["descent"]["residual_zero"], true);
    let out = bin().args(["display", "--mu", "1,0", "--x", "1 + t,t;2,1", "--g", "1,0;2 + t,1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin().args(["prism-check", "--element", "t"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn selftest_rejects_an_empty_catalog() {
    let dir = std::env::temp_dir().join(format!("prismdisp-empty-cat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = bin().arg("selftest").env("PRISMDISP_CATALOG", &dir).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("no scenarios"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let run = || {
        bin()
            .args(["--seed", "9", "--format", "json", "run"])
            .arg(builtin_catalog().join("prism_2_plus_t.scn"))
            .output()
            .unwrap()
            .stdout
    };
    assert_eq!(run(), run());
}
