use std::process::{Command, Output};

use serde_json::Value;
use sievelab::report::{read_csv, CSV_HEADER};

fn sievelab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sievelab")).args(args).env_remove("SIEVELAB_CACHE").output().unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = sievelab(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    sievelab(args).status.code().unwrap()
}

#[test]
fn constants_at_the_published_point() {
    let v = json(&["constants", "--a", "1/87", "--delta", "85/688"]);
    for key in ["c1", "c2", "c_delta", "f_ad", "f_prime_ad"] {
        assert!(v[key].is_number(), "{key}");
    }
    let f = v["f_ad"].as_f64().unwrap();
    assert!((f - 0.000_105_596_8).abs() < 1e-10, "{f}");
    assert_eq!(v["f_ad_positive"], Value::Bool(true));
    assert_eq!(v["delta_exact"], "85/688");
    // decimal flags are read exactly
    let d = json(&["constants", "--a", "0.01", "--delta", "0.125", "--N", "8000000", "--k", "3"]);
    assert_eq!(d["a_exact"], "1/100");
    // N' = 10^6: M = floor(log2 10^3.75) = 12
    assert_eq!(d["m_terms"], 12);
}

#[test]
fn richert_k8_reports_the_inequality() {
    let v = json(&["richert", "--K", "8"]);
    assert!((v["lead_constant"].as_f64().unwrap() - 52.0 / 3.0).abs() < 1e-10);
    assert_eq!(v["16·log3 > 52/3"], Value::Bool(true));
    assert_eq!(v["a"], "2/5");
    let k4 = json(&["richert", "--K", "4", "--epsilon", "0.001"]);
    assert_eq!(k4["a"], "5/18");
    assert!(k4.get("16·log3 > 52/3").is_none());
}

#[test]
fn count_row_for_small_sk() {
    let out = sievelab(&["count", "--kind", "sK", "--N", "20", "--b", "1", "--k", "2", "--K", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, format!("{CSV_HEADER}\n20,1,2,sK,1,3,,,,beyond-theorem\n"));
}

#[test]
fn count_with_a_bound() {
    let out = sievelab(&["count", "--kind", "n2", "--N", "100000", "--b", "3", "--k", "2", "--truncation", "1000"]);
    assert!(out.status.success());
    let rows = read_csv(&out.stdout[..]).unwrap();
    assert_eq!(rows.len(), 1);
    let r = &rows[0];
    assert!(r.count > 0 && r.bound.unwrap() > 0.0 && r.ratio.unwrap() > 1.0);
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["count", "--kind", "sK", "--N", "20", "--b", "2", "--k", "2", "--K", "1"]), 2);
    assert_eq!(code(&["count", "--kind", "sK", "--N", "20", "--k", "2"]), 2);
    assert_eq!(code(&["count", "--kind", "s3", "--N", "20", "--k", "2", "--K", "1"]), 2);
    assert_eq!(code(&["constants", "--bogus"]), 2);
    assert_eq!(code(&["richert", "--K", "9"]), 2);
    assert_eq!(code(&["count", "--kind", "sK", "--N", "20", "--k", "1", "--a-exp", "1/2", "--K", "1"]), 2);
    // domain errors found during evaluation
    assert_eq!(code(&["constants", "--delta", "1/2"]), 2);
    assert_eq!(code(&["optimize", "--grid-a", "4"]), 2);
    // beyond the sieve ceiling
    assert_eq!(code(&["count", "--kind", "sK", "--N", "30000000000", "--k", "0", "--K", "1"]), 1);
    let out = sievelab(&["count", "--kind", "sK", "--N", "20", "--b", "2", "--k", "2", "--K", "1"]);
    assert_eq!(String::from_utf8(out.stderr).unwrap().lines().count(), 1);
    assert!(out.stdout.is_empty());
    assert_eq!(code(&["--help"]), 0);
}

#[test]
fn report_is_deterministic_and_parses() {
    let args = ["report", "--N", "10000,50000", "--b", "1,3", "--k", "0,2", "--truncation", "1000", "--threads", "1"];
    let a = sievelab(&args);
    let b = sievelab(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let rows = read_csv(&a.stdout[..]).unwrap();
    // 2 b x 2 N x 2 k x (n2, s2, six sK)
    assert_eq!(rows.len(), 2 * 2 * 2 * 8);
    assert!(rows.iter().all(|r| r.bound.is_some()));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("grid.csv");
    let mut with_out = args.to_vec();
    with_out.extend(["--out", path.to_str().unwrap()]);
    let c = sievelab(&with_out);
    assert!(c.status.success() && c.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
}

#[test]
fn audit_and_equidist_and_bounds() {
    let v = json(&["audit", "--N", "100000", "--b", "1", "--k", "3", "--delta", "85/688"]);
    assert_eq!(v["clean"], Value::Bool(true));
    assert_eq!(v["positive_outside_s"], 0);

    let e = json(&["equidist", "--x", "100000", "--q", "8", "--Dmax", "5", "--seed", "7"]);
    assert!(e["normalized"].as_f64().unwrap() > 0.0);
    assert_eq!(e["terms"].as_array().unwrap().len(), 3);
    let r = json(&["equidist", "--x", "100000", "--q", "8", "--residue", "3"]);
    assert_eq!(r["pi_val"], 2409);

    let n2 = json(&["bounds", "--kind", "n2", "--N", "1000000000", "--b", "1", "--truncation", "1000"]);
    let s2 = json(&["bounds", "--kind", "s2", "--N", "1000000000", "--b", "1", "--truncation", "1000"]);
    assert_eq!(n2["k"], 0);
    // rendered at 12 significant digits, so doubling holds to that precision
    let (a, b) = (s2["value"].as_f64().unwrap(), n2["value"].as_f64().unwrap());
    assert!((a - 2.0 * b).abs() <= 1e-11 * a);
}

#[test]
fn optimize_small_grid() {
    let v = json(&["optimize", "--grid-a", "16", "--grid-d", "16", "--tol", "1e-6"]);
    let (a, d, f) = (v["a"].as_f64().unwrap(), v["delta"].as_f64().unwrap(), v["f"].as_f64().unwrap());
    assert!(a > 0.0 && a < 0.1 && d >= 1.0 / (3.0 * std::f64::consts::E) - 1e-12);
    assert!(f > 0.000_105_596_8);
}

#[test]
fn cache_directory_is_used() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_sievelab"))
            .args(["count", "--kind", "sK", "--N", "1000", "--k", "1", "--K", "2"])
            .env("SIEVELAB_CACHE", dir.path())
            .output()
            .unwrap()
    };
    let first = run();
    assert!(first.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    assert_eq!(run().stdout, first.stdout);
}
