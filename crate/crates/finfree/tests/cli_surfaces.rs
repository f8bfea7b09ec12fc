//! The external surfaces: polynomial/data JSON schemas and the `finfree`
//! binary's subcommands.

use finfree::poly::MonicPoly;
use finfree::scalar::Scalar;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_finfree"))
}

#[test]
fn convolve_subcommand_round_trips_json() {
    let dir = std::env::temp_dir().join("finfree_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let p = MonicPoly::from_coeffs(vec![
        Scalar::one(),
        Scalar::zero(),
        Scalar::from_int(-1),
    ])
    .unwrap();
    let path = dir.join("p.json");
    std::fs::write(&path, p.to_json()).unwrap();
    let out_path = dir.join("r.json");
    let status = bin()
        .args(["convolve", "--op", "boxplus", "--in"])
        .arg(&path)
        .arg(&path)
        .arg("--out")
        .arg(&out_path)
        .status()
        .unwrap();
    assert!(status.success());
    let r = MonicPoly::from_json(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(r.coeff(2), Scalar::from_int(-2));
}

#[test]
fn transform_subcommand_prints_exact_strings() {
    let dir = std::env::temp_dir().join("finfree_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let p = MonicPoly::from_integer_roots(&[1, 2, 3]);
    let path = dir.join("q.json");
    std::fs::write(&path, p.to_json()).unwrap();
    let out = bin()
        .args(["transform", "--what", "cumulants", "--in"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let coeffs: Vec<String> = serde_json::from_str(&text).unwrap();
    assert_eq!(coeffs[0], "2"); // first cumulant = mean of {1,2,3}
}

#[test]
fn run_subcommand_exit_code_and_verdict_file() {
    let dir = std::env::temp_dir().join("finfree_cli_verdict");
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("cfg.txt");
    std::fs::write(&cfg, "degrees = 10, 20\n").unwrap();
    let status = bin()
        .args(["run", "cosine-cauchy", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&dir)
        .status()
        .unwrap();
    assert!(status.success());
    let verdict = std::fs::read_to_string(dir.join("verdict_cosine-cauchy.json")).unwrap();
    assert!(verdict.contains("\"pass\": true"));
    // CSV artifacts emitted alongside
    assert!(dir.join("cosine_cauchy_d10.csv").exists());
    // unknown scenario: nonzero exit
    let status = bin().args(["run", "no-such"]).status().unwrap();
    assert!(!status.success());
}

#[test]
fn appell_and_measure_subcommands() {
    let dir = std::env::temp_dir().join("finfree_cli_appell");
    std::fs::create_dir_all(&dir).unwrap();
    // Gaussian data -> normalized family -> roots vs semicircle
    std::fs::write(
        dir.join("f.json"),
        r#"{"c": "0", "sigma2": "1", "roots": []}"#,
    )
    .unwrap();
    let poly_path = dir.join("p.json");
    let status = bin()
        .args(["appell", "--data"])
        .arg(dir.join("f.json"))
        .args(["--d", "40", "--normalized", "--out"])
        .arg(&poly_path)
        .status()
        .unwrap();
    assert!(status.success());
    let out = bin()
        .args(["measure", "--law", "semicircle", "--ks", "--in"])
        .arg(&poly_path)
        .args(["--csv"])
        .arg(dir.join("cdf.csv"))
        .output()
        .unwrap();
    assert!(out.status.success());
    let ks: f64 = String::from_utf8(out.stdout).unwrap().trim().parse().unwrap();
    assert!(ks < 0.1, "ks = {ks}");
    let csv = std::fs::read_to_string(dir.join("cdf.csv")).unwrap();
    assert!(csv.starts_with("location,weight,F_emp,F_ref\n"));
    assert_eq!(csv.lines().count(), 41);
}

#[test]
fn mc_subcommand_emits_report() {
    let out = bin()
        .args([
            "mc", "--check", "boxplus", "--d", "3", "--samples", "400", "--seed", "9",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"check\": \"boxplus\""));
    assert!(text.contains("\"samples\": 400"));
}
