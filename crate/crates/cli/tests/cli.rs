//! End-to-end tests of the `teich` binary: exit codes, evaluator values,
//! report determinism and the scan tables.

use std::process::{Command, Output};

fn teich(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_teich"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn eval_kernel_matches_pinned_example() {
    let out = teich(&["eval", "kernel", "--x0", "i", "--x", "2i", "--u", "0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "0.5");
}

#[test]
fn eval_dist_matches_pinned_example() {
    let out = teich(&["eval", "dist", "--x", "i", "--y", "2i"]);
    assert!(out.status.success());
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 0.5 * 2.0f64.ln()).abs() < 1e-12);
}

#[test]
fn eval_ext_matches_pinned_example() {
    let out = teich(&["eval", "ext", "--x", "i", "--f", "1,0"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "1");
}

#[test]
fn eval_density_and_green() {
    let out = teich(&["eval", "density", "--x0", "i", "--u", "0"]);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 1.0 / std::f64::consts::PI).abs() < 1e-15);

    let out = teich(&["eval", "green", "--x", "i", "--y", "2i"]);
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - (1.0f64 / 3.0).ln()).abs() < 1e-12);

    let out = teich(&["eval", "green", "--x", "i", "--y", "i"]);
    assert_eq!(stdout(&out).trim(), "-inf");
}

#[test]
fn eval_poisson_integral_constant() {
    let out = teich(&[
        "eval",
        "poisson-integral",
        "--x0",
        "i",
        "--x",
        "3+i/2",
        "--fn",
        "const:1",
    ]);
    assert!(out.status.success());
    let v: f64 = stdout(&out).trim().parse().unwrap();
    assert!((v - 1.0).abs() < 1e-9);
}

#[test]
fn malformed_tau_exits_2_with_position() {
    let out = teich(&["eval", "dist", "--x", "1+zi", "--y", "2i"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("byte"), "{err}");
}

#[test]
fn unknown_suite_exits_2_and_lists_valid_names() {
    let out = teich(&["verify", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr).to_string();
    assert!(err.contains("kernel-transport"), "{err}");
}

#[test]
fn unknown_quantity_exits_2() {
    let out = teich(&["eval", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_hm_constant_passes() {
    let out = teich(&[
        "verify",
        "hm-constant",
        "--base",
        "i",
        "--target",
        "2i",
        "--samples",
        "5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("PASS"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn verify_reports_are_byte_identical_for_same_seed() {
    let dir = std::env::temp_dir().join(format!("teich-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let a = dir.join("a.json");
    let b = dir.join("b.json");
    for path in [&a, &b] {
        let out = teich(&[
            "verify",
            "kernel-transport",
            "--samples",
            "5000",
            "--seed",
            "11",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(0));
    }
    let ba = std::fs::read(&a).unwrap();
    let bb = std::fs::read(&b).unwrap();
    assert!(!ba.is_empty());
    assert_eq!(ba, bb);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn verify_csv_format_has_header() {
    let out = teich(&["verify", "minsky", "--samples", "2000", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("name,anchor,computed,expected,tolerance,pass,runtime_ms"));
}

#[test]
fn table_schwarz_scan() {
    let out = teich(&["table", "schwarz", "--heights", "1,0.1,0.01,0.001"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5, "{text}");
    assert_eq!(lines[0], "height,value,gap");
    // Gap column decreases monotonically for the smooth default function.
    let gaps: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.split(',').nth(2).unwrap().parse().unwrap())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
}

#[test]
fn table_ray_limit_scan_converges() {
    let out = teich(&["table", "ray-limit", "--t-max", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 21, "{text}");
    let last_gap: f64 = lines[20].split(',').nth(3).unwrap().parse().unwrap();
    assert!(last_gap <= 1e-4, "last-row gap {last_gap}");
}

#[test]
fn empty_scan_exits_2() {
    let out = teich(&["table", "schwarz", "--heights", ""]);
    assert_eq!(out.status.code(), Some(2));
    let out = teich(&["table", "ray-limit", "--t-max", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_with_track_file() {
    let dir = std::env::temp_dir().join(format!("teich-track-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("torus.track");
    std::fs::write(
        &path,
        "traintrack 1 1\nbranch 1\nbranch 2\nswitch in:1,2 out:1,2\n",
    )
    .unwrap();
    let out = teich(&[
        "verify",
        "thurston-homogeneity",
        "--samples",
        "200000",
        "--track",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let _ = std::fs::remove_dir_all(&dir);
}
