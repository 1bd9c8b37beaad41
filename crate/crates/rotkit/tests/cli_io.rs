//! End-to-end checks of the command-line surface: every path must be a thin
//! wrapper whose output matches the corresponding library call bit for bit.

use std::fmt::Write as _;
use std::path::PathBuf;

use rotkit::cli::run_captured;
use rotkit::datagen::{load_dataset, Split};
use rotkit::rep::{canonical_params, RepKind};
use rotkit::so3::RotationMatrix3;

fn temp_path(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("rotkit-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn convert_euler_to_matrix_is_exact() {
    let (code, out, err) = run_captured(&[
        "rotkit", "convert", "--from", "euler", "--to", "matrix", "--deg", "90,0,0",
    ]);
    assert_eq!(code, 0, "stderr: {err}");
    let values: Vec<f64> = out.trim().split(',').map(|t| t.parse().unwrap()).collect();
    assert_eq!(values.len(), 9);
    // Bit-for-bit the same as the library call the subcommand wraps.
    let expected = rotkit::rep::EulerZYX::new(90f64.to_radians(), 0.0, 0.0)
        .to_matrix()
        .to_flat();
    for (got, want) in values.iter().zip(expected.iter()) {
        assert_eq!(got.to_bits(), want.to_bits(), "CLI output is not bit-exact");
    }
    // And numerically a quarter turn about z.
    let quarter = RotationMatrix3::rot_z(90f64.to_radians()).to_flat();
    for (got, want) in values.iter().zip(quarter.iter()) {
        assert!((got - want).abs() < 1e-15);
    }
}

#[test]
fn convert_round_trips_through_any_representation() {
    for rep in ["quat", "aa3", "aa4", "gs6", "stereo5", "euler"] {
        let (code, out, _) = run_captured(&[
            "rotkit", "convert", "--from", "matrix", "--to", rep, "--deg",
            "0.0,-1.0,0.0,1.0,0.0,0.0,0.0,0.0,1.0",
        ]);
        assert_eq!(code, 0);
        let back = run_captured(&[
            "rotkit", "convert", "--from", rep, "--to", "matrix", "--deg", out.trim(),
        ]);
        assert_eq!(back.0, 0);
        let values: Vec<f64> = back.1.trim().split(',').map(|t| t.parse().unwrap()).collect();
        let expected = [0.0, -1.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0];
        for (got, want) in values.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-9, "{rep}: {got} vs {want}");
        }
    }
}

#[test]
fn convert_rejects_bad_input() {
    // Wrong arity is a usage error.
    let (code, _, err) = run_captured(&[
        "rotkit", "convert", "--from", "euler", "--to", "matrix", "--deg", "1,2",
    ]);
    assert_eq!(code, 2, "{err}");

    // A non-rotation matrix is a domain error.
    let (code, _, err) = run_captured(&[
        "rotkit", "convert", "--from", "matrix", "--to", "quat", "--deg",
        "1,0,0,0,1,0,0,0,-1",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("not a rotation"), "{err}");
}

#[test]
fn unknown_flags_exit_2() {
    let (code, _, _) = run_captured(&["rotkit", "zeta", "--bogus", "x"]);
    assert_eq!(code, 2);
    let (code, _, _) = run_captured(&["rotkit", "probe", "--rep", "gs6", "--delta", "0.5"]);
    assert_eq!(code, 2, "delta above 0.1 rad must be range-checked");
}

#[test]
fn gen_is_byte_identical_across_runs() {
    let a = temp_path("gen-a.jsonl");
    let b = temp_path("gen-b.jsonl");
    for path in [&a, &b] {
        let (code, _, err) = run_captured(&[
            "rotkit", "gen", "--dist", "many-holes", "--seed", "11",
            "--train", "120", "--val", "30", "--test", "20",
            "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert_eq!(bytes_a, bytes_b);
    std::fs::remove_file(a).ok();
    std::fs::remove_file(b).ok();
}

#[test]
fn zeta_output_matches_library_value() {
    let path = temp_path("zeta.jsonl");
    let (code, _, _) = run_captured(&[
        "rotkit", "gen", "--dist", "random", "--seed", "3",
        "--train", "150", "--val", "20", "--test", "25",
        "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let (code, out, _) = run_captured(&["rotkit", "zeta", "--dataset", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let from_cli: f64 = out.trim().parse().unwrap();
    let from_lib = load_dataset(&path).unwrap().zeta().unwrap().degrees;
    assert_eq!(from_cli.to_bits(), from_lib.to_bits());
    std::fs::remove_file(path).ok();
}

/// Ground-truth predictions in cycling representations, with the angles
/// expressed in degrees the way the file format requires.
fn perfect_predictions(ds: &rotkit::datagen::RotationDataset) -> String {
    let reps = [
        RepKind::Euler,
        RepKind::Quaternion,
        RepKind::AxisAngle3,
        RepKind::AxisAngle4,
        RepKind::GramSchmidt6,
        RepKind::Stereo5,
    ];
    let mut out = String::new();
    for (i, sample) in ds.split(Split::Test).enumerate() {
        let rep = reps[i % reps.len()];
        let mut params = canonical_params(rep, &sample.rotation);
        for &slot in rep.angle_scaled_slots() {
            params[slot] = params[slot].to_degrees();
        }
        let values: Vec<String> = params.iter().map(|v| format!("{v:.17e}")).collect();
        writeln!(
            out,
            "{{\"id\":{},\"rep\":\"{}\",\"value\":[{}]}}",
            sample.id,
            rep.tag(),
            values.join(",")
        )
        .unwrap();
    }
    out
}

#[test]
fn eval_scores_perfect_predictions_at_zero() {
    let ds_path = temp_path("eval-ds.jsonl");
    let pred_path = temp_path("eval-pred.jsonl");
    let report_path = temp_path("eval-report.json");
    let curve_path = temp_path("eval-curve.csv");
    let fit_path = temp_path("eval-fit.json");
    let (code, _, _) = run_captured(&[
        "rotkit", "gen", "--dist", "random", "--seed", "5",
        "--train", "60", "--val", "10", "--test", "12",
        "--out", ds_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let ds = load_dataset(&ds_path).unwrap();
    std::fs::write(&pred_path, perfect_predictions(&ds)).unwrap();

    let (code, _, err) = run_captured(&[
        "rotkit", "eval",
        "--gt", ds_path.to_str().unwrap(),
        "--pred", pred_path.to_str().unwrap(),
        "--report", report_path.to_str().unwrap(),
        "--curve", curve_path.to_str().unwrap(),
        "--fit", fit_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");

    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report_path).unwrap()).unwrap();
    assert!(report["mean"].as_f64().unwrap() < 1e-5);
    assert!(report["median"].as_f64().unwrap() < 1e-5);
    assert_eq!(report["invalid"], 0);
    assert!((report["mAA5"].as_f64().unwrap() - 1.0).abs() < 1e-5);

    let curve = std::fs::read_to_string(&curve_path).unwrap();
    assert!(curve.starts_with("threshold_deg,accuracy\n"));

    let fit: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&fit_path).unwrap()).unwrap();
    assert!(fit["slope"].as_f64().unwrap().abs() < 1e-6);

    for p in [ds_path, pred_path, report_path, curve_path, fit_path] {
        std::fs::remove_file(p).ok();
    }
}

#[test]
fn eval_counts_degenerate_predictions_as_invalid() {
    let ds_path = temp_path("invalid-ds.jsonl");
    let pred_path = temp_path("invalid-pred.jsonl");
    let (code, _, _) = run_captured(&[
        "rotkit", "gen", "--dist", "random", "--seed", "6",
        "--train", "40", "--val", "5", "--test", "6",
        "--out", ds_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);

    let ds = load_dataset(&ds_path).unwrap();
    let mut pred = String::new();
    for (i, sample) in ds.split(Split::Test).enumerate() {
        if i == 0 {
            // Parallel columns: degenerate, must be excluded, not fatal.
            writeln!(
                pred,
                "{{\"id\":{},\"rep\":\"gs6\",\"value\":[1,1,1,1,1,1]}}",
                sample.id
            )
            .unwrap();
        } else {
            let params = canonical_params(RepKind::GramSchmidt6, &sample.rotation);
            let values: Vec<String> = params.iter().map(|v| format!("{v:.17e}")).collect();
            writeln!(
                pred,
                "{{\"id\":{},\"rep\":\"gs6\",\"value\":[{}]}}",
                sample.id,
                values.join(",")
            )
            .unwrap();
        }
    }
    std::fs::write(&pred_path, pred).unwrap();

    let (code, out, err) = run_captured(&[
        "rotkit", "eval",
        "--gt", ds_path.to_str().unwrap(),
        "--pred", pred_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    assert!(err.contains("excluded id"), "{err}");
    let report: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(report["invalid"], 1);

    std::fs::remove_file(ds_path).ok();
    std::fs::remove_file(pred_path).ok();
}

#[test]
fn eval_reports_missing_and_malformed_predictions() {
    let ds_path = temp_path("missing-ds.jsonl");
    let pred_path = temp_path("missing-pred.jsonl");
    let (code, _, _) = run_captured(&[
        "rotkit", "gen", "--dist", "random", "--seed", "8",
        "--train", "30", "--val", "5", "--test", "4",
        "--out", ds_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0);
    let ds = load_dataset(&ds_path).unwrap();
    let first_test = ds.split(Split::Test).next().unwrap().id;

    // Missing id: only one of four test samples predicted.
    let params = canonical_params(RepKind::Quaternion, &ds.split(Split::Test).next().unwrap().rotation);
    let values: Vec<String> = params.iter().map(|v| v.to_string()).collect();
    std::fs::write(
        &pred_path,
        format!(
            "{{\"id\":{first_test},\"rep\":\"quat\",\"value\":[{}]}}\n",
            values.join(",")
        ),
    )
    .unwrap();
    let (code, _, err) = run_captured(&[
        "rotkit", "eval", "--gt", ds_path.to_str().unwrap(), "--pred", pred_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("missing prediction for test id"), "{err}");

    // Wrong value count is a representation mismatch naming the line.
    std::fs::write(
        &pred_path,
        format!("{{\"id\":{first_test},\"rep\":\"quat\",\"value\":[1,0,0]}}\n"),
    )
    .unwrap();
    let (code, _, err) = run_captured(&[
        "rotkit", "eval", "--gt", ds_path.to_str().unwrap(), "--pred", pred_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("line 1") && err.contains("mismatch"), "{err}");

    std::fs::remove_file(ds_path).ok();
    std::fs::remove_file(pred_path).ok();
}

#[test]
fn probe2d_reports_both_distances() {
    let (code, out, _) = run_captured(&["rotkit", "probe2d", "--epsilon-deg", "1.0"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!((v["true_distance_deg"].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((v["rep_distance_deg"].as_f64().unwrap() - 358.0).abs() < 1e-12);
}

#[test]
fn fit_writes_consistent_trace() {
    let trace_path = temp_path("fit-trace.csv");
    let (code, out, err) = run_captured(&[
        "rotkit", "fit", "--id", "19", "--seed", "2",
        "--trace", trace_path.to_str().unwrap(),
    ]);
    assert_eq!(code, 0, "{err}");
    let summary: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(summary["converged"], true);

    let trace = std::fs::read_to_string(&trace_path).unwrap();
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines[0], "iteration,e_re_deg");
    let iterations = summary["iterations"].as_u64().unwrap() as usize;
    assert_eq!(lines.len(), iterations + 2, "header + iterations + 1 rows");
    std::fs::remove_file(trace_path).ok();
}

#[test]
fn seed_falls_back_to_environment() {
    // Run the real binary so the environment variable is per-process.
    let out_a = temp_path("env-a.jsonl");
    let out_b = temp_path("env-b.jsonl");
    let bin = env!("CARGO_BIN_EXE_rotkit");
    let run = |path: &PathBuf, env_seed: Option<&str>, flag_seed: Option<&str>| {
        let mut cmd = std::process::Command::new(bin);
        cmd.args([
            "gen", "--dist", "random", "--train", "20", "--val", "5", "--test", "5",
            "--out", path.to_str().unwrap(),
        ]);
        cmd.env_remove("ROTKIT_SEED");
        if let Some(seed) = env_seed {
            cmd.env("ROTKIT_SEED", seed);
        }
        if let Some(seed) = flag_seed {
            cmd.args(["--seed", seed]);
        }
        let status = cmd.status().unwrap();
        assert!(status.success());
    };
    run(&out_a, Some("99"), None);
    run(&out_b, None, Some("99"));
    assert_eq!(std::fs::read(&out_a).unwrap(), std::fs::read(&out_b).unwrap());
    std::fs::remove_file(out_a).ok();
    std::fs::remove_file(out_b).ok();
}
