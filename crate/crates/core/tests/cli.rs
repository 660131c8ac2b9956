use std::process::{Command, Output};

fn bhlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bhlab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn learn_requires_seed() {
    let out = bhlab(&["learn", "--n", "16", "--d", "1"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn zero_trials_is_usage_error() {
    assert_eq!(code(&bhlab(&["learn", "--n", "16", "--d", "1", "--trials", "0", "--seed", "1"])), 2);
}

#[test]
fn learn_emits_trials_then_summary() {
    let out = bhlab(&["learn", "--algo", "lmn", "--n", "12", "--d", "1", "--trials", "5", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 6);
    for (i, rec) in lines[..5].iter().enumerate() {
        assert_eq!(rec["trial"], i as u64);
        for key in ["n", "d", "N", "algo", "l2err", "success"] {
            assert!(rec.get(key).is_some(), "missing {key} in {rec}");
        }
    }
    assert!(lines[5]["summary"]["success_rate"].as_f64().unwrap() >= 0.0);
}

#[test]
fn verify_single_check_value() {
    let out = bhlab(&["verify", "--only", "cyclic.k3"]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let checks = report["checks"].as_array().unwrap();
    let value = checks.iter().find(|c| c["check"] == "cyclic.k3 value").unwrap();
    assert!((value["lhs"].as_f64().unwrap() - (1.0 + 2.0 * 3f64.sqrt()) / 4.0).abs() < 1e-9);
}

#[test]
fn composite_k_rejected() {
    assert_eq!(code(&bhlab(&["verify", "--only", "quantum.sigma-cover", "--K", "4"])), 2);
    assert_eq!(code(&bhlab(&["cyclic-remez", "--K", "4", "--seed", "1"])), 2);
}

#[test]
fn randomized_verify_needs_seed() {
    assert_eq!(code(&bhlab(&["verify", "--only", "boolean.moment-comparison"])), 2);
}

#[test]
fn default_verify_reports_known_failures() {
    let out = bhlab(&["verify", "--seed", "7"]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["check"].as_str().unwrap())
        .collect();
    assert!(!failed.is_empty());
    assert!(
        failed
            .iter()
            .all(|c| c.starts_with("learning.ei-log-scaling") || c.starts_with("cyclic.epsilon-star-interval")),
        "{failed:?}"
    );
}

#[test]
fn verify_csv_has_header_and_rows() {
    let out = bhlab(&["verify", "--only", "bh.exercise-inequality,quantum.anticommutation", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("check,"));
    assert_eq!(lines.count(), 2);
}

#[test]
fn out_flag_writes_same_bytes() {
    let dir = std::env::temp_dir().join(format!("bhlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let args = ["verify", "--only", "cyclic", "--seed", "5"];
    let stdout = bhlab(&args).stdout;
    let mut with_out: Vec<&str> = args.to_vec();
    let p = path.to_str().unwrap();
    with_out.extend(["--out", p]);
    let quiet = bhlab(&with_out);
    assert!(quiet.stdout.is_empty());
    assert_eq!(std::fs::read(&path).unwrap(), stdout);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn subcommands_are_deterministic() {
    let runs: [&[&str]; 6] = [
        &["learn", "--n", "64", "--d", "2", "--trials", "4", "--seed", "9", "--samples", "5000"],
        &["verify", "--seed", "11"],
        &["scan", "--what", "bh-ratio", "--instances", "50", "--seed", "2"],
        &["cyclic-remez", "--n", "2", "--d", "2", "--instances", "2", "--seed", "4"],
        &["cyclic-split", "--n", "3", "--d", "3", "--instances", "2", "--seed", "4"],
        &["qudit-reduce", "--n", "1", "--points", "20", "--seed", "8"],
    ];
    for args in runs {
        let a = bhlab(args);
        let b = bhlab(args);
        assert!([0, 1].contains(&code(&a)), "{args:?}: {}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["learn", "--n", "32", "--d", "2", "--trials", "6", "--seed", "13", "--samples", "3000"];
    let one = bhlab(&[&args[..], &["--threads", "1"]].concat());
    let four = bhlab(&[&args[..], &["--threads", "4"]].concat());
    assert_eq!(one.stdout, four.stdout);
}

#[test]
fn qudit_reduce_reads_observable_file() {
    let dir = std::env::temp_dir().join(format!("bhlab-qudit-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("obs.json");
    // X + X^2 on one qutrit is Hermitian
    std::fs::write(&path, r#"{"K":3,"n":1,"coeffs":[[[1],[0],1.0,0.0],[[2],[0],1.0,0.0]]}"#).unwrap();
    let out = bhlab(&["qudit-reduce", "--input", path.to_str().unwrap(), "--points", "30"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report["max_error"].as_f64().unwrap() <= 1e-9);
    std::fs::write(&path, "not json").unwrap();
    assert_eq!(code(&bhlab(&["qudit-reduce", "--input", path.to_str().unwrap()])), 2);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn bh_scan_csv() {
    let out = bhlab(&["bh-scan", "--dmax", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
}

#[test]
fn n_scaling_reports_ratio() {
    let out = bhlab(&["scan", "--what", "n-scaling", "--n", "64,256"]);
    assert!([0, 1].contains(&code(&out)));
    assert!(!out.stdout.is_empty());
}

#[test]
fn exit_codes_stay_in_range() {
    for args in [
        vec!["nonsense"],
        vec!["learn"],
        vec!["verify", "--only", "no.such.check"],
        vec!["cyclic-split", "--K", "3", "--n", "0", "--seed", "1"],
        vec!["scan", "--what", "n-scaling", "--n", ""],
        vec!["verify", "--list"],
        vec!["--help"],
    ] {
        let c = code(&bhlab(&args));
        assert!([0, 1, 2].contains(&c), "{args:?} -> {c}");
    }
}
