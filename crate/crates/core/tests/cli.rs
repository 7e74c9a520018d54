use std::path::Path;
use std::process::Command;

fn emergence(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_emergence")).args(args).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned())
}

fn without_timestamp(path: &Path) -> serde_json::Value {
    let mut v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let record = v.as_object_mut().unwrap();
    assert!(record.remove("timestamp").is_some());
    assert_eq!(record["schema"], "emergence-run/1");
    v
}

#[test]
fn exit_codes() {
    assert_eq!(emergence(&["quantize", "--measure", "leb1d", "--eps", "0.125"]).0, 0);
    assert_eq!(emergence(&["quantize", "--bogus"]).0, 1);
    assert_eq!(emergence(&["codes", "--n-bits", "7"]).0, 1);
    assert_eq!(emergence(&["construct", "--n", "3", "--m-cap", "30", "--verify"]).0, 2);
}

#[test]
fn closed_form_is_printed() {
    let (code, out) = emergence(&["emergence", "exact-horizontal", "--eps", "0.05"]);
    assert_eq!(code, 0);
    assert!(out.contains('5'), "{out}");
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let args = ["--seed", "11", "codes", "--n-bits", "32", "--mode", "randomized", "--target", "40", "--out"];
            let mut args: Vec<&str> = args.to_vec();
            args.push(path.to_str().unwrap());
            assert_eq!(emergence(&args).0, 0);
            serde_json::to_string(&without_timestamp(&path)).unwrap()
        })
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn scaling_table_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("table.csv");
    let csv = dir.path().join("out.csv");
    let rows: String = [0.25f64, 0.2, 0.125, 0.1]
        .iter()
        .map(|e| format!("{e},{}\n", (1.0 / e).exp().ceil()))
        .collect();
    std::fs::write(&table, format!("epsilon,lower\n{rows}")).unwrap();
    let (code, _) = emergence(&["scaling", "--table", table.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("epsilon,neg_log_eps,lower,upper,loglog_lower,loglog_upper\n"));
    assert!(!text.contains('\r'));
}
