use std::path::Path;
use std::process::Command;

fn run(out: &Path, args: &[&str]) -> (i32, String) {
    let o = Command::new(env!("CARGO_BIN_EXE_hardylab"))
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("HARDYLAB_SEED")
        .output()
        .expect("binary runs");
    (o.status.code().unwrap_or(-1), String::from_utf8_lossy(&o.stdout).into_owned())
}

fn read(dir: &Path, name: &str) -> Vec<u8> {
    std::fs::read(dir.join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["verify", "electrostatic", "--trials", "40", "--samples", "300", "--seed", "9"];
    assert_eq!(run(a.path(), &args).0, 0);
    assert_eq!(run(b.path(), &args).0, 0);
    for f in ["verify_electrostatic.csv", "verify_electrostatic.json"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
    let args = ["solve-tau", "--d", "3", "--s", "1", "--grid-n", "64"];
    assert_eq!(run(a.path(), &args).0, 0);
    assert_eq!(run(b.path(), &args).0, 0);
    for f in ["tau.csv", "tau.json", "tau.svg"] {
        assert_eq!(read(a.path(), f), read(b.path(), f), "{f}");
    }
}

#[test]
fn seed_changes_the_sweep() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    run(a.path(), &["verify", "indirect", "--trials", "20", "--samples", "200", "--seed", "1"]);
    run(b.path(), &["verify", "indirect", "--trials", "20", "--samples", "200", "--seed", "2"]);
    assert_ne!(read(a.path(), "verify_indirect.csv"), read(b.path(), "verify_indirect.csv"));
}

#[test]
fn ledger_records_every_run() {
    let dir = tempfile::tempdir().unwrap();
    run(dir.path(), &["constants"]);
    run(dir.path(), &["predict", "--d", "1", "--s", "0.7"]);
    let text = std::fs::read_to_string(dir.path().join("ledger.jsonl")).unwrap();
    let lines: Vec<serde_json::Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["exit_code"], 0);
    assert_eq!(lines[1]["exit_code"], 2);
    assert!(lines[1]["error"].as_str().unwrap().contains("s"));
    assert_eq!(lines[0]["config_hash"].as_str().unwrap().len(), 64);
}

#[test]
fn predict_outputs_band_and_borderline_curve() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _) = run(dir.path(), &["predict", "--d", "3", "--s", "1", "--tau", "0.2957", "--N", "10000"]);
    assert_eq!(code, 0);
    let csv = String::from_utf8(read(dir.path(), "predict.csv")).unwrap();
    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("N,central,band_lo,band_hi"));
    assert_eq!(csv.lines().count(), 12);
    let (code, _) = run(dir.path(), &["predict", "--d", "2", "--s", "1", "--allow-borderline"]);
    assert_eq!(code, 0);
    let csv = String::from_utf8(read(dir.path(), "predict.csv")).unwrap();
    assert!(csv.starts_with("N,four_over_lnN"));
    let (code, _) = run(dir.path(), &["predict", "--d", "2", "--s", "1"]);
    assert_eq!(code, 2);
}

#[test]
fn partition_verification_passes() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout) = run(dir.path(), &["verify", "partition", "--seed", "4"]);
    assert_eq!(code, 0, "{stdout}");
    let v: serde_json::Value = serde_json::from_slice(&read(dir.path(), "verify_partition.json")).unwrap();
    assert_eq!(v["violations"], 0);
}
