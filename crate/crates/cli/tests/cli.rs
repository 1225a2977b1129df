use std::path::Path;
use std::process::{Command, Output};

use kerdock_core::construct::*;

fn kerdock(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kerdock"))
        .args(args)
        .current_dir(dir)
        .env_remove("KERDOCK_SEED")
        .env_remove("KERDOCK_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn construct_kerdock_beamforming() {
    let dir = tempfile::tempdir().unwrap();
    let text = stdout(&kerdock(dir.path(), &["construct", "kerdock", "--mt", "4", "--mode", "bf", "--out", "k.txt"]));
    assert!(text.contains("N=20"));
    assert!(text.contains("0.866025403784"));
    let cb = load_codebook(dir.path().join("k.txt")).unwrap();
    let direct = beamforming_codebook(&kerdock_mub_mt4().unwrap(), true).unwrap();
    assert_eq!(cb.codewords(), direct.codewords());
}

#[test]
fn construct_table1_and_fourier() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["construct", "kerdock", "--mt", "4", "--mode", "sm", "--ms", "2", "--strategy", "table1", "--out", "t.txt"];
    stdout(&kerdock(dir.path(), &args));
    let cb = load_codebook(dir.path().join("t.txt")).unwrap();
    let table = precoding_codebook(&kerdock_mub_mt4().unwrap(), 2, SubsetStrategy::Table1).unwrap();
    assert_eq!(cb.len(), 8);
    assert_eq!(cb.codewords(), table.codewords());

    let out = kerdock(dir.path(), &["construct", "fourier", "--mt", "2", "--ms", "1", "--n", "2", "--u", "0,1"]);
    let cb = parse_codebook(&stdout(&out)).unwrap();
    assert_eq!(cb.len(), 2);
    let r = std::f64::consts::FRAC_1_SQRT_2;
    assert!((cb.codeword(1)[(1, 0)].re + r).abs() < 1e-15);
}

#[test]
fn construct_errors_exit_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    assert!(!kerdock(dir.path(), &["construct", "kerdock", "--mt", "8"]).status.success());
    assert!(!kerdock(dir.path(), &["construct", "fourier", "--mt", "4"]).status.success());
    assert!(!kerdock(dir.path(), &["construct", "kerdock-power", "--mt", "4"]).status.success());
    assert!(!kerdock(dir.path(), &["analyze", "missing.txt"]).status.success());
}

#[test]
fn analyze_reports_spectrum_ops_and_storage() {
    let dir = tempfile::tempdir().unwrap();
    stdout(&kerdock(dir.path(), &["construct", "kerdock", "--out", "k.txt"]));
    let args = ["analyze", "k.txt", "--metric", "chordal", "--csv", "d.csv", "--ops", "--kind", "kerdock", "--storage", "--nb", "16"];
    let text = stdout(&kerdock(dir.path(), &args));
    assert!(text.contains("distinct values: 0.866025403784 1.000000000000"));
    assert!(text.contains("rankin bound (chordal): 0.888523316639"));
    assert!(text.contains("ops kerdock beamforming: 0 complex multiplies, 240 complex additions"));
    assert!(text.contains("0 multiplies, 240 additions"));
    assert!(text.contains("kerdock: 12 bits"));
    assert!(text.contains("grassmannian: 4096 bits"));
    let csv = std::fs::read_to_string(dir.path().join("d.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("metric,k,l,value"));
    assert_eq!(csv.lines().filter(|l| l.starts_with("chordal,")).count(), 190);
    assert!(csv.contains("min_chordal,,,0.8660254037844386"));
}

#[test]
fn analyze_rejects_malformed_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.txt"), "codebook v1 mt=2 ms=1 n=1\n# 0 x\n1.0 0.0\nnot a number\n").unwrap();
    let out = kerdock(dir.path(), &["analyze", "bad.txt"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 4"));
}

const CONFIG: &str = "# small two-antenna experiment\nmt=2\nmr=2\nqam=4\nsnr_db=0:5:10\ntrials=6000\nseed=5\nrate=true\ncurves=perfect,kerdock,fourier,file:cb.txt\nfourier_n=4\n";

fn setup_experiment(dir: &Path) {
    stdout(&kerdock(dir, &["construct", "kerdock-power", "--mt", "2", "--out", "cb.txt"]));
    std::fs::write(dir.join("exp.cfg"), CONFIG).unwrap();
}

#[test]
fn simulate_writes_csv_and_manifest_and_replays() {
    let dir = tempfile::tempdir().unwrap();
    setup_experiment(dir.path());
    let text = stdout(&kerdock(dir.path(), &["simulate", "exp.cfg", "--out-dir", "a", "--threads", "1", "--report", "snr-gap"]));
    assert!(text.contains("SNR at VSER"));
    let manifest = std::fs::read_to_string(dir.path().join("a/manifest.txt")).unwrap();
    for key in ["# command=", "# seed=5", "# version=", "# outputs=perfect.csv,kerdock.csv,fourier.csv,file-cb.csv,snr_gap.csv", "# duration_s="] {
        assert!(manifest.contains(key), "manifest lacks {}", key);
    }
    let csv = std::fs::read_to_string(dir.path().join("a/kerdock.csv")).unwrap();
    assert!(csv.starts_with("snr_db,trials,errors,vser,ci_halfwidth,rate_bpcu\n"));
    assert_eq!(csv.lines().count(), 4);

    // Replay from the manifest in another directory with more threads.
    let elsewhere = tempfile::tempdir().unwrap();
    std::fs::copy(dir.path().join("a/manifest.txt"), elsewhere.path().join("m.txt")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_kerdock"))
        .args(["simulate", "m.txt", "--out-dir", "b"])
        .current_dir(elsewhere.path())
        .env("KERDOCK_THREADS", "3")
        .env_remove("KERDOCK_SEED")
        .output()
        .unwrap();
    stdout(&out);
    for name in ["perfect", "kerdock", "fourier", "file-cb"] {
        let a = std::fs::read(dir.path().join(format!("a/{}.csv", name))).unwrap();
        let b = std::fs::read(elsewhere.path().join(format!("b/{}.csv", name))).unwrap();
        assert_eq!(a, b, "{}.csv differs", name);
    }
}

#[test]
fn seed_override_changes_results() {
    let dir = tempfile::tempdir().unwrap();
    setup_experiment(dir.path());
    stdout(&kerdock(dir.path(), &["simulate", "exp.cfg", "--out-dir", "a"]));
    let out = Command::new(env!("CARGO_BIN_EXE_kerdock"))
        .args(["simulate", "exp.cfg", "--out-dir", "b"])
        .current_dir(dir.path())
        .env("KERDOCK_SEED", "6")
        .output()
        .unwrap();
    stdout(&out);
    let manifest = std::fs::read_to_string(dir.path().join("b/manifest.txt")).unwrap();
    assert!(manifest.contains("\nseed=6\n"));
    let a = std::fs::read(dir.path().join("a/perfect.csv")).unwrap();
    let b = std::fs::read(dir.path().join("b/perfect.csv")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn simulate_reports_rate_gap_and_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    setup_experiment(dir.path());
    let text = stdout(&kerdock(dir.path(), &["simulate", "exp.cfg", "--out-dir", "a", "--report", "rate-gap"]));
    assert!(text.contains("bits/channel use"));
    let report = std::fs::read_to_string(dir.path().join("a/rate_gap.csv")).unwrap();
    assert!(report.starts_with("curve,crossing_db,gap_db\nperfect,"));

    std::fs::write(dir.path().join("bad.cfg"), "mt=4\nqam=32\n").unwrap();
    let out = kerdock(dir.path(), &["simulate", "bad.cfg"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
