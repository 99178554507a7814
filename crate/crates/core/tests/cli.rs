use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lgt_resources::sweep::read_csv;

fn cli(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgt-resources"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .output()
        .expect("binary runs")
}

fn strip_time(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            let mut cells: Vec<&str> = l.split(',').collect();
            cells[14] = "";
            cells.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

const SMALL: &str = "model = [\"ZN\", \"SU2\"]\nN = [2, 3]\nk = [0, 1]\nL = 4\ng2 = [0.1, 1.0, 10.0]\nseed = 11\n";

#[test]
fn sweep_is_deterministic_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("small.toml");
    fs::write(&cfg, SMALL).unwrap();
    let mut outputs = Vec::new();
    for threads in ["1", "4"] {
        let out = dir.path().join(format!("t{threads}"));
        let o = cli(&out, &["sweep", cfg.to_str().unwrap(), "--threads", threads]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read_to_string(out.join("small.csv")).unwrap());
        assert!(out.join("small_ggm.svg").exists());
    }
    assert_eq!(strip_time(&outputs[0]), strip_time(&outputs[1]));
    let rows = read_csv(outputs[0].as_bytes()).unwrap();
    // (2,0), (2,1), (3,0), (3,1) and SU(2), three couplings each.
    assert_eq!(rows.len(), 15);
    assert!(rows.iter().all(|r| r.is_ok()));
}

#[test]
fn no_svg_writes_only_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.toml");
    fs::write(&cfg, "model = \"SU2\"\nL = 4\ng2 = 1.0\n").unwrap();
    let o = cli(dir.path(), &["sweep", cfg.to_str().unwrap(), "--no-svg"]);
    assert!(o.status.success());
    let names: Vec<_> = fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 2, "{names:?}");
}

#[test]
fn config_errors_exit_2_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "model = \"ZN\"\nN = 3\nL = 4\nboundary = \"twisted\"\n").unwrap();
    let o = cli(dir.path(), &["sweep", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 4") && err.contains("boundary"), "{err}");

    let o = cli(dir.path(), &["sweep", dir.path().join("missing.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let o = cli(dir.path(), &["figure", "fig9"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn table1_subcommand_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(dir.path(), &["table1"]);
    assert!(o.status.success());
    let csv = fs::read_to_string(dir.path().join("table1.csv")).unwrap();
    assert_eq!(csv, String::from_utf8(o.stdout).unwrap());
    assert_eq!(csv.lines().count(), 15);
    let o = cli(dir.path(), &["figure", "table1"]);
    assert!(o.status.success());
}

#[test]
fn analytic_sre_matches_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(dir.path(), &["analytic-sre", "--N", "4", "--L", "3", "--a", "0", "--b", "3", "--verify"]);
    assert!(o.status.success());
    let out = String::from_utf8(o.stdout).unwrap();
    let diff: f64 = out.lines().last().unwrap().split('=').nth(1).unwrap().trim().parse().unwrap();
    assert!(diff < 1e-10, "{out}");
    let o = cli(dir.path(), &["analytic-sre", "--N", "4", "--L", "3", "--a", "0", "--b", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dumped_state_reloads_to_same_resources() {
    let dir = tempfile::tempdir().unwrap();
    let state = dir.path().join("gs.bin");
    let args = ["resources", "--model", "ZN", "--N", "3", "--k", "1", "--L", "3", "--g2", "0.7"];
    let o = cli(dir.path(), &[&args[..], &["--dump-state", state.to_str().unwrap()]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let solved = read_csv(o.stdout.as_slice()).unwrap().remove(0);
    let o = cli(dir.path(), &[&args[..], &["--load-state", state.to_str().unwrap()]].concat());
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let loaded = read_csv(o.stdout.as_slice()).unwrap().remove(0);
    assert_eq!(solved.ggm, loaded.ggm);
    assert_eq!(solved.sre2, loaded.sre2);
    assert!((solved.energy.unwrap() - loaded.energy.unwrap()).abs() < 1e-9);

    // Wrong chain length for the stored state.
    let o = cli(dir.path(), &["resources", "--model", "ZN", "--N", "3", "--L", "4", "--g2", "1", "--load-state", state.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn resources_rejects_periodic_d3() {
    let dir = tempfile::tempdir().unwrap();
    let o = cli(dir.path(), &["resources", "--model", "D3", "--L", "3", "--g2", "1", "--boundary", "periodic"]);
    assert_eq!(o.status.code(), Some(2));
}
