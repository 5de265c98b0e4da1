use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn cvdv(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cvdv")).arg("--out").arg(out).args(args).output().expect("spawn cvdv")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn fixture(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn print_defaults_is_valid_config() {
    let dir = tempfile::tempdir().unwrap();
    let o = cvdv(dir.path(), &["--print-defaults"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("[gkp]") && text.contains("seed"));
    let path = dir.path().join("defaults.toml");
    fs::write(&path, &text).unwrap();
    let o = cvdv(dir.path(), &["--config", path.to_str().unwrap(), "wigner", "vacuum", "--cutoff", "4", "--points", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn run_cat_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = cvdv(dir.path(), &["run", "cat", "--no-noise", "--alpha", "1.5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).starts_with("cat: qubits 1 qumodes 1"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("cat.json")).unwrap()).unwrap();
    assert_eq!(report["config"]["cat"]["alpha"], 1.5);
    assert!(dir.path().join("cat_features.csv").exists());
}

#[test]
fn bad_config_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    fs::write(&path, "seed = 1\n[cat]\nalpha = 2.0\nbogus = 3\n").unwrap();
    let o = cvdv(dir.path(), &["--config", path.to_str().unwrap(), "run", "cat"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cvdv(dir.path(), &["run", "nope"]);
    assert_eq!(o.status.code(), Some(2));
    let o = cvdv(dir.path(), &["run", "cat", "--no-noise", "--alpha", "x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn vacuum_wigner_integrates_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let o = cvdv(dir.path(), &["wigner", "vacuum", "--cutoff", "8"]);
    assert!(o.status.success());
    let line = stdout(&o);
    let integral: f64 = line.split_whitespace().nth(1).unwrap().parse().unwrap();
    assert!((integral - 1.0).abs() < 1e-3, "{line}");
    let csv = fs::read_to_string(dir.path().join("wigner_vacuum.csv")).unwrap();
    assert!(csv.lines().any(|l| l == "x,p,w"));
}

#[test]
fn published_table_isolates_qaoa_and_shor() {
    let dir = tempfile::tempdir().unwrap();
    let o = cvdv(dir.path(), &["cluster", &fixture("reference_features.csv"), "--k", "4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let clusters: Vec<&str> = text.lines().filter(|l| l.starts_with("cluster ")).map(|l| l.split_once(": ").unwrap().1).collect();
    assert_eq!(clusters.len(), 4, "{text}");
    assert!(clusters.contains(&"CV QAOA"), "{text}");
    assert!(clusters.contains(&"Shor's Circuit"), "{text}");
    let linkage = fs::read_to_string(dir.path().join("linkage.csv")).unwrap();
    assert_eq!(linkage.lines().filter(|l| !l.starts_with('#')).count(), 1 + 7);
}

#[test]
fn two_rows_merge_once() {
    let dir = tempfile::tempdir().unwrap();
    let table: String = fs::read_to_string(fixture("reference_features.csv")).unwrap().lines().take(4).map(|l| format!("{l}\n")).collect();
    let path = dir.path().join("two.csv");
    fs::write(&path, table).unwrap();
    let o = cvdv(dir.path(), &["cluster", path.to_str().unwrap(), "--k", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let linkage = fs::read_to_string(dir.path().join("linkage.csv")).unwrap();
    let rows: Vec<&str> = linkage.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 2, "{linkage}");
    assert!(rows[1].starts_with("0,0,1,"));
}

#[test]
fn same_seed_gives_identical_tables() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let o = cvdv(dir.path(), &["--seed", "11", "run", "cat"]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    for name in ["cat_features.csv", "cat_noisy.csv", "cat.json"] {
        assert_eq!(fs::read(a.path().join(name)).unwrap(), fs::read(b.path().join(name)).unwrap(), "{name}");
    }
}
