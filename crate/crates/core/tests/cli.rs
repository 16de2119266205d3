use std::path::Path;
use std::process::{Command, Output};

fn hypervfe(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypervfe")).args(args).current_dir(dir).output().unwrap()
}

fn read(p: &Path) -> String {
    std::fs::read_to_string(p).unwrap()
}

#[test]
fn speed_prints_c_l() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["speed", "--l", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("c_l = 1.00041645844"));
}

#[test]
fn evolve_writes_trajectory_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["evolve", "--l", "0.1", "--M", "8", "--nps", "16", "--out", "run.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(&dir.path().join("run.csv"));
    assert!(csv.starts_with("t,s,X1,X2,X3,T1,T2,T3\n"));
    assert!(!csv.contains('\r'));
    assert_eq!(csv.lines().count(), 1 + 5 * (8 * 16 + 1));
    let meta: serde_json::Value = serde_json::from_str(&read(&dir.path().join("run.csv.json"))).unwrap();
    assert_eq!(meta["schema"], 1);
    assert_eq!(meta["config"]["subcommand"], "evolve");
    assert_eq!(meta["config"]["M"], 8);
}

#[test]
fn evolve_output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["a.csv", "b.csv"] {
        let out = hypervfe(&["evolve", "--l", "0.2", "--M", "4", "--nps", "16", "--out", name], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    assert_eq!(read(&dir.path().join("a.csv")), read(&dir.path().join("b.csv")));
}

#[test]
fn evolve_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let odd = hypervfe(&["evolve", "--l", "0.1", "--M", "7", "--nps", "16", "--out", "x.csv"], dir.path());
    assert_eq!(odd.status.code(), Some(2));
    let missing = hypervfe(&["evolve", "--l", "0.1"], dir.path());
    assert_eq!(missing.status.code(), Some(2));
    let unstable =
        hypervfe(&["evolve", "--l", "0.1", "--M", "8", "--nps", "64", "--rho", "0.6", "--out", "x.csv"], dir.path());
    assert_eq!(unstable.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&unstable.stderr).contains("stability"));
}

#[test]
fn algebraic_third_period_has_24_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["algebraic", "--l", "0.6", "--M", "8", "--p", "1", "--q", "3", "--out", "a.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = read(&dir.path().join("a.csv"));
    assert_eq!(csv.lines().count(), 1 + 24);
    assert!(csv.starts_with("s,X1,X2,X3,T1,T2,T3,"));
    assert!(dir.path().join("a.csv.json").exists());
}

#[test]
fn algebraic_at_time_zero_is_the_initial_polygon() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["algebraic", "--l", "0.6", "--M", "8", "--p", "0", "--q", "1", "--out", "z.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let spec = hypervfe::polygon::PolygonSpec::new(0.6, 8).unwrap();
    let csv = read(&dir.path().join("z.csv"));
    for (line, v) in csv.lines().skip(1).zip(hypervfe::polygon::initial_vertices(&spec)) {
        let f: Vec<f64> = line.split(',').map(|x| x.parse().unwrap()).collect();
        assert!((f[1] - v.x1).abs() < 1e-12 && (f[2] - v.x2).abs() < 1e-12 && f[3].abs() < 1e-12);
    }
}

#[test]
fn algebraic_rejects_non_coprime() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["algebraic", "--l", "0.6", "--M", "8", "--p", "2", "--q", "4", "--out", "a.csv"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn riemann_writes_one_row_per_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["riemann", "--terms", "2048", "--points", "7561", "--out", "phi.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(&dir.path().join("phi.csv")).lines().count(), 1 + 7561);
}

#[test]
fn onecorner_reports_asymptotics() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["onecorner", "--c0", "0.1680", "--smax", "200", "--out", "p.csv"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("closed form") && text.contains("T(s_max)"));
    let meta: serde_json::Value = serde_json::from_str(&read(&dir.path().join("p.csv.json"))).unwrap();
    assert!(meta["data"]["summary"]["integral"].as_f64().unwrap() > 0.6);
}

#[test]
fn corner_json_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = hypervfe(&["corner", "--l", "0.5", "--samples", "48", "--format", "json", "--out", "c.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&read(&dir.path().join("c.json"))).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["data"]["rows"].as_array().map(|a| a.len()), Some(49));
}
