use std::path::Path;
use std::process::{Command, Output};

const TINY: &str = r#"
scenario = "circle"
N = 2

[kernel]
eps = 0.05

[schedule]
j = 10
kappa = 2
T = 0.004

[output]
dir = "unused"
snapshot_every = 1

[geometry]
r0 = 0.3
segments = 64
"#;

fn grainflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_grainflow"))
        .args(args)
        .env("RUST_LOG", "warn")
        .output()
        .expect("binary runs")
}

fn run_tiny(dir: &Path, extra: &str) -> Output {
    let cfg = dir.join("tiny.toml");
    std::fs::write(&cfg, format!("{TINY}{extra}")).unwrap();
    let out = dir.join("traj");
    grainflow(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

#[test]
fn run_diagnose_and_export() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_tiny(tmp.path(), "");
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let traj = tmp.path().join("traj");
    for f in [
        "config.copy",
        "series.csv",
        "deformations.csv",
        "summary.json",
    ] {
        assert!(traj.join(f).is_file(), "{f} missing");
    }
    assert!(traj.join("snapshots/000000.snap").is_file());

    let o = grainflow(&["diagnose", traj.to_str().unwrap()]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stdout)
    );
    assert!(traj.join("report.txt").is_file());

    let o = grainflow(&["export-plots", traj.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let listed = String::from_utf8_lossy(&o.stdout);
    assert!(!listed.trim().is_empty());
    for line in listed.lines() {
        assert!(Path::new(line).is_file(), "{line}");
    }
}

#[test]
fn strict_tolerances_fail_diagnosis() {
    let tmp = tempfile::tempdir().unwrap();
    let o = run_tiny(
        tmp.path(),
        "\n[diagnostics]\ntol_volume = 1e-14\ntol_brakke = 1e-14\n",
    );
    assert_eq!(o.status.code(), Some(0));
    let o = grainflow(&["diagnose", tmp.path().join("traj").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
}

#[test]
fn config_errors_exit_with_one() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.toml");
    std::fs::write(&cfg, TINY.replace("r0 = 0.3", "r0 = -0.3")).unwrap();
    let o = grainflow(&["run", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("geometry"));

    let o = grainflow(&["run", tmp.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));

    let o = grainflow(&["diagnose", tmp.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn occupied_output_directory_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    std::fs::create_dir(tmp.path().join("traj")).unwrap();
    std::fs::write(tmp.path().join("traj/keep"), "x").unwrap();
    let o = run_tiny(tmp.path(), "");
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(
        std::fs::read_to_string(tmp.path().join("traj/keep")).unwrap(),
        "x"
    );
}

#[test]
fn scenarios_are_listed() {
    let o = grainflow(&["scenarios"]);
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8_lossy(&o.stdout);
    for kind in [
        "circle",
        "double-bubble",
        "steiner-junction",
        "voronoi-random",
    ] {
        assert!(s.contains(kind), "{kind}");
    }
}
