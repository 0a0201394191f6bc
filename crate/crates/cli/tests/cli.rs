use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn resistevo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resistevo"))
        .arg("--quiet")
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn listing(dir: &Path) -> Vec<String> {
    let mut names: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    names
}

#[test]
fn list_prints_every_scenario() {
    let out = resistevo(&["list"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "fig1-healthy",
        "fig2-resistance-raw",
        "fig3-resistance-renormalized",
        "fig-f1-cytotoxic-1.75",
        "fig-f2-cytostatic-7",
        "fig-f3f4-combo-1.5",
        "dose-analysis-sec4",
    ] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn run_writes_csv_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("fig1");
    let out = resistevo(&[
        "run",
        "--scenario",
        "fig1-healthy",
        "--grid-points",
        "200",
        "--steps",
        "40",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        listing(&out_dir),
        ["meta.json", "oracle.csv", "snapshots.csv", "timeseries.csv"]
    );
}

#[test]
fn combination_run_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let run_dir = dir.path().join("combo");
    let out = resistevo(&[
        "run",
        "--scenario",
        "fig-f3f4-combo-2",
        "--grid-points",
        "200",
        "--steps",
        "20",
        "--out",
        run_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(
        listing(&run_dir),
        ["meta.json", "snapshots.csv", "timeseries.csv"]
    );

    let sweep_dir = dir.path().join("sweep");
    let out = resistevo(&[
        "sweep",
        "--scenario",
        "fig-f3f4-combo-0",
        "--grid-points",
        "200",
        "--steps",
        "20",
        "--c1",
        "0,2",
        "--c2",
        "0,1,2",
        "--out",
        sweep_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let table = fs::read_to_string(sweep_dir.join("sweep.csv")).unwrap();
    assert_eq!(table.lines().count(), 7);
}

#[test]
fn analyze_dose_prints_the_table() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("dose");
    let out = resistevo(&["analyze-dose", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("interior-maximum"));
    assert_eq!(
        fs::read_to_string(out_dir.join("dose_table.csv"))
            .unwrap()
            .lines()
            .count(),
        226
    );
}

#[test]
fn unknown_scenario_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("nope");
    let out = resistevo(&[
        "run",
        "--scenario",
        "fig9",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(!out_dir.exists());
}

#[test]
fn bad_config_reports_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(
        &cfg,
        "[scenario]\nbase = \"fig1-healthy\"\n\n[grdi]\nm = 300\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = resistevo(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("grdi") && err.contains("line 5"), "{err}");
    assert!(!out_dir.exists());
}

#[test]
fn overflow_is_a_numerical_error_and_leaves_no_files() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("overflow.toml");
    fs::write(
        &cfg,
        "[scenario]\nbase = \"fig2-resistance-raw\"\n\n[model]\nmode = \"imex\"\ndose = 0.0\n\n\
         [grid]\nm = 200\n\n[time]\ndt = 1.0\nsteps = 2000\n",
    )
    .unwrap();
    let out_dir = dir.path().join("out");
    let out = resistevo(&[
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);
    assert!(String::from_utf8(out.stderr)
        .unwrap()
        .contains("renormalized"));
    assert!(!out_dir.exists());
}

#[test]
fn unwritable_output_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let out_dir = blocker.join("sub");
    let out = resistevo(&[
        "run",
        "--scenario",
        "fig1-healthy",
        "--grid-points",
        "200",
        "--steps",
        "5",
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}
