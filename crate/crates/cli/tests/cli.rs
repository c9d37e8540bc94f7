use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_resonant"));
    c.env_remove("RESONANT_OUTPUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn run_in(out: &Path, args: &[&str]) -> Output {
    let mut all: Vec<&str> = args.to_vec();
    all.extend(["--out", out.to_str().unwrap()]);
    run(&all)
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

/// Rows of a CSV written by the tool, keyed by the `#` column line.
fn table(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    let comments: Vec<&str> = text.lines().filter(|l| l.starts_with('#')).collect();
    let header = comments.last().expect("column line").trim_start_matches('#').trim();
    let cols = header.split(',').map(str::to_string).collect();
    let rows = text
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect();
    (cols, rows)
}

fn column(cols: &[String], name: &str) -> usize {
    cols.iter().position(|c| c == name).unwrap_or_else(|| panic!("no column {name} in {cols:?}"))
}

fn num(s: &str) -> f64 {
    s.parse().unwrap_or_else(|_| panic!("not a number: {s}"))
}

fn csv_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    v.sort();
    v
}

fn same_outputs(a: &Path, b: &Path) {
    let fa = csv_files(a);
    let fb = csv_files(b);
    assert!(!fa.is_empty());
    assert_eq!(
        fa.iter().map(|p| p.file_name().unwrap()).collect::<Vec<_>>(),
        fb.iter().map(|p| p.file_name().unwrap()).collect::<Vec<_>>()
    );
    for (x, y) in fa.iter().zip(&fb) {
        assert!(fs::read(x).unwrap() == fs::read(y).unwrap(), "{} differs", x.display());
    }
}

#[test]
fn help_on_every_subcommand() {
    let paths: &[&[&str]] = &[
        &[],
        &["delta-well"],
        &["delta-well", "roots"],
        &["delta-well", "curves"],
        &["delta-well", "transmission"],
        &["flux"],
        &["flux", "report"],
        &["flux", "expanding"],
        &["lattice"],
        &["lattice", "scan"],
        &["lattice", "solve"],
        &["lattice", "exact"],
        &["friedrichs"],
        &["friedrichs", "roots"],
        &["friedrichs", "sweep"],
        &["friedrichs", "eigenfunction"],
        &["dynamics"],
        &["dynamics", "run"],
        &["jost"],
        &["jost", "smatrix"],
        &["jost", "poles"],
        &["jost", "sigma"],
        &["figure"],
        &["replay"],
    ];
    for p in paths {
        let mut args = p.to_vec();
        args.push("--help");
        let o = run(&args);
        assert_eq!(code(&o), 0, "{p:?}");
        assert!(String::from_utf8_lossy(&o.stdout).contains("Usage"), "{p:?}");
    }
}

#[test]
fn delta_well_roots_reproduce_the_first_table_row() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["delta-well", "roots", "--a-over-l", "0.1", "--parity", "even"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(dir.path().join("roots.csv")).unwrap();
    assert!(text.starts_with("# units:"));
    let (cols, rows) = table(&dir.path().join("roots.csv"));
    let (kr, ki) = (column(&cols, "ReKl"), column(&cols, "ImKl"));
    let (er, ei) = (column(&cols, "ReE"), column(&cols, "ImE"));
    let first = &rows[0];
    assert_eq!(first[column(&cols, "parity")], "even");
    assert!((num(&first[kr]) - 1.4309486581029545770).abs() < 1e-10);
    assert!((num(&first[ki]) + 0.0180132370706695616).abs() < 1e-10);
    assert!((num(&first[er]) - 1.023644792708441123).abs() < 1e-10);
    assert!((num(&first[ei]) + 0.025776017414365005).abs() < 1e-10);
}

#[test]
fn lattice_solve_converges_to_the_exact_pole() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["lattice", "solve", "--preset", "two-site", "--v0", "1", "--e0", "-0.3,-0.1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (cols, rows) = table(&dir.path().join("pole.csv"));
    let re = num(&rows[0][column(&cols, "ReE")]);
    let im = num(&rows[0][column(&cols, "ImE")]);
    assert!((re + 0.383763242839771).abs() < 1e-11, "{re}");
    assert!((im + 0.132164836187054).abs() < 1e-11, "{im}");
    let (tc, trace) = table(&dir.path().join("trace.csv"));
    assert_eq!(tc, ["q", "ReE", "ImE", "residual"]);
    assert!(trace.len() > 3);
}

#[test]
fn unknown_config_key_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "[delta_well]\na_over_l = 0.1\nwidth = 3\n").unwrap();
    let o = run_in(&dir.path().join("out"), &["--config", cfg.to_str().unwrap(), "delta-well", "roots"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("width"));
}

#[test]
fn invalid_parameter_is_a_config_error_with_manifest() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["delta-well", "roots", "--a-over-l", "-1"]);
    assert_eq!(code(&o), 2);
    let m: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(m["status"], "failed");
    assert_eq!(m["config"]["delta_well"]["a_over_l"], -1.0);
}

#[test]
fn non_convergence_exits_three_and_keeps_the_trace() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["lattice", "solve", "--max-iter", "2"]);
    assert_eq!(code(&o), 3);
    assert!(!o.stderr.is_empty());
    let (_, rows) = table(&dir.path().join("trace.csv"));
    assert_eq!(rows.len(), 3);
    assert!(dir.path().join("manifest.json").exists());
    assert!(dir.path().join("run.toml").exists());
}

#[test]
fn identical_config_gives_identical_bytes() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("cfg.toml");
    fs::write(
        &cfg,
        "seed = 7\n[lattice]\nn_re = 41\nn_im = 23\nre_range = [-1.0, 1.0]\nim_range = [-0.5, 0.0]\n[delta_well]\nxi_points = 300\n",
    )
    .unwrap();
    let c = cfg.to_str().unwrap();
    for cmd in [["lattice", "scan"], ["delta-well", "curves"], ["friedrichs", "sweep"]] {
        let a = dir.path().join(format!("{}-a", cmd.join("-")));
        let b = dir.path().join(format!("{}-b", cmd.join("-")));
        let mut args = vec!["--config", c, "--threads", "1"];
        args.extend(cmd);
        assert_eq!(code(&run_in(&a, &args)), 0);
        let mut args = vec!["--config", c, "--threads", "3"];
        args.extend(cmd);
        assert_eq!(code(&run_in(&b, &args)), 0);
        same_outputs(&a, &b);
        assert_eq!(fs::read(a.join("manifest.json")).unwrap(), fs::read(b.join("manifest.json")).unwrap());
    }
}

#[test]
fn replaying_a_manifest_reproduces_the_outputs() {
    let dir = TempDir::new().unwrap();
    let first = dir.path().join("first");
    let again = dir.path().join("again");
    let o = run_in(&first, &["delta-well", "transmission", "--a-over-l", "4", "--parity", "odd"]);
    assert_eq!(code(&o), 0);
    let manifest = first.join("manifest.json");
    let o = run_in(&again, &["replay", manifest.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    same_outputs(&first, &again);
    assert_eq!(fs::read(&manifest).unwrap(), fs::read(again.join("manifest.json")).unwrap());
    assert_eq!(fs::read(first.join("run.toml")).unwrap(), fs::read(again.join("run.toml")).unwrap());
    // the resolved config is itself a valid config file
    let third = dir.path().join("third");
    let o = run_in(
        &third,
        &["--config", first.join("run.toml").to_str().unwrap(), "delta-well", "transmission"],
    );
    assert_eq!(code(&o), 0);
    same_outputs(&first, &third);
}

#[test]
fn output_root_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let o = bin()
        .env("RESONANT_OUTPUT_DIR", dir.path())
        .args(["friedrichs", "roots"])
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    assert!(dir.path().join("friedrichs-roots").join("roots.csv").exists());
    let (cols, rows) = table(&dir.path().join("friedrichs-roots").join("roots.csv"));
    let kinds: Vec<&str> = rows.iter().map(|r| r[column(&cols, "kind")].as_str()).collect();
    assert_eq!(kinds.iter().filter(|k| **k == "bound").count(), 2);
}

#[test]
fn json_tables_hold_full_precision() {
    let dir = TempDir::new().unwrap();
    let o = run_in(dir.path(), &["--json", "lattice", "exact"]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("exact.json")).unwrap()).unwrap();
    let (cols, rows) = table(&dir.path().join("exact.csv"));
    let from_csv = num(&rows[2][column(&cols, "ReE")]);
    assert_eq!(v["rows"][2]["ReE"].as_f64().unwrap(), from_csv);
}

#[test]
fn figure_nine_trends_down_and_figure_eight_is_a_full_grid() {
    let dir = TempDir::new().unwrap();
    assert_eq!(code(&run_in(dir.path(), &["figure", "fig9"])), 0);
    let (cols, rows) = table(&dir.path().join("fig9_convergence.csv"));
    assert_eq!(&cols[..2], ["q", "log10_residual"]);
    let pts: Vec<(f64, f64)> = rows.iter().map(|r| (num(&r[0]), num(&r[1]))).collect();
    let n = pts.len() as f64;
    let (mx, my) = pts.iter().fold((0.0, 0.0), |a, p| (a.0 + p.0 / n, a.1 + p.1 / n));
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!(slope < 0.0);

    assert_eq!(code(&run_in(dir.path(), &["figure", "fig8"])), 0);
    let (_, grid) = table(&dir.path().join("fig8_logD.csv"));
    assert_eq!(grid.len(), 200 * 200);
    assert_eq!(code(&run_in(dir.path(), &["figure", "fig42"])), 2);
}

#[test]
fn dynamics_frames_feed_the_flux_report() {
    let dir = TempDir::new().unwrap();
    let model = dir.path().join("model.toml");
    fs::write(&model, "g_tilde = 0.1\ned_tilde = -0.5\nhalf_width = 40\n").unwrap();
    let dyn_out = dir.path().join("dyn");
    let o = run_in(
        &dyn_out,
        &["dynamics", "run", "--model", model.to_str().unwrap(), "--state", "c", "--dt", "0.05", "--t-end", "2"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(dyn_out.join("frames.json")).unwrap()).unwrap();
    let frames = meta["frames"].as_array().unwrap();
    assert_eq!(frames.len(), 3);
    assert!(meta["Gamma"].as_f64().unwrap() > 0.0);
    let (cols, rows) = table(&dyn_out.join("frame_0000.csv"));
    assert_eq!(cols, ["x", "re", "im"]);
    assert_eq!(rows.len(), 41);

    let cfg = dir.path().join("flux.toml");
    fs::write(&cfg, "[flux]\nhalf_widths = [2.0, 5.0, 10.0]\n").unwrap();
    let frame = dyn_out.join("frame_0002.csv");
    let o = run_in(
        &dir.path().join("flux"),
        &["--config", cfg.to_str().unwrap(), "flux", "report", "--wavefunction", frame.to_str().unwrap()],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (_, rows) = table(&dir.path().join("flux").join("segments.csv"));
    assert_eq!(rows.len(), 3);
}
