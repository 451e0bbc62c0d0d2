use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn nhssh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nhssh"))
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("binary runs")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn help_lists_flags_and_exits_zero() {
    let out = nhssh(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let top = String::from_utf8(out.stdout).unwrap();
    for cmd in ["spectrum", "mode", "sweep", "ep", "propagate", "reproduce"] {
        assert!(top.contains(cmd), "{cmd} missing from help");
    }

    let out = nhssh(&["propagate", "--help"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    for flag in ["--z-max", "--steps", "--site", "--grid", "--jobs", "--config"] {
        assert!(text.contains(flag), "{flag} missing");
    }
}

#[test]
fn usage_errors_exit_two() {
    let out = nhssh(&["spectrum", "--n", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("n_sites must be odd"));

    let out = nhssh(&["spectrum", "--defect", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("--defect"));

    assert_eq!(nhssh(&["launch"]).status.code(), Some(2));
}

#[test]
fn computation_failure_exits_one_without_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("ep.csv");
    // No coalescence below g = 0.5.
    let out = nhssh(&["ep", "--defect", "asym", "--range", "0:0.5", "--out", path_str(&target)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("no exceptional point"));
    assert!(!target.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn spectrum_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("spec.csv");
    let out = nhssh(&["spectrum", "--out", path_str(&target)]);
    assert_eq!(out.status.code(), Some(0));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert_eq!(summary.lines().count(), 1);
    assert!(summary.starts_with("spectrum: n=25 defect=none"), "{summary}");

    let text = fs::read_to_string(&target).unwrap();
    assert!(text.starts_with("index,re_E,im_E,residual\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 25);
    let middle: f64 = rows[12][1].parse().unwrap();
    assert!(middle.abs() < 1e-8);
}

#[test]
fn json_output_parses() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("mode.json");
    let out = nhssh(&[
        "mode", "--defect", "asym", "--strength", "1", "--format", "json", "--out", path_str(&target),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc: serde_json::Value = serde_json::from_str(&fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(doc["lattice"]["defect"]["variant"], "asym");
    assert_eq!(doc["profile"]["intensities"].as_array().unwrap().len(), 25);
}

#[test]
fn reproduce_3e_peaks_in_defect_dimer() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("fig3e.csv");
    let out = nhssh(&["reproduce", "--figure", "3e", "--out", path_str(&target)]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&fs::read_to_string(&target).unwrap());
    let intensity: Vec<f64> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    let argmax = (0..intensity.len()).max_by(|&a, &b| intensity[a].total_cmp(&intensity[b])).unwrap() + 1;
    assert!(argmax == 10 || argmax == 11, "argmax {argmax}");
}

#[test]
fn reproduce_4d_writes_dense_grid() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("fig4d.txt");
    let out = nhssh(&["reproduce", "--figure", "4d", "--out", path_str(&target)]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&target).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# zsteps=601 nsites=25"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 601);
    assert_eq!(rows[0][24], 1.0);
    let last = rows.last().unwrap();
    assert!((last.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    assert!(last[24] > 0.2, "{}", last[24]);
}

#[test]
fn propagate_long_format_and_grid_side_file() {
    let dir = tempfile::tempdir().unwrap();
    let long = dir.path().join("evo.csv");
    let grid = dir.path().join("evo.grid");
    let out = nhssh(&[
        "propagate", "--n", "5", "--site", "5", "--z-max", "1", "--steps", "4", "--out", path_str(&long), "--grid",
        path_str(&grid),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&long).unwrap();
    assert!(text.starts_with("z,site,norm_intensity\n"));
    assert_eq!(text.lines().count(), 1 + 5 * 5);
    assert!(fs::read_to_string(&grid).unwrap().starts_with("# zsteps=5 nsites=5\n"));
}

#[test]
fn jobs_do_not_change_output() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = |p: &Path, jobs: &'static str| {
        vec![
            "sweep".to_string(),
            "--defect".into(),
            "pt".into(),
            "--range".into(),
            "0:1.5:31".into(),
            "--jobs".into(),
            jobs.into(),
            "--out".into(),
            p.to_str().unwrap().into(),
        ]
    };
    for (p, j) in [(&a, "1"), (&b, "4")] {
        let argv = args(p, j);
        let argv: Vec<&str> = argv.iter().map(String::as_str).collect();
        assert_eq!(nhssh(&argv).status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn config_file_is_merged_with_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("lattice.json");
    fs::write(
        &cfg,
        r#"{"n_sites": 9, "k": 0.5, "c": 1.0, "defect": {"variant": "pt", "m": 4, "strength": 0.3}}"#,
    )
    .unwrap();
    let out = nhssh(&["spectrum", "--config", path_str(&cfg), "--strength", "0.6"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 9);
    let summary = String::from_utf8(out.stderr).unwrap();
    assert!(summary.contains("defect=pt m=4 strength=0.6"), "{summary}");
}
