use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn wavex(args: &[&str], dir: &Path, config: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_wavex"));
    cmd.args(args).arg("--out").arg(dir.join("out"));
    if let Some(text) = config {
        let path = dir.join("run.toml");
        fs::write(&path, text).unwrap();
        cmd.arg("--config").arg(path);
    }
    cmd.env_remove("WAVEX_THREADS").output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

#[test]
fn defaults_parse_back() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavex(&["--print-defaults"], dir.path(), None);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let run = wavex(&["check"], dir.path(), Some(&text));
    assert!(run.status.success(), "{}", String::from_utf8_lossy(&run.stderr));
    assert!(read(dir.path(), "diffraction.json").contains("\"residual\""));
}

#[test]
fn output_help_lists_all_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavex(&["--help-output"], dir.path(), None);
    let text = String::from_utf8(out.stdout).unwrap();
    for f in ["spectrum.csv", "eta_map.csv", "convergence.csv", "resonances.json"] {
        assert!(text.contains(f), "{f}");
    }
}

#[test]
fn config_errors_exit_2_with_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavex(&["diffract"], dir.path(), Some("[discretization]\norder = 9\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("discretization.order"));
    let out = wavex(&["diffract"], dir.path(), Some("[problem.incident]\nmodes = \"all\"\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("problem.incident.modes"));
    let out = wavex(&["spectrum"], dir.path(), Some("[problem]\nboundary = \"dirichlet\"\ncross_section = { kind = \"disk\", radius = 1.0 }\n"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_failures_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    // Linear elements on one Dirichlet cell leave no transverse unknowns.
    let out = wavex(
        &["diffract"],
        dir.path(),
        Some("[problem]\nboundary = \"dirichlet\"\nincident = { modes = [1] }\n[discretization]\nelements = 2\nelements_y = 1\norder = 1\n"),
    );
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn disk_spectrum_rows() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavex(
        &["spectrum", "--check"],
        dir.path(),
        Some("[problem]\ncross_section = { kind = \"disk\", radius = 1.0 }\n[task.spectrum]\ncount = 8\n"),
    );
    assert!(out.status.success());
    let csv = read(dir.path(), "spectrum.csv");
    let lambdas: Vec<f64> = column(&csv, "lambda").iter().map(|s| s.parse().unwrap()).collect();
    let mu = [0.0, 1.84118378134, 1.84118378134, 3.05423692823, 3.05423692823, 3.83170597021, 4.20118894121];
    for (l, m) in lambdas.iter().zip(mu) {
        assert!((l.sqrt() - m).abs() < 1e-9, "{l} {m}");
    }
}

#[test]
fn sweep_argmin_inside_window() {
    let dir = tempfile::tempdir().unwrap();
    let out = wavex(
        &["sweep-kappa0", "--check"],
        dir.path(),
        Some("[problem]\ncross_section = { kind = \"disk\", radius = 1.0 }\nkappa = 3.5\n[method]\nn = 6\n"),
    );
    assert!(out.status.success());
    let csv = read(dir.path(), "eta_map.csv");
    assert_eq!(csv.lines().count(), 1 + 60 * 60);
    let params: serde_json::Value = serde_json::from_str(&read(dir.path(), "params.json")).unwrap();
    let k0 = &params["argmin"]["kappa0"];
    let (re, im) = (k0[0].as_f64().unwrap(), k0[1].as_f64().unwrap());
    assert!(re > 0.1 && re < 8.0 && im > 0.1 && im < 8.0);
    assert!(params["argmin"]["eta"].as_f64().unwrap().is_finite());
}

#[test]
fn modified_basis_removes_plateau() {
    let run = |modified: &str| {
        let dir = tempfile::tempdir().unwrap();
        let cfg = format!(
            "[problem]\nkappa = 3.1416\nincident = {{ modes = [1, 2, 3] }}\n[method]\nmodified = \"{modified}\"\n\
             [discretization]\nelements = 8\n[task.convergence]\nvalues = [4, 8, 16]\n"
        );
        let out = wavex(&["convergence"], dir.path(), Some(&cfg));
        assert!(out.status.success());
        column(&read(dir.path(), "convergence.csv"), "relative_h1_error")
            .iter()
            .map(|s| s.parse::<f64>().unwrap())
            .collect::<Vec<_>>()
    };
    let plain = run("off");
    let modified = run("auto");
    assert!(plain.iter().all(|&e| e > 0.1), "{plain:?}");
    assert!(modified[2] < 1e-4 && modified[2] < 1e-3 * plain[2], "{modified:?}");
}

#[test]
fn resonances_json_and_threads_env() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "[problem]\ngeometry = { kind = \"interval\", a = -0.5, b = 1.5 }\n\
               index = { kind = \"layers\", layers = [[0.0, 1.0, 2.0]] }\n\
               [method]\nn = 20\n[discretization]\nelements = 32\n";
    let path = dir.path().join("run.toml");
    fs::write(&path, cfg).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_wavex"))
        .args(["resonate", "--check", "--out"])
        .arg(dir.path().join("out"))
        .arg("--config")
        .arg(&path)
        .env("WAVEX_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&read(dir.path(), "resonances.json")).unwrap();
    let list = v["resonances"].as_array().unwrap();
    let hit = list.iter().any(|r| {
        let k = &r["kappa"];
        (k[0].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-4 && (k[1].as_f64().unwrap() + 0.5 * 3f64.ln()).abs() < 1e-4
    });
    assert!(hit);
    assert_eq!(v["params"]["config"]["method"]["n"], 20);
    let bad = Command::new(env!("CARGO_BIN_EXE_wavex"))
        .args(["spectrum", "--out"])
        .arg(dir.path().join("out"))
        .env("WAVEX_THREADS", "lots")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}
