use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn exwkb(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exwkb"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("EXWKB_OUT")
        .output()
        .unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn harmonic_graph_files() {
    let dir = TempDir::new().unwrap();
    let o = exwkb(&["stokes", "--potential", "x^2/2", "--energy", "0.5"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let g = read_json(&dir.path().join("stokes.json"));
    assert_eq!(g["sectors"].as_array().unwrap().len(), 4);
    assert_eq!(g["finite_pairs"], serde_json::json!([[0, 1]]));
    let svg = std::fs::read_to_string(dir.path().join("stokes.svg")).unwrap();
    assert!(svg.starts_with("<?xml") && svg.contains(r#"version="1.1""#) && svg.trim_end().ends_with("</svg>"));
    assert!(svg.contains("#c0392b"), "finite line missing");
    let m = read_json(&dir.path().join("manifest.json"));
    let files: Vec<&str> = m["files"].as_array().unwrap().iter().map(|f| f["name"].as_str().unwrap()).collect();
    assert_eq!(files, ["stokes.json", "stokes.svg"]);
    assert_eq!(m["config"]["energy"], serde_json::json!([0.5, 0.0]));
    assert!(m["config"]["tolerances"]["root"].is_number());
}

#[test]
fn airy_sectors_via_env_dir() {
    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_exwkb"))
        .args(["stokes", "--potential", "x/2", "--format", "csv"])
        .env("EXWKB_OUT", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("sectors.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert!(!dir.path().join("stokes.svg").exists());
}

#[test]
fn reruns_are_bit_identical() {
    let dir = TempDir::new().unwrap();
    let args = ["stokes", "--potential", "x^4/4 - x^2/2", "--energy", "-0.1", "--format", "json,csv,svg"];
    let names = ["stokes.json", "stokes.svg", "sectors.csv", "manifest.json"];
    assert!(exwkb(&args, dir.path()).status.success());
    let first: Vec<Vec<u8>> = names.iter().map(|n| std::fs::read(dir.path().join(n)).unwrap()).collect();
    assert!(exwkb(&args, dir.path()).status.success());
    for (n, f) in names.iter().zip(&first) {
        assert_eq!(&std::fs::read(dir.path().join(n)).unwrap(), f, "{n}");
    }
}

#[test]
fn malformed_potential_exits_2() {
    let dir = TempDir::new().unwrap();
    let o = exwkb(&["stokes", "--potential", "x^^2"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("potential") && stderr(&o).contains("position 2"), "{}", stderr(&o));
}

#[test]
fn config_file_rules() {
    let dir = TempDir::new().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "potential = \"x^2/2\"\nenergy = 0.5\n").unwrap();
    // the file's potential wins over the flag
    let o = exwkb(&["stokes", "--config", cfg.to_str().unwrap(), "--potential", "x/2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(read_json(&dir.path().join("stokes.json"))["sectors"].as_array().unwrap().len(), 4);

    std::fs::write(&cfg, "potential = \"x\"\nenergie = 1\n").unwrap();
    let o = exwkb(&["stokes", "--config", cfg.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("energie"), "{}", stderr(&o));

    let o = exwkb(&["stokes", "--potential", "x", "--tol", "roots=1e-9"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn borel_pole_map_and_rays() {
    let dir = TempDir::new().unwrap();
    let o = exwkb(
        &["borel", "--potential", "x/2", "--x", "1", "--order", "20", "--pade", "10/10", "--ray", "3.0", "--ray", "3.3"],
        dir.path(),
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&dir.path().join("borel.json"));
    let p = &r["singularities"]["nearest_pole"];
    let modulus = p[0].as_f64().unwrap().hypot(p[1].as_f64().unwrap());
    assert!((modulus - 2.0 / 3.0).abs() < 0.02 * 2.0 / 3.0, "{modulus}");
    assert_eq!(r["ray_sums"].as_array().unwrap().len(), 2);
    assert_eq!(r["agreement"][0]["within_error_bars"], Value::Bool(true));
    assert!(dir.path().join("poles.svg").exists());
}

#[test]
fn ray_through_pole_exits_3() {
    let dir = TempDir::new().unwrap();
    let o = exwkb(&["borel", "--potential", "x/2", "--x=-0.5,0.866", "--ray", "3.14159265"], dir.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("borel") && stderr(&o).contains("integration ray"));
}

#[test]
fn coefficient_table() {
    let dir = TempDir::new().unwrap();
    let o = exwkb(&["coeffs", "--potential", "x/2", "--x", "2", "--order", "3", "--format", "csv"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("coeffs.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "n,c_re,c_im,b_re,b_im");
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("0,1e0,0e0"));
    let o = exwkb(&["coeffs", "--potential", "x/2", "--x", "2", "--sector", "4"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn airy_connection() {
    let dir = TempDir::new().unwrap();
    let o = exwkb(&["connect", "--potential", "x/2", "--from", "3", "--basis", "1,2", "--lambda", "10"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&dir.path().join("connection.json"));
    let beta = &r[0]["beta"];
    assert!(beta[0].as_f64().unwrap().abs() < 1e-6 && (beta[1].as_f64().unwrap() + 1.0).abs() < 1e-6, "{beta}");
}

#[test]
fn harmonic_levels() {
    let dir = TempDir::new().unwrap();
    let o = exwkb(&["eigen", "--potential", "x^2/2", "--bracket", "0,3", "--count", "2", "--method", "shooting"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let r = read_json(&dir.path().join("eigen.json"));
    for (n, e) in r.as_array().unwrap().iter().enumerate() {
        assert!((e["energy"][0].as_f64().unwrap() - n as f64 - 0.5).abs() < 1e-8);
    }
    let o = exwkb(&["eigen", "--potential", "x^3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_suites() {
    let dir = TempDir::new().unwrap();
    for suite in ["eq21", "eigen-ho"] {
        let o = exwkb(&["verify", suite], dir.path());
        assert!(o.status.success(), "{suite}: {}", stderr(&o));
        let r = read_json(&dir.path().join("verify.json"));
        assert_eq!(r["pass"], Value::Bool(true));
        assert!(String::from_utf8_lossy(&o.stdout).contains("PASS"));
    }
    let r = read_json(&dir.path().join("verify.json"));
    assert_eq!(r["details"]["residuals"].as_array().unwrap().len(), 6);
    let o = exwkb(&["verify", "eq99"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("unknown suite"));
}
