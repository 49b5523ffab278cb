use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn heisen(dir: &Path, args: &[&str], config: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_heisen"));
    cmd.current_dir(dir).args(args).arg("--out").arg(dir.join("out"));
    if let Some(text) = config {
        let p = dir.join("run.ini");
        fs::write(&p, text).unwrap();
        cmd.arg("--config").arg(p);
    }
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn unknown_key_exits_2_naming_it() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["verify"], Some("seed = 1\n[grid]\nlambda_mn = 0.1\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("grid.lambda_mn"), "{}", stderr(&o));
    assert!(!dir.path().join("out/verify_report.json").exists());
}

#[test]
fn malformed_values_exit_2() {
    let dir = TempDir::new().unwrap();
    for text in ["[grid]\nd = many\n", "[grid]\nlambda_min = 3\nlambda_max = 2\n", "no equals sign\n", "[verify]\nsuites = bogus\n"] {
        let o = heisen(dir.path(), &["verify"], Some(text));
        assert_eq!(o.status.code(), Some(2), "{text}");
    }
}

#[test]
fn under_resolved_grid_reports_tail_mass() {
    let dir = TempDir::new().unwrap();
    let cfg = "[grid]\nn_max = 1\n[verify]\nsuites = laguerre_orthogonality, biradial_round_trip\n";
    let o = heisen(dir.path(), &["verify"], Some(cfg));
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/verify_report.json")).unwrap()).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(v["seed"], 42);
    let suites = v["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 2);
    assert_eq!(suites[0]["pass"], true);
    let failed = &suites[1];
    assert_eq!(failed["name"], "biradial_round_trip");
    assert!(failed["metrics"][0]["key"].as_str().unwrap().contains("tail mass"));
}

#[test]
fn algebra_normal_form() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["algebra", "X1*Y1 - Y1*X1"], None);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().next(), Some("-S"));
    assert!(out.contains("commutator_table: pass") && out.contains("swap_identities: pass"));
    let o = heisen(dir.path(), &["algebra"], Some("[algebra]\nexpr = Delta*X1 - X1*Delta\nd = 1\n"));
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("2*Y1*S"));
    assert_eq!(heisen(dir.path(), &["algebra", "X1*(Y1"], None).status.code(), Some(2));
    assert_eq!(heisen(dir.path(), &["algebra", "X3"], Some("[algebra]\nd = 1\n")).status.code(), Some(2));
}

const SMALL_KERNEL: &str = "[kernel]\nsymbol = heat\npoints = 5\nrows = 2\n";

#[test]
fn heat_kernel_profile() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["kernel"], Some(SMALL_KERNEL));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("admissible = true"));
    let profile = fs::read_to_string(dir.path().join("out/kernel_profile.csv")).unwrap();
    let mut lines = profile.lines();
    assert_eq!(lines.next(), Some("rho,s,re,im"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 25);
    let centre: Vec<&Vec<f64>> = rows.iter().filter(|r| r[1] == 0.0).collect();
    assert_eq!(centre.len(), 5);
    for r in centre {
        assert!(r[3].abs() <= 1e-12 * r[2].abs().max(1e-300) || r[3] == 0.0, "{r:?}");
    }
    let coeffs = fs::read_to_string(dir.path().join("out/kernel_coeffs.csv")).unwrap();
    assert!(coeffs.starts_with("n,lambda,re,im,re_dlambda,im_dlambda\n"));
}

#[test]
fn identity_and_unknown_symbols() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["kernel"], Some("[kernel]\nsymbol = identity\nrows = 1\n"));
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("norm = inf") && stdout(&o).contains("admissible = false"));
    assert!(!dir.path().join("out/kernel_profile.csv").exists());
    let o = heisen(dir.path(), &["kernel"], Some("[kernel]\nsymbol = warp(k=2)\n"));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("warp"));
}

#[test]
fn evolve_at_time_zero_reproduces_the_input() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["evolve"], Some("[evolve]\ninitial = heat\nnu = 0.5\nt_list = 0, 3\nrows = 3\n"));
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = dir.path().join("out");
    assert_eq!(fs::read(out.join("initial.csv")).unwrap(), fs::read(out.join("step_0.csv")).unwrap());
    assert_ne!(fs::read(out.join("initial.csv")).unwrap(), fs::read(out.join("step_1.csv")).unwrap());
    let log = fs::read_to_string(out.join("conservation.csv")).unwrap();
    assert!(log.starts_with("step,t,norm,relative_deviation\n"));
    for line in log.lines().skip(1) {
        let dev: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!(dev <= 1e-12, "{line}");
    }
}

#[test]
fn miyachi_probe_at_p2_passes() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["probe"], Some("[probe]\nname = miyachi\nnu = 1\np = 2\nt_list = 1, 10, 100\n"));
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/probe_report.json")).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    let o = heisen(dir.path(), &["probe"], Some("[probe]\nname = nothing\n"));
    assert_eq!(o.status.code(), Some(2));
    let o = heisen(dir.path(), &["probe"], Some("[probe]\np = minus one\n"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn failing_probe_exits_1() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["verify"], Some("[verify]\nsuites = taylor_remainder\n[tolerances]\ntaylor_remainder.polynomial_remainder = 0\n"));
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn outputs_are_deterministic() {
    let cfg = format!("seed = 9\njobs = 2\n{SMALL_KERNEL}[verify]\nsuites = sobolev_p2, level_trace\n[probe]\nname = sobolev\n");
    let read_all = |dir: &Path| {
        let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir.join("out"))
            .unwrap()
            .map(|e| e.unwrap())
            .map(|e| (e.file_name().to_string_lossy().into_owned(), fs::read(e.path()).unwrap()))
            .collect();
        files.sort();
        files
    };
    let runs: Vec<_> = (0..2)
        .map(|_| {
            let dir = TempDir::new().unwrap();
            for cmd in ["kernel", "verify", "probe"] {
                let o = heisen(dir.path(), &[cmd], Some(&cfg));
                assert_eq!(o.status.code(), Some(0), "{cmd}: {}", stdout(&o));
            }
            read_all(dir.path())
        })
        .collect();
    assert_eq!(runs[0].len(), 4);
    assert!(runs[0] == runs[1]);
    assert!(!runs[0].iter().any(|(n, _)| n.ends_with(".tmp")));
}

#[test]
fn seed_flag_overrides_config() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["verify", "--seed", "7"], Some("seed = 3\n[verify]\nsuites = laguerre_orthogonality\n"));
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/verify_report.json")).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
}

#[test]
fn default_verify_passes() {
    let dir = TempDir::new().unwrap();
    let o = heisen(dir.path(), &["verify"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/verify_report.json")).unwrap()).unwrap();
    assert!(v["suites"].as_array().unwrap().len() >= 12);
}
