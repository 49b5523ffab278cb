use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use heisen_core::algebra::parse_expression;
use heisen_core::biradial::{BiradialFunction, SpectralGrid};
use heisen_core::group::MultiIndex;
use heisen_core::multipliers::{kernel_coeffs, l2_kernel_norm, parse_symbol, MultiplierSpec};
use heisen_core::probes::suites::{run_suite, run_suites, seeded_field};
use heisen_core::probes::{
    evolve, gaussian_field, lp_ratio_probe, miyachi_probe, sobolev_identity_p2, ProbeReport, RatioProbe,
};
use heisen_core::HeisenError;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::CliError;

/// Writes `bytes` to `dir/name` through a temporary file and a rename.
pub fn write_atomic(dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
    fs::create_dir_all(dir)?;
    let target = dir.join(name);
    let tmp = dir.join(format!(".{name}.tmp"));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, &target)?;
    Ok(target)
}

fn grid(cfg: &RunConfig) -> Result<Arc<SpectralGrid>, CliError> {
    Ok(Arc::new(SpectralGrid::new(cfg.grid.clone())?))
}

/// Symbol text from the user: any failure to resolve it is a usage error.
fn user_symbol(text: &str) -> Result<MultiplierSpec, CliError> {
    parse_symbol(text).map_err(|e| CliError::Usage(format!("symbol `{text}`: {e}")))
}

fn pool(jobs: usize) -> Result<rayon::ThreadPool, CliError> {
    rayon::ThreadPoolBuilder::new().num_threads(jobs).build().map_err(|e| CliError::Usage(e.to_string()))
}

fn coeff_csv(f: &BiradialFunction, rows: usize) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    f.write_csv(&mut buf, rows)?;
    Ok(buf)
}

#[derive(Serialize)]
struct VerifyReport<'a> {
    seed: u64,
    pass: bool,
    suites: &'a [ProbeReport],
}

pub fn verify(cfg: &RunConfig, out: &Path) -> Result<bool, CliError> {
    let reports = run_suites(&cfg.suites, &cfg.suite_context(), cfg.jobs).map_err(|e| CliError::Usage(e.to_string()))?;
    let pass = reports.iter().all(|r| r.pass);
    for r in &reports {
        println!("{:<24} {}", r.name, if r.pass { "pass" } else { "FAIL" });
        for m in r.metrics.iter().filter(|m| !m.pass) {
            let tol = m.tolerance.map_or("-".to_string(), |t| format!("{t:e}"));
            println!("    {} = {:e} (tolerance {tol})", m.key, m.value);
        }
    }
    let json = serde_json::to_string_pretty(&VerifyReport { seed: cfg.seed, pass, suites: &reports })
        .expect("report serializes");
    let path = write_atomic(out, "verify_report.json", json.as_bytes())?;
    println!("{} suites, {} failed; report at {}", reports.len(), reports.iter().filter(|r| !r.pass).count(), path.display());
    Ok(pass)
}

pub fn kernel(cfg: &RunConfig, out: &Path) -> Result<bool, CliError> {
    let k = &cfg.kernel;
    let phi = user_symbol(&k.symbol)?;
    let g = grid(cfg)?;
    let norm = l2_kernel_norm(&phi, &g)?;
    println!("symbol = {}", phi.label());
    println!("norm = {:e}", norm.norm);
    println!("admissible = {}", norm.admissible);
    let coeffs = kernel_coeffs(&phi, &g)?;
    write_atomic(out, "kernel_coeffs.csv", &coeff_csv(&coeffs, k.rows)?)?;
    if !norm.admissible {
        println!("kernel is not square integrable; profile skipped");
        return Ok(true);
    }
    coeffs.check_tail()?;
    let m = k.points;
    let rhos: Vec<f64> = (0..m).map(|i| k.rho_max * i as f64 / (m - 1) as f64).collect();
    let ss: Vec<f64> = (0..m).map(|i| k.s_max * (2.0 * i as f64 / (m - 1) as f64 - 1.0)).collect();
    let rows: Vec<String> = pool(cfg.jobs)?.install(|| {
        ss.par_iter()
            .map(|&s| {
                let mut line = String::new();
                for &rho in &rhos {
                    let v = coeffs.synthesize_radial(rho, s);
                    writeln!(line, "{rho:e},{s:e},{:e},{:e}", v.re, v.im).expect("write to string");
                }
                line
            })
            .collect()
    });
    let mut csv = String::from("rho,s,re,im\n");
    rows.iter().for_each(|r| csv.push_str(r));
    write_atomic(out, "kernel_profile.csv", csv.as_bytes())?;
    Ok(true)
}

pub fn evolve_cmd(cfg: &RunConfig, out: &Path) -> Result<bool, CliError> {
    let e = &cfg.evolve;
    let g = grid(cfg)?;
    let u0 = kernel_coeffs(&user_symbol(&e.initial)?, &g)?;
    let n0 = u0.plancherel_norm();
    write_atomic(out, "initial.csv", &coeff_csv(&u0, e.rows)?)?;
    let mut log = String::from("step,t,norm,relative_deviation\n");
    for (k, &t) in e.t_list.iter().enumerate() {
        let u = evolve(&u0, t, e.nu)?;
        let n = u.plancherel_norm();
        let dev = if n0 > 0.0 { (n / n0 - 1.0).abs() } else { n };
        writeln!(log, "{k},{t:e},{n:e},{dev:e}").expect("write to string");
        write_atomic(out, &format!("step_{k}.csv"), &coeff_csv(&u, e.rows)?)?;
    }
    write_atomic(out, "conservation.csv", log.as_bytes())?;
    println!("{} steps written to {}", e.t_list.len(), out.display());
    Ok(true)
}

/// `X1*Y1*S` style words on `H^d`.
fn parse_word(text: &str, d: usize) -> Result<MultiIndex, CliError> {
    let bad = || CliError::Usage(format!("bad word `{text}`"));
    let ids = text
        .split('*')
        .map(|t| {
            let t = t.trim();
            if t == "S" {
                return Ok(2 * d + 1);
            }
            let (base, idx) = t.split_at(t.len().min(1));
            let j: usize = idx.parse().map_err(|_| bad())?;
            if !(1..=d).contains(&j) {
                return Err(bad());
            }
            match base {
                "X" => Ok(j),
                "Y" => Ok(d + j),
                _ => Err(bad()),
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(MultiIndex::new(d, ids)?)
}

pub fn probe(cfg: &RunConfig, out: &Path) -> Result<bool, CliError> {
    let p = &cfg.probe;
    let rep = match p.name.as_str() {
        "miyachi" => {
            heisen_core::probes::parse_p_label(&p.p).map_err(|e| CliError::Usage(e.to_string()))?;
            miyachi_probe(p.nu, &p.p, &p.t_list, &grid(cfg)?)?
        }
        "littlewood_paley" => lp_ratio_probe(&kernel_coeffs(&user_symbol("heat")?, &grid(cfg)?)?, &p.orders)?,
        "sobolev" => sobolev_identity_p2(&seeded_field(&grid(cfg)?, cfg.seed)?)?,
        "horizontal_ratio" => {
            let words = p.words.iter().map(|w| parse_word(w, 1)).collect::<Result<Vec<_>, _>>()?;
            RatioProbe::default().run(&gaussian_field(p.scale), &words, &grid(cfg)?)?
        }
        other => return Err(CliError::Usage(format!("unknown probe `{other}`"))),
    };
    let path = write_atomic(out, "probe_report.json", rep.to_json().as_bytes())?;
    println!("{} {}; report at {}", rep.name, if rep.pass { "pass" } else { "FAIL" }, path.display());
    Ok(rep.pass)
}

pub fn algebra(cfg: &RunConfig, expr: Option<&str>) -> Result<bool, CliError> {
    let text = expr
        .or(cfg.expr.as_deref())
        .ok_or_else(|| CliError::Usage("no expression given (argument or [algebra] expr)".into()))?;
    let e = parse_expression(text, cfg.algebra_d).map_err(|e| match e {
        HeisenError::Parse { .. } => CliError::Core(e),
        other => CliError::Usage(other.to_string()),
    })?;
    println!("{e}");
    let ctx = cfg.suite_context();
    let mut pass = true;
    for name in ["commutator_table", "swap_identities"] {
        let r = run_suite(name, &ctx)?;
        println!("{name}: {}", if r.pass { "pass" } else { "FAIL" });
        pass &= r.pass;
    }
    Ok(pass)
}
