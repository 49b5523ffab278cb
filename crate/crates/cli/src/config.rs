//! Line-based run configuration: `key = value` pairs under `[section]` headers.
//! `#` starts a comment. Lists are comma separated.

use std::collections::BTreeMap;

use heisen_core::biradial::GridConfig;
use heisen_core::probes::suites::{suite_names, SuiteContext};

use crate::error::CliError;

const TOP_KEYS: &[&str] = &["seed", "jobs"];
const GRID_KEYS: &[&str] = &["d", "lambda_min", "lambda_max", "nodes_per_sign", "n_min", "n_max", "sigma_max", "tail_tol"];
const VERIFY_KEYS: &[&str] = &["suites", "nu", "growth_times", "growth_orders"];
const KERNEL_KEYS: &[&str] = &["symbol", "rho_max", "s_max", "points", "rows"];
const EVOLVE_KEYS: &[&str] = &["initial", "nu", "t_list", "rows"];
const PROBE_KEYS: &[&str] = &["name", "nu", "p", "t_list", "orders", "words", "scale"];
const ALGEBRA_KEYS: &[&str] = &["expr", "d"];

#[derive(Clone, Debug, PartialEq)]
pub struct KernelConfig {
    pub symbol: String,
    pub rho_max: f64,
    pub s_max: f64,
    /// Samples per axis of the profile.
    pub points: usize,
    /// Laguerre rows in the coefficient dump.
    pub rows: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvolveConfig {
    pub initial: String,
    pub nu: f64,
    pub t_list: Vec<f64>,
    pub rows: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProbeConfig {
    pub name: String,
    pub nu: f64,
    pub p: String,
    pub t_list: Vec<f64>,
    pub orders: Vec<u32>,
    pub words: Vec<String>,
    pub scale: f64,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub seed: u64,
    pub jobs: usize,
    pub grid: GridConfig,
    pub suites: Vec<String>,
    pub verify_nu: Vec<f64>,
    pub growth_times: Vec<f64>,
    pub growth_orders: Vec<usize>,
    pub tolerances: BTreeMap<String, f64>,
    pub kernel: KernelConfig,
    pub evolve: EvolveConfig,
    pub probe: ProbeConfig,
    pub expr: Option<String>,
    pub algebra_d: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let ctx = SuiteContext::new(GridConfig::new(1));
        Self {
            seed: 42,
            jobs: 1,
            grid: ctx.grid,
            suites: Vec::new(),
            verify_nu: ctx.nu,
            growth_times: ctx.growth_times,
            growth_orders: ctx.growth_orders,
            tolerances: BTreeMap::new(),
            kernel: KernelConfig { symbol: "heat".into(), rho_max: 4.0, s_max: 4.0, points: 41, rows: 8 },
            evolve: EvolveConfig { initial: "heat".into(), nu: 1.0, t_list: vec![0.0, 1.0, 10.0], rows: 8 },
            probe: ProbeConfig {
                name: "miyachi".into(),
                nu: 1.0,
                p: "2".into(),
                t_list: vec![1.0, 10.0, 100.0],
                orders: vec![1, 2, 3],
                words: vec!["S".into(), "X1".into(), "X1*X1".into()],
                scale: 2.0,
            },
            expr: None,
            algebra_d: None,
        }
    }
}

fn bad(line: usize, msg: impl Into<String>) -> CliError {
    CliError::Config { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<T, CliError> {
    v.parse().map_err(|_| bad(line, format!("`{key}`: cannot parse `{v}`")))
}

fn real(line: usize, key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = num(line, key, v)?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(bad(line, format!("`{key}` must be finite")))
    }
}

fn list<T: std::str::FromStr>(line: usize, key: &str, v: &str) -> Result<Vec<T>, CliError> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(|s| num(line, key, s)).collect()
}

fn words(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut c = RunConfig::default();
        let mut section = String::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            if let Some(name) = body.strip_prefix('[') {
                let name = name.strip_suffix(']').ok_or_else(|| bad(line, "unterminated section header"))?.trim();
                if !["grid", "verify", "tolerances", "kernel", "evolve", "probe", "algebra"].contains(&name) {
                    return Err(CliError::UnknownKey(format!("[{name}]")));
                }
                section = name.to_string();
                continue;
            }
            let (key, value) = body.split_once('=').ok_or_else(|| bad(line, "expected `key = value`"))?;
            let (key, value) = (key.trim(), value.trim());
            c.set(&section, key, value, line)?;
        }
        c.grid.validate().map_err(|e| bad(0, e.to_string()))?;
        Ok(c)
    }

    fn set(&mut self, section: &str, key: &str, v: &str, line: usize) -> Result<(), CliError> {
        let known = match section {
            "" => TOP_KEYS,
            "grid" => GRID_KEYS,
            "verify" => VERIFY_KEYS,
            "kernel" => KERNEL_KEYS,
            "evolve" => EVOLVE_KEYS,
            "probe" => PROBE_KEYS,
            "algebra" => ALGEBRA_KEYS,
            _ => &[],
        };
        let qualified = if section.is_empty() { key.to_string() } else { format!("{section}.{key}") };
        if section == "tolerances" {
            let suite = key.split('.').next().unwrap_or("");
            if !key.contains('.') || !suite_names().contains(&suite) {
                return Err(CliError::UnknownKey(qualified));
            }
            let t = real(line, key, v)?;
            if t < 0.0 {
                return Err(bad(line, format!("`{key}` must be nonnegative")));
            }
            self.tolerances.insert(key.to_string(), t);
            return Ok(());
        }
        if !known.contains(&key) {
            return Err(CliError::UnknownKey(qualified));
        }
        let g = &mut self.grid;
        match (section, key) {
            ("", "seed") => self.seed = num(line, key, v)?,
            ("", "jobs") => {
                self.jobs = num(line, key, v)?;
                if self.jobs == 0 {
                    return Err(bad(line, "`jobs` must be at least 1"));
                }
            }
            ("grid", "d") => {
                g.d = num(line, key, v)?;
                if !(1..=8).contains(&g.d) {
                    return Err(bad(line, "`d` must lie in 1..=8"));
                }
            }
            ("grid", "lambda_min") => g.lambda_min = real(line, key, v)?,
            ("grid", "lambda_max") => g.lambda_max = real(line, key, v)?,
            ("grid", "nodes_per_sign") => g.nodes_per_sign = num(line, key, v)?,
            ("grid", "n_min") => g.n_min = num(line, key, v)?,
            ("grid", "n_max") => {
                g.n_max = num(line, key, v)?;
                if g.n_max == 0 {
                    return Err(bad(line, "`n_max` must be at least 1"));
                }
            }
            ("grid", "sigma_max") => g.sigma_max = real(line, key, v)?,
            ("grid", "tail_tol") => g.tail_tol = real(line, key, v)?,
            ("verify", "suites") => {
                self.suites = words(v);
                if let Some(s) = self.suites.iter().find(|s| !suite_names().contains(&s.as_str())) {
                    return Err(bad(line, format!("unknown suite `{s}`")));
                }
            }
            ("verify", "nu") => self.verify_nu = positive_list(line, key, v)?,
            ("verify", "growth_times") => self.growth_times = list(line, key, v)?,
            ("verify", "growth_orders") => self.growth_orders = list(line, key, v)?,
            ("kernel", "symbol") => self.kernel.symbol = v.to_string(),
            ("kernel", "rho_max") => self.kernel.rho_max = positive(line, key, v)?,
            ("kernel", "s_max") => self.kernel.s_max = positive(line, key, v)?,
            ("kernel", "points") => self.kernel.points = count(line, key, v)?,
            ("kernel", "rows") => self.kernel.rows = num(line, key, v)?,
            ("evolve", "initial") => self.evolve.initial = v.to_string(),
            ("evolve", "nu") => self.evolve.nu = positive(line, key, v)?,
            ("evolve", "t_list") => self.evolve.t_list = list(line, key, v)?,
            ("evolve", "rows") => self.evolve.rows = num(line, key, v)?,
            ("probe", "name") => self.probe.name = v.to_string(),
            ("probe", "nu") => self.probe.nu = positive(line, key, v)?,
            ("probe", "p") => self.probe.p = v.to_string(),
            ("probe", "t_list") => self.probe.t_list = list(line, key, v)?,
            ("probe", "orders") => self.probe.orders = list(line, key, v)?,
            ("probe", "words") => self.probe.words = words(v),
            ("probe", "scale") => self.probe.scale = positive(line, key, v)?,
            ("algebra", "expr") => self.expr = Some(v.to_string()),
            ("algebra", "d") => self.algebra_d = Some(num(line, key, v)?),
            _ => unreachable!("key table and match agree"),
        }
        Ok(())
    }

    pub fn suite_context(&self) -> SuiteContext {
        let mut ctx = SuiteContext::new(self.grid.clone());
        ctx.seed = self.seed;
        ctx.nu = self.verify_nu.clone();
        ctx.growth_times = self.growth_times.clone();
        ctx.growth_orders = self.growth_orders.clone();
        ctx.tolerances = self.tolerances.clone();
        ctx
    }
}

fn positive(line: usize, key: &str, v: &str) -> Result<f64, CliError> {
    let x = real(line, key, v)?;
    if x > 0.0 {
        Ok(x)
    } else {
        Err(bad(line, format!("`{key}` must be positive")))
    }
}

fn positive_list(line: usize, key: &str, v: &str) -> Result<Vec<f64>, CliError> {
    let xs: Vec<f64> = list(line, key, v)?;
    if xs.iter().all(|x| *x > 0.0 && x.is_finite()) {
        Ok(xs)
    } else {
        Err(bad(line, format!("`{key}` entries must be positive")))
    }
}

fn count(line: usize, key: &str, v: &str) -> Result<usize, CliError> {
    let n: usize = num(line, key, v)?;
    if n >= 2 {
        Ok(n)
    } else {
        Err(bad(line, format!("`{key}` must be at least 2")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_and_overrides() {
        let c = RunConfig::parse("").unwrap();
        assert_eq!(c.seed, 42);
        assert_eq!(c.grid, GridConfig::new(1));
        let c = RunConfig::parse(
            "seed = 7  # comment\n[grid]\nd = 2\nnodes_per_sign = 120\n[verify]\nsuites = level_trace, sobolev_p2\n\
             [tolerances]\nlevel_trace.relative_error = 1e-5\n[kernel]\nsymbol = bessel(r=4)\n",
        )
        .unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!((c.grid.d, c.grid.nodes_per_sign), (2, 120));
        assert_eq!(c.suites, ["level_trace", "sobolev_p2"]);
        assert_eq!(c.tolerances["level_trace.relative_error"], 1e-5);
        assert_eq!(c.kernel.symbol, "bessel(r=4)");
    }

    #[test]
    fn rejects_unknown_keys_and_bad_values() {
        match RunConfig::parse("[grid]\nlambda_mn = 1\n") {
            Err(CliError::UnknownKey(k)) => assert_eq!(k, "grid.lambda_mn"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(RunConfig::parse("colour = red"), Err(CliError::UnknownKey(k)) if k == "colour"));
        assert!(matches!(RunConfig::parse("[plot]"), Err(CliError::UnknownKey(_))));
        assert!(matches!(RunConfig::parse("[tolerances]\nnope.x = 1"), Err(CliError::UnknownKey(_))));
        assert!(matches!(RunConfig::parse("[grid]\nd = two"), Err(CliError::Config { line: 2, .. })));
        assert!(matches!(RunConfig::parse("[grid]\nlambda_min = 5\nlambda_max = 1"), Err(CliError::Config { .. })));
        assert!(matches!(RunConfig::parse("seed"), Err(CliError::Config { line: 1, .. })));
        assert!(matches!(RunConfig::parse("[verify]\nsuites = bogus"), Err(CliError::Config { .. })));
    }
}
