//! The fractional Schrödinger flow `i∂_t u + (−Δ)^ν u = 0` solved spectrally,
//! Bessel potentials, and probes of conservation, Sobolev and
//! Littlewood–Paley identities at `p = 2`, horizontal-derivative ratios and
//! kernel moment growth.

mod ratio;
pub mod suites;
#[cfg(test)]
mod tests;

use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::biradial::{BiradialFunction, SpectralGrid};
use crate::error::{HeisenError, Result};
use crate::group::Point;
use crate::multipliers::{self, apply, kernel_coeffs, l2_kernel_norm, moment_growth_probe, symbol, ExponentFit};
use crate::special::gamma;

pub use ratio::{gaussian_field, horizontal_ratio, RatioProbe};

/// One measured quantity; `pass` iff `value ≤ tolerance` (descriptive entries
/// carry no tolerance and always pass).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metric {
    pub key: String,
    pub value: f64,
    pub tolerance: Option<f64>,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitRecord {
    pub slope: f64,
    pub r2: f64,
}

impl From<ExponentFit> for FitRecord {
    fn from(f: ExponentFit) -> Self {
        FitRecord { slope: f.slope, r2: f.r2 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub name: String,
    pub metrics: Vec<Metric>,
    pub exponent_fits: Vec<FitRecord>,
    pub pass: bool,
}

impl ProbeReport {
    pub fn new(name: impl Into<String>) -> Self {
        Self { name: name.into(), metrics: Vec::new(), exponent_fits: Vec::new(), pass: true }
    }

    /// Records `value` against `tolerance`; NaN never passes.
    pub fn check(&mut self, key: impl Into<String>, value: f64, tolerance: f64) -> bool {
        let pass = value <= tolerance;
        self.metrics.push(Metric { key: key.into(), value, tolerance: Some(tolerance), pass });
        self.pass &= pass;
        pass
    }

    pub fn info(&mut self, key: impl Into<String>, value: f64) {
        self.metrics.push(Metric { key: key.into(), value, tolerance: None, pass: true });
    }

    pub fn fit(&mut self, fit: impl Into<FitRecord>) {
        self.exponent_fits.push(fit.into());
    }

    /// A failed computation recorded as a failing metric.
    pub fn error(&mut self, key: impl Into<String>, err: &HeisenError) {
        let key = format!("{}: {err}", key.into());
        self.metrics.push(Metric { key, value: f64::NAN, tolerance: Some(0.0), pass: false });
        self.pass = false;
    }

    pub fn metric(&self, key: &str) -> Option<&Metric> {
        self.metrics.iter().find(|m| m.key == key)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }
}

/// `e^{it(−Δ)^ν} u0`.
pub fn evolve(u0: &BiradialFunction, t: f64, nu: f64) -> Result<BiradialFunction> {
    if !(nu > 0.0) {
        return Err(HeisenError::InvalidArgument("nu must be positive".into()));
    }
    if t == 0.0 {
        return Ok(u0.clone());
    }
    let phi = symbol("schrodinger", &[("nu".into(), nu), ("t".into(), t)])?;
    apply(&phi, u0)
}

/// `(1 − Δ)^{r/2} F`.
pub fn bessel(f: &BiradialFunction, r: f64) -> Result<BiradialFunction> {
    if r == 0.0 {
        return Ok(f.clone());
    }
    apply(&symbol("bessel", &[("r".into(), -r)])?, f)
}

/// A solution sampled along the flow.
#[derive(Clone)]
pub struct EvolutionState {
    u: BiradialFunction,
    t: f64,
    nu: f64,
}

impl EvolutionState {
    pub fn new(u0: BiradialFunction, nu: f64) -> Result<Self> {
        if !(nu > 0.0) {
            return Err(HeisenError::InvalidArgument("nu must be positive".into()));
        }
        Ok(Self { u: u0, t: 0.0, nu })
    }

    pub fn u(&self) -> &BiradialFunction {
        &self.u
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn advance(&self, dt: f64) -> Result<Self> {
        Ok(Self { u: evolve(&self.u, dt, self.nu)?, t: self.t + dt, nu: self.nu })
    }
}

/// `‖(1−Δ)^{1/2}f‖² = ‖f‖² + ⟨f, −Δf⟩`, both sides in the transform domain.
pub fn sobolev_identity_p2(f: &BiradialFunction) -> Result<ProbeReport> {
    let mut rep = ProbeReport::new("sobolev_identity_p2");
    let lhs = bessel(f, 1.0)?.plancherel_norm_sq();
    let lap = apply(&symbol("sigma", &[])?, f)?;
    let rhs = f.plancherel_norm_sq() + f.parseval(&lap)?.re;
    rep.info("lhs", lhs);
    rep.info("rhs", rhs);
    let dev = if lhs == 0.0 && rhs == 0.0 { 0.0 } else { (lhs - rhs).abs() / lhs.abs().max(rhs.abs()) };
    rep.check("relative_deviation", dev, 1e-10);
    Ok(rep)
}

/// `∫_0^∞ ψ_N(σ/r²)² dr/r = Γ(2N) 2^{−2N−1}` for `ψ_N(σ) = σ^N e^{−σ}`.
pub fn lp_constant(n: u32) -> f64 {
    gamma(2.0 * n as f64) * 2f64.powi(-2 * n as i32 - 1)
}

fn check_lp_order(n: u32) -> Result<()> {
    if n == 0 {
        return Err(HeisenError::InvalidArgument("Littlewood–Paley order must be at least 1".into()));
    }
    Ok(())
}

/// Littlewood–Paley square-function norm at `p = 2`, with the `dr/r`
/// integral over `(0, ∞)` done in closed form per coefficient.
pub fn lp_norm_p2(f: &BiradialFunction, n: u32) -> Result<f64> {
    check_lp_order(n)?;
    Ok((lp_constant(n) * f.plancherel_norm_sq()).sqrt())
}

/// The same norm with `∫ ‖ψ_N(−Δ/r²) f‖² dr/r` evaluated by the trapezoid
/// rule in `u = ln r²`.
pub fn lp_norm_p2_quadrature(f: &BiradialFunction, n: u32) -> Result<f64> {
    check_lp_order(n)?;
    let g = f.grid();
    let d = g.d();
    let mut masses: Vec<(f64, f64)> = Vec::new();
    for j in 0..g.len() {
        let l = g.lambda(j).abs();
        let rows = f.coeffs()[j].len().min(g.n_top(j) + 1);
        for n_row in 0..rows {
            let w = g.weight(j) * g.binom(n_row) * f.coeff(j, n_row).norm_sqr();
            if w > 0.0 {
                masses.push(((l * (d + 2 * n_row) as f64).ln(), w));
            }
        }
    }
    if masses.is_empty() {
        return Ok(0.0);
    }
    masses.sort_by(|a, b| a.0.total_cmp(&b.0));
    // ψ(x)² = x^{2N}e^{−2x} is below 1e-14 of its mass outside ln x ∈ [−16/N, ln 40];
    // analytic in |Im ln x| < π/2, so the trapezoid error is of order e^{−π²/h}
    let (x_lo, x_hi) = (-16.0 / n as f64, 40f64.ln());
    let h = 0.25;
    let two_n = 2.0 * n as f64;
    let u0 = masses[0].0 - x_hi;
    let steps = ((masses[masses.len() - 1].0 - x_lo - u0) / h).ceil() as usize;
    let mut total = 0.0;
    let mut lo = 0;
    let mut hi = 0;
    for k in 0..=steps {
        let u = u0 + k as f64 * h;
        while lo < masses.len() && masses[lo].0 - u < x_lo {
            lo += 1;
        }
        hi = hi.max(lo);
        while hi < masses.len() && masses[hi].0 - u <= x_hi {
            hi += 1;
        }
        let s: f64 = masses[lo..hi].iter().map(|(ls, w)| w * (two_n * (ls - u) - 2.0 * (ls - u).exp()).exp()).sum();
        // dr/r = du/2
        total += 0.5 * h * s;
    }
    Ok(total.sqrt())
}

/// The Littlewood–Paley ratio against its analytic value `√Γ(2N)·2^{−N−1/2}`.
pub fn lp_ratio_probe(f: &BiradialFunction, orders: &[u32]) -> Result<ProbeReport> {
    let mut rep = ProbeReport::new("littlewood_paley_p2");
    let base = f.plancherel_norm();
    if base == 0.0 {
        for &n in orders {
            rep.check(format!("norm_N{n}"), lp_norm_p2_quadrature(f, n)?, 0.0);
        }
        return Ok(rep);
    }
    for &n in orders {
        let want = lp_constant(n).sqrt();
        let closed = lp_norm_p2(f, n)? / base;
        let measured = lp_norm_p2_quadrature(f, n)? / base;
        rep.info(format!("ratio_N{n}"), measured);
        rep.check(format!("closed_form_dev_N{n}"), (closed - want).abs() / want, 1e-12);
        rep.check(format!("quadrature_dev_N{n}"), (measured - want).abs() / want, 1e-6);
    }
    Ok(rep)
}

/// Parses a Hardy/BMO exponent label: a positive number or `bmo`.
pub fn parse_p_label(label: &str) -> Result<Option<f64>> {
    let l = label.trim().to_ascii_lowercase();
    if l == "bmo" || l == "inf" {
        return Ok(None);
    }
    let p: f64 = l.parse().map_err(|_| HeisenError::InvalidArgument(format!("bad exponent label `{label}`")))?;
    if !(p > 0.0 && p.is_finite()) {
        return Err(HeisenError::InvalidArgument(format!("exponent must be positive, got {p}")));
    }
    Ok(Some(p))
}

/// Dispersion probe for the propagator. At `p = 2` the flow conserves the
/// norm exactly; otherwise the report substitutes the kernel moment growth
/// of the high-frequency part, the `t`-independence of the Bessel-damped
/// kernel norm, and a descriptive `sup |K_t|` curve.
pub fn miyachi_probe(nu: f64, p_label: &str, t_list: &[f64], grid: &Arc<SpectralGrid>) -> Result<ProbeReport> {
    let p = parse_p_label(p_label)?;
    let mut rep = ProbeReport::new(format!("miyachi(nu={nu}, p={p_label})"));
    let d = grid.d();
    let q = 2.0 * d as f64 + 2.0;
    if p == Some(2.0) {
        let u0 = kernel_coeffs(&symbol("heat", &[])?, grid)?;
        let base = u0.plancherel_norm();
        let mut worst = 0.0f64;
        for &t in t_list {
            let ut = evolve(&u0, t, nu)?;
            worst = worst.max((ut.plancherel_norm() / base - 1.0).abs());
        }
        rep.check("norm_ratio_deviation", worst, 1e-12);
        return Ok(rep);
    }
    let m = 1;
    let r = q + 2.0 * m as f64 * nu;
    let family = move |t: f64| {
        symbol("schrodinger_high", &[("nu".into(), nu), ("t".into(), t), ("r".into(), r)])
    };
    match moment_growth_probe(&family, m, t_list, grid) {
        Ok(fit) => {
            rep.check("moment_slope_m1", fit.slope, 2.0 * m as f64 + 0.1);
            rep.fit(fit);
        }
        Err(e) => rep.error("moment_slope_m1", &e),
    }
    let damped = |t: f64| symbol("schrodinger", &[("nu".into(), nu), ("t".into(), t), ("r".into(), q + 2.0)]);
    let norms: Result<Vec<f64>> = t_list.iter().map(|&t| Ok(l2_kernel_norm(&damped(t)?, grid)?.norm)).collect();
    let norms = norms?;
    let spread = norms.iter().map(|v| (v / norms[0] - 1.0).abs()).fold(0.0, f64::max);
    rep.check("damped_norm_t_variation", spread, 1e-10);
    let probe_points: Vec<Point> = (0..8).map(|k| Point::radial(d, 0.25 * k as f64, 0.1 * k as f64)).collect();
    for &t in t_list {
        let k = kernel_coeffs(&damped(t)?, grid)?;
        let sup = probe_points.iter().map(|p| k.synthesize(p).map(|v| v.norm())).try_fold(0.0f64, |a, v| v.map(|v| a.max(v)))?;
        rep.info(format!("kernel_sup_t{t}"), sup);
    }
    Ok(rep)
}

/// Growth fit of `‖Z^m K_t‖` for the high-frequency propagator family with
/// `r = Q + 2mν`.
pub fn high_frequency_growth(nu: f64, m: usize, t_list: &[f64], grid: &Arc<SpectralGrid>) -> Result<ExponentFit> {
    let q = 2.0 * grid.d() as f64 + 2.0;
    let r = q + 2.0 * m as f64 * nu;
    let family = move |t: f64| {
        multipliers::symbol("schrodinger_high", &[("nu".into(), nu), ("t".into(), t), ("r".into(), r)])
    };
    moment_growth_probe(&family, m, t_list, grid)
}

/// Semigroup, unitarity and time reversal of the flow on `u0`.
pub fn flow_report(u0: &BiradialFunction, nu: f64, times: &[(f64, f64)]) -> Result<ProbeReport> {
    let mut rep = ProbeReport::new(format!("schrodinger_flow(nu={nu})"));
    let base = u0.plancherel_norm();
    let mut norm_dev = 0.0f64;
    let mut semi_dev = 0.0f64;
    let mut rev_dev = 0.0f64;
    for &(t1, t2) in times {
        let a = evolve(u0, t1, nu)?;
        norm_dev = norm_dev.max((a.plancherel_norm() / base - 1.0).abs());
        let ab = evolve(&a, t2, nu)?;
        let direct = evolve(u0, t1 + t2, nu)?;
        semi_dev = semi_dev.max(difference_norm(&ab, &direct)? / base);
        let back = evolve(&a, -t1, nu)?;
        rev_dev = rev_dev.max(difference_norm(&back, u0)? / base);
    }
    rep.check("norm_deviation", norm_dev, 1e-12);
    rep.check("semigroup_deviation", semi_dev, 1e-12);
    rep.check("time_reversal_deviation", rev_dev, 1e-12);
    Ok(rep)
}

/// Plancherel norm of `a − b`.
pub fn difference_norm(a: &BiradialFunction, b: &BiradialFunction) -> Result<f64> {
    if !a.grid().same_as(b.grid()) {
        return Err(HeisenError::GridMismatch);
    }
    let diff = a.map(|j, n, _, v| v - b.coeffs()[j].get(n).copied().unwrap_or(C64::new(0.0, 0.0)))?;
    Ok(diff.plancherel_norm())
}
