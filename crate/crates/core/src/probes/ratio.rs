use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::ProbeReport;
use crate::biradial::{analyze, BiradialInput, SpectralGrid};
use crate::error::{HeisenError, Result};
use crate::group::{apply_word, dilate, MultiIndex, Point, SmoothField};

/// Quadrature layout for the ratio `‖D^I f‖ / ‖(−Δ)^{|I|/2} f‖` on `H^1`,
/// in units of the field's length scale `ℓ`.
#[derive(Clone, Debug, PartialEq)]
pub struct RatioProbe {
    /// Initial half-width of the `z` box; grown until the boundary is negligible.
    pub half_width: f64,
    /// Trapezoid step in `x, y`; the `s` step is twice its square.
    pub step: f64,
    /// Largest half-width tried before giving up.
    pub max_half_width: f64,
    pub boundary_tol: f64,
    /// Frequencies `|λ| > lambda_band/ℓ²` are dropped from the transform.
    pub lambda_band: f64,
    pub sweep: Vec<f64>,
    /// Ratio tolerance above 1 for words of one generator.
    pub excess_tol: f64,
    pub dilation_tol: f64,
}

impl Default for RatioProbe {
    fn default() -> Self {
        Self {
            half_width: 4.0,
            step: 0.5,
            max_half_width: 24.0,
            boundary_tol: 1e-12,
            lambda_band: 12.0,
            sweep: vec![0.5, 1.0, 2.0, 4.0],
            excess_tol: 5e-3,
            dilation_tol: 1e-2,
        }
    }
}

fn word_name(w: &MultiIndex) -> String {
    let d = w.d();
    let names: Vec<String> = w
        .ids()
        .iter()
        .map(|&i| match i {
            i if i <= d => format!("X{i}"),
            i if i <= 2 * d => format!("Y{}", i - d),
            _ => "S".to_string(),
        })
        .collect();
    names.join("*")
}

fn single_species(w: &MultiIndex) -> bool {
    w.ids().windows(2).all(|p| p[0] == p[1])
}

/// Box half-widths `(L_z, L_s)` with `|f| ≤ tol·max|f|` on the boundary.
fn choose_box(f: &SmoothField, cfg: &RatioProbe) -> Result<(f64, f64)> {
    let l = f.scale();
    let peak = f.eval(&Point::zero(1)).norm();
    let (mut kz, mut ks) = (cfg.half_width, cfg.half_width);
    while kz <= cfg.max_half_width && ks <= cfg.max_half_width {
        let (lz, ls) = (kz * l, ks * l * l);
        let face = |pts: &mut dyn Iterator<Item = Point>| pts.map(|p| f.eval(&p).norm()).fold(0.0, f64::max);
        let z_face = face(&mut (0..=32).map(|i| Point::radial(1, lz, ls * (i as f64 / 16.0 - 1.0))));
        let s_face = face(&mut (0..=32).flat_map(|i| {
            let rho = lz * i as f64 / 32.0;
            [Point::radial(1, rho, ls), Point::radial(1, rho, -ls)]
        }));
        let tol = cfg.boundary_tol * peak;
        if z_face <= tol && s_face <= tol {
            return Ok((lz, ls));
        }
        if z_face > tol {
            kz *= 1.25;
        }
        if s_face > tol {
            ks *= 1.25;
        }
    }
    Err(HeisenError::InvalidArgument(format!(
        "field not negligible on a box of half-width {}·scale",
        cfg.max_half_width
    )))
}

fn trapezoid_nodes(half: f64, h: f64) -> Vec<(f64, f64)> {
    let m = (2.0 * half / h).ceil() as usize;
    let h = 2.0 * half / m as f64;
    (0..=m).map(|k| (-half + k as f64 * h, if k == 0 || k == m { 0.5 * h } else { h })).collect()
}

/// `‖D^I f‖²` for each word by a tensor trapezoid rule.
fn position_norms_sq(f: &SmoothField, words: &[MultiIndex], cfg: &RatioProbe) -> Result<Vec<f64>> {
    let (lz, ls) = choose_box(f, cfg)?;
    let l = f.scale();
    let zs = trapezoid_nodes(lz, cfg.step * l);
    let ss = trapezoid_nodes(ls, cfg.step * cfg.step * l * l * 2.0);
    let rows: Result<Vec<Vec<f64>>> = zs
        .par_iter()
        .map(|&(x, wx)| {
            let mut acc = vec![0.0; words.len()];
            for &(y, wy) in &zs {
                for &(s, ws) in &ss {
                    let p = Point { x: vec![x], y: vec![y], s };
                    let w = wx * wy * ws;
                    for (a, word) in acc.iter_mut().zip(words) {
                        *a += w * apply_word(word, f, &p)?.norm_sqr();
                    }
                }
            }
            Ok(acc)
        })
        .collect();
    let rows = rows?;
    Ok((0..words.len()).map(|i| rows.iter().map(|r| r[i]).sum()).collect())
}

/// `‖(−Δ)^{k/2} f‖²` for each homogeneous order `k`, through the transform of
/// the radial profile.
fn spectral_norms_sq(f: &SmoothField, orders: &[usize], grid: &Arc<SpectralGrid>, cfg: &RatioProbe) -> Result<Vec<f64>> {
    let (lz, ls) = choose_box(f, cfg)?;
    let l = f.scale();
    let g = f.clone();
    let input = BiradialInput::spatial(move |rho, s| g.eval(&Point::radial(1, rho, s)), lz, ls)
        .with_s_step(0.05 * l * l)
        .with_lambda_band(cfg.lambda_band / (l * l));
    let coeffs = analyze(&input, grid)?;
    orders
        .iter()
        .map(|&k| {
            let p = 0.5 * k as f64;
            Ok(coeffs.map(|_, n, l, v| v * (l.abs() * (1 + 2 * n) as f64).powf(p))?.plancherel_norm_sq())
        })
        .collect()
}

impl RatioProbe {
    /// `R_I(f∘δ_t)` for every word and every `t` of the sweep; the spectral
    /// grid is rescaled by `t²` along with the field.
    pub fn ratios(&self, f: &SmoothField, words: &[MultiIndex], grid: &Arc<SpectralGrid>) -> Result<Vec<Vec<f64>>> {
        if grid.d() != 1 || words.iter().any(|w| w.d() != 1) {
            return Err(HeisenError::InvalidArgument("the ratio probe runs on H^1 only".into()));
        }
        let mut orders: Vec<usize> = words.iter().map(|w| w.homogeneous_len()).collect();
        orders.sort_unstable();
        orders.dedup();
        let mut out = vec![Vec::new(); words.len()];
        for &t in &self.sweep {
            let ft = if t == 1.0 {
                f.clone()
            } else {
                let base = f.clone();
                SmoothField::new(move |p| base.eval(&dilate(p, t).expect("nonzero dilation"))).with_scale(f.scale() / t)
            };
            let num = position_norms_sq(&ft, words, self)?;
            let grid_t = Arc::new(grid.scaled(t * t)?);
            let den = spectral_norms_sq(&ft, &orders, &grid_t, self)?;
            for (i, w) in words.iter().enumerate() {
                let k = orders.binary_search(&w.homogeneous_len()).expect("order listed");
                out[i].push((num[i] / den[k]).sqrt());
            }
        }
        Ok(out)
    }

    pub fn run(&self, f: &SmoothField, words: &[MultiIndex], grid: &Arc<SpectralGrid>) -> Result<ProbeReport> {
        let mut rep = ProbeReport::new("horizontal_derivative_ratio");
        let ratios = self.ratios(f, words, grid)?;
        for (w, rs) in words.iter().zip(&ratios) {
            let name = word_name(w);
            for (t, r) in self.sweep.iter().zip(rs) {
                rep.info(format!("R[{name}] t={t}"), *r);
            }
            let max = rs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            if single_species(w) && w.homogeneous_len() <= 2 {
                rep.check(format!("excess[{name}]"), max - 1.0, self.excess_tol);
            }
            let r0 = rs[0];
            let spread = rs.iter().map(|r| (r / r0 - 1.0).abs()).fold(0.0, f64::max);
            rep.check(format!("dilation_spread[{name}]"), spread, self.dilation_tol);
        }
        Ok(rep)
    }
}

/// The ratio probe with default quadrature on `f` (a biradial field on `H^1`).
pub fn horizontal_ratio(f: &SmoothField, words: &[MultiIndex], grid: &Arc<SpectralGrid>) -> Result<ProbeReport> {
    RatioProbe::default().run(f, words, grid)
}

/// Biradial Gaussian `exp(−|z|²/(2ℓ²) − s²/(2ℓ⁴))` with analytic partials.
pub fn gaussian_field(ell: f64) -> SmoothField {
    let a = 0.5 / (ell * ell);
    let b = 0.5 / ell.powi(4);
    let val = move |p: &Point| (-a * p.z_norm_sq() - b * p.s * p.s).exp();
    SmoothField::new(move |p| C64::new(val(p), 0.0))
        .with_partials(move |p| {
            let v = val(p);
            crate::group::Partials {
                dx: p.x.iter().map(|x| C64::new(-2.0 * a * x * v, 0.0)).collect(),
                dy: p.y.iter().map(|y| C64::new(-2.0 * a * y * v, 0.0)).collect(),
                ds: C64::new(-2.0 * b * p.s * v, 0.0),
            }
        })
        .with_scale(ell)
}
