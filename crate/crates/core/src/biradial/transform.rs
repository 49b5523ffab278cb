use std::f64::consts::PI;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::function::BiradialFunction;
use super::grid::SpectralGrid;
use crate::error::Result;
use crate::special::{laguerre_functions, QuadratureRule};

pub type PartialFourierFn = Arc<dyn Fn(f64, f64) -> C64 + Send + Sync>;
pub type SpatialFn = Arc<dyn Fn(f64, f64) -> C64 + Send + Sync>;
pub type RadiusFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;
pub type RowLimitFn = Arc<dyn Fn(f64) -> usize + Send + Sync>;

/// A biradial function `f(z, s) = f̃(|z|, s)`, given either through its
/// partial Fourier transform in `s` or directly in position space.
#[derive(Clone)]
pub enum BiradialInput {
    /// `(ρ, λ) ↦ ∫ e^{iλs} f(ρ, s) ds`, negligible for `ρ > radius(λ)`.
    /// Rows above `row_limit(λ)`, when given, are known to vanish.
    PartialFourier { f: PartialFourierFn, radius: RadiusFn, row_limit: Option<RowLimitFn> },
    /// `(ρ, s) ↦ f(ρ, s)`, negligible outside `ρ ≤ radius`, `|s| ≤ s_window`.
    /// Frequencies `|λ| > lambda_band` are taken to be zero.
    Spatial { f: SpatialFn, radius: f64, s_window: f64, s_step: f64, lambda_band: Option<f64> },
}

impl BiradialInput {
    pub fn partial_fourier(
        f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static,
        radius: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self::PartialFourier { f: Arc::new(f), radius: Arc::new(radius), row_limit: None }
    }

    pub fn with_row_limit(mut self, limit: impl Fn(f64) -> usize + Send + Sync + 'static) -> Self {
        if let Self::PartialFourier { row_limit, .. } = &mut self {
            *row_limit = Some(Arc::new(limit));
        }
        self
    }

    pub fn spatial(f: impl Fn(f64, f64) -> C64 + Send + Sync + 'static, radius: f64, s_window: f64) -> Self {
        Self::Spatial { f: Arc::new(f), radius, s_window, s_step: 0.1, lambda_band: None }
    }

    pub fn with_s_step(mut self, step: f64) -> Self {
        if let Self::Spatial { s_step, .. } = &mut self {
            *s_step = step;
        }
        self
    }

    pub fn with_lambda_band(mut self, band: f64) -> Self {
        if let Self::Spatial { lambda_band, .. } = &mut self {
            *lambda_band = Some(band);
        }
        self
    }
}

fn gl16() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| QuadratureRule::gauss_legendre(16).expect("16-point rule"))
}

/// `2π^d 2^{d−1} / Γ(d)`.
fn radial_constant(d: usize) -> f64 {
    let fact: f64 = (1..d).map(|k| k as f64).product();
    2.0 * PI.powi(d as i32) * 2f64.powi(d as i32 - 1) / fact
}

/// Forward transform `Gf(n, λ) = ⟨ℓ_n^λ, f⟩` on every node. The radial
/// integral runs in `t = |λ|ρ²/2` by composite Gauss–Legendre in `√t`.
/// Fails with the estimated tail when the top rows are not negligible.
pub fn analyze(input: &BiradialInput, grid: &Arc<SpectralGrid>) -> Result<BiradialFunction> {
    let f = analyze_unchecked(input, grid)?;
    f.check_tail()?;
    Ok(f)
}

/// [`analyze`] without the tail check; the tail stays available on the result.
pub fn analyze_unchecked(input: &BiradialInput, grid: &Arc<SpectralGrid>) -> Result<BiradialFunction> {
    let d = grid.d();
    let alpha = d as f64 - 1.0;
    let cd = radial_constant(d);
    let base = gl16();
    let coeffs: Vec<Vec<C64>> = (0..grid.len())
        .into_par_iter()
        .map(|j| {
            let l = grid.lambda(j);
            let a = l.abs();
            let rows = grid.rows(j);
            let mut acc = vec![C64::new(0.0, 0.0); rows];
            let used = match input {
                BiradialInput::PartialFourier { row_limit: Some(lim), .. } => (lim(l) + 1).min(rows),
                _ => rows,
            };
            let top = (used - 1) as f64;
            let (radius, band_ok) = match input {
                BiradialInput::PartialFourier { radius, .. } => (radius(l), true),
                BiradialInput::Spatial { radius, lambda_band, .. } => {
                    (*radius, lambda_band.is_none_or(|b| a <= b))
                }
            };
            if !band_ok {
                return acc;
            }
            let t_end = (0.5 * a * radius * radius).min(4.0 * top + 2.0 * d as f64 + 120.0);
            if !(t_end > 0.0) {
                return acc;
            }
            let panels = ((top * t_end).sqrt() / PI).ceil() as usize + 6;
            let u_end = t_end.sqrt();
            let width = u_end / panels as f64;
            // s-samples for position-space input
            let spatial = match input {
                BiradialInput::Spatial { s_window, s_step, .. } => {
                    let h = s_step.min(0.5 / a.max(1e-300));
                    let m = (2.0 * s_window / h).ceil() as usize;
                    let h = 2.0 * s_window / m as f64;
                    let phases: Vec<(f64, C64)> = (0..=m)
                        .map(|k| {
                            let s = -s_window + k as f64 * h;
                            let w = if k == 0 || k == m { 0.5 * h } else { h };
                            (s, C64::from_polar(w, l * s))
                        })
                        .collect();
                    Some(phases)
                }
                _ => None,
            };
            let mut buf = vec![0.0; used];
            for p in 0..panels {
                let lo = p as f64 * width;
                for (x, w) in base.nodes.iter().zip(&base.weights) {
                    let u = lo + 0.5 * width * (x + 1.0);
                    let wu = 0.5 * width * w * 2.0 * u.powi(2 * d as i32 - 1);
                    let t = u * u;
                    let rho = (2.0 * t / a).sqrt();
                    let fhat = match (input, &spatial) {
                        (BiradialInput::PartialFourier { f, .. }, _) => f(rho, l),
                        (BiradialInput::Spatial { f, .. }, Some(ph)) => ph.iter().map(|(s, e)| e * f(rho, *s)).sum(),
                        _ => unreachable!(),
                    };
                    if fhat == C64::new(0.0, 0.0) {
                        continue;
                    }
                    laguerre_functions(alpha, t, &mut buf);
                    let v = fhat * wu;
                    for (acc_n, b) in acc.iter_mut().zip(&buf) {
                        *acc_n += v * b;
                    }
                }
            }
            let scale = cd / a.powi(d as i32);
            for (n, v) in acc.iter_mut().enumerate().take(used) {
                *v *= scale / grid.binom(n);
            }
            acc
        })
        .collect();
    BiradialFunction::from_parts(grid.clone(), coeffs, None)
}

impl BiradialFunction {
    /// The synthesized function as analyzable input, through its partial
    /// Fourier transform at the grid nodes.
    pub fn to_input(&self) -> BiradialInput {
        let me = self.clone();
        let grid = self.grid().clone();
        let d = grid.d() as f64;
        let n_eff = {
            let me = self.clone();
            move |l: f64| -> usize {
                let Some(j) = me.grid().node_index(l) else { return 0 };
                let row = &me.coeffs()[j];
                let max = row.iter().fold(0.0f64, |m, v| m.max(v.norm()));
                row.iter().rposition(|v| v.norm() > 1e-16 * max).unwrap_or(0)
            }
        };
        let radius_of = {
            let n_eff = n_eff.clone();
            move |l: f64| (2.0 * (4.0 * n_eff(l) as f64 + 2.0 * d + 80.0) / l.abs()).sqrt()
        };
        BiradialInput::partial_fourier(
            move |rho, l| match grid.node_index(l) {
                Some(j) => me.partial_fourier_at_node(j, rho),
                None => C64::new(0.0, 0.0),
            },
            radius_of,
        )
        .with_row_limit(move |l| n_eff(l) + 4)
    }
}
