use std::f64::consts::PI;
use std::sync::Arc;

use serde::Serialize;

use super::{kernel_coeffs, MultiplierSpec};
use crate::biradial::SpectralGrid;
use crate::error::Result;
use crate::special::{composite_legendre, ln_gamma, QuadratureRule};

/// L² norm of the kernel of `φ(−Δ)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KernelNorm {
    /// `+∞` when `|φ(σ)|²σ^d` is not integrable at infinity.
    pub norm: f64,
    /// Declared decay exponent `a` satisfies `a > Q/4`.
    pub admissible: bool,
    /// Squared norm captured by the grid.
    pub grid_part: f64,
    /// Squared norm estimated beyond the grid (rows above the cut and `|λ| > λ_max`).
    pub tail: f64,
    /// For divergent kernels, the exponent `β` in `‖K‖² ~ σ_max^β` (0 means logarithmic).
    pub divergence_rate: Option<f64>,
}

/// `|φ(σ)|²σ^d ~ σ^{−p}` at large `σ`.
fn decay_power(phi: &MultiplierSpec, d: usize) -> f64 {
    let (s1, s2) = (1e8, 1e10);
    let (a, b) = (phi.eval(s1).norm(), phi.eval(s2).norm());
    if b == 0.0 {
        return f64::INFINITY;
    }
    if a == 0.0 {
        return f64::NEG_INFINITY;
    }
    -(2.0 * (b / a).ln() / (s2 / s1).ln()) - d as f64
}

struct TailRule {
    rule: QuadratureRule,
    span: f64,
}

impl TailRule {
    fn new() -> Self {
        let span = (1e12f64).ln();
        let base = QuadratureRule::gauss_legendre(16).expect("fixed order");
        TailRule { rule: composite_legendre(&base, 0.0, span, 64), span }
    }

    /// `∫_a^∞ g(σ) dσ` for `g ~ σ^{−p}` at infinity, `p > 1`.
    fn integrate(&self, a: f64, p: f64, g: impl Fn(f64) -> f64) -> f64 {
        let body = self.rule.integrate(|u| {
            let s = a * u.exp();
            g(s) * s
        });
        let end = a * self.span.exp();
        let rest = if p.is_finite() { g(end) * end / (p - 1.0) } else { 0.0 };
        body + rest
    }
}

fn binom_continuous(n: f64, d: usize) -> f64 {
    (ln_gamma(n + d as f64) - ln_gamma(d as f64) - ln_gamma(n + 1.0)).exp()
}

/// Plancherel norm of the kernel on the grid plus an estimate of the mass
/// beyond it; `+∞` with a rate when `|φ|²σ^d` decays no faster than `1/σ`.
pub fn l2_kernel_norm(phi: &MultiplierSpec, grid: &Arc<SpectralGrid>) -> Result<KernelNorm> {
    let d = grid.d();
    let q = 2.0 * d as f64 + 2.0;
    let admissible = phi.meta().decay.is_some_and(|a| a > q / 4.0);
    let k = kernel_coeffs(phi, grid)?;
    let grid_part = k.plancherel_norm_sq();
    let p = decay_power(phi, d);
    if p <= 1.0 + 1e-3 {
        return Ok(KernelNorm {
            norm: f64::INFINITY,
            admissible,
            grid_part,
            tail: f64::INFINITY,
            divergence_rate: Some(1.0 - p.max(-1e300)),
        });
    }
    let rule = TailRule::new();
    let sq = |s: f64| phi.eval(s).norm_sqr();
    let mut tail = 0.0;
    for j in 0..grid.len() {
        let a = grid.lambda(j).abs();
        let n0 = grid.n_top(j) as f64 + 0.5;
        let s0 = a * (d as f64 + 2.0 * n0);
        let v = rule.integrate(s0, p, |s| {
            let n = (s / a - d as f64) / 2.0;
            binom_continuous(n, d) * sq(s) / (2.0 * a)
        });
        tail += grid.weight(j) * v;
    }
    let lmax = grid.config().lambda_max;
    let norm_c = 2.0 / (2.0 * PI).powi(d as i32 + 1);
    let mut outer = 0.0;
    let mut last = 0.0;
    let n_terms = 200;
    for n in 0..n_terms {
        let c = (d + 2 * n) as f64;
        let v = rule.integrate(lmax * c, p, |s| s.powi(d as i32) * sq(s));
        last = binom_continuous(n as f64, d) * c.powi(-(d as i32 + 1)) * v;
        outer += last;
    }
    // terms fall like n^{−1−p}
    outer += last * n_terms as f64 / p;
    tail += norm_c * outer;
    let total = grid_part + tail;
    Ok(KernelNorm { norm: total.sqrt(), admissible, grid_part, tail, divergence_rate: None })
}
