use serde::{Deserialize, Serialize};

use crate::error::{HeisenError, Result};
use crate::special::binom_weight;

/// End-correction coefficients of Gregory's rule, orders 1..=5.
const GREGORY: [f64; 5] = [1.0 / 12.0, 1.0 / 24.0, 19.0 / 720.0, 3.0 / 160.0, 863.0 / 60480.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridConfig {
    pub d: usize,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub nodes_per_sign: usize,
    /// Hard cap on the Laguerre index.
    pub n_max: usize,
    /// Rows kept at every node regardless of frequency.
    pub n_min: usize,
    /// Rows at node `λ` run up to the frequency `|λ|(d+2n) ≤ sigma_max`.
    pub sigma_max: f64,
    pub tail_tol: f64,
}

impl GridConfig {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            lambda_min: 1e-3,
            lambda_max: 1e3,
            nodes_per_sign: 400,
            n_max: 1 << 16,
            n_min: 32,
            sigma_max: 40.0,
            tail_tol: 1e-10,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(HeisenError::InvalidArgument(m.to_string()));
        if self.d == 0 {
            return bad("d must be at least 1");
        }
        if !(self.lambda_min > 0.0 && self.lambda_max > self.lambda_min && self.lambda_max.is_finite()) {
            return bad("need 0 < lambda_min < lambda_max < inf");
        }
        if self.nodes_per_sign < 12 {
            return bad("nodes_per_sign must be at least 12");
        }
        if !(self.sigma_max > 0.0 && self.sigma_max.is_finite()) {
            return bad("sigma_max must be positive");
        }
        if !(self.tail_tol > 0.0) {
            return bad("tail_tol must be positive");
        }
        Ok(())
    }
}

/// Composite trapezoid weights with Gregory end corrections through fifth
/// differences, for `n` equispaced nodes of spacing `h`.
pub fn gregory_weights(n: usize, h: f64) -> Vec<f64> {
    assert!(n >= 2 * GREGORY.len() + 2, "too few nodes for Gregory corrections");
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    for (k, c) in GREGORY.iter().enumerate() {
        let k = k + 1;
        let mut binom = 1.0;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let corr = h * c * sign * binom;
            w[j] -= corr;
            w[n - 1 - j] -= corr;
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    w
}

/// Signed, log-spaced λ-nodes with quadrature weights for the Plancherel
/// measure `|λ|^d dλ / (2π)^{d+1}` and a ragged Laguerre row count per node.
#[derive(Debug, Clone)]
pub struct SpectralGrid {
    config: GridConfig,
    lambdas: Vec<f64>,
    dlambda_weights: Vec<f64>,
    weights: Vec<f64>,
    n_top: Vec<usize>,
    binom: Vec<f64>,
    log_step: f64,
}

impl SpectralGrid {
    pub fn new(config: GridConfig) -> Result<Self> {
        config.validate()?;
        let n = config.nodes_per_sign;
        let d = config.d;
        let u0 = config.lambda_min.ln();
        let h = (config.lambda_max.ln() - u0) / (n - 1) as f64;
        let g = gregory_weights(n, h);
        let pos: Vec<f64> = (0..n).map(|k| (u0 + k as f64 * h).exp()).collect();
        let mut lambdas = Vec::with_capacity(2 * n);
        let mut dlw = Vec::with_capacity(2 * n);
        for k in (0..n).rev() {
            lambdas.push(-pos[k]);
            dlw.push(g[k] * pos[k]);
        }
        for k in 0..n {
            lambdas.push(pos[k]);
            dlw.push(g[k] * pos[k]);
        }
        // the gap (−λ_min, λ_min) is filled by extrapolating the even part
        // A + Cλ² of the integrand from the nodes ±λ_min and ±λ_k, λ_k ≈ 4λ_min
        let a = config.lambda_min;
        let k = ((4f64.ln() / h).round() as usize).clamp(1, n - 1);
        let lk = pos[k];
        let c = 2.0 / 3.0 * a.powi(3) / (lk * lk - a * a);
        let inner = [n - 1, n];
        let outer = [n - 1 - k, n + k];
        if outer.iter().all(|&j| dlw[j] > c) {
            for j in inner {
                dlw[j] += a + c;
            }
            for j in outer {
                dlw[j] -= c;
            }
        } else {
            for j in inner {
                dlw[j] += a;
            }
        }
        let norm = (2.0 * std::f64::consts::PI).powi(d as i32 + 1);
        let weights = lambdas.iter().zip(&dlw).map(|(l, w)| w * l.abs().powi(d as i32) / norm).collect();
        let n_top: Vec<usize> = lambdas
            .iter()
            .map(|l| {
                let top = ((config.sigma_max / l.abs() - d as f64) / 2.0).max(0.0).floor();
                (top as usize).max(config.n_min).min(config.n_max)
            })
            .collect();
        let rows = n_top.iter().max().copied().unwrap_or(0) + 16;
        let alpha = d as f64 - 1.0;
        let mut binom = Vec::with_capacity(rows);
        let mut c = 1.0;
        for k in 0..rows {
            if k > 0 {
                c *= (alpha + k as f64) / k as f64;
            }
            binom.push(c);
        }
        Ok(Self { config, lambdas, dlambda_weights: dlw, weights, n_top, binom, log_step: h })
    }

    pub fn with_defaults(d: usize) -> Result<Self> {
        Self::new(GridConfig::new(d))
    }

    /// Same node count with `λ_min`, `λ_max` and `σ_max` multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Result<Self> {
        if !(k > 0.0 && k.is_finite()) {
            return Err(HeisenError::InvalidArgument(format!("grid scale {k}")));
        }
        let mut c = self.config.clone();
        c.lambda_min *= k;
        c.lambda_max *= k;
        c.sigma_max *= k;
        Self::new(c)
    }

    pub fn config(&self) -> &GridConfig {
        &self.config
    }

    pub fn d(&self) -> usize {
        self.config.d
    }

    pub fn len(&self) -> usize {
        self.lambdas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lambdas.is_empty()
    }

    pub fn nodes_per_sign(&self) -> usize {
        self.config.nodes_per_sign
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn lambda(&self, j: usize) -> f64 {
        self.lambdas[j]
    }

    /// Weight of node `j` for the full Plancherel measure.
    pub fn weight(&self, j: usize) -> f64 {
        self.weights[j]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weight of node `j` for plain `dλ`.
    pub fn dlambda_weight(&self, j: usize) -> f64 {
        self.dlambda_weights[j]
    }

    pub fn n_top(&self, j: usize) -> usize {
        self.n_top[j]
    }

    /// Stored rows at node `j`: `0..=n_top` plus one buffer row.
    pub fn rows(&self, j: usize) -> usize {
        self.n_top[j] + 2
    }

    pub fn log_step(&self) -> f64 {
        self.log_step
    }

    /// `C(d−1+n, n)`.
    pub fn binom(&self, n: usize) -> f64 {
        match self.binom.get(n) {
            Some(&c) => c,
            None => binom_weight(n, self.config.d as f64 - 1.0),
        }
    }

    /// Index of the node equal to `lambda` (to rounding), if any.
    pub fn node_index(&self, lambda: f64) -> Option<usize> {
        let j = self.lambdas.partition_point(|&l| l < lambda);
        [j.wrapping_sub(1), j]
            .into_iter()
            .filter(|&k| k < self.lambdas.len())
            .find(|&k| (self.lambdas[k] - lambda).abs() <= 1e-12 * lambda.abs())
    }

    /// Position `(start, len)` of the block of nodes with the sign of node `j`.
    pub fn sign_block(&self, j: usize) -> (usize, usize) {
        let n = self.config.nodes_per_sign;
        if j < n {
            (0, n)
        } else {
            (n, n)
        }
    }

    pub fn same_as(&self, other: &SpectralGrid) -> bool {
        std::ptr::eq(self, other) || self.config == other.config
    }
}
