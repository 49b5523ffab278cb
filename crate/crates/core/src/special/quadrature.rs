use nalgebra::DMatrix;

use crate::error::{HeisenError, Result};

use super::gamma;

/// Nodes and weights of a Gauss-type rule.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

/// Orthonormal three-term recurrence `x p_k = b_{k+1} p_{k+1} + a_k p_k + b_k p_{k−1}`.
struct Recurrence {
    a: Vec<f64>,
    b: Vec<f64>,
    mu0: f64,
}

impl Recurrence {
    /// `(p_n(x), p_n'(x), Σ_{k<n} p_k(x)²)`.
    fn eval(&self, n: usize, x: f64) -> (f64, f64, f64) {
        let mut p_prev = 0.0;
        let mut dp_prev = 0.0;
        let mut p = 1.0 / self.mu0.sqrt();
        let mut dp = 0.0;
        let mut sum_sq = 0.0;
        for k in 0..n {
            sum_sq += p * p;
            let bk = if k == 0 { 0.0 } else { self.b[k] };
            let p_next = ((x - self.a[k]) * p - bk * p_prev) / self.b[k + 1];
            let dp_next = (p + (x - self.a[k]) * dp - bk * dp_prev) / self.b[k + 1];
            p_prev = p;
            dp_prev = dp;
            p = p_next;
            dp = dp_next;
        }
        (p, dp, sum_sq)
    }

    /// Golub–Welsch eigenvalues, Newton-polished, with Christoffel weights.
    fn rule(&self, n: usize) -> QuadratureRule {
        let mut jac = DMatrix::<f64>::zeros(n, n);
        for k in 0..n {
            jac[(k, k)] = self.a[k];
            if k + 1 < n {
                jac[(k, k + 1)] = self.b[k + 1];
                jac[(k + 1, k)] = self.b[k + 1];
            }
        }
        let mut nodes: Vec<f64> = jac.symmetric_eigenvalues().iter().copied().collect();
        nodes.sort_by(|a, b| a.total_cmp(b));
        let mut weights = Vec::with_capacity(n);
        for x in nodes.iter_mut() {
            for _ in 0..3 {
                let (p, dp, _) = self.eval(n, *x);
                if dp != 0.0 && dp.is_finite() && p.is_finite() {
                    let step = p / dp;
                    if step.abs() < 1e-3 * (1.0 + x.abs()) {
                        *x -= step;
                    }
                }
            }
            let (_, _, s) = self.eval(n, *x);
            weights.push(if s.is_finite() { 1.0 / s } else { 0.0 });
        }
        QuadratureRule { nodes, weights }
    }
}

impl QuadratureRule {
    /// Gauss–Laguerre rule for `∫_0^∞ f(t) t^α e^{−t} dt`.
    pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Self> {
        if n == 0 || !(alpha > -1.0) {
            return Err(HeisenError::InvalidArgument(format!("gauss_laguerre({n}, {alpha})")));
        }
        let a = (0..=n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
        let b = (0..=n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
        Ok(Recurrence { a, b, mu0: gamma(alpha + 1.0) }.rule(n))
    }

    /// Gauss–Hermite rule for `∫ f(x) e^{−x²} dx`.
    pub fn gauss_hermite(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HeisenError::InvalidArgument("gauss_hermite(0)".into()));
        }
        let a = vec![0.0; n + 1];
        let b = (0..=n).map(|k| (k as f64 / 2.0).sqrt()).collect();
        let mut rule = Recurrence { a, b, mu0: std::f64::consts::PI.sqrt() }.rule(n);
        symmetrize(&mut rule);
        Ok(rule)
    }

    /// Gauss–Legendre rule on `[−1, 1]`.
    pub fn gauss_legendre(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(HeisenError::InvalidArgument("gauss_legendre(0)".into()));
        }
        let a = vec![0.0; n + 1];
        let b = (0..=n)
            .map(|k| {
                let k = k as f64;
                k / (4.0 * k * k - 1.0).sqrt()
            })
            .collect();
        let mut rule = Recurrence { a, b, mu0: 2.0 }.rule(n);
        symmetrize(&mut rule);
        Ok(rule)
    }

    /// Affine image of a rule on `[−1, 1]` onto `[lo, hi]`.
    pub fn mapped(&self, lo: f64, hi: f64) -> Self {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        Self {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

fn symmetrize(rule: &mut QuadratureRule) {
    let n = rule.nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (rule.nodes[j] - rule.nodes[i]);
        let w = 0.5 * (rule.weights[i] + rule.weights[j]);
        rule.nodes[i] = -x;
        rule.nodes[j] = x;
        rule.weights[i] = w;
        rule.weights[j] = w;
    }
    if n % 2 == 1 {
        rule.nodes[n / 2] = 0.0;
    }
}

/// Composite Gauss–Legendre rule on `[lo, hi]` with `panels` equal panels.
pub fn composite_legendre(base: &QuadratureRule, lo: f64, hi: f64, panels: usize) -> QuadratureRule {
    let panels = panels.max(1);
    let width = (hi - lo) / panels as f64;
    let mut nodes = Vec::with_capacity(panels * base.nodes.len());
    let mut weights = Vec::with_capacity(panels * base.nodes.len());
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let r = base.mapped(a, a + width);
        nodes.extend(r.nodes);
        weights.extend(r.weights);
    }
    QuadratureRule { nodes, weights }
}
