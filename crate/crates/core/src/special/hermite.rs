use crate::error::{HeisenError, Result};

/// Orthonormal Hermite polynomials `h_0..=h_{m_max}` for the weight `e^{−q²}`,
/// so that `η_m(q) = h_m(q) e^{−q²/2}`.
pub fn hermite_poly_normalized(m_max: usize, q: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(m_max + 1);
    let mut prev = 0.0;
    let mut cur = std::f64::consts::PI.powf(-0.25);
    out.push(cur);
    for k in 0..m_max {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * q * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// One-dimensional Hermite function `η_m(q)`, L²-normalized.
pub fn hermite_fn_1d(m: usize, q: f64) -> f64 {
    hermite_poly_normalized(m, q)[m] * (-0.5 * q * q).exp()
}

/// Tensor-product Hermite function `η_m(q) = Π η_{m_j}(q_j)`.
pub fn hermite_fn(m: &[usize], q: &[f64]) -> Result<f64> {
    if m.len() != q.len() {
        return Err(HeisenError::DimensionMismatch(m.len(), q.len()));
    }
    Ok(m.iter().zip(q).map(|(&mj, &qj)| hermite_fn_1d(mj, qj)).product())
}

/// `η_m^λ(q) = |λ|^{d/4} η_m(|λ|^{1/2} q)`.
pub fn scaled_hermite(m: &[usize], lambda: f64, q: &[f64]) -> Result<f64> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(HeisenError::InvalidArgument(format!("lambda {lambda}")));
    }
    let k = lambda.abs().sqrt();
    let scaled: Vec<f64> = q.iter().map(|v| k * v).collect();
    Ok(lambda.abs().powf(m.len() as f64 / 4.0) * hermite_fn(m, &scaled)?)
}

/// Hermite functions of one variable up to a fixed degree, evaluated in bulk.
#[derive(Debug, Clone)]
pub struct HermiteBasis {
    d: usize,
    m_max: usize,
}

impl HermiteBasis {
    pub fn new(d: usize, m_max: usize) -> Self {
        Self { d, m_max }
    }

    pub fn d(&self) -> usize {
        self.d
    }

    /// `η_0(q), …, η_{m_max}(q)`.
    pub fn values(&self, q: f64) -> Vec<f64> {
        let g = (-0.5 * q * q).exp();
        hermite_poly_normalized(self.m_max, q).into_iter().map(|h| h * g).collect()
    }

    /// Eigenvalue `d + 2|m|` of `|q|² − Δ_q` on `η_m`.
    pub fn eigenvalue(&self, m: &[usize]) -> f64 {
        self.d as f64 + 2.0 * m.iter().sum::<usize>() as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::QuadratureRule;

    #[test]
    fn ground_state_closed_form() {
        for &q in &[-1.3f64, 0.0, 0.4, 2.2] {
            let want = std::f64::consts::PI.powf(-0.25) * (-0.5 * q * q).exp();
            assert!((hermite_fn_1d(0, q) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn orthonormal_by_quadrature() {
        let rule = QuadratureRule::gauss_hermite(60).unwrap();
        // ∫ η_a η_b dq = Σ w h_a h_b since η_a η_b = h_a h_b e^{−q²}
        let ip = |a: usize, b: usize| -> f64 {
            rule.nodes
                .iter()
                .zip(&rule.weights)
                .map(|(&q, &w)| {
                    let h = hermite_poly_normalized(a.max(b), q);
                    w * h[a] * h[b]
                })
                .sum()
        };
        assert!((ip(0, 0) - 1.0).abs() < 1e-12);
        assert!(ip(2, 3).abs() < 1e-10);
        assert!((ip(7, 7) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn oscillator_eigenfunctions() {
        let basis = HermiteBasis::new(1, 5);
        let h = 1e-3;
        for m in 0..=5 {
            for &q in &[-1.1, 0.3, 1.7] {
                let f = |x: f64| hermite_fn_1d(m, x);
                let second = (-f(q + 2.0 * h) + 16.0 * f(q + h) - 30.0 * f(q) + 16.0 * f(q - h)
                    - f(q - 2.0 * h))
                    / (12.0 * h * h);
                let lhs = q * q * f(q) - second;
                let rhs = basis.eigenvalue(&[m]) * f(q);
                assert!((lhs - rhs).abs() < 1e-6, "m={m} q={q}");
            }
        }
    }

    #[test]
    fn stretched_functions() {
        let q = [0.37];
        assert_eq!(scaled_hermite(&[3], 1.0, &q).unwrap(), hermite_fn(&[3], &q).unwrap());
        let v = scaled_hermite(&[0], 4.0, &q).unwrap();
        assert!((v - 2f64.sqrt() * hermite_fn_1d(0, 2.0 * q[0])).abs() < 1e-15);
        assert!(scaled_hermite(&[0], 0.0, &q).is_err());
        let rule = QuadratureRule::gauss_legendre(80).unwrap().mapped(-6.0, 6.0);
        let norm: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .map(|(&x, &w)| w * scaled_hermite(&[0], 4.0, &[x]).unwrap().powi(2))
            .sum();
        assert!((norm - 1.0).abs() < 1e-10);
    }
}
