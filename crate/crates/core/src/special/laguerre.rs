use crate::error::{HeisenError, Result};

use super::ln_gamma;

/// `C(n + α, n) = Γ(n + α + 1) / (Γ(α + 1) n!)`.
pub fn binom_weight(n: usize, alpha: f64) -> f64 {
    let mut c = 1.0;
    for k in 1..=n {
        c *= (alpha + k as f64) / k as f64;
    }
    c
}

/// `L_0^α(t), …, L_{n_max}^α(t)` by the ascending three-term recurrence.
pub fn laguerre_all(n_max: usize, alpha: f64, t: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut prev = 0.0;
    let mut cur = 1.0;
    out.push(cur);
    for n in 0..n_max {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + alpha - t) * cur - (nf + alpha) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
        out.push(cur);
    }
    out
}

/// `L_n^α(t)`, rejecting arguments where the value could overflow.
pub fn laguerre(n: usize, alpha: f64, t: f64) -> Result<f64> {
    if t < 0.0 || !t.is_finite() {
        return Err(HeisenError::InvalidArgument(format!("laguerre argument {t}")));
    }
    let log_bound = ln_gamma(n as f64 + alpha.max(0.0) + 1.0)
        - ln_gamma(alpha.max(0.0) + 1.0)
        - ln_gamma(n as f64 + 1.0)
        + 0.5 * t;
    if log_bound > 700.0 {
        return Err(HeisenError::Overflow(format!("L_{n}^{alpha}({t})")));
    }
    let v = *laguerre_all(n, alpha, t).last().expect("non-empty");
    if v.is_finite() {
        Ok(v)
    } else {
        Err(HeisenError::Overflow(format!("L_{n}^{alpha}({t})")))
    }
}

/// `d/dt L_n^α(t) = −L_{n−1}^{α+1}(t)`.
pub fn laguerre_derivative(n: usize, alpha: f64, t: f64) -> Result<f64> {
    if n == 0 {
        return Ok(0.0);
    }
    Ok(-laguerre(n - 1, alpha + 1.0, t)?)
}

const RESCALE: f64 = 1e150;

/// Laguerre functions `e^{−t/2} L_n^α(t)` for `n = 0..out.len()`, written into
/// `out`. The recurrence runs on rescaled values so large `t` neither
/// overflows nor underflows prematurely.
pub fn laguerre_functions(alpha: f64, t: f64, out: &mut [f64]) {
    if out.is_empty() {
        return;
    }
    let mut log_scale = -0.5 * t;
    let mut factor = log_scale.exp();
    let mut prev = 0.0;
    let mut cur = 1.0;
    out[0] = factor;
    for n in 0..out.len() - 1 {
        let nf = n as f64;
        let next = ((2.0 * nf + 1.0 + alpha - t) * cur - (nf + alpha) * prev) / (nf + 1.0);
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            log_scale += RESCALE.ln();
            factor = log_scale.exp();
        }
        out[n + 1] = cur * factor;
    }
}

/// Laguerre polynomials of fixed order `α`.
#[derive(Debug, Clone, Copy)]
pub struct LaguerreEvaluator {
    alpha: f64,
}

impl LaguerreEvaluator {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > -1.0) {
            return Err(HeisenError::InvalidArgument(format!("laguerre order {alpha}")));
        }
        Ok(Self { alpha })
    }

    /// Order `d − 1` used for `H^d`.
    pub fn for_dimension(d: usize) -> Self {
        Self { alpha: d as f64 - 1.0 }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn eval(&self, n: usize, t: f64) -> Result<f64> {
        laguerre(n, self.alpha, t)
    }

    pub fn all(&self, n_max: usize, t: f64) -> Vec<f64> {
        laguerre_all(n_max, self.alpha, t)
    }

    /// Squared norm `∫ (L_n^α)² t^α e^{−t} dt = Γ(n+α+1)/n!`.
    pub fn norm_sq(&self, n: usize) -> f64 {
        (ln_gamma(n as f64 + self.alpha + 1.0) - ln_gamma(n as f64 + 1.0)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(n: usize, alpha: f64, t: f64) -> f64 {
        // Σ_k (−1)^k C(n+α, n−k) t^k / k!
        let mut sum = 0.0;
        let mut fact = 1.0;
        for k in 0..=n {
            if k > 0 {
                fact *= k as f64;
            }
            let c: f64 = (1..=n - k).map(|i| (alpha + (k + i) as f64) / i as f64).product();
            let term = c * t.powi(k as i32) / fact;
            sum += if k % 2 == 0 { term } else { -term };
        }
        sum
    }

    #[test]
    fn low_orders() {
        for d in 1..=3 {
            let a = d as f64 - 1.0;
            assert_eq!(laguerre(0, a, 2.5).unwrap(), 1.0);
            let t = 0.8;
            assert!((laguerre(1, a, t).unwrap() - (d as f64 - t)).abs() < 1e-15);
        }
    }

    #[test]
    fn matches_series() {
        for &(n, a, t) in &[(5, 0.0, 1.3), (8, 1.0, 4.0), (12, 2.0, 2.5), (3, 0.5, 0.1)] {
            let r = laguerre(n, a, t).unwrap();
            let s = series(n, a, t);
            assert!((r - s).abs() < 1e-11 * (1.0 + s.abs()), "{n} {a} {t}: {r} vs {s}");
        }
    }

    #[test]
    fn first_derivative_identity() {
        // t ∂L_3^{d-1}(t) = 3 L_3 − (d + 2) L_2 at d = 2, t = 1.7
        let (t, a) = (1.7, 1.0);
        let lhs = t * laguerre_derivative(3, a, t).unwrap();
        let rhs = 3.0 * laguerre(3, a, t).unwrap() - 4.0 * laguerre(2, a, t).unwrap();
        assert!((lhs - rhs).abs() < 1e-12);
    }

    #[test]
    fn functions_match_direct() {
        let mut buf = vec![0.0; 40];
        for &t in &[0.0, 0.3, 12.0, 95.0] {
            laguerre_functions(1.0, t, &mut buf);
            let direct = laguerre_all(39, 1.0, t);
            for n in 0..40 {
                let want = direct[n] * (-0.5 * t).exp();
                assert!((buf[n] - want).abs() < 1e-12 * (1.0 + want.abs()));
            }
        }
    }

    #[test]
    fn functions_survive_large_arguments() {
        let mut buf = vec![0.0; 2001];
        laguerre_functions(0.0, 3000.0, &mut buf);
        assert!(buf.iter().all(|v| v.is_finite()));
        // α = 0 Laguerre functions are bounded by 1 in absolute value
        assert!(buf.iter().all(|v| v.abs() <= 1.0 + 1e-9));
        assert!(buf[2000].abs() > 0.0);
    }

    #[test]
    fn guard_rejects_overflow() {
        assert!(laguerre(10, 0.0, 2000.0).is_err());
        assert!(laguerre(3, 0.0, -1.0).is_err());
    }
}
