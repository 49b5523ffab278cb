//! Finite-difference helpers shared by the field and spectral code.

/// Fornberg weights for the `m`-th derivative at `x0` from values at `nodes`.
pub fn fornberg_weights(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    c[0][0] = 1.0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

/// Machine-epsilon-balanced step for 4th-order central differences.
pub fn central_step(scale: f64) -> f64 {
    f64::EPSILON.powf(0.2) * scale
}

/// 4th-order central first derivative of `g` at 0 with step `h`.
pub fn central4<T, F>(g: F, h: f64) -> T
where
    F: Fn(f64) -> T,
    T: std::ops::Sub<Output = T> + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
{
    let a = g(h) - g(-h);
    let b = g(2.0 * h) - g(-2.0 * h);
    a * (8.0 / (12.0 * h)) + b * (-1.0 / (12.0 * h))
}

/// Weights for the first derivative on a uniform grid of spacing `h`:
/// 5-point central stencil in the interior, one-sided 5-point at the ends.
/// Returns `(offset, weights)` with `offset` the index of the first node used.
pub fn uniform_first_derivative(i: usize, len: usize, h: f64) -> (usize, [f64; 5]) {
    assert!(len >= 5, "need at least five nodes");
    let start = i.saturating_sub(2).min(len - 5);
    let nodes: Vec<f64> = (0..5).map(|k| (start + k) as f64 - i as f64).collect();
    let w = fornberg_weights(0.0, &nodes, 1);
    let mut out = [0.0; 5];
    for k in 0..5 {
        out[k] = w[k] / h;
    }
    (start, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_weights_match_textbook() {
        let w = fornberg_weights(0.0, &[-2.0, -1.0, 0.0, 1.0, 2.0], 1);
        let want = [1.0 / 12.0, -2.0 / 3.0, 0.0, 2.0 / 3.0, -1.0 / 12.0];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
        let w2 = fornberg_weights(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w2[0] - 1.0).abs() < 1e-14 && (w2[1] + 2.0).abs() < 1e-14);
    }

    #[test]
    fn half_integer_stencil_differentiates_cubic() {
        let nodes = [-1.5, -0.5, 0.5, 1.5];
        let w = fornberg_weights(0.0, &nodes, 3);
        let d3: f64 = nodes.iter().zip(&w).map(|(x, c)| c * x.powi(3)).sum();
        assert!((d3 - 6.0).abs() < 1e-12);
    }

    #[test]
    fn central4_on_sine() {
        let h = central_step(1.0);
        let d = central4(|t: f64| (0.3 + t).sin(), h);
        assert!((d - 0.3f64.cos()).abs() < 1e-11);
    }

    #[test]
    fn one_sided_ends() {
        let h = 0.1;
        let f = |k: usize| (k as f64 * h).exp();
        for i in [0usize, 1, 5, 9] {
            let (s, w) = uniform_first_derivative(i, 10, h);
            let d: f64 = (0..5).map(|k| w[k] * f(s + k)).sum();
            assert!((d - f(i)).abs() < 5e-5, "i={i} d={d}");
        }
    }
}
