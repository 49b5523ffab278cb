use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_complex::Complex64;

use super::{hermite_poly_normalized, laguerre, QuadratureRule};
use crate::error::{HeisenError, Result};
use crate::group::Point;

fn hermite_rule(n: usize) -> Arc<QuadratureRule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<QuadratureRule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("rule cache poisoned");
    guard
        .entry(n)
        .or_insert_with(|| Arc::new(QuadratureRule::gauss_hermite(n).expect("n > 0")))
        .clone()
}

/// `∫ η_a^λ(q) e^{iλ(xq + xy/2)} η_b^λ(q + y) dq` with `n` Gauss–Hermite nodes.
fn one_dim_element(x: f64, y: f64, lambda: f64, a: usize, b: usize, n: usize) -> Complex64 {
    let k = lambda.abs().sqrt();
    let c = k * y;
    let rule = hermite_rule(n);
    let env = (-0.25 * c * c).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    for (&w, &wt) in rule.nodes.iter().zip(&rule.weights) {
        let u = w - 0.5 * c;
        let ha = hermite_poly_normalized(a, u)[a];
        let hb = hermite_poly_normalized(b, u + c)[b];
        let phase = lambda.signum() * k * x * u + lambda * x * y * 0.5;
        acc += Complex64::from_polar(wt * ha * hb, phase);
    }
    acc * env
}

/// `⟨η_m^λ, U_v^λ η_{m'}^λ⟩` where `U_v^λ α(q) = e^{iλ(s + x·q + x·y/2)} α(q + y)`.
///
/// The Gaussian envelopes are factored out and each coordinate is integrated
/// with Gauss–Hermite nodes; a second, larger rule certifies convergence.
pub fn rep_matrix_element(v: &Point, lambda: f64, m: &[usize], mp: &[usize]) -> Result<Complex64> {
    let d = v.dim();
    if m.len() != d || mp.len() != d {
        return Err(HeisenError::DimensionMismatch(m.len().max(mp.len()), d));
    }
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(HeisenError::InvalidArgument(format!("lambda {lambda}")));
    }
    let mut total = Complex64::from_polar(1.0, lambda * v.s);
    for j in 0..d {
        let extent = lambda.abs().sqrt() * v.x[j].abs();
        let n1 = 48 + m[j] + mp[j] + (4.0 * extent * extent) as usize;
        let coarse = one_dim_element(v.x[j], v.y[j], lambda, m[j], mp[j], n1);
        let fine = one_dim_element(v.x[j], v.y[j], lambda, m[j], mp[j], n1 + 32);
        if (coarse - fine).norm() > 1e-11 * (1.0 + fine.norm()) {
            return Err(HeisenError::NoRepresentation(format!(
                "matrix element quadrature did not converge (coordinate {j})"
            )));
        }
        total *= fine;
    }
    Ok(total)
}

/// All multi-indices `m ∈ ℕ^d` with `|m| = n`, in lexicographic order.
pub fn multi_indices_of_level(d: usize, n: usize) -> Vec<Vec<usize>> {
    if d == 1 {
        return vec![vec![n]];
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in multi_indices_of_level(d - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// `Σ_{|m|=n} ⟨U_v^λ η_m^λ, η_m^λ⟩` by quadrature.
pub fn level_trace(v: &Point, lambda: f64, n: usize) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for m in multi_indices_of_level(v.dim(), n) {
        acc += rep_matrix_element(v, lambda, &m, &m)?.conj();
    }
    Ok(acc)
}

/// `e^{−iλs} L_n^{d−1}(|λ||z|²/2) e^{−|λ||z|²/4}`.
pub fn level_trace_closed_form(v: &Point, lambda: f64, n: usize) -> Result<Complex64> {
    let t = 0.5 * lambda.abs() * v.z_norm_sq();
    let l = laguerre(n, v.dim() as f64 - 1.0, t)?;
    Ok(Complex64::from_polar(l * (-0.5 * t).exp(), -lambda * v.s))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64, s: f64) -> Point {
        Point::new(vec![x], vec![y], s).unwrap()
    }

    #[test]
    fn identity_at_origin() {
        let o = Point::zero(2);
        for m in [[0, 0], [1, 2], [3, 0]] {
            for mp in [[0, 0], [1, 2], [3, 0]] {
                let e = rep_matrix_element(&o, 1.7, &m, &mp).unwrap();
                let want = if m == mp { 1.0 } else { 0.0 };
                assert!((e - want).norm() < 1e-12, "{m:?} {mp:?} {e}");
            }
        }
    }

    #[test]
    fn rows_are_unit_vectors() {
        let v = pt(0.5, 0.3, 0.9);
        for m in 0..4 {
            let total: f64 = (0..=30)
                .map(|mp| rep_matrix_element(&v, 1.0, &[m], &[mp]).unwrap().norm_sqr())
                .sum();
            assert!((total - 1.0).abs() < 1e-8, "m={m}: {total}");
        }
    }

    #[test]
    fn trace_example() {
        let v = pt(0.5, 0.3, 0.0);
        let lhs = level_trace(&v, 1.0, 2).unwrap();
        let rhs = level_trace_closed_form(&v, 1.0, 2).unwrap();
        assert!((lhs - rhs).norm() < 1e-10 * rhs.norm());
    }

    #[test]
    fn levels_enumerated() {
        assert_eq!(multi_indices_of_level(2, 2), vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(multi_indices_of_level(3, 1).len(), 3);
    }
}
