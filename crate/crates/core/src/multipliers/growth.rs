use std::sync::Arc;

use serde::Serialize;

use super::{kernel_coeffs, MultiplierSpec};
use crate::biradial::SpectralGrid;
use crate::error::{HeisenError, Result};

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentFit {
    pub slope: f64,
    pub intercept: f64,
    pub r2: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> ExponentFit {
    assert_eq!(x.len(), y.len());
    assert!(x.len() >= 2, "need two points");
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    let r2 = if syy == 0.0 { 1.0 } else { 1.0 - sse / syy };
    ExponentFit { slope, intercept, r2 }
}

/// Slope of `ln‖Z^m K_t‖` against `ln(1+t)` over `t_list`.
pub fn moment_growth_probe(
    family: &dyn Fn(f64) -> Result<MultiplierSpec>,
    m: usize,
    t_list: &[f64],
    grid: &Arc<SpectralGrid>,
) -> Result<ExponentFit> {
    if t_list.len() < 2 {
        return Err(HeisenError::InvalidArgument("need at least two times".into()));
    }
    let mut xs = Vec::with_capacity(t_list.len());
    let mut ys = Vec::with_capacity(t_list.len());
    for &t in t_list {
        let phi = family(t)?;
        let v = kernel_coeffs(&phi, grid)?.moment_norm(m)?;
        if !(v.is_finite() && v > 0.0) {
            return Err(HeisenError::NonFinite(format!("moment norm of {} at t={t}", phi.label())));
        }
        xs.push((1.0 + t).ln());
        ys.push(v.ln());
    }
    Ok(fit_line(&xs, &ys))
}
