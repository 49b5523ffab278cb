use std::fmt;
use std::io::Write;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use super::grid::SpectralGrid;
use super::source::{CoeffSource, DilatedSource, ZSource, JET_LEN};
use crate::error::{HeisenError, Result};
use crate::group::Point;
use crate::numdiff::uniform_first_derivative;
use crate::special::laguerre_functions;

/// Coefficients `F(n, λ_j)` on a [`SpectralGrid`], ragged in `n`, with an
/// optional exact λ-derivative channel and an optional analytic source that
/// can re-evaluate the coefficients anywhere.
#[derive(Clone)]
pub struct BiradialFunction {
    grid: Arc<SpectralGrid>,
    coeffs: Vec<Vec<C64>>,
    dlambda: Option<Vec<Vec<C64>>>,
    source: Option<Arc<dyn CoeffSource>>,
    tail: f64,
}

impl fmt::Debug for BiradialFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BiradialFunction")
            .field("d", &self.grid.d())
            .field("nodes", &self.coeffs.len())
            .field("has_dlambda", &self.dlambda.is_some())
            .field("has_source", &self.source.is_some())
            .field("tail", &self.tail)
            .finish()
    }
}

/// Share of the Plancherel mass carried by the top row `n_top` of each node.
fn tail_of(grid: &SpectralGrid, coeffs: &[Vec<C64>]) -> f64 {
    let mut total = 0.0;
    let mut top = 0.0;
    for (j, row) in coeffs.iter().enumerate() {
        let w = grid.weight(j);
        let nt = grid.n_top(j);
        for (n, v) in row.iter().enumerate().take(nt + 1) {
            total += w * grid.binom(n) * v.norm_sqr();
        }
        if let Some(v) = row.get(nt) {
            top += w * grid.binom(nt) * v.norm_sqr();
        }
    }
    if total == 0.0 {
        0.0
    } else {
        top / total
    }
}

fn check_finite(coeffs: &[Vec<C64>], what: &str) -> Result<()> {
    if coeffs.iter().flatten().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(())
    } else {
        Err(HeisenError::NonFinite(what.to_string()))
    }
}

impl BiradialFunction {
    pub fn zeros(grid: Arc<SpectralGrid>) -> Self {
        let coeffs = (0..grid.len()).map(|j| vec![C64::new(0.0, 0.0); grid.rows(j)]).collect();
        Self { grid, coeffs, dlambda: None, source: None, tail: 0.0 }
    }

    /// Coefficients from `f(j, n, λ_j)` on every stored row.
    pub fn from_fn(grid: Arc<SpectralGrid>, mut f: impl FnMut(usize, usize, f64) -> C64) -> Result<Self> {
        let coeffs: Vec<Vec<C64>> = (0..grid.len())
            .map(|j| (0..grid.rows(j)).map(|n| f(j, n, grid.lambda(j))).collect())
            .collect();
        Self::from_parts(grid, coeffs, None)
    }

    pub fn from_parts(grid: Arc<SpectralGrid>, coeffs: Vec<Vec<C64>>, dlambda: Option<Vec<Vec<C64>>>) -> Result<Self> {
        if coeffs.len() != grid.len() {
            return Err(HeisenError::DimensionMismatch(coeffs.len(), grid.len()));
        }
        check_finite(&coeffs, "coefficients")?;
        if let Some(dl) = &dlambda {
            if dl.len() != coeffs.len() || dl.iter().zip(&coeffs).any(|(a, b)| a.len() != b.len()) {
                return Err(HeisenError::InvalidArgument("derivative channel shape".into()));
            }
            check_finite(dl, "derivative channel")?;
        }
        let tail = tail_of(&grid, &coeffs);
        Ok(Self { grid, coeffs, dlambda, source: None, tail })
    }

    /// Materializes an analytic source, keeping it for exact re-evaluation.
    pub fn from_source(grid: Arc<SpectralGrid>, source: Arc<dyn CoeffSource>) -> Result<Self> {
        if source.d() != grid.d() {
            return Err(HeisenError::DimensionMismatch(source.d(), grid.d()));
        }
        let order = source.max_order().min(1);
        let jets: Vec<Vec<[C64; JET_LEN]>> = (0..grid.len())
            .into_par_iter()
            .map(|j| source.jets(grid.lambda(j), grid.rows(j), order))
            .collect();
        let coeffs: Vec<Vec<C64>> = jets.iter().map(|r| r.iter().map(|x| x[0]).collect()).collect();
        let dlambda = (order == 1).then(|| jets.iter().map(|r| r.iter().map(|x| x[1]).collect()).collect());
        let mut f = Self::from_parts(grid, coeffs, dlambda)?;
        f.source = Some(source);
        Ok(f)
    }

    pub fn grid(&self) -> &Arc<SpectralGrid> {
        &self.grid
    }

    pub fn coeffs(&self) -> &[Vec<C64>] {
        &self.coeffs
    }

    /// `F(n, λ_j)`, zero beyond the stored rows.
    pub fn coeff(&self, j: usize, n: usize) -> C64 {
        self.coeffs[j].get(n).copied().unwrap_or_default()
    }

    pub fn dlambda_channel(&self) -> Option<&[Vec<C64>]> {
        self.dlambda.as_deref()
    }

    pub fn source(&self) -> Option<&Arc<dyn CoeffSource>> {
        self.source.as_ref()
    }

    /// Fraction of the Plancherel mass in the top rows.
    pub fn tail(&self) -> f64 {
        self.tail
    }

    pub fn check_tail(&self) -> Result<()> {
        let tol = self.grid.config().tail_tol;
        if self.tail > tol {
            Err(HeisenError::TailMass { tail: self.tail, tol })
        } else {
            Ok(())
        }
    }

    fn same_grid(&self, other: &BiradialFunction) -> Result<()> {
        if Arc::ptr_eq(&self.grid, &other.grid) || self.grid.same_as(&other.grid) {
            Ok(())
        } else {
            Err(HeisenError::GridMismatch)
        }
    }

    /// Coefficients with every entry mapped by `f(j, n, λ_j, F)`; the source
    /// and derivative channel are dropped.
    pub fn map(&self, f: impl Fn(usize, usize, f64, C64) -> C64 + Sync) -> Result<Self> {
        let coeffs = self
            .coeffs
            .par_iter()
            .enumerate()
            .map(|(j, row)| {
                let l = self.grid.lambda(j);
                row.iter().enumerate().map(|(n, &v)| f(j, n, l, v)).collect()
            })
            .collect();
        Self::from_parts(self.grid.clone(), coeffs, None)
    }

    /// `∂_λF` from the channel if present, else 4th-order differences in `ln|λ|`
    /// (one-sided at the block ends, missing rows read as zero).
    pub fn lambda_derivative(&self) -> Vec<Vec<C64>> {
        if let Some(dl) = &self.dlambda {
            return dl.clone();
        }
        let g = &self.grid;
        (0..g.len())
            .into_par_iter()
            .map(|j| {
                let (start, len) = g.sign_block(j);
                let p = j - start;
                let h = if g.lambda(j) < 0.0 { -g.log_step() } else { g.log_step() };
                let (s0, w) = uniform_first_derivative(p, len, h);
                let l = g.lambda(j);
                (0..self.coeffs[j].len())
                    .map(|n| {
                        let du: C64 = (0..5).map(|k| self.coeff(start + s0 + k, n) * w[k]).sum();
                        du / l
                    })
                    .collect()
            })
            .collect()
    }

    /// Largest deviation of the derivative channel from numeric differences,
    /// relative to the largest channel entry, over interior nodes.
    pub fn dlambda_consistency(&self) -> Option<f64> {
        let dl = self.dlambda.as_ref()?;
        let numeric = BiradialFunction { dlambda: None, ..self.clone() }.lambda_derivative();
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        let g = &self.grid;
        for j in 0..g.len() {
            let (start, len) = g.sign_block(j);
            let p = j - start;
            let interior = p >= 2 && p + 2 < len;
            for (n, v) in dl[j].iter().enumerate() {
                scale = scale.max(v.norm());
                if interior && n + 1 < self.coeffs[j + 1].len().min(self.coeffs[j - 1].len()) {
                    worst = worst.max((v - numeric[j][n]).norm());
                }
            }
        }
        Some(if scale == 0.0 { 0.0 } else { worst / scale })
    }

    /// `(2π)^{−(d+1)} ∫ |λ|^d Σ_n C(d−1+n,n) |F|² dλ`, summed over `n ≤ n_top`.
    pub fn plancherel_norm_sq(&self) -> f64 {
        let g = &self.grid;
        (0..g.len())
            .into_par_iter()
            .map(|j| {
                let top = (g.n_top(j) + 1).min(self.coeffs[j].len());
                let s: f64 = (0..top).map(|n| g.binom(n) * self.coeffs[j][n].norm_sqr()).sum();
                g.weight(j) * s
            })
            .collect::<Vec<f64>>()
            .into_iter()
            .sum()
    }

    pub fn plancherel_norm(&self) -> f64 {
        self.plancherel_norm_sq().sqrt()
    }

    /// `(2π)^{−(d+1)} ∫ |λ|^d Σ_n C(d−1+n,n) conj(F) G dλ`.
    pub fn parseval(&self, other: &BiradialFunction) -> Result<C64> {
        self.same_grid(other)?;
        let g = &self.grid;
        Ok((0..g.len())
            .into_par_iter()
            .map(|j| {
                let top = (g.n_top(j) + 1).min(self.coeffs[j].len()).min(other.coeffs[j].len());
                let s: C64 = (0..top).map(|n| self.coeffs[j][n].conj() * other.coeffs[j][n] * g.binom(n)).sum();
                s * g.weight(j)
            })
            .collect::<Vec<C64>>()
            .into_iter()
            .sum())
    }

    /// Inverse transform at `(|z| = ρ, s)`.
    pub fn synthesize_radial(&self, rho: f64, s: f64) -> C64 {
        let g = &self.grid;
        let alpha = g.d() as f64 - 1.0;
        (0..g.len())
            .into_par_iter()
            .map_init(Vec::new, |buf, j| {
                let l = g.lambda(j);
                let top = (g.n_top(j) + 1).min(self.coeffs[j].len());
                buf.resize(top, 0.0);
                laguerre_functions(alpha, 0.5 * l.abs() * rho * rho, buf);
                let sum: C64 = self.coeffs[j][..top].iter().zip(buf.iter()).map(|(c, b)| c * b).sum();
                sum * C64::from_polar(g.weight(j), -l * s)
            })
            .collect::<Vec<C64>>()
            .into_iter()
            .sum()
    }

    /// Inverse transform at a point; only `|z|` and `s` matter.
    pub fn synthesize(&self, p: &Point) -> Result<C64> {
        if p.dim() != self.grid.d() {
            return Err(HeisenError::DimensionMismatch(p.dim(), self.grid.d()));
        }
        Ok(self.synthesize_radial(p.z_norm_sq().sqrt(), p.s))
    }

    /// Partial Fourier transform in `s` at node `j`:
    /// `(2π)^{−d} |λ|^d Σ_n F(n, λ) e^{−x/2} L_n^{d−1}(x)`, `x = |λ|ρ²/2`.
    pub fn partial_fourier_at_node(&self, j: usize, rho: f64) -> C64 {
        let g = &self.grid;
        let d = g.d() as i32;
        let l = g.lambda(j);
        let mut buf = vec![0.0; self.coeffs[j].len()];
        laguerre_functions(d as f64 - 1.0, 0.5 * l.abs() * rho * rho, &mut buf);
        let sum: C64 = self.coeffs[j].iter().zip(&buf).map(|(c, b)| c * b).sum();
        sum * (l.abs().powi(d) / (2.0 * std::f64::consts::PI).powi(d))
    }

    /// `G(n, λ) = F(n, t²λ)` on the same grid.
    pub fn dilate_spectral(&self, t: f64) -> Result<Self> {
        if t == 0.0 || !t.is_finite() {
            return Err(HeisenError::InvalidArgument(format!("dilation factor {t}")));
        }
        let t2 = t * t;
        if let Some(src) = &self.source {
            return Self::from_source(self.grid.clone(), Arc::new(DilatedSource::new(src.clone(), t2)));
        }
        let g = &self.grid;
        let n_sign = g.nodes_per_sign();
        let h = g.log_step();
        let u0 = g.config().lambda_min.ln();
        let max = self.coeffs.iter().flatten().fold(0.0f64, |m, v| m.max(v.norm()));
        let negligible = |j: usize| self.coeffs[j].iter().all(|v| v.norm() <= 1e-14 * max);
        let interp = |data: &[Vec<C64>], scale: f64| -> Result<Vec<Vec<C64>>> {
            (0..g.len())
                .map(|j| {
                    let l = g.lambda(j);
                    let mu = t2 * l;
                    let (start, _) = g.sign_block(j);
                    // position along the block in units of the log step, ascending |λ|
                    let pos = (mu.abs().ln() - u0) / h;
                    let node = |q: usize| if l < 0.0 { start + n_sign - 1 - q } else { start + q };
                    let rows = g.rows(j);
                    if pos < -1e-9 || pos > (n_sign - 1) as f64 + 1e-9 {
                        let edge = if pos < 0.0 { node(0) } else { node(n_sign - 1) };
                        return if negligible(edge) {
                            Ok(vec![C64::new(0.0, 0.0); rows])
                        } else {
                            Err(HeisenError::OutOfRange(mu))
                        };
                    }
                    let q0 = (pos.floor() as isize - 2).clamp(0, n_sign as isize - 6) as usize;
                    let mut w = [0.0; 6];
                    for (a, wa) in w.iter_mut().enumerate() {
                        let mut v = 1.0;
                        for b in 0..6 {
                            if a != b {
                                v *= (pos - (q0 + b) as f64) / (a as f64 - b as f64);
                            }
                        }
                        *wa = v;
                    }
                    Ok((0..rows)
                        .map(|n| {
                            let s: C64 = (0..6)
                                .map(|a| data[node(q0 + a)].get(n).copied().unwrap_or_default() * w[a])
                                .sum();
                            s * scale
                        })
                        .collect())
                })
                .collect()
        };
        let coeffs = interp(&self.coeffs, 1.0)?;
        let dlambda = match &self.dlambda {
            Some(dl) => Some(interp(dl, t2)?),
            None => None,
        };
        Self::from_parts(g.clone(), coeffs, dlambda)
    }

    /// Coefficients of `Z·G^{−1}F`, `Z = is − ¼|z|²`. Exact through the
    /// source when there is one; otherwise uses the derivative channel or
    /// numeric λ-differences, and the `λ < 0` rows shrink by one.
    pub fn mult_by_z(&self) -> Result<Self> {
        if let Some(src) = &self.source {
            if let Some(z) = ZSource::new(src.clone()) {
                return Self::from_source(self.grid.clone(), Arc::new(z));
            }
        }
        let g = &self.grid;
        let d = g.d();
        let der = self.lambda_derivative();
        let coeffs = (0..g.len())
            .map(|j| {
                let l = g.lambda(j);
                let f = &self.coeffs[j];
                if l > 0.0 {
                    (0..f.len())
                        .map(|n| {
                            let prev = if n == 0 { C64::new(0.0, 0.0) } else { f[n - 1] };
                            der[j][n] - (f[n] - prev) * (n as f64 / l)
                        })
                        .collect()
                } else {
                    (0..f.len().saturating_sub(1))
                        .map(|n| der[j][n] - (f[n + 1] - f[n]) * ((d + n) as f64 / l))
                        .collect()
                }
            })
            .collect();
        Self::from_parts(g.clone(), coeffs, None)
    }

    /// `‖Z^m G^{−1}F‖_{L²}` through the spectral side.
    pub fn moment_norm(&self, m: usize) -> Result<f64> {
        if m == 0 {
            return Ok(self.plancherel_norm());
        }
        if let Some(src) = &self.source {
            if src.max_order() >= m {
                let mut s: Arc<dyn CoeffSource> = src.clone();
                for _ in 0..m {
                    s = Arc::new(ZSource::new(s).expect("order checked"));
                }
                let g = &self.grid;
                let total: f64 = (0..g.len())
                    .into_par_iter()
                    .map(|j| {
                        let top = g.n_top(j) + 1;
                        let jets = s.jets(g.lambda(j), top, 0);
                        let v: f64 = jets.iter().enumerate().map(|(n, x)| g.binom(n) * x[0].norm_sqr()).sum();
                        v * g.weight(j)
                    })
                    .collect::<Vec<f64>>()
                    .into_iter()
                    .sum();
                return if total.is_finite() {
                    Ok(total.sqrt())
                } else {
                    Err(HeisenError::NonFinite("moment norm".into()))
                };
            }
        }
        let mut f = self.mult_by_z()?;
        for _ in 1..m {
            f = f.mult_by_z()?;
        }
        let v = f.plancherel_norm();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(HeisenError::NonFinite("moment norm".into()))
        }
    }

    /// CSV dump of rows `n ≤ n_max` with header `n,lambda,re,im,re_dlambda,im_dlambda`.
    pub fn write_csv<W: Write>(&self, mut w: W, n_max: usize) -> std::io::Result<()> {
        let der = self.lambda_derivative();
        writeln!(w, "n,lambda,re,im,re_dlambda,im_dlambda")?;
        let g = &self.grid;
        let top = (0..g.len()).map(|j| g.n_top(j).min(self.coeffs[j].len().saturating_sub(1))).max().unwrap_or(0);
        for n in 0..=n_max.min(top) {
            for j in 0..g.len() {
                if n > g.n_top(j) || n >= self.coeffs[j].len() {
                    continue;
                }
                let v = self.coeffs[j][n];
                let dv = der[j][n];
                writeln!(w, "{n},{:e},{:e},{:e},{:e},{:e}", g.lambda(j), v.re, v.im, dv.re, dv.im)?;
            }
        }
        Ok(())
    }
}
