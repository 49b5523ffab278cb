//! Heisenberg group arithmetic, left-invariant vector fields and the
//! homogeneous Taylor machinery.
//!
//! Points are `(x, y, s)` with `x, y ∈ ℝ^d`. Generators are numbered
//! `1..=2d+1`: `1..=d` are the `X_j`, `d+1..=2d` the `Y_j` and `2d+1` is `S`.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{HeisenError, Result};
use crate::numdiff::{central_step, fornberg_weights};

#[derive(Debug, Clone, PartialEq)]
pub struct Point {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: f64,
}

impl Point {
    pub fn new(x: Vec<f64>, y: Vec<f64>, s: f64) -> Result<Self> {
        if x.len() != y.len() {
            return Err(HeisenError::DimensionMismatch(x.len(), y.len()));
        }
        if x.is_empty() {
            return Err(HeisenError::InvalidArgument("d must be at least 1".into()));
        }
        if !(x.iter().chain(&y).all(|v| v.is_finite()) && s.is_finite()) {
            return Err(HeisenError::NonFinite("point coordinates".into()));
        }
        Ok(Self { x, y, s })
    }

    pub fn zero(d: usize) -> Self {
        Self { x: vec![0.0; d], y: vec![0.0; d], s: 0.0 }
    }

    /// Biradial point `(|z|, 0, s)` in dimension `d`.
    pub fn radial(d: usize, rho: f64, s: f64) -> Self {
        let mut p = Self::zero(d);
        p.x[0] = rho;
        p.s = s;
        p
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn inverse(&self) -> Self {
        Self {
            x: self.x.iter().map(|v| -v).collect(),
            y: self.y.iter().map(|v| -v).collect(),
            s: -self.s,
        }
    }

    pub fn z_norm_sq(&self) -> f64 {
        self.x.iter().chain(&self.y).map(|v| v * v).sum()
    }

    /// `self ⊞ τ e_i` for a single generator, without allocating a second point.
    pub fn step_along(&self, i: usize, tau: f64) -> Self {
        let d = self.dim();
        let mut p = self.clone();
        if i <= d {
            p.x[i - 1] += tau;
            p.s += 0.5 * self.y[i - 1] * tau;
        } else if i <= 2 * d {
            p.y[i - d - 1] += tau;
            p.s -= 0.5 * self.x[i - d - 1] * tau;
        } else {
            p.s += tau;
        }
        p
    }
}

pub fn group_mul(p: &Point, q: &Point) -> Result<Point> {
    if p.dim() != q.dim() {
        return Err(HeisenError::DimensionMismatch(p.dim(), q.dim()));
    }
    let twist: f64 = (0..p.dim()).map(|j| p.y[j] * q.x[j] - p.x[j] * q.y[j]).sum();
    Ok(Point {
        x: p.x.iter().zip(&q.x).map(|(a, b)| a + b).collect(),
        y: p.y.iter().zip(&q.y).map(|(a, b)| a + b).collect(),
        s: p.s + q.s + 0.5 * twist,
    })
}

pub fn dilate(p: &Point, t: f64) -> Result<Point> {
    if t == 0.0 || !t.is_finite() {
        return Err(HeisenError::InvalidArgument(format!("dilation factor {t}")));
    }
    Ok(scale_path(p, t))
}

fn scale_path(p: &Point, t: f64) -> Point {
    Point {
        x: p.x.iter().map(|v| t * v).collect(),
        y: p.y.iter().map(|v| t * v).collect(),
        s: t * t * p.s,
    }
}

pub fn homogeneous_norm(p: &Point) -> f64 {
    let z2 = p.z_norm_sq();
    (z2 * z2 + p.s * p.s).sqrt().sqrt()
}

/// Ordered word over the generators, addressing `D^I = D_{i_1} ⋯ D_{i_k}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    d: usize,
    ids: Vec<usize>,
}

impl MultiIndex {
    pub fn new(d: usize, ids: Vec<usize>) -> Result<Self> {
        if d == 0 {
            return Err(HeisenError::InvalidArgument("d must be at least 1".into()));
        }
        if let Some(&bad) = ids.iter().find(|&&i| i == 0 || i > 2 * d + 1) {
            return Err(HeisenError::InvalidArgument(format!("generator id {bad} out of range")));
        }
        Ok(Self { d, ids })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ids(&self) -> &[usize] {
        &self.ids
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    /// `|I| = Σ μ(i)`, with `μ = 2` for the central generator.
    pub fn homogeneous_len(&self) -> usize {
        self.ids.iter().map(|&i| if i == 2 * self.d + 1 { 2 } else { 1 }).sum()
    }
}

pub type ScalarFn = dyn Fn(&Point) -> Complex64 + Send + Sync;

/// First partials `(∂_x, ∂_y, ∂_s)` of a field at a point.
#[derive(Debug, Clone)]
pub struct Partials {
    pub dx: Vec<Complex64>,
    pub dy: Vec<Complex64>,
    pub ds: Complex64,
}

pub type PartialsFn = dyn Fn(&Point) -> Partials + Send + Sync;

/// A smooth complex function on `H^d`, optionally with analytic first partials.
#[derive(Clone)]
pub struct SmoothField {
    value: Arc<ScalarFn>,
    partials: Option<Arc<PartialsFn>>,
    scale: f64,
}

impl SmoothField {
    pub fn new(f: impl Fn(&Point) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { value: Arc::new(f), partials: None, scale: 1.0 }
    }

    pub fn with_partials(mut self, p: impl Fn(&Point) -> Partials + Send + Sync + 'static) -> Self {
        self.partials = Some(Arc::new(p));
        self
    }

    /// Length scale used to size finite-difference steps.
    pub fn with_scale(mut self, scale: f64) -> Self {
        self.scale = scale;
        self
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn eval(&self, p: &Point) -> Complex64 {
        (self.value)(p)
    }

    fn eval_checked(&self, p: &Point) -> Result<Complex64> {
        let v = self.eval(p);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(HeisenError::NonFinite("field evaluation".into()))
        }
    }

    /// Compares analytic partials against central differences at `points`.
    pub fn check_partials(&self, points: &[Point], tol: f64) -> Result<()> {
        let Some(part) = &self.partials else { return Ok(()) };
        let h = central_step(self.scale);
        for p in points {
            let an = part(p);
            let d = p.dim();
            for k in 0..2 * d + 1 {
                let g = |tau: f64| {
                    let mut q = p.clone();
                    match k {
                        k if k < d => q.x[k] += tau,
                        k if k < 2 * d => q.y[k - d] += tau,
                        _ => q.s += tau,
                    }
                    self.eval(&q)
                };
                let num = crate::numdiff::central4(g, h);
                let want = match k {
                    k if k < d => an.dx[k],
                    k if k < 2 * d => an.dy[k - d],
                    _ => an.ds,
                };
                if (num - want).norm() > tol * (1.0 + want.norm()) {
                    return Err(HeisenError::InvalidArgument(format!(
                        "analytic partial {k} disagrees with finite differences at {p:?}"
                    )));
                }
            }
        }
        Ok(())
    }
}

impl std::fmt::Debug for SmoothField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SmoothField")
            .field("analytic_partials", &self.partials.is_some())
            .field("scale", &self.scale)
            .finish()
    }
}

fn check_generator(i: usize, d: usize) -> Result<()> {
    if i == 0 || i > 2 * d + 1 {
        Err(HeisenError::InvalidArgument(format!("generator id {i} out of range")))
    } else {
        Ok(())
    }
}

fn analytic_field(i: usize, part: &Partials, p: &Point) -> Complex64 {
    let d = p.dim();
    if i <= d {
        part.dx[i - 1] + part.ds * (0.5 * p.y[i - 1])
    } else if i <= 2 * d {
        part.dy[i - d - 1] - part.ds * (0.5 * p.x[i - d - 1])
    } else {
        part.ds
    }
}

fn derivative_along<F>(p: &Point, i: usize, h: f64, g: F) -> Result<Complex64>
where
    F: Fn(&Point) -> Result<Complex64>,
{
    let a = g(&p.step_along(i, h))? - g(&p.step_along(i, -h))?;
    let b = g(&p.step_along(i, 2.0 * h))? - g(&p.step_along(i, -2.0 * h))?;
    let v = (a * 8.0 - b) / (12.0 * h);
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(HeisenError::NonFinite("vector field".into()))
    }
}

/// `D_i f(p)`, the left-invariant derivative `d/dτ f(p ⊞ τ e_i)` at `τ = 0`.
pub fn apply_field(i: usize, f: &SmoothField, p: &Point) -> Result<Complex64> {
    check_generator(i, p.dim())?;
    if let Some(part) = &f.partials {
        return Ok(analytic_field(i, &part(p), p));
    }
    derivative_along(p, i, central_step(f.scale), |q| f.eval_checked(q))
}

/// `D^I f(p)`; the rightmost generator acts first.
pub fn apply_word(word: &MultiIndex, f: &SmoothField, p: &Point) -> Result<Complex64> {
    if word.d() != p.dim() {
        return Err(HeisenError::DimensionMismatch(word.d(), p.dim()));
    }
    word_value(word.ids(), f, p)
}

fn word_value(ids: &[usize], f: &SmoothField, p: &Point) -> Result<Complex64> {
    match ids {
        [] => f.eval_checked(p),
        [i] => apply_field(*i, f, p),
        [i, rest @ ..] => {
            derivative_along(p, *i, central_step(f.scale), |q| word_value(rest, f, q))
        }
    }
}

/// Displacement (in homogeneous norm) of the outermost stencil node.
pub const TAYLOR_STEP: f64 = 0.05;
/// Extra symmetric node pairs beyond the minimal `n + 2` stencil.
pub const TAYLOR_EXTRA_PAIRS: usize = 2;

/// `M_v^n f(w) = ∂_τ^n f(w ⊞ δ_τ v)` at `τ = 0`.
pub fn taylor_term(v: &Point, n: usize, f: &SmoothField, w: &Point) -> Result<Complex64> {
    if v.dim() != w.dim() {
        return Err(HeisenError::DimensionMismatch(v.dim(), w.dim()));
    }
    if n == 0 {
        return f.eval_checked(w);
    }
    let size = homogeneous_norm(v);
    if size == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let h = TAYLOR_STEP * f.scale / size;
    if !(h.is_finite() && h > 1e-150) {
        return Err(HeisenError::StepUnderflow(h));
    }
    let points = n + 2 + 2 * TAYLOR_EXTRA_PAIRS;
    let centre = (points as f64 - 1.0) / 2.0;
    let nodes: Vec<f64> = (0..points).map(|k| (k as f64 - centre) * h).collect();
    let mut weights = fornberg_weights(0.0, &nodes, n);
    let parity = if n.is_multiple_of(2) { 1.0 } else { -1.0 };
    for k in 0..points / 2 {
        let j = points - 1 - k;
        let avg = 0.5 * (weights[k] + parity * weights[j]);
        weights[k] = avg;
        weights[j] = parity * avg;
    }
    if points % 2 == 1 && n % 2 == 1 {
        weights[points / 2] = 0.0;
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for (tau, c) in nodes.iter().zip(&weights) {
        if *c != 0.0 {
            acc += f.eval_checked(&group_mul(w, &scale_path(v, *tau))?)? * *c;
        }
    }
    Ok(acc)
}

/// Returns `(Σ_{j≤n} M_v^j f(w)/j!, f(w ⊞ v) − Σ)`.
pub fn taylor_remainder(
    v: &Point,
    n: usize,
    f: &SmoothField,
    w: &Point,
) -> Result<(Complex64, Complex64)> {
    let mut approx = Complex64::new(0.0, 0.0);
    let mut fact = 1.0;
    for j in 0..=n {
        if j > 0 {
            fact *= j as f64;
        }
        approx += taylor_term(v, j, f, w)? / fact;
    }
    let exact = f.eval_checked(&group_mul(w, v)?)?;
    Ok((approx, exact - approx))
}
