//! Sub-Laplacian Fourier multipliers `φ(−Δ)`: the symbol catalog, kernel
//! coefficients `F(n, λ) = φ(|λ|(d+2n))`, operator application, joint
//! multipliers `Φ(−Δ, S)`, kernel L² norms and moment-growth fits.

mod catalog;
mod growth;
mod norm;
mod series;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use crate::biradial::source::{Jet, SymbolFn, MAX_ORDER};
use crate::biradial::{BiradialFunction, KernelSource, ProductSource, SpectralGrid};
use crate::error::{HeisenError, Result};
use crate::group::Point;
use crate::numdiff::{central4, central_step};

pub use catalog::{builtin_symbols, chi_high, chi_low, parse_symbol, symbol, SymbolInfo};
pub use growth::{fit_line, moment_growth_probe, ExponentFit};
pub use norm::{l2_kernel_norm, KernelNorm};
pub use series::Series;

pub type SeriesFn = Arc<dyn Fn(&Series) -> Series + Send + Sync>;
pub type ValueFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;

/// Declared properties of a symbol.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SymbolMeta {
    /// Growth exponent `γ`.
    pub growth: Option<f64>,
    /// Decay exponent `a` in `|φ(σ)| ≲ (1+σ)^{−a}`.
    pub decay: Option<f64>,
    /// Time parameter of a family.
    pub t: Option<f64>,
}

/// A symbol `φ: [0, ∞) → ℂ`, optionally with exact derivatives through a
/// Taylor-series evaluation.
#[derive(Clone)]
pub struct MultiplierSpec {
    label: String,
    value: ValueFn,
    series: Option<SeriesFn>,
    meta: SymbolMeta,
}

impl fmt::Debug for MultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MultiplierSpec")
            .field("label", &self.label)
            .field("analytic", &self.series.is_some())
            .field("meta", &self.meta)
            .finish()
    }
}

impl MultiplierSpec {
    /// Value-only symbol; λ-derivatives of its kernel fall back to differences.
    pub fn new(label: impl Into<String>, f: impl Fn(f64) -> C64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), value: Arc::new(f), series: None, meta: SymbolMeta::default() }
    }

    /// Symbol given on truncated Taylor series, so derivatives up to order 8 are exact.
    pub fn analytic(label: impl Into<String>, f: impl Fn(&Series) -> Series + Send + Sync + 'static) -> Self {
        let f: SeriesFn = Arc::new(f);
        let g = f.clone();
        Self {
            label: label.into(),
            value: Arc::new(move |s| g(&Series::variable(s, 1)).value()),
            series: Some(f),
            meta: SymbolMeta::default(),
        }
    }

    pub fn with_meta(mut self, meta: SymbolMeta) -> Self {
        self.meta = meta;
        self
    }

    pub fn with_decay(mut self, a: f64) -> Self {
        self.meta.decay = Some(a);
        self
    }

    pub fn with_growth(mut self, g: f64) -> Self {
        self.meta.growth = Some(g);
        self
    }

    pub fn with_time(mut self, t: f64) -> Self {
        self.meta.t = Some(t);
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn meta(&self) -> &SymbolMeta {
        &self.meta
    }

    pub fn is_analytic(&self) -> bool {
        self.series.is_some()
    }

    pub fn eval(&self, sigma: f64) -> C64 {
        (self.value)(sigma)
    }

    /// `φ, φ′, …, φ^{(order)}` at `σ`, when exact derivatives exist.
    pub fn derivatives(&self, sigma: f64, order: usize) -> Option<Jet> {
        let f = self.series.as_ref()?;
        Some(f(&Series::variable(sigma, order.min(MAX_ORDER) + 1)).to_jet())
    }

    pub fn symbol_fn(&self) -> Option<SymbolFn> {
        let f = self.series.clone()?;
        Some(Arc::new(move |s, order| f(&Series::variable(s, order.min(MAX_ORDER) + 1)).to_jet()))
    }

    /// Pointwise product `σ ↦ φ(σ)ψ(σ)`.
    pub fn product(&self, other: &MultiplierSpec) -> MultiplierSpec {
        let label = format!("{}*{}", self.label, other.label);
        let decay = match (self.meta.decay, other.meta.decay) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let meta = SymbolMeta { growth: None, decay, t: self.meta.t.or(other.meta.t) };
        match (&self.series, &other.series) {
            (Some(a), Some(b)) => {
                let (a, b) = (a.clone(), b.clone());
                Self::analytic(label, move |s| a(s) * b(s)).with_meta(meta)
            }
            _ => {
                let (a, b) = (self.value.clone(), other.value.clone());
                Self::new(label, move |s| a(s) * b(s)).with_meta(meta)
            }
        }
    }

    /// `σ ↦ φ(kσ)`.
    pub fn dilated(&self, k: f64) -> MultiplierSpec {
        let label = format!("{}(·{k})", self.label);
        match &self.series {
            Some(f) => {
                let f = f.clone();
                Self::analytic(label, move |s| f(&(*s * k))).with_meta(self.meta.clone())
            }
            None => {
                let f = self.value.clone();
                Self::new(label, move |s| f(k * s)).with_meta(self.meta.clone())
            }
        }
    }

    /// Checks finiteness, exact derivatives against central differences on a
    /// log grid, and the declared decay `|φ(σ)| ≤ C(1+σ)^{1−a}`.
    pub fn validate(&self) -> Result<()> {
        let sigmas: Vec<f64> = (0..=40).map(|k| 10f64.powf(-2.0 + k as f64 * 0.1)).collect();
        let sup = sigmas.iter().map(|&s| self.eval(s).norm()).fold(0.0, f64::max);
        for &s in &sigmas {
            let v = self.eval(s);
            if !(v.re.is_finite() && v.im.is_finite()) {
                return Err(HeisenError::NonFinite(format!("{} at {s}", self.label)));
            }
            if let Some(j) = self.derivatives(s, 5) {
                let rate = (1..=5)
                    .filter(|&k| j[k - 1].norm() > 0.0)
                    .map(|k| j[k].norm() / j[k - 1].norm())
                    .fold(0.0, f64::max);
                let h = central_step(s).min(0.4 * s).min(1e-2 / rate.max(1e-300));
                let fd: C64 = central4(|x| self.eval(s + x), h);
                let scale = j[1].norm().max(v.norm()).max(1e-12 * sup);
                if (fd - j[1]).norm() > 1e-6 * scale {
                    return Err(HeisenError::InvalidArgument(format!(
                        "{}: derivative {} disagrees with differences {} at {s}",
                        self.label, j[1], fd
                    )));
                }
            }
        }
        if let Some(a) = self.meta.decay.filter(|a| a.is_finite()) {
            let bound = |s: f64| self.eval(s).norm() * (1.0 + s).powf(a - 1.0);
            let near = sigmas.iter().map(|&s| bound(s)).fold(0.0, f64::max);
            let far = (3..=8).map(|k| bound(10f64.powi(k))).fold(0.0, f64::max);
            if far > 10.0 * near.max(f64::MIN_POSITIVE) {
                return Err(HeisenError::InvalidArgument(format!("{}: decay exponent {a} violated", self.label)));
            }
        }
        Ok(())
    }
}

/// A joint symbol `Φ(σ, w)`, polynomial of declared degree in `w`; `w` is
/// evaluated at the symbol `−iλ` of `S`.
#[derive(Clone)]
pub struct JointMultiplierSpec {
    label: String,
    degree: usize,
    f: Arc<dyn Fn(f64, C64) -> C64 + Send + Sync>,
}

impl fmt::Debug for JointMultiplierSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("JointMultiplierSpec").field("label", &self.label).field("degree", &self.degree).finish()
    }
}

impl JointMultiplierSpec {
    pub fn new(label: impl Into<String>, degree: usize, f: impl Fn(f64, C64) -> C64 + Send + Sync + 'static) -> Self {
        Self { label: label.into(), degree, f: Arc::new(f) }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn eval(&self, sigma: f64, w: C64) -> C64 {
        (self.f)(sigma, w)
    }

    /// The `(degree+1)`-th difference in `w` vanishes at sample points.
    pub fn validate(&self) -> Result<()> {
        let k = self.degree + 1;
        for &s in &[0.0, 0.3, 2.0, 17.0] {
            for &w0 in &[C64::new(-1.0, 0.0), C64::new(0.0, -2.5), C64::new(0.5, 0.5)] {
                let mut diff = C64::new(0.0, 0.0);
                let mut scale = 0.0f64;
                let mut c = 1.0;
                for j in 0..=k {
                    let v = self.eval(s, w0 + j as f64);
                    let sign = if (k - j).is_multiple_of(2) { 1.0 } else { -1.0 };
                    diff += v * (sign * c);
                    scale = scale.max(v.norm() * c);
                    c = c * (k - j) as f64 / (j + 1) as f64;
                }
                if diff.norm() > 1e-9 * scale.max(1.0) {
                    return Err(HeisenError::InvalidArgument(format!(
                        "{}: not polynomial of degree {} in the second slot",
                        self.label, self.degree
                    )));
                }
            }
        }
        Ok(())
    }
}

fn frequency(d: usize, n: usize, lambda: f64) -> f64 {
    lambda.abs() * (d + 2 * n) as f64
}

/// `F(n, λ) = φ(|λ|(d+2n))`, with an exact ∂_λ channel for analytic symbols.
pub fn kernel_coeffs(phi: &MultiplierSpec, grid: &Arc<SpectralGrid>) -> Result<BiradialFunction> {
    let d = grid.d();
    let out = match phi.symbol_fn() {
        Some(sf) => BiradialFunction::from_source(grid.clone(), Arc::new(KernelSource::new(d, sf))),
        None => BiradialFunction::from_fn(grid.clone(), |_, n, l| phi.eval(frequency(d, n, l))),
    };
    out.map_err(|e| match e {
        HeisenError::NonFinite(_) => HeisenError::NonFinite(phi.label.clone()),
        e => e,
    })
}

/// `F(n, λ)·φ(|λ|(d+2n))`.
pub fn apply(phi: &MultiplierSpec, f: &BiradialFunction) -> Result<BiradialFunction> {
    let d = f.grid().d();
    if let (Some(src), Some(sf)) = (f.source(), phi.symbol_fn()) {
        let k = Arc::new(KernelSource::new(d, sf));
        return BiradialFunction::from_source(f.grid().clone(), Arc::new(ProductSource::new(src.clone(), k)));
    }
    f.map(|_, n, l, v| v * phi.eval(frequency(d, n, l)))
}

/// `F(n, λ)·Φ(|λ|(d+2n), −iλ)`.
pub fn apply_joint(phi: &JointMultiplierSpec, f: &BiradialFunction) -> Result<BiradialFunction> {
    let d = f.grid().d();
    f.map(|_, n, l, v| v * phi.eval(frequency(d, n, l), C64::new(0.0, -l)))
}

/// The convolution kernel of `φ(−Δ)` at `p`.
pub fn kernel_at(phi: &MultiplierSpec, grid: &Arc<SpectralGrid>, p: &Point) -> Result<C64> {
    let k = kernel_coeffs(phi, grid)?;
    k.check_tail()?;
    k.synthesize(p)
}
