//! The biradial Laguerre–Fourier transform
//! `Gf(n, λ) = C(d−1+n, n)^{−1} ∫ e^{iλs − |λ||z|²/4} L_n^{d−1}(|λ||z|²/2) f(z, s) dz ds`,
//! its inverse, Plancherel and Parseval, dilations and the exact action of
//! multiplication by `Z = is − ¼|z|²`.

mod function;
mod grid;
pub mod source;
mod transform;

pub use function::BiradialFunction;
pub use grid::{gregory_weights, GridConfig, SpectralGrid};
pub use source::{CoeffSource, DilatedSource, FnSource, KernelSource, ProductSource, SumSource, ZSource};
pub use transform::{analyze, analyze_unchecked, BiradialInput, PartialFourierFn, RadiusFn, RowLimitFn, SpatialFn};

#[cfg(test)]
mod tests;
