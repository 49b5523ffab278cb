//! Spectral calculus of sub-Laplacian Fourier multipliers on the Heisenberg
//! group `H^d`: group arithmetic, an exact enveloping-algebra engine, Hermite
//! and Laguerre machinery, the biradial Laguerre–Fourier transform, multiplier
//! kernels and the fractional Schrödinger propagator, plus numeric probes.

pub mod algebra;
pub mod biradial;
pub mod error;
pub mod group;
pub mod multipliers;
pub mod numdiff;
pub mod probes;
pub mod special;

pub use error::{HeisenError, Result};
pub use num_complex::Complex64;
