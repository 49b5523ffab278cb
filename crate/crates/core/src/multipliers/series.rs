use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64 as C64;

use crate::biradial::source::{Jet, JET_LEN, ZERO_JET};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Truncated Taylor series `Σ_{k<len} c_k ε^k` around a base point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Series {
    c: [C64; JET_LEN],
    len: usize,
}

impl Series {
    pub fn constant(v: impl Into<C64>, len: usize) -> Self {
        assert!((1..=JET_LEN).contains(&len), "series length {len}");
        let mut c = [ZERO; JET_LEN];
        c[0] = v.into();
        Series { c, len }
    }

    /// The independent variable `x + ε`.
    pub fn variable(x: f64, len: usize) -> Self {
        let mut s = Self::constant(x, len);
        if len > 1 {
            s.c[1] = C64::new(1.0, 0.0);
        }
        s
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn value(&self) -> C64 {
        self.c[0]
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.c[..self.len]
    }

    /// Derivatives `f^{(k)} = k!·c_k`.
    pub fn to_jet(&self) -> Jet {
        let mut out = ZERO_JET;
        let mut fact = 1.0;
        for k in 0..self.len {
            if k > 0 {
                fact *= k as f64;
            }
            out[k] = self.c[k] * fact;
        }
        out
    }

    fn zero_like(&self) -> Self {
        Self::constant(ZERO, self.len)
    }

    pub fn scale(mut self, k: impl Into<C64>) -> Self {
        let k = k.into();
        for v in &mut self.c[..self.len] {
            *v *= k;
        }
        self
    }

    pub fn recip(&self) -> Self {
        Self::constant(1.0, self.len) / *self
    }

    pub fn exp(&self) -> Self {
        let mut g = self.zero_like();
        g.c[0] = self.c[0].exp();
        for k in 1..self.len {
            let mut s = ZERO;
            for j in 1..=k {
                s += self.c[j] * g.c[k - j] * j as f64;
            }
            g.c[k] = s / k as f64;
        }
        g
    }

    pub fn ln(&self) -> Self {
        let f0 = self.c[0];
        let mut g = self.zero_like();
        g.c[0] = f0.ln();
        for k in 1..self.len {
            let mut s = self.c[k];
            for j in 1..k {
                s -= g.c[j] * self.c[k - j] * (j as f64 / k as f64);
            }
            g.c[k] = s / f0;
        }
        g
    }

    /// `self^p` through `exp(p ln self)`. At a zero base point only
    /// nonnegative integer powers have a finite expansion.
    pub fn powf(&self, p: f64) -> Self {
        if p == 0.0 {
            return Self::constant(1.0, self.len);
        }
        if self.c[0] == ZERO {
            if p > 0.0 && p.fract() == 0.0 {
                return self.powi(p as u32);
            }
            let mut out = self.zero_like();
            out.c[0] = if p > 0.0 { ZERO } else { C64::new(f64::INFINITY, 0.0) };
            for v in &mut out.c[1..self.len] {
                *v = C64::new(f64::NAN, 0.0);
            }
            return out;
        }
        (self.ln().scale(p)).exp()
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(1.0, self.len);
        for _ in 0..n {
            out = out * *self;
        }
        out
    }

    /// `e^{−1/x}` for `x > 0`, extended by zero.
    pub fn flat_exp(&self) -> Self {
        if self.c[0].re <= 0.0 {
            return self.zero_like();
        }
        (-self.recip()).exp()
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs().iter().all(|v| v.re.is_finite() && v.im.is_finite())
    }
}

impl Add for Series {
    type Output = Series;
    fn add(mut self, o: Series) -> Series {
        debug_assert_eq!(self.len, o.len);
        for k in 0..self.len {
            self.c[k] += o.c[k];
        }
        self
    }
}

impl Sub for Series {
    type Output = Series;
    fn sub(self, o: Series) -> Series {
        self + (-o)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        self.scale(-1.0)
    }
}

impl Mul for Series {
    type Output = Series;
    fn mul(self, o: Series) -> Series {
        debug_assert_eq!(self.len, o.len);
        let mut out = self.zero_like();
        for i in 0..self.len {
            if self.c[i] == ZERO {
                continue;
            }
            for j in 0..self.len - i {
                out.c[i + j] += self.c[i] * o.c[j];
            }
        }
        out
    }
}

impl Div for Series {
    type Output = Series;
    fn div(self, b: Series) -> Series {
        debug_assert_eq!(self.len, b.len);
        let mut q = self.zero_like();
        for k in 0..self.len {
            let mut s = self.c[k];
            for j in 1..=k {
                s -= b.c[j] * q.c[k - j];
            }
            q.c[k] = s / b.c[0];
        }
        q
    }
}

impl Add<f64> for Series {
    type Output = Series;
    fn add(mut self, v: f64) -> Series {
        self.c[0] += v;
        self
    }
}

impl Sub<Series> for f64 {
    type Output = Series;
    fn sub(self, s: Series) -> Series {
        -s + self
    }
}

impl Mul<f64> for Series {
    type Output = Series;
    fn mul(self, v: f64) -> Series {
        self.scale(v)
    }
}

impl Mul<C64> for Series {
    type Output = Series;
    fn mul(self, v: C64) -> Series {
        self.scale(v)
    }
}
