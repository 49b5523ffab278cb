//! Exact arithmetic in the universal enveloping algebra of the Heisenberg Lie
//! algebra, kept in PBW normal form (`X`'s, then `Y`'s, then `S`).
//!
//! Generators use the same numbering as [`crate::group`]: `1..=d` for `X_j`,
//! `d+1..=2d` for `Y_j`, `2d+1` for `S`. A normal-ordered monomial is stored as
//! its exponent vector, so the PBW order is simply ascending generator id.

mod parse;
mod swap;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub use parse::parse_expression;
pub use swap::{verify_swap_identities, SwapReport, SwapTerm, DEFAULT_SWAP_BOUND};

pub type Monomial = Vec<u32>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgebraElement {
    d: usize,
    terms: BTreeMap<Monomial, BigRational>,
}

impl AlgebraElement {
    pub fn zero(d: usize) -> Self {
        Self { d, terms: BTreeMap::new() }
    }

    pub fn scalar(d: usize, c: BigRational) -> Self {
        let mut e = Self::zero(d);
        e.add_term(vec![0; 2 * d + 1], c);
        e
    }

    pub fn one(d: usize) -> Self {
        Self::scalar(d, BigRational::one())
    }

    pub fn integer(d: usize, c: i64) -> Self {
        Self::scalar(d, BigRational::from_integer(BigInt::from(c)))
    }

    /// The generator with id `i ∈ 1..=2d+1`.
    pub fn generator(d: usize, i: usize) -> Self {
        assert!(i >= 1 && i <= 2 * d + 1, "generator id {i} out of range");
        let mut m = vec![0; 2 * d + 1];
        m[i - 1] = 1;
        let mut e = Self::zero(d);
        e.add_term(m, BigRational::one());
        e
    }

    pub fn x(d: usize, j: usize) -> Self {
        Self::generator(d, j)
    }

    pub fn y(d: usize, j: usize) -> Self {
        Self::generator(d, d + j)
    }

    pub fn s(d: usize) -> Self {
        Self::generator(d, 2 * d + 1)
    }

    /// `Δ = Σ_j (X_j² + Y_j²)`.
    pub fn sub_laplacian(d: usize) -> Self {
        let mut e = Self::zero(d);
        for j in 1..=d {
            e = &e + &(&Self::x(d, j) * &Self::x(d, j));
            e = &e + &(&Self::y(d, j) * &Self::y(d, j));
        }
        e
    }

    /// Product of generators in the given (arbitrary) order.
    pub fn from_word(d: usize, ids: &[usize]) -> Self {
        ids.iter().fold(Self::one(d), |acc, &i| acc.mul_generator(i))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &[u32]) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::one(self.d), |acc, _| &acc * self)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        let mut e = Self::zero(self.d);
        for (m, v) in &self.terms {
            e.add_term(m.clone(), v * c);
        }
        e
    }

    fn add_term(&mut self, m: Monomial, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Right multiplication by a single generator, using
    /// `Y_i^k X_i = X_i Y_i^k + k Y_i^{k−1} S` to restore normal order.
    fn mul_generator(&self, i: usize) -> Self {
        let d = self.d;
        let mut out = Self::zero(d);
        for (m, c) in &self.terms {
            let mut next = m.clone();
            next[i - 1] += 1;
            out.add_term(next, c.clone());
            if i <= d {
                let k = m[d + i - 1];
                if k > 0 {
                    let mut lower = m.clone();
                    lower[d + i - 1] -= 1;
                    lower[2 * d] += 1;
                    out.add_term(lower, c * BigRational::from_integer(BigInt::from(k)));
                }
            }
        }
        out
    }

    /// Homogeneous degree of a monomial (`S` counts twice).
    pub fn monomial_degree(&self, m: &[u32]) -> u32 {
        m[..2 * self.d].iter().sum::<u32>() + 2 * m[2 * self.d]
    }
}

pub fn multiply(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    assert_eq!(a.d, b.d, "algebra elements of different dimension");
    let mut out = AlgebraElement::zero(a.d);
    for (m, c) in &b.terms {
        let mut acc = a.scale(c);
        for (idx, &e) in m.iter().enumerate() {
            for _ in 0..e {
                acc = acc.mul_generator(idx + 1);
            }
        }
        for (k, v) in acc.terms {
            out.add_term(k, v);
        }
    }
    out
}

pub fn commutator(a: &AlgebraElement, b: &AlgebraElement) -> AlgebraElement {
    &multiply(a, b) - &multiply(b, a)
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: &AlgebraElement) -> AlgebraElement {
        assert_eq!(self.d, rhs.d, "algebra elements of different dimension");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: &AlgebraElement) -> AlgebraElement {
        self + &(-rhs)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(&-BigRational::one())
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: &AlgebraElement) -> AlgebraElement {
        multiply(self, rhs)
    }
}

impl fmt::Display for AlgebraElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut ordered: Vec<_> = self.terms.iter().collect();
        ordered.sort_by(|(a, _), (b, _)| {
            self.monomial_degree(b).cmp(&self.monomial_degree(a)).then_with(|| b.cmp(a))
        });
        for (k, (m, c)) in ordered.into_iter().enumerate() {
            let word = monomial_text(self.d, m);
            let neg = c.is_negative();
            let mag = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            match (mag.is_one(), word.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{word}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag}*{word}")?,
            }
        }
        Ok(())
    }
}

fn monomial_text(d: usize, m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (idx, &e) in m.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let name = generator_name(d, idx + 1);
        parts.push(if e == 1 { name } else { format!("{name}^{e}") });
    }
    parts.join("*")
}

pub fn generator_name(d: usize, i: usize) -> String {
    if i <= d {
        format!("X{i}")
    } else if i <= 2 * d {
        format!("Y{}", i - d)
    } else {
        "S".to_string()
    }
}
