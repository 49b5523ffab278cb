//! Exact check that `(−Δ)^n D^I` and `D^I (−Δ)^n` expand in the bases
//! `D^K (−Δ)^{n−j} S^j` and `(−Δ)^{n−j} S^j D^K` with `|K| = |I|`.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{AlgebraElement, Monomial};
use crate::error::{HeisenError, Result};
use crate::group::MultiIndex;

pub const DEFAULT_SWAP_BOUND: u32 = 3;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwapTerm {
    /// Sorted generator ids of `K`.
    pub k: Vec<usize>,
    pub j: u32,
    pub coefficient: BigRational,
}

#[derive(Debug, Clone)]
pub struct SwapReport {
    pub n: u32,
    pub index: Vec<usize>,
    /// Constants for `(−Δ)^n D^I = Σ C_{K,j} D^K (−Δ)^{n−j} S^j`.
    pub forward: Vec<SwapTerm>,
    /// Constants for `D^I (−Δ)^n = Σ C'_{K,j} (−Δ)^{n−j} S^j D^K`.
    pub reversed: Vec<SwapTerm>,
    pub forward_match: bool,
    pub reversed_match: bool,
}

impl SwapReport {
    pub fn matched(&self) -> bool {
        self.forward_match && self.reversed_match
    }

    pub fn constant(&self, k: &[usize], j: u32) -> BigRational {
        lookup(&self.forward, k, j)
    }

    pub fn reversed_constant(&self, k: &[usize], j: u32) -> BigRational {
        lookup(&self.reversed, k, j)
    }
}

fn lookup(terms: &[SwapTerm], k: &[usize], j: u32) -> BigRational {
    terms
        .iter()
        .find(|t| t.k == k && t.j == j)
        .map(|t| t.coefficient.clone())
        .unwrap_or_else(BigRational::zero)
}

/// Non-decreasing id sequences over `1..=2d+1` of homogeneous length `h`.
fn sorted_indices(d: usize, h: usize) -> Vec<Vec<usize>> {
    fn rec(d: usize, left: usize, min: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for id in min..=2 * d + 1 {
            let w = if id == 2 * d + 1 { 2 } else { 1 };
            if w > left {
                continue;
            }
            cur.push(id);
            rec(d, left - w, id, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(d, h, 1, &mut Vec::new(), &mut out);
    out
}

/// Solves `Σ c_i cols[i] = target` exactly; free unknowns are set to zero.
fn solve(cols: &[AlgebraElement], target: &AlgebraElement) -> Option<Vec<BigRational>> {
    let mut rows: BTreeMap<Monomial, usize> = BTreeMap::new();
    for e in cols.iter().chain(std::iter::once(target)) {
        for (m, _) in e.terms() {
            let next = rows.len();
            rows.entry(m.clone()).or_insert(next);
        }
    }
    let nc = cols.len();
    let mut a = vec![vec![BigRational::zero(); nc + 1]; rows.len()];
    for (c, e) in cols.iter().enumerate() {
        for (m, v) in e.terms() {
            a[rows[m]][c] = v.clone();
        }
    }
    for (m, v) in target.terms() {
        a[rows[m]][nc] = v.clone();
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..nc {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = BigRational::one() / a[r][c].clone();
        for v in a[r].iter_mut() {
            *v = &*v * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in c..=nc {
                    let sub = &f * &a[r][k];
                    a[i][k] -= sub;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[nc].is_zero()) {
        return None;
    }
    let mut x = vec![BigRational::zero(); nc];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][nc].clone();
    }
    Some(x)
}

fn expand(
    d: usize,
    n: u32,
    target: &AlgebraElement,
    ks: &[Vec<usize>],
    basis: impl Fn(&AlgebraElement, &AlgebraElement) -> AlgebraElement,
) -> (bool, Vec<SwapTerm>) {
    let neg_lap = -&AlgebraElement::sub_laplacian(d);
    let s = AlgebraElement::s(d);
    let mut labels = Vec::new();
    let mut cols = Vec::new();
    for j in 0..=n {
        let tail = &neg_lap.pow(n - j) * &s.pow(j);
        for k in ks {
            labels.push((k.clone(), j));
            cols.push(basis(&AlgebraElement::from_word(d, k), &tail));
        }
    }
    match solve(&cols, target) {
        Some(x) => {
            let terms = labels
                .into_iter()
                .zip(x)
                .filter(|(_, c)| !c.is_zero())
                .map(|((k, j), coefficient)| SwapTerm { k, j, coefficient })
                .collect();
            (true, terms)
        }
        None => (false, Vec::new()),
    }
}

/// Expands both orderings of `(−Δ)^n` and `D^I` and extracts the constants.
/// A failed match is reported through the flags, never dropped.
pub fn verify_swap_identities(n: u32, index: &MultiIndex, bound: u32) -> Result<SwapReport> {
    if n > bound {
        return Err(HeisenError::InvalidArgument(format!("n = {n} exceeds bound {bound}")));
    }
    let d = index.d();
    let di = AlgebraElement::from_word(d, index.ids());
    let lap_n = (-&AlgebraElement::sub_laplacian(d)).pow(n);
    let ks = sorted_indices(d, index.homogeneous_len());
    let (forward_match, forward) = expand(d, n, &(&lap_n * &di), &ks, |dk, tail| dk * tail);
    let (reversed_match, reversed) = expand(d, n, &(&di * &lap_n), &ks, |dk, tail| tail * dk);
    Ok(SwapReport {
        n,
        index: index.ids().to_vec(),
        forward,
        reversed,
        forward_match,
        reversed_match,
    })
}
