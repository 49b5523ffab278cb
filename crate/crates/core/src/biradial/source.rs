//! Analytic coefficient sources. A source evaluates `F(n, λ)` at any `λ`,
//! together with λ-derivatives and finite differences in `n`, so that the
//! exact recurrences for multiplication by `Z` can be iterated without
//! numerical differentiation or cancellation.
//!
//! Differences run backward (`Δ g(n) = g(n) − g(n−1)`) for `λ > 0` and
//! forward (`∇ g(n) = g(n+1) − g(n)`) for `λ < 0`; rows with `n < 0` are zero.

use std::sync::Arc;

use num_complex::Complex64 as C64;

pub const MAX_ORDER: usize = 8;
pub const JET_LEN: usize = MAX_ORDER + 1;

/// Derivatives `∂^0 … ∂^8` of a scalar function.
pub type Jet = [C64; JET_LEN];

pub const ZERO_JET: Jet = [C64::new(0.0, 0.0); JET_LEN];

/// `t[k][i] = ∂_λ^i` of the `k`-th difference in `n`; entries with `k + i > m`
/// are unspecified.
#[derive(Clone, Copy, Debug)]
pub struct DiffTable(pub [[C64; JET_LEN]; JET_LEN]);

impl DiffTable {
    pub const ZERO: DiffTable = DiffTable([ZERO_JET; JET_LEN]);
}

pub type SymbolFn = Arc<dyn Fn(f64, usize) -> Jet + Send + Sync>;
pub type CoeffFn = Arc<dyn Fn(usize, f64, usize) -> Jet + Send + Sync>;

pub trait CoeffSource: Send + Sync {
    fn d(&self) -> usize;

    /// Highest total order `k + i` the source can deliver.
    fn max_order(&self) -> usize;

    /// Difference tables for rows `0..rows` at `λ`, complete up to `k + i ≤ m`.
    fn tables(&self, lambda: f64, rows: usize, m: usize) -> Vec<DiffTable>;

    /// Values and λ-derivatives up to `order` for rows `0..rows`.
    fn jets(&self, lambda: f64, rows: usize, order: usize) -> Vec<Jet> {
        self.tables(lambda, rows, order).into_iter().map(|t| t.0[0]).collect()
    }
}

fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// Row read by the `j`-th term of a difference at row `n`.
fn shifted(n: usize, j: usize, forward: bool) -> Option<usize> {
    if forward {
        Some(n + j)
    } else {
        n.checked_sub(j)
    }
}

/// Sign of the `j`-th term of a `k`-th difference.
fn diff_sign(k: usize, j: usize, forward: bool) -> f64 {
    let e = if forward { k - j } else { j };
    if e % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Tables by direct summation of jets, with zero rows below `n = 0`.
/// `jets` must hold rows `0..rows + m` when `forward`.
fn naive_tables(jets: &[Jet], rows: usize, m: usize, forward: bool) -> Vec<DiffTable> {
    let mut out = vec![DiffTable::ZERO; rows];
    for (n, t) in out.iter_mut().enumerate() {
        for k in 0..=m {
            for j in 0..=k {
                let Some(r) = shifted(n, j, forward) else { continue };
                let c = diff_sign(k, j, forward) * binom(k, j);
                for i in 0..=m - k {
                    t.0[k][i] += jets[r][i] * c;
                }
            }
        }
    }
    out
}

/// `F(n, λ) = φ(|λ|(d + 2n))` for a symbol `φ` given with σ-derivatives.
pub struct KernelSource {
    d: usize,
    phi: SymbolFn,
}

impl KernelSource {
    pub fn new(d: usize, phi: SymbolFn) -> Self {
        Self { d, phi }
    }

    fn sigma_jets(&self, a: f64, count: usize, order: usize) -> Vec<Jet> {
        (0..count).map(|r| (self.phi)(a * (self.d + 2 * r) as f64, order)).collect()
    }

    fn lambda_jet(&self, sg: f64, r: usize, s: &Jet, order: usize) -> Jet {
        let c = sg * (self.d + 2 * r) as f64;
        let mut out = ZERO_JET;
        let mut p = 1.0;
        for i in 0..=order {
            out[i] = s[i] * p;
            p *= c;
        }
        out
    }
}

struct TaylorTables {
    /// `M[k][p] = Σ_j s_j C(k,j) j^p` for each direction.
    moments: [[[f64; JET_LEN]; JET_LEN]; 2],
    /// `(∓2)^p`: the row step in σ is `−2|λ|` backward, `+2|λ|` forward.
    step_pow: [[f64; JET_LEN]; 2],
    fact: [f64; JET_LEN],
}

fn binom_table() -> &'static [[f64; JET_LEN + 1]; JET_LEN + 1] {
    static CELL: std::sync::OnceLock<[[f64; JET_LEN + 1]; JET_LEN + 1]> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let mut t = [[0.0; JET_LEN + 1]; JET_LEN + 1];
        for (n, row) in t.iter_mut().enumerate() {
            for (k, v) in row.iter_mut().enumerate() {
                *v = binom(n, k);
            }
        }
        t
    })
}

fn taylor_tables() -> &'static TaylorTables {
    static CELL: std::sync::OnceLock<TaylorTables> = std::sync::OnceLock::new();
    CELL.get_or_init(|| {
        let mut moments = [[[0.0; JET_LEN]; JET_LEN]; 2];
        for (dir, forward) in [false, true].into_iter().enumerate() {
            for k in 0..JET_LEN {
                for p in 0..JET_LEN {
                    moments[dir][k][p] = (0..=k)
                        .map(|j| diff_sign(k, j, forward) * binom(k, j) * (j as f64).powi(p as i32))
                        .sum();
                }
            }
        }
        let mut fact = [1.0; JET_LEN];
        let mut step_pow = [[1.0; JET_LEN]; 2];
        for p in 1..JET_LEN {
            fact[p] = fact[p - 1] * p as f64;
            step_pow[0][p] = step_pow[0][p - 1] * -2.0;
            step_pow[1][p] = step_pow[1][p - 1] * 2.0;
        }
        TaylorTables { moments, step_pow, fact }
    })
}

impl CoeffSource for KernelSource {
    fn d(&self) -> usize {
        self.d
    }

    fn max_order(&self) -> usize {
        MAX_ORDER
    }

    fn jets(&self, lambda: f64, rows: usize, order: usize) -> Vec<Jet> {
        let a = lambda.abs();
        let sg = lambda.signum();
        self.sigma_jets(a, rows, order)
            .iter()
            .enumerate()
            .map(|(r, s)| self.lambda_jet(sg, r, s, order))
            .collect()
    }

    fn tables(&self, lambda: f64, rows: usize, m: usize) -> Vec<DiffTable> {
        let forward = lambda < 0.0;
        let a = lambda.abs();
        let sg = lambda.signum();
        let count = if forward { rows + m } else { rows };
        let order = if m == 0 { 0 } else { MAX_ORDER };
        let sj = self.sigma_jets(a, count, order);
        let lj: Vec<Jet> = sj.iter().enumerate().map(|(r, s)| self.lambda_jet(sg, r, s, order)).collect();
        let mut out = naive_tables(&lj, rows, m, forward);
        if m == 0 {
            return out;
        }
        let tt = taylor_tables();
        let dir = usize::from(forward);
        let eps = f64::EPSILON;
        let bin = binom_table();
        let mut apow = [1.0; JET_LEN];
        for q in 1..JET_LEN {
            apow[q] = apow[q - 1] * a;
        }
        for (n, t) in out.iter_mut().enumerate() {
            let c = (self.d + 2 * n) as f64;
            let mut cpow = [1.0; JET_LEN];
            for q in 1..JET_LEN {
                cpow[q] = cpow[q - 1] * c;
            }
            let phi = &sj[n];
            for k in 1..=m {
                if !forward && n < k {
                    continue;
                }
                for i in 0..=m - k {
                    let p_top = MAX_ORDER - i;
                    if p_top < k + 1 {
                        continue;
                    }
                    let mut naive_err = 0.0;
                    for j in 0..=k {
                        if let Some(r) = shifted(n, j, forward) {
                            naive_err += bin[k][j] * lj[r][i].norm();
                        }
                    }
                    naive_err *= 4.0 * eps;
                    let mut sum = C64::new(0.0, 0.0);
                    let mut abs_sum = 0.0;
                    let mut last = 0.0;
                    let mut before_last = 0.0;
                    let sgi = if i % 2 == 1 { sg } else { 1.0 };
                    for p in k..=p_top {
                        let base = tt.moments[dir][k][p] * tt.step_pow[dir][p] / tt.fact[p];
                        let mut term = C64::new(0.0, 0.0);
                        for l in 0..=i {
                            let q = i - l;
                            if q > p {
                                continue;
                            }
                            let ff = tt.fact[p] / tt.fact[p - q];
                            term += phi[p + l] * (bin[i][l] * ff * apow[p - q] * cpow[l]);
                        }
                        let term = term * (base * sgi);
                        sum += term;
                        abs_sum += term.norm();
                        before_last = last;
                        last = term.norm();
                    }
                    let taylor_err = last.max(before_last) + 4.0 * eps * abs_sum;
                    if taylor_err < naive_err && sum.re.is_finite() && sum.im.is_finite() {
                        t.0[k][i] = sum;
                    }
                }
            }
        }
        out
    }
}

/// Pointwise product of two sources.
pub struct ProductSource {
    a: Arc<dyn CoeffSource>,
    b: Arc<dyn CoeffSource>,
}

impl ProductSource {
    pub fn new(a: Arc<dyn CoeffSource>, b: Arc<dyn CoeffSource>) -> Self {
        assert_eq!(a.d(), b.d(), "sources of different dimension");
        Self { a, b }
    }
}

fn leibniz(x: &Jet, y: &Jet, order: usize) -> Jet {
    let mut out = ZERO_JET;
    for i in 0..=order {
        for l in 0..=i {
            out[i] += x[l] * y[i - l] * binom(i, l);
        }
    }
    out
}

impl CoeffSource for ProductSource {
    fn d(&self) -> usize {
        self.a.d()
    }

    fn max_order(&self) -> usize {
        self.a.max_order().min(self.b.max_order())
    }

    fn jets(&self, lambda: f64, rows: usize, order: usize) -> Vec<Jet> {
        let x = self.a.jets(lambda, rows, order);
        let y = self.b.jets(lambda, rows, order);
        x.iter().zip(&y).map(|(p, q)| leibniz(p, q, order)).collect()
    }

    fn tables(&self, lambda: f64, rows: usize, m: usize) -> Vec<DiffTable> {
        let forward = lambda < 0.0;
        let ta = self.a.tables(lambda, rows, m);
        let tb = self.b.tables(lambda, if forward { rows + m } else { rows }, m);
        let mut out = vec![DiffTable::ZERO; rows];
        for (n, t) in out.iter_mut().enumerate() {
            for k in 0..=m {
                for j in 0..=k {
                    let Some(r) = shifted(n, j, forward) else { continue };
                    let ckj = binom(k, j);
                    for i in 0..=m - k {
                        for l in 0..=i {
                            t.0[k][i] += ta[n].0[j][l] * tb[r].0[k - j][i - l] * (ckj * binom(i, l));
                        }
                    }
                }
            }
        }
        out
    }
}

pub struct SumSource {
    parts: Vec<Arc<dyn CoeffSource>>,
}

impl SumSource {
    pub fn new(parts: Vec<Arc<dyn CoeffSource>>) -> Self {
        assert!(!parts.is_empty(), "empty sum of sources");
        Self { parts }
    }
}

impl CoeffSource for SumSource {
    fn d(&self) -> usize {
        self.parts[0].d()
    }

    fn max_order(&self) -> usize {
        self.parts.iter().map(|p| p.max_order()).min().unwrap_or(0)
    }

    fn jets(&self, lambda: f64, rows: usize, order: usize) -> Vec<Jet> {
        let mut out = vec![ZERO_JET; rows];
        for p in &self.parts {
            for (o, j) in out.iter_mut().zip(p.jets(lambda, rows, order)) {
                for i in 0..=order {
                    o[i] += j[i];
                }
            }
        }
        out
    }

    fn tables(&self, lambda: f64, rows: usize, m: usize) -> Vec<DiffTable> {
        let mut out = vec![DiffTable::ZERO; rows];
        for p in &self.parts {
            for (o, t) in out.iter_mut().zip(p.tables(lambda, rows, m)) {
                for k in 0..=m {
                    for i in 0..=m - k {
                        o.0[k][i] += t.0[k][i];
                    }
                }
            }
        }
        out
    }
}

/// `G(n, λ) = F(n, t²λ)`.
pub struct DilatedSource {
    inner: Arc<dyn CoeffSource>,
    t2: f64,
}

impl DilatedSource {
    pub fn new(inner: Arc<dyn CoeffSource>, t2: f64) -> Self {
        Self { inner, t2 }
    }
}

impl CoeffSource for DilatedSource {
    fn d(&self) -> usize {
        self.inner.d()
    }

    fn max_order(&self) -> usize {
        self.inner.max_order()
    }

    fn jets(&self, lambda: f64, rows: usize, order: usize) -> Vec<Jet> {
        let mut v = self.inner.jets(self.t2 * lambda, rows, order);
        for j in v.iter_mut() {
            for (i, x) in j.iter_mut().enumerate().take(order + 1) {
                *x *= self.t2.powi(i as i32);
            }
        }
        v
    }

    fn tables(&self, lambda: f64, rows: usize, m: usize) -> Vec<DiffTable> {
        let mut v = self.inner.tables(self.t2 * lambda, rows, m);
        for t in v.iter_mut() {
            for k in 0..=m {
                for i in 0..=m - k {
                    t.0[k][i] *= self.t2.powi(i as i32);
                }
            }
        }
        v
    }
}

/// Coefficients of `Z·G^{−1}F` with `Z = is − ¼|z|²`:
/// `λ > 0`: `∂_λF(n) − (n/λ)(F(n) − F(n−1))`,
/// `λ < 0`: `∂_λF(n) − ((d+n)/λ)(F(n+1) − F(n))`.
pub struct ZSource {
    inner: Arc<dyn CoeffSource>,
}

impl ZSource {
    /// `None` when the inner source has no derivative to spare.
    pub fn new(inner: Arc<dyn CoeffSource>) -> Option<Self> {
        (inner.max_order() >= 1).then_some(Self { inner })
    }
}

/// One application of `Z` to difference tables, lowering the order by one.
pub fn apply_z_table(t: &DiffTable, d: usize, n: usize, lambda: f64, m: usize) -> DiffTable {
    let forward = lambda < 0.0;
    // r_l = ∂^l (1/λ)
    let mut r = [0.0; JET_LEN];
    let mut f = 1.0;
    for (l, rl) in r.iter_mut().enumerate().take(m + 1) {
        if l > 0 {
            f *= -(l as f64);
        }
        *rl = f / lambda.powi(l as i32 + 1);
    }
    let mut out = DiffTable::ZERO;
    for k in 0..=m {
        let (a, b) = if forward {
            ((d + n + k) as f64, k as f64)
        } else {
            (n as f64 - k as f64, k as f64)
        };
        for i in 0..=m - k {
            let mut acc = t.0[k][i + 1];
            for l in 0..=i {
                acc -= (t.0[k + 1][i - l] * a + t.0[k][i - l] * b) * (binom(i, l) * r[l]);
            }
            out.0[k][i] = acc;
        }
    }
    out
}

impl CoeffSource for ZSource {
    fn d(&self) -> usize {
        self.inner.d()
    }

    fn max_order(&self) -> usize {
        self.inner.max_order() - 1
    }

    fn tables(&self, lambda: f64, rows: usize, m: usize) -> Vec<DiffTable> {
        let d = self.inner.d();
        self.inner
            .tables(lambda, rows, m + 1)
            .iter()
            .enumerate()
            .map(|(n, t)| apply_z_table(t, d, n, lambda, m))
            .collect()
    }
}

/// Coefficients from a closure `(n, λ, order) ↦ jet`; differences are summed
/// directly.
pub struct FnSource {
    d: usize,
    max_order: usize,
    f: CoeffFn,
}

impl FnSource {
    pub fn new(d: usize, max_order: usize, f: CoeffFn) -> Self {
        Self { d, max_order: max_order.min(MAX_ORDER), f }
    }
}

impl CoeffSource for FnSource {
    fn d(&self) -> usize {
        self.d
    }

    fn max_order(&self) -> usize {
        self.max_order
    }

    fn jets(&self, lambda: f64, rows: usize, order: usize) -> Vec<Jet> {
        (0..rows).map(|n| (self.f)(n, lambda, order)).collect()
    }

    fn tables(&self, lambda: f64, rows: usize, m: usize) -> Vec<DiffTable> {
        let forward = lambda < 0.0;
        let count = if forward { rows + m } else { rows };
        let jets: Vec<Jet> = (0..count).map(|n| (self.f)(n, lambda, m)).collect();
        naive_tables(&jets, rows, m, forward)
    }
}
