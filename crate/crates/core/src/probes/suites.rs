//! Named verification suites, each producing one [`ProbeReport`].

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::*;
use crate::algebra::{commutator, verify_swap_identities, AlgebraElement, DEFAULT_SWAP_BOUND};
use crate::biradial::{analyze, analyze_unchecked, BiradialInput, GridConfig};
use crate::group::{dilate, taylor_remainder, MultiIndex, SmoothField};
use crate::multipliers::{fit_line, parse_symbol};
use crate::special::{
    hermite_fn_1d, hermite_poly_normalized, level_trace, level_trace_closed_form, ln_gamma, LaguerreEvaluator, QuadratureRule,
};

/// Shared inputs of the suites.
#[derive(Clone, Debug)]
pub struct SuiteContext {
    pub grid: GridConfig,
    pub seed: u64,
    /// Exponents of the flow.
    pub nu: Vec<f64>,
    /// Times of the moment-growth fits.
    pub growth_times: Vec<f64>,
    pub growth_orders: Vec<usize>,
    /// Replacement tolerances keyed by `suite.metric`.
    pub tolerances: BTreeMap<String, f64>,
}

impl SuiteContext {
    pub fn new(grid: GridConfig) -> Self {
        Self {
            grid,
            seed: 42,
            nu: vec![0.5, 1.0, 2.0],
            growth_times: vec![1.0, 2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
            growth_orders: vec![1, 2],
            tolerances: BTreeMap::new(),
        }
    }

    fn grid(&self) -> Result<Arc<SpectralGrid>> {
        Ok(Arc::new(SpectralGrid::new(self.grid.clone())?))
    }

    fn grid_d(&self, d: usize) -> Result<Arc<SpectralGrid>> {
        Ok(Arc::new(SpectralGrid::new(GridConfig { d, ..self.grid.clone() })?))
    }

    fn rng(&self, salt: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
    }
}

/// Report builder honouring tolerance overrides.
struct Run<'a> {
    ctx: &'a SuiteContext,
    rep: ProbeReport,
}

impl<'a> Run<'a> {
    fn new(ctx: &'a SuiteContext, name: &str) -> Self {
        Self { ctx, rep: ProbeReport::new(name) }
    }

    fn check(&mut self, key: impl Into<String>, value: f64, tol: f64) {
        let key = key.into();
        let tol = self.ctx.tolerances.get(&format!("{}.{key}", self.rep.name)).copied().unwrap_or(tol);
        self.rep.check(key, value, tol);
    }

    fn done(self) -> Result<ProbeReport> {
        Ok(self.rep)
    }
}

type SuiteFn = fn(&SuiteContext) -> Result<ProbeReport>;

pub struct Suite {
    pub name: &'static str,
    pub module: &'static str,
    run: SuiteFn,
}

pub fn suites() -> &'static [Suite] {
    const S: &[Suite] = &[
        Suite { name: "laguerre_orthogonality", module: "special_fn", run: laguerre_orthogonality },
        Suite { name: "hermite_orthonormality", module: "special_fn", run: hermite_orthonormality },
        Suite { name: "level_trace", module: "special_fn", run: level_trace_suite },
        Suite { name: "biradial_round_trip", module: "biradial", run: round_trip },
        Suite { name: "biradial_plancherel", module: "biradial", run: plancherel },
        Suite { name: "z_recurrence", module: "biradial", run: z_recurrence },
        Suite { name: "dilation_identity", module: "biradial", run: dilation_identity },
        Suite { name: "kernel_l2_norm", module: "multipliers", run: kernel_l2 },
        Suite { name: "moment_growth", module: "multipliers", run: moment_growth },
        Suite { name: "schrodinger_flow", module: "probes", run: schrodinger_flow },
        Suite { name: "sobolev_p2", module: "probes", run: sobolev_p2 },
        Suite { name: "littlewood_paley_p2", module: "probes", run: littlewood_paley },
        Suite { name: "horizontal_ratio", module: "probes", run: horizontal_ratio },
        Suite { name: "miyachi_p2", module: "probes", run: miyachi_p2 },
        Suite { name: "commutator_table", module: "algebra", run: commutator_table },
        Suite { name: "swap_identities", module: "algebra", run: swap_identities },
        Suite { name: "taylor_remainder", module: "group", run: taylor_suite },
    ];
    S
}

pub fn suite_names() -> Vec<&'static str> {
    suites().iter().map(|s| s.name).collect()
}

/// Runs one suite; a computation error becomes a failing report.
pub fn run_suite(name: &str, ctx: &SuiteContext) -> Result<ProbeReport> {
    let suite = suites()
        .iter()
        .find(|s| s.name == name)
        .ok_or_else(|| HeisenError::InvalidArgument(format!("unknown suite `{name}`")))?;
    Ok((suite.run)(ctx).unwrap_or_else(|e| {
        let mut rep = ProbeReport::new(name);
        rep.error("error", &e);
        rep
    }))
}

/// Runs the named suites (all when `names` is empty) on up to `jobs` threads;
/// reports come back in the order requested.
pub fn run_suites(names: &[String], ctx: &SuiteContext, jobs: usize) -> Result<Vec<ProbeReport>> {
    let names: Vec<String> =
        if names.is_empty() { suite_names().into_iter().map(String::from).collect() } else { names.to_vec() };
    for n in &names {
        if !suites().iter().any(|s| s.name == n) {
            return Err(HeisenError::InvalidArgument(format!("unknown suite `{n}`")));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| HeisenError::InvalidArgument(e.to_string()))?;
    pool.install(|| names.par_iter().map(|n| run_suite(n, ctx)).collect())
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Smooth coefficient field `Σ_k c_k e^{−a_k σ − b_k λ²}` with random parameters.
pub fn random_field(grid: &Arc<SpectralGrid>, rng: &mut impl Rng) -> Result<BiradialFunction> {
    let d = grid.d();
    let parts: Vec<(C64, f64, f64)> = (0..3)
        .map(|_| {
            let c = C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (c, rng.gen_range(0.2..2.0), rng.gen_range(0.0..0.3))
        })
        .collect();
    BiradialFunction::from_fn(grid.clone(), |_, n, l| {
        let sigma = l.abs() * (d + 2 * n) as f64;
        parts.iter().map(|(c, a, b)| c * (-a * sigma - b * l * l).exp()).sum()
    })
}

/// [`random_field`] drawn from a generator seeded with `seed`.
pub fn seeded_field(grid: &Arc<SpectralGrid>, seed: u64) -> Result<BiradialFunction> {
    random_field(grid, &mut ChaCha8Rng::seed_from_u64(seed))
}

fn laguerre_orthogonality(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "laguerre_orthogonality");
    for d in 1..=3usize {
        let ev = LaguerreEvaluator::for_dimension(d);
        let rule = QuadratureRule::gauss_laguerre(32, ev.alpha())?;
        let vals: Vec<Vec<f64>> = rule.nodes.iter().map(|&t| ev.all(20, t)).collect();
        let mut worst = 0.0f64;
        for n in 0..=20 {
            for m in 0..=n {
                let ip: f64 = rule.weights.iter().zip(&vals).map(|(w, v)| w * v[n] * v[m]).sum();
                let want = if n == m { ev.norm_sq(n) } else { 0.0 };
                worst = worst.max((ip - want).abs() / (ev.norm_sq(n) * ev.norm_sq(m)).sqrt());
            }
        }
        run.check(format!("relative_error_d{d}"), worst, 1e-10);
    }
    run.done()
}

fn hermite_orthonormality(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "hermite_orthonormality");
    let rule = QuadratureRule::gauss_hermite(48)?;
    // h_a h_b = p_a p_b e^{−q²}
    let vals: Vec<Vec<f64>> = rule.nodes.iter().map(|&q| hermite_poly_normalized(20, q)).collect();
    let mut worst = 0.0f64;
    for a in 0..=20 {
        for b in 0..=a {
            let ip: f64 = rule.weights.iter().zip(&vals).map(|(w, p)| w * p[a] * p[b]).sum();
            worst = worst.max((ip - f64::from(a == b)).abs());
        }
    }
    run.check("max_error", worst, 1e-10);
    let q = 0.37f64;
    let p = hermite_poly_normalized(5, q);
    let direct = (0..=5).map(|m| (hermite_fn_1d(m, q) - p[m] * (-0.5 * q * q).exp()).abs()).fold(0.0, f64::max);
    run.check("function_consistency", direct, 1e-14);
    run.done()
}

fn level_trace_suite(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "level_trace");
    let mut rng = ctx.rng(3);
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let l = rng.gen_range(0.3..3.0) * if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
        let v = Point::new(vec![rng.gen_range(-1.5..1.5)], vec![rng.gen_range(-1.5..1.5)], rng.gen_range(-2.0..2.0))?;
        for n in 0..=6 {
            let a = level_trace(&v, l, n)?;
            let b = level_trace_closed_form(&v, l, n)?;
            worst = worst.max((a - b).norm() / b.norm().max(1e-300));
        }
    }
    run.check("relative_error", worst, 1e-6);
    run.done()
}

fn round_trip(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "biradial_round_trip");
    let g = ctx.grid()?;
    let f = BiradialFunction::from_fn(g.clone(), |_, n, l| {
        if n < 4 {
            C64::new((-l * l).exp() * 0.5f64.powi(n as i32), 0.2 * l * (-l * l).exp())
        } else {
            C64::new(0.0, 0.0)
        }
    })?;
    let back = analyze(&f.to_input(), &g)?;
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for j in 0..g.len() {
        for n in 0..8.min(g.n_top(j) + 1) {
            scale = scale.max(f.coeff(j, n).norm());
            worst = worst.max((back.coeff(j, n) - f.coeff(j, n)).norm());
        }
    }
    run.check("coefficient_recovery", worst / scale, 1e-8);
    run.done()
}

fn plancherel(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "biradial_plancherel");
    let g = ctx.grid_d(1)?;
    let input =
        BiradialInput::spatial(|rho, s| C64::new((-0.5 * s * s - 0.25 * rho * rho).exp(), 0.0), 14.0, 9.0)
            .with_lambda_band(14.0);
    let f = analyze(&input, &g)?;
    // ∫ e^{−s²} ds · ∫ e^{−|z|²/2} dz
    let want = PI.sqrt() * 2.0 * PI;
    run.check("spectral_vs_position", rel(f.plancherel_norm_sq(), want), 1e-4);
    let mut worst = 0.0f64;
    for (rho, s) in [(0.0, 0.0), (1.3, -0.4), (2.5, 1.7)] {
        let v = f.synthesize_radial(rho, s);
        worst = worst.max((v - (-0.5f64 * s * s - 0.25 * rho * rho).exp()).norm());
    }
    run.check("pointwise_synthesis", worst, 1e-6);
    run.done()
}

/// Partial Fourier transform in `s` of the heat kernel at time 1 and its λ-derivative.
fn heat_hat(d: usize, rho: f64, l: f64) -> (f64, f64) {
    let a = l.abs();
    let e2 = (-2.0 * a).exp();
    let coth = (1.0 + e2) / (1.0 - e2);
    let inv_sinh2 = 4.0 * e2 / (1.0 - e2).powi(2);
    let df = d as f64;
    let log = df * (a.ln() - a - (1.0 - e2).ln()) - df * (2.0 * PI).ln() - 0.25 * a * rho * rho * coth;
    let k = log.exp();
    let dk = l.signum() * k * (df / a - df * coth - 0.25 * rho * rho * (coth - a * inv_sinh2));
    (k, dk)
}

fn z_recurrence(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "z_recurrence");
    let g = ctx.grid()?;
    let d = g.d();
    let zf = kernel_coeffs(&symbol("heat", &[])?, &g)?.mult_by_z()?;
    let oracle = BiradialInput::partial_fourier(
        move |rho, l| {
            let (k, dk) = heat_hat(d, rho, l);
            C64::new(dk - 0.25 * rho * rho * k, 0.0)
        },
        |l: f64| (240.0 * l.abs().tanh() / l.abs()).sqrt() + 4.0,
    );
    let want = analyze_unchecked(&oracle, &g)?;
    for (sign, label) in [(-1.0, "negative"), (1.0, "positive")] {
        let mut worst = 0.0f64;
        let mut scale = 0.0f64;
        for j in (0..g.len()).filter(|&j| g.lambda(j) * sign > 0.0) {
            for n in 0..=g.n_top(j) {
                scale = scale.max(want.coeff(j, n).norm());
                worst = worst.max((zf.coeff(j, n) - want.coeff(j, n)).norm());
            }
        }
        run.check(format!("relative_error_{label}_lambda"), worst / scale, 1e-6);
    }
    run.done()
}

fn dilation_identity(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "dilation_identity");
    let g = ctx.grid()?;
    let q = 2 * g.d() + 2;
    let f = kernel_coeffs(&symbol("heat", &[])?, &g)?;
    let t = 2.0f64;
    let ft = f.dilate_spectral(t)?;
    let mut worst = 0.0f64;
    for v in [(0.7, 0.4, 0.2), (0.0, 1.1, -0.5), (1.5, -0.3, 0.9)] {
        let mut p = Point::zero(g.d());
        p.x[0] = v.0;
        p.y[0] = v.1;
        p.s = v.2;
        let lhs = ft.synthesize(&p)?;
        let rhs = f.synthesize(&dilate(&p, 1.0 / t)?)? / t.powi(q as i32);
        worst = worst.max((lhs - rhs).norm() / rhs.norm());
    }
    run.check("pointwise", worst, 1e-6);
    run.check("norm_scaling", rel(ft.plancherel_norm() / f.plancherel_norm(), t.powf(-(q as f64) / 2.0)), 1e-8);
    let ts = [1.25, 1.5, 2.0, 2.5];
    for m in 1..=2usize {
        let base = f.moment_norm(m)?;
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for &t in &ts {
            xs.push(f64::ln(t));
            ys.push((f.dilate_spectral(t)?.moment_norm(m)? / base).ln());
        }
        let fit = fit_line(&xs, &ys);
        let want = 2.0 * m as f64 - q as f64 / 2.0;
        run.check(format!("moment_exponent_m{m}"), (fit.slope - want).abs(), 1e-3);
        run.rep.fit(fit);
    }
    run.done()
}

fn kernel_l2(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "kernel_l2_norm");
    let g = ctx.grid()?;
    let d = g.d();
    // Σ_n C(d−1+n, n)(d+2n)^{−(d+1)}
    let lattice = match d {
        1 => PI * PI / 8.0,
        2 => PI * PI / 48.0,
        _ => return Err(HeisenError::InvalidArgument("kernel_l2_norm runs for d ≤ 2".into())),
    };
    for r in [4.0, 5.0, 6.0] {
        let r = r + (d - 1) as f64;
        // ∫ σ^d (1+σ)^{−r} dσ = B(d+1, r−d−1)
        let beta = (ln_gamma(d as f64 + 1.0) + ln_gamma(r - d as f64 - 1.0) - ln_gamma(r)).exp();
        let want = (2.0 * lattice * beta / (2.0 * PI).powi(d as i32 + 1)).sqrt();
        let got = l2_kernel_norm(&symbol("bessel", &[("r".into(), r)])?, &g)?;
        run.check(format!("bessel_r{r}"), rel(got.norm, want), 1e-6);
    }
    let id = l2_kernel_norm(&symbol("identity", &[])?, &g)?;
    run.check("identity_flagged_inadmissible", f64::from(id.admissible || id.norm.is_finite()), 0.0);
    run.done()
}

fn moment_growth(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "moment_growth");
    let g = ctx.grid()?;
    let heat = moment_growth_probe(&|_| parse_symbol("heat"), 1, &ctx.growth_times, &g)?;
    run.check("heat_slope", heat.slope.abs(), 0.01);
    run.rep.fit(heat);
    for &nu in &ctx.nu {
        if nu < 1.0 {
            continue;
        }
        for &m in &ctx.growth_orders {
            let fit = high_frequency_growth(nu, m, &ctx.growth_times, &g)?;
            run.check(format!("slope_nu{nu}_m{m}"), fit.slope, 2.0 * m as f64 + 0.1);
            run.rep.fit(fit);
        }
    }
    run.done()
}

fn schrodinger_flow(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "schrodinger_flow");
    let g = ctx.grid()?;
    let u0 = kernel_coeffs(&symbol("heat", &[])?, &g)?;
    for &nu in &ctx.nu {
        let rep = flow_report(&u0, nu, &[(1.0, 2.5), (30.0, 70.0)])?;
        for m in rep.metrics {
            run.check(format!("{}_nu{nu}", m.key), m.value, m.tolerance.unwrap_or(f64::INFINITY));
        }
    }
    run.done()
}

fn sobolev_p2(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "sobolev_p2");
    let g = ctx.grid()?;
    let mut rng = ctx.rng(11);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let rep = sobolev_identity_p2(&random_field(&g, &mut rng)?)?;
        worst = worst.max(rep.metric("relative_deviation").map_or(f64::NAN, |m| m.value));
    }
    run.check("relative_deviation", worst, 1e-10);
    run.done()
}

fn littlewood_paley(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "littlewood_paley_p2");
    let g = ctx.grid()?;
    let mut rng = ctx.rng(13);
    let f = random_field(&g, &mut rng)?;
    let rep = lp_ratio_probe(&f, &[1, 2, 3])?;
    for m in rep.metrics {
        match m.tolerance {
            Some(t) => run.check(m.key, m.value, t),
            None => run.rep.info(m.key, m.value),
        }
    }
    run.done()
}

fn horizontal_ratio(ctx: &SuiteContext) -> Result<ProbeReport> {
    let g = ctx.grid_d(1)?;
    let words: Vec<MultiIndex> = [vec![3], vec![1], vec![2], vec![1, 1], vec![2, 2]]
        .into_iter()
        .map(|w| MultiIndex::new(1, w))
        .collect::<Result<_>>()?;
    let mut run = Run::new(ctx, "horizontal_ratio");
    let rep = RatioProbe::default().run(&gaussian_field(2.0), &words, &g)?;
    for m in rep.metrics {
        match m.tolerance {
            Some(t) => run.check(m.key, m.value, t),
            None => run.rep.info(m.key, m.value),
        }
    }
    run.done()
}

fn miyachi_p2(ctx: &SuiteContext) -> Result<ProbeReport> {
    let g = ctx.grid()?;
    let mut run = Run::new(ctx, "miyachi_p2");
    for &nu in &ctx.nu {
        let rep = miyachi_probe(nu, "2", &[1.0, 10.0, 100.0], &g)?;
        for m in rep.metrics {
            run.check(format!("{}_nu{nu}", m.key), m.value, m.tolerance.unwrap_or(f64::INFINITY));
        }
    }
    run.done()
}

fn commutator_table(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "commutator_table");
    let mut bad = 0usize;
    for d in 1..=3 {
        for i in 1..=d {
            for j in 1..=d {
                let c = commutator(&AlgebraElement::x(d, i), &AlgebraElement::y(d, j));
                let want = if i == j { -&AlgebraElement::s(d) } else { AlgebraElement::zero(d) };
                bad += usize::from(c != want);
            }
            let lap = AlgebraElement::sub_laplacian(d);
            let x = AlgebraElement::x(d, i);
            let lhs = &lap * &x;
            let rhs = &(&x * &lap) + &(&(&AlgebraElement::y(d, i) * &AlgebraElement::s(d)) * &AlgebraElement::integer(d, 2));
            bad += usize::from(lhs != rhs);
        }
    }
    run.check("mismatches", bad as f64, 0.0);
    run.done()
}

fn swap_identities(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "swap_identities");
    let mut bad = 0usize;
    let mut cases = 0usize;
    for d in 1..=2usize {
        let mut words: Vec<Vec<usize>> = (1..=2 * d + 1).map(|i| vec![i]).collect();
        for a in 1..=2 * d {
            for b in 1..=2 * d {
                words.push(vec![a, b]);
            }
        }
        for w in words {
            let idx = MultiIndex::new(d, w)?;
            for n in 0..=DEFAULT_SWAP_BOUND {
                cases += 1;
                bad += usize::from(!verify_swap_identities(n, &idx, DEFAULT_SWAP_BOUND)?.matched());
            }
        }
    }
    run.rep.info("cases", cases as f64);
    run.check("unmatched", bad as f64, 0.0);
    run.done()
}

fn taylor_suite(ctx: &SuiteContext) -> Result<ProbeReport> {
    let mut run = Run::new(ctx, "taylor_remainder");
    let smooth = SmoothField::new(|p: &Point| {
        C64::new((0.3 * p.x[0] - 0.5 * p.y[0] + 0.4 * p.s).exp() + (p.x[0] + p.s).sin(), 0.0)
    });
    let w = Point::new(vec![0.2], vec![-0.1], 0.3)?;
    let eps = [0.08, 0.04, 0.02, 0.01];
    for n in 1..=3usize {
        let mut worst = 0.0f64;
        for v0 in [(1.0, 0.5, 0.3), (-0.4, 0.8, -0.6)] {
            let v0 = Point::new(vec![v0.0], vec![v0.1], v0.2)?;
            let mut xs = Vec::new();
            let mut ys = Vec::new();
            for &e in &eps {
                let (_, r) = taylor_remainder(&dilate(&v0, e)?, n, &smooth, &w)?;
                xs.push(f64::ln(e));
                ys.push(r.norm().ln());
            }
            let fit = fit_line(&xs, &ys);
            worst = worst.max((fit.slope / (n + 1) as f64 - 1.0).abs());
            run.rep.fit(fit);
        }
        run.check(format!("slope_deviation_n{n}"), worst, 0.05);
    }
    // homogeneous polynomials of degree ≤ n are reproduced exactly
    let polys: [(usize, fn(&Point) -> f64); 3] = [
        (1, |p| 2.0 * p.x[0] - p.y[0]),
        (2, |p| p.x[0] * p.y[0] + 3.0 * p.s),
        (3, |p| p.x[0] * p.x[0] * p.y[0] - 3.0 * p.s * p.x[0] + p.y[0].powi(3)),
    ];
    let mut worst = 0.0f64;
    for (deg, poly) in polys {
        let f = SmoothField::new(move |p: &Point| C64::new(poly(p), 0.0));
        for n in deg..=3 {
            for v in [(0.7, -0.2, 0.4), (-1.1, 0.5, -0.9)] {
                let v = Point::new(vec![v.0], vec![v.1], v.2)?;
                worst = worst.max(taylor_remainder(&v, n, &f, &w)?.1.norm());
            }
        }
    }
    run.check("polynomial_remainder", worst, 1e-10);
    run.done()
}
