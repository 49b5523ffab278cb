use std::f64::consts::PI;

use proptest::prelude::*;

use super::*;
use crate::biradial::GridConfig;
use crate::group::MultiIndex;

fn grid(d: usize) -> Arc<SpectralGrid> {
    Arc::new(SpectralGrid::with_defaults(d).unwrap())
}

fn small_grid(d: usize) -> Arc<SpectralGrid> {
    let c = GridConfig { lambda_min: 0.05, lambda_max: 20.0, nodes_per_sign: 40, sigma_max: 20.0, n_min: 8, ..GridConfig::new(d) };
    Arc::new(SpectralGrid::new(c).unwrap())
}

fn heat(g: &Arc<SpectralGrid>) -> BiradialFunction {
    kernel_coeffs(&symbol("heat", &[]).unwrap(), g).unwrap()
}

fn field(g: &Arc<SpectralGrid>, a: f64, b: f64, c: f64) -> BiradialFunction {
    BiradialFunction::from_fn(g.clone(), |_, n, l| {
        let e = (-a * l.abs() * (1 + 2 * n) as f64 - c * l * l).exp();
        C64::new(e * (b * l).cos(), e * (b * n as f64).sin())
    })
    .unwrap()
}

#[test]
fn evolve_at_time_zero_is_identity() {
    let g = small_grid(1);
    let u = field(&g, 0.3, 1.0, 0.1);
    assert_eq!(evolve(&u, 0.0, 1.0).unwrap().coeffs(), u.coeffs());
    assert!(evolve(&u, 1.0, 0.0).is_err());
    assert!(EvolutionState::new(u, -1.0).is_err());
}

#[test]
fn flow_is_unitary_and_a_group() {
    let g = grid(1);
    let u = heat(&g);
    for nu in [0.5, 1.0, 2.0] {
        let rep = flow_report(&u, nu, &[(1.0, 2.5), (30.0, 70.0)]).unwrap();
        assert!(rep.pass, "{}", rep.to_json());
    }
}

#[test]
fn evolution_state_tracks_time() {
    let g = small_grid(1);
    let u0 = field(&g, 0.2, 0.5, 0.0);
    let st = EvolutionState::new(u0.clone(), 1.5).unwrap().advance(0.5).unwrap().advance(1.25).unwrap();
    assert_eq!(st.t(), 1.75);
    let direct = evolve(&u0, 1.75, 1.5).unwrap();
    assert!(difference_norm(st.u(), &direct).unwrap() < 1e-13 * u0.plancherel_norm());
}

#[test]
fn bessel_potentials() {
    let g = small_grid(2);
    let f = field(&g, 0.4, 0.7, 0.05);
    assert_eq!(bessel(&f, 0.0).unwrap().coeffs(), f.coeffs());
    let back = bessel(&bessel(&f, 1.7).unwrap(), -1.7).unwrap();
    assert!(difference_norm(&back, &f).unwrap() < 1e-12 * f.plancherel_norm());
    let two = bessel(&f, 2.0).unwrap();
    for j in [0, 17, 60] {
        let l = g.lambda(j).abs();
        for n in 0..4 {
            let want = f.coeff(j, n) * (1.0 + l * (2 + 2 * n) as f64);
            assert!((two.coeff(j, n) - want).norm() <= 1e-13 * want.norm());
        }
    }
    // diagonal symbols commute
    let a = evolve(&bessel(&f, -1.0).unwrap(), 3.0, 0.5).unwrap();
    let b = bessel(&evolve(&f, 3.0, 0.5).unwrap(), -1.0).unwrap();
    assert!(difference_norm(&a, &b).unwrap() < 1e-14 * f.plancherel_norm());
}

#[test]
fn sobolev_identity_single_mode() {
    let c = GridConfig { lambda_min: 0.25, lambda_max: 8.0, nodes_per_sign: 41, ..GridConfig::new(1) };
    let g = Arc::new(SpectralGrid::new(c).unwrap());
    let j = g.node_index(2.0).unwrap();
    let amp = C64::new(0.6, -0.8);
    let f = BiradialFunction::from_fn(g.clone(), |k, n, _| if k == j && n == 1 { amp } else { C64::new(0.0, 0.0) }).unwrap();
    // interior trapezoid weight in ln λ: h·λ, with the (2π)^{−2}|λ| Plancherel density
    let h = 32f64.ln() / 40.0;
    let w = h * 2.0 * 2.0 / (4.0 * PI * PI);
    let rep = sobolev_identity_p2(&f).unwrap();
    let want = w * 7.0 * amp.norm_sqr();
    assert!((rep.metric("lhs").unwrap().value / want - 1.0).abs() < 1e-12);
    assert!((rep.metric("rhs").unwrap().value / want - 1.0).abs() < 1e-12);
    assert!(rep.pass);
    let zero = sobolev_identity_p2(&BiradialFunction::zeros(g)).unwrap();
    assert!(zero.pass && zero.metric("lhs").unwrap().value == 0.0);
}

#[test]
fn littlewood_paley_constant() {
    assert!((lp_constant(1).sqrt() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-15);
    assert!((lp_constant(2) - 6.0 / 32.0).abs() < 1e-15);
    let g = grid(1);
    let f = heat(&g);
    let rep = lp_ratio_probe(&f, &[1, 2, 3]).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
    let u = evolve(&f, 5.0, 1.0).unwrap();
    let a = lp_norm_p2_quadrature(&f, 2).unwrap();
    let b = lp_norm_p2_quadrature(&u, 2).unwrap();
    assert!((a / b - 1.0).abs() < 1e-6);
    assert_eq!(lp_norm_p2(&BiradialFunction::zeros(g.clone()), 1).unwrap(), 0.0);
    assert!(lp_norm_p2(&f, 0).is_err());
}

#[test]
fn miyachi_at_p2_is_conservation() {
    let g = grid(1);
    let rep = miyachi_probe(1.0, "2", &[1.0, 10.0, 100.0], &g).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
    assert!(parse_p_label("bmo").unwrap().is_none());
    assert!(parse_p_label("-1").is_err());
    assert!(parse_p_label("one").is_err());
}

#[test]
fn horizontal_ratio_of_biradial_gaussian() {
    let g = grid(1);
    let probe = RatioProbe { sweep: vec![1.0, 2.0], ..RatioProbe::default() };
    let words = vec![MultiIndex::new(1, vec![1]).unwrap(), MultiIndex::new(1, vec![3]).unwrap()];
    let rep = probe.run(&gaussian_field(2.0), &words, &g).unwrap();
    assert!(rep.pass, "{}", rep.to_json());
    // ‖X f‖ = ‖Y f‖ for biradial f, so ‖X f‖² is half of ⟨f, −Δf⟩
    let r = rep.metric("R[X1] t=1").unwrap().value;
    assert!((r - 0.5f64.sqrt()).abs() < 1e-9, "{r}");
    assert!(RatioProbe::default().run(&gaussian_field(1.0), &words, &grid(2)).is_err());
}

#[test]
fn ratio_probe_rejects_slow_decay() {
    let slow = crate::group::SmoothField::new(|p: &crate::group::Point| C64::new(1.0 / (1.0 + p.z_norm_sq() + p.s.abs()), 0.0));
    let words = vec![MultiIndex::new(1, vec![1]).unwrap()];
    assert!(horizontal_ratio(&slow, &words, &grid(1)).is_err());
}

#[test]
fn report_schema() {
    let mut rep = ProbeReport::new("demo");
    assert!(rep.check("a", 0.5, 1.0));
    rep.info("b", 3.0);
    rep.fit(ExponentFit { slope: 2.0, intercept: 1.0, r2: 0.99 });
    assert!(rep.pass);
    assert!(!rep.check("c", f64::NAN, 1.0));
    assert!(!rep.pass);
    let v: serde_json::Value = serde_json::from_str(&rep.to_json()).unwrap();
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(|k| k.as_str()).collect();
    keys.sort_unstable();
    assert_eq!(keys, ["exponent_fits", "metrics", "name", "pass"]);
    assert_eq!(v["metrics"][1]["tolerance"], serde_json::Value::Null);
    assert_eq!(v["exponent_fits"][0].as_object().unwrap().len(), 2);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn sobolev_identity_on_random_fields(a in 0.05f64..2.0, b in -3.0f64..3.0, c in 0.0f64..0.5) {
        let g = small_grid(1);
        let rep = sobolev_identity_p2(&field(&g, a, b, c)).unwrap();
        prop_assert!(rep.pass, "{}", rep.to_json());
    }

    #[test]
    fn lp_ratio_is_independent_of_the_field(a in 0.1f64..2.0, b in -3.0f64..3.0, n in 1u32..4) {
        let g = small_grid(1);
        let f = field(&g, a, b, 0.0);
        let want = lp_constant(n).sqrt();
        let r = lp_norm_p2_quadrature(&f, n).unwrap() / f.plancherel_norm();
        prop_assert!((r / want - 1.0).abs() < 1e-6, "{}", r / want);
    }
}

#[test]
fn quick_suites_pass_and_keep_order() {
    let ctx = suites::SuiteContext::new(GridConfig::new(1));
    let names: Vec<String> = ["taylor_remainder", "laguerre_orthogonality", "hermite_orthonormality", "level_trace", "commutator_table", "swap_identities", "kernel_l2_norm"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let reps = suites::run_suites(&names, &ctx, 2).unwrap();
    for (n, r) in names.iter().zip(&reps) {
        assert_eq!(&r.name, n);
        assert!(r.pass, "{}", r.to_json());
    }
    assert!(suites::suite_names().len() >= 12);
    assert!(suites::run_suites(&["nope".to_string()], &ctx, 1).is_err());
    let mut strict = ctx.clone();
    strict.tolerances.insert("taylor_remainder.polynomial_remainder".into(), 0.0);
    assert!(!suites::run_suite("taylor_remainder", &strict).unwrap().pass);
}

#[test]
fn suite_errors_become_failing_reports() {
    let ctx = suites::SuiteContext::new(GridConfig::new(3));
    let rep = suites::run_suite("kernel_l2_norm", &ctx).unwrap();
    assert!(!rep.pass);
    assert!(rep.metrics[0].key.starts_with("error"));
}
