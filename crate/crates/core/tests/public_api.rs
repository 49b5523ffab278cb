use std::sync::Arc;

use heisen_core::algebra::{parse_expression, AlgebraElement};
use heisen_core::biradial::{GridConfig, SpectralGrid};
use heisen_core::group::{dilate, group_mul, Point};
use heisen_core::multipliers::{apply, kernel_at, kernel_coeffs, parse_symbol};
use heisen_core::probes::{difference_norm, evolve};
use heisen_core::HeisenError;
use proptest::prelude::*;

fn small_grid() -> Arc<SpectralGrid> {
    let c = GridConfig { lambda_min: 0.05, lambda_max: 20.0, nodes_per_sign: 40, sigma_max: 20.0, n_min: 8, ..GridConfig::new(1) };
    Arc::new(SpectralGrid::new(c).unwrap())
}

#[test]
fn heat_symbols_compose_as_a_semigroup() {
    let g = small_grid();
    let one = parse_symbol("heat(t=0.5)").unwrap();
    let two = parse_symbol("heat(t=1)").unwrap();
    let f = kernel_coeffs(&parse_symbol("bessel(r=6)").unwrap(), &g).unwrap();
    let a = apply(&one, &apply(&one, &f).unwrap()).unwrap();
    let b = apply(&two, &f).unwrap();
    assert!(difference_norm(&a, &b).unwrap() <= 1e-14 * b.plancherel_norm());
}

#[test]
fn propagator_preserves_the_norm_and_inverts() {
    let g = small_grid();
    let u0 = kernel_coeffs(&parse_symbol("heat").unwrap(), &g).unwrap();
    let u = evolve(&u0, 12.0, 0.5).unwrap();
    assert!((u.plancherel_norm() / u0.plancherel_norm() - 1.0).abs() < 1e-13);
    assert!(difference_norm(&evolve(&u, -12.0, 0.5).unwrap(), &u0).unwrap() < 1e-13 * u0.plancherel_norm());
}

#[test]
fn identity_kernel_is_refused_pointwise() {
    let g = small_grid();
    let r = kernel_at(&parse_symbol("identity").unwrap(), &g, &Point::zero(1));
    assert!(matches!(r, Err(HeisenError::TailMass { .. })));
}

#[test]
fn commutators_from_text() {
    let e = parse_expression("X1*Y1 - Y1*X1", None).unwrap();
    assert_eq!(e, -&AlgebraElement::s(1));
    assert_eq!(e.to_string(), "-S");
    let lhs = parse_expression("Delta*X1 - X1*Delta", Some(1)).unwrap();
    assert_eq!(lhs, parse_expression("2*Y1*S", Some(1)).unwrap());
}

fn point() -> impl Strategy<Value = Point> {
    (-3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, -5.0f64..5.0)
        .prop_map(|(x1, x2, y1, y2, s)| Point::new(vec![x1, x2], vec![y1, y2], s).unwrap())
}

fn close(p: &Point, q: &Point) -> bool {
    let c = |a: f64, b: f64| (a - b).abs() <= 1e-12 * (1.0 + a.abs());
    p.x.iter().zip(&q.x).all(|(a, b)| c(*a, *b)) && p.y.iter().zip(&q.y).all(|(a, b)| c(*a, *b)) && c(p.s, q.s)
}

proptest! {
    #[test]
    fn dilations_are_automorphisms(p in point(), q in point(), t in 0.1f64..10.0) {
        let lhs = dilate(&group_mul(&p, &q).unwrap(), t).unwrap();
        let rhs = group_mul(&dilate(&p, t).unwrap(), &dilate(&q, t).unwrap()).unwrap();
        prop_assert!(close(&lhs, &rhs));
    }

    #[test]
    fn normal_forms_reparse(a in -5i64..5, b in -5i64..5, c in -5i64..5) {
        let text = format!("{a}*X1*Y1*X1 + {b}*S*Y1 + {c}*Delta");
        let e = parse_expression(&text, Some(1)).unwrap();
        prop_assert_eq!(parse_expression(&e.to_string(), Some(1)).unwrap(), e);
    }
}
