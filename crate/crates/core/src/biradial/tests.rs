use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;

use super::source::{Jet, ZERO_JET};
use super::*;
use crate::group::{dilate, Point};

fn heat_symbol(t: f64) -> Arc<dyn Fn(f64, usize) -> Jet + Send + Sync> {
    Arc::new(move |s: f64, order: usize| {
        let mut j = ZERO_JET;
        let v = (-t * s).exp();
        for (i, x) in j.iter_mut().enumerate().take(order + 1) {
            *x = C64::new(v * (-t).powi(i as i32), 0.0);
        }
        j
    })
}

fn grid(d: usize) -> Arc<SpectralGrid> {
    Arc::new(SpectralGrid::with_defaults(d).unwrap())
}

fn heat(g: &Arc<SpectralGrid>) -> BiradialFunction {
    BiradialFunction::from_source(g.clone(), Arc::new(KernelSource::new(g.d(), heat_symbol(1.0)))).unwrap()
}

/// Partial Fourier transform of the heat kernel at time 1 and its λ-derivative.
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

fn max_rel(a: &BiradialFunction, b: &BiradialFunction, rows: usize) -> f64 {
    let mut worst = 0.0f64;
    let mut scale = 0.0f64;
    for j in 0..a.grid().len() {
        for n in 0..rows.min(a.grid().n_top(j) + 1) {
            scale = scale.max(b.coeff(j, n).norm());
            worst = worst.max((a.coeff(j, n) - b.coeff(j, n)).norm());
        }
    }
    worst / scale
}

#[test]
fn gaussian_coefficients_match_generating_function() {
    let mut c = GridConfig::new(1);
    c.nodes_per_sign = 401;
    let g = Arc::new(SpectralGrid::new(c).unwrap());
    let input = BiradialInput::partial_fourier(
        |rho, l| C64::new((2.0 * PI).sqrt() * (-0.5 * l * l - 0.25 * rho * rho).exp(), 0.0),
        |_| 14.0,
    );
    let f = analyze(&input, &g).unwrap();
    let j1 = g.node_index(1.0).expect("λ = 1 is a node");
    let c0 = 2.0 * PI * (2.0 * PI).sqrt() * (-0.5f64).exp();
    assert!((f.coeff(j1, 0).re / c0 - 1.0).abs() < 1e-12);
    for n in 1..10 {
        assert!(f.coeff(j1, n).norm() < 1e-12 * c0);
    }
    // ∫ t^α e^{−bt} L_n^α = Γ(n+α+1)(b−1)^n / (n! b^{n+α+1}) with b = (1 + 1/|λ|)/2
    for &j in &[100usize, 300, 500, 650] {
        let l = g.lambda(j);
        let a = l.abs();
        let b = 0.5 * (1.0 + 1.0 / a);
        for n in 0..6 {
            let want = 2.0 * PI / a * (2.0 * PI).sqrt() * (-0.5 * l * l).exp() * (b - 1.0).powi(n) / b.powi(n + 1);
            assert!((f.coeff(j, n as usize).re - want).abs() < 1e-10 * c0, "{l} {n}");
        }
    }
}

#[test]
fn zero_input_gives_zero() {
    let g = grid(1);
    let f = analyze(&BiradialInput::partial_fourier(|_, _| C64::new(0.0, 0.0), |_| 10.0), &g).unwrap();
    assert_eq!(f.plancherel_norm(), 0.0);
    assert_eq!(BiradialFunction::zeros(g).synthesize_radial(0.3, 0.1), C64::new(0.0, 0.0));
}

#[test]
fn round_trip_recovers_coefficients() {
    let g = grid(2);
    let f = BiradialFunction::from_fn(g.clone(), |_, n, l| {
        if n < 4 {
            C64::new((-l * l).exp() * 0.5f64.powi(n as i32), 0.2 * l * (-l * l).exp())
        } else {
            C64::new(0.0, 0.0)
        }
    })
    .unwrap();
    let back = analyze(&f.to_input(), &g).unwrap();
    assert!(max_rel(&back, &f, 8) < 1e-8, "{}", max_rel(&back, &f, 8));
}

#[test]
fn plancherel_of_windows() {
    let g = grid(1);
    let smooth = BiradialFunction::from_fn(g.clone(), |_, n, l| {
        C64::new(if n == 0 { (-l * l).exp() } else { 0.0 }, 0.0)
    })
    .unwrap();
    // (2π)^{−2} ∫ |λ| e^{−2λ²} dλ = (2π)^{−2} / 2
    let want = 0.5 / (4.0 * PI * PI);
    assert!((smooth.plancherel_norm_sq() / want - 1.0).abs() < 1e-5);
    let sharp = BiradialFunction::from_fn(g.clone(), |_, n, l| {
        C64::new(if n == 0 && (1.0..=2.0).contains(&l) { 1.0 } else { 0.0 }, 0.0)
    })
    .unwrap();
    let want = 3.0 / (8.0 * PI * PI);
    assert!((sharp.plancherel_norm_sq() / want - 1.0).abs() < 0.05);
}

#[test]
fn spectral_l2_matches_position_space() {
    let g = grid(1);
    let input = BiradialInput::spatial(
        |rho, s| C64::new((-0.5 * s * s - 0.25 * rho * rho).exp(), 0.0),
        14.0,
        9.0,
    )
    .with_lambda_band(14.0);
    let f = analyze(&input, &g).unwrap();
    // ∫ e^{−s²} ds ∫ e^{−|z|²/2} dz = √π · 2π
    let want = PI.sqrt() * 2.0 * PI;
    assert!((f.plancherel_norm_sq() / want - 1.0).abs() < 1e-6, "{}", f.plancherel_norm_sq() / want);
    for (rho, s) in [(0.0, 0.0), (1.3, -0.4), (2.5, 1.7)] {
        let v = f.synthesize_radial(rho, s);
        let want = (-0.5f64 * s * s - 0.25 * rho * rho).exp();
        assert!((v.re - want).abs() < 1e-6 && v.im.abs() < 1e-6, "{rho} {s}: {v}");
    }
}

#[test]
fn synthesis_at_origin_is_one_dimensional_fourier() {
    let g = grid(1);
    let bump = |l: f64| if l > 1.0 && l < 2.0 { (-1.0 / ((l - 1.0) * (2.0 - l))).exp() } else { 0.0 };
    let f = BiradialFunction::from_fn(g.clone(), |_, n, l| C64::new(if n == 0 { bump(l) } else { 0.0 }, 0.0)).unwrap();
    for s in [0.0, 0.8, -2.5] {
        let m = 200_000;
        let h = 1.0 / m as f64;
        let direct: C64 = (1..m)
            .map(|k| {
                let l = 1.0 + k as f64 * h;
                C64::from_polar(l * bump(l) * h, -l * s)
            })
            .sum::<C64>()
            / (4.0 * PI * PI);
        let v = f.synthesize_radial(0.0, s);
        assert!((v - direct).norm() < 1e-9, "{s}: {v} vs {direct}");
    }
}

#[test]
fn parseval_properties() {
    let g = grid(1);
    let f = BiradialFunction::from_fn(g.clone(), |_, n, l| C64::new((-l.abs() * (1 + 2 * n) as f64).exp(), l.sin()))
        .unwrap();
    let h = BiradialFunction::from_fn(g.clone(), |_, n, l| C64::new(l.cos(), (n as f64) * (-l * l).exp())).unwrap();
    let pff = f.parseval(&f).unwrap();
    assert!((pff.re - f.plancherel_norm_sq()).abs() < 1e-12 * pff.re && pff.im.abs() < 1e-12 * pff.re);
    let a = f.parseval(&h).unwrap();
    let b = h.parseval(&f).unwrap();
    assert!((a - b.conj()).norm() < 1e-12 * a.norm());
    let e0 = BiradialFunction::from_fn(g.clone(), |_, n, _| C64::new(f64::from(n == 0), 0.0)).unwrap();
    let e1 = BiradialFunction::from_fn(g.clone(), |_, n, _| C64::new(f64::from(n == 1), 0.0)).unwrap();
    assert_eq!(e0.parseval(&e1).unwrap(), C64::new(0.0, 0.0));
    let other = Arc::new(SpectralGrid::new(GridConfig { nodes_per_sign: 100, ..GridConfig::new(1) }).unwrap());
    assert!(matches!(f.parseval(&BiradialFunction::zeros(other)), Err(crate::HeisenError::GridMismatch)));
}

#[test]
fn mult_by_z_matches_position_space_heat_oracle() {
    for d in [1usize, 2] {
        let g = grid(d);
        let zf = heat(&g).mult_by_z().unwrap();
        let oracle = BiradialInput::partial_fourier(
            move |rho, l| {
                let (k, dk) = heat_hat(d, rho, l);
                C64::new(dk - 0.25 * rho * rho * k, 0.0)
            },
            |l: f64| {
                let a = l.abs();
                (240.0 * a.tanh() / a).sqrt() + 4.0
            },
        );
        let want = analyze_unchecked(&oracle, &g).unwrap();
        for sign in [-1.0, 1.0] {
            let mut worst = 0.0f64;
            let mut scale = 0.0f64;
            for j in 0..g.len() {
                if g.lambda(j) * sign < 0.0 {
                    continue;
                }
                for n in 0..=g.n_top(j) {
                    scale = scale.max(want.coeff(j, n).norm());
                    worst = worst.max((zf.coeff(j, n) - want.coeff(j, n)).norm());
                }
            }
            assert!(worst / scale < 1e-6, "d={d} sign {sign}: {}", worst / scale);
        }
    }
}

#[test]
fn z_structure() {
    let g = grid(1);
    let f = heat(&g);
    let zf = f.mult_by_z().unwrap();
    for j in g.len() / 2..g.len() {
        assert!((zf.coeff(j, 0) - f.dlambda_channel().unwrap()[j][0]).norm() < 1e-15);
    }
    let one = BiradialFunction::from_source(
        g.clone(),
        Arc::new(KernelSource::new(1, Arc::new(|_, _| {
            let mut j = ZERO_JET;
            j[0] = C64::new(1.0, 0.0);
            j
        }))),
    )
    .unwrap();
    let z1 = one.mult_by_z().unwrap();
    assert!(z1.coeffs().iter().flatten().all(|v| v.norm() == 0.0));
    // numeric path agrees with the exact one to stencil accuracy
    let numeric = BiradialFunction::from_parts(g.clone(), f.coeffs().to_vec(), None).unwrap().mult_by_z().unwrap();
    let mut worst = 0.0f64;
    let scale = zf.coeffs().iter().flatten().fold(0.0f64, |m, v| m.max(v.norm()));
    for j in 0..g.len() {
        let (start, len) = g.sign_block(j);
        if j - start < 3 || j - start + 3 > len || !(0.05..=50.0).contains(&g.lambda(j).abs()) {
            continue;
        }
        for n in 0..numeric.coeffs()[j].len().min(g.n_top(j) + 1) {
            worst = worst.max((numeric.coeff(j, n) - zf.coeff(j, n)).norm());
        }
    }
    assert!(worst < 1e-5 * scale, "{}", worst / scale);
    assert!(f.dlambda_consistency().unwrap() < 1e-5);
}

#[test]
fn dilation_identities() {
    let g = grid(1);
    let f = heat(&g);
    assert!(max_rel(&f.dilate_spectral(1.0).unwrap(), &f, 50) < 1e-15);
    assert!(f.dilate_spectral(0.0).is_err());
    let t = 2.0;
    let q = 4;
    let ft = f.dilate_spectral(t).unwrap();
    let v = Point::new(vec![0.7], vec![0.4], 0.2).unwrap();
    let lhs = ft.synthesize(&v).unwrap();
    let rhs = f.synthesize(&dilate(&v, 1.0 / t).unwrap()).unwrap() / t.powi(q);
    assert!((lhs - rhs).norm() < 1e-6 * rhs.norm(), "{lhs} {rhs}");
    let ratio = ft.plancherel_norm() / f.plancherel_norm();
    assert!((ratio / 2f64.powi(-2) - 1.0).abs() < 1e-8, "{ratio}");
    for m in 1..=2 {
        let r = ft.moment_norm(m).unwrap() / f.moment_norm(m).unwrap();
        let want = t.powf(2.0 * m as f64 - q as f64 / 2.0);
        assert!((r / want - 1.0).abs() < 1e-6, "m={m}: {r} vs {want}");
    }
    // Z commutes with dilation up to t²
    let a = ft.mult_by_z().unwrap();
    let b = f.mult_by_z().unwrap().dilate_spectral(t).unwrap();
    assert!(max_rel(&a, &b.map(|_, _, _, v| v * t * t).unwrap(), 200) < 1e-8);
}

#[test]
fn interpolated_dilation_agrees_with_exact() {
    let g = grid(1);
    let f = heat(&g);
    let raw = BiradialFunction::from_parts(g.clone(), f.coeffs().to_vec(), None).unwrap();
    let a = raw.dilate_spectral(1.5).unwrap();
    let b = f.dilate_spectral(1.5).unwrap();
    assert!(max_rel(&a, &b, 100) < 1e-7, "{}", max_rel(&a, &b, 100));
    // shrinking pulls λ below λ_min where the heat data is not negligible
    assert!(matches!(raw.dilate_spectral(0.5), Err(crate::HeisenError::OutOfRange(_))));
}

#[test]
fn moment_zero_is_plancherel() {
    let g = grid(1);
    let f = heat(&g);
    assert_eq!(f.moment_norm(0).unwrap(), f.plancherel_norm());
    let m1 = f.moment_norm(1).unwrap();
    assert!((m1 - f.mult_by_z().unwrap().plancherel_norm()).abs() < 1e-12 * m1);
}

#[test]
fn csv_dump_has_header() {
    let g = grid(1);
    let mut out = Vec::new();
    heat(&g).write_csv(&mut out, 2).unwrap();
    let text = String::from_utf8(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,lambda,re,im,re_dlambda,im_dlambda"));
    let first: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(first.len(), 6);
    assert_eq!(first[0], "0");
}
