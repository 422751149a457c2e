use flexbie::geometry::{build_panelization, ParametricCurve, Panelization, Vec2};
use flexbie::quadrature::{adaptive_integrate, GaussRule};
use flexbie::surfaceops::{dds_matrix, hilbert_matrix, laplace_dlp_matrix};
use nalgebra::{DMatrix, DVector};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::f64::consts::{PI, TAU};

fn values(p: &Panelization, f: impl Fn(f64, Vec2) -> f64) -> Vec<f64> {
    p.nodes.iter().map(|n| f(n.t, n.position)).collect()
}

fn max_err(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Principal value of `∫ K^H(x, y) f(y) dS(y)` with an exclusion window of
/// arc length `eps` on each side, extrapolated in `eps`.
fn hilbert_pv_oracle(curve: &ParametricCurve, t0: f64, f: &dyn Fn(f64) -> f64) -> f64 {
    let x = curve.position(t0);
    let rule = GaussRule::new(20);
    // parameter at signed arc distance s from t0
    let param_at = |s: f64| {
        let mut t = t0 + s / curve.frenet_at(t0).speed;
        for _ in 0..40 {
            let len = if t >= t0 { curve.arc_length(t0, t) } else { -curve.arc_length(t, t0) };
            t -= (len - s) / curve.frenet_at(t).speed;
        }
        t
    };
    let truncated = |eps: f64| {
        let (a, b) = (param_at(eps), param_at(-eps) + TAU);
        let (v, _) = adaptive_integrate(
            &rule,
            |t, out| {
                let fr = curve.frenet_at(t);
                let r = x - fr.position;
                out[0] = (r.dot(&fr.tangent) / (PI * r.norm_squared()) * f(t) * fr.speed).into();
            },
            a,
            b,
            1,
            1e-14,
            1e-15,
            |_, _| false,
        )
        .unwrap();
        v[0].re
    };
    // error expansion in odd powers of eps
    let e = 1e-2;
    let (i1, i2, i4) = (truncated(e), truncated(e / 2.0), truncated(e / 4.0));
    let r1 = 2.0 * i2 - i1;
    let r2 = 2.0 * i4 - i2;
    (8.0 * r2 - r1) / 7.0
}

#[test]
fn circle_pv_oracle_fixes_sign() {
    let c = ParametricCurve::circle(1.0, Vec2::zeros()).unwrap();
    for &t0 in &[0.0, 1.1] {
        let v = hilbert_pv_oracle(&c, t0, &|t| (2.0 * t).cos());
        assert!((v - (2.0 * t0).sin()).abs() < 1e-9, "{v} vs {}", (2.0 * t0).sin());
    }
}

#[test]
fn circle_modes() {
    let c = ParametricCurve::circle(1.0, Vec2::zeros()).unwrap();
    let p = build_panelization(&c, 16, 16).unwrap();
    let h = hilbert_matrix(&p).unwrap();
    for m in 1..=8 {
        let mf = m as f64;
        let got = h.apply(&values(&p, |t, _| (mf * t).cos()));
        assert!(max_err(&got, &values(&p, |t, _| (mf * t).sin())) < 1e-10, "m {m}");
        let got = h.apply(&values(&p, |t, _| (mf * t).sin()));
        assert!(max_err(&got, &values(&p, |t, _| -(mf * t).cos())) < 1e-10, "m {m}");
    }
    let got = h.apply(&vec![1.0; p.len()]);
    assert!(got.iter().all(|v| v.abs() < 1e-12));
}

#[test]
fn droplet_matches_pv_oracle() {
    let d = ParametricCurve::droplet();
    let p = build_panelization(&d, 16, 16).unwrap();
    let h = hilbert_matrix(&p).unwrap();
    let f = |t: f64| (t).cos() + 0.3 * (2.0 * t).sin() + 0.1 * (3.0 * t).cos();
    let hv = h.apply(&values(&p, |t, _| f(t)));
    for &i in &[0usize, 37, 130, 201] {
        let want = hilbert_pv_oracle(&d, p.nodes[i].t, &f);
        assert!((hv[i] - want).abs() < 1e-9, "node {i}: {} vs {want}", hv[i]);
    }
}

fn random_smooth(p: &Panelization, rng: &mut StdRng) -> Vec<f64> {
    let coef: Vec<(f64, f64)> = (0..8).map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))).collect();
    values(p, |t, _| {
        coef.iter()
            .enumerate()
            .map(|(m, (a, b))| a * (m as f64 * t).cos() + b * (m as f64 * t).sin())
            .sum()
    })
}

#[test]
fn hilbert_square_identity_on_droplet() {
    let p = build_panelization(&ParametricCurve::droplet(), 16, 16).unwrap();
    assert_eq!(p.len(), 256);
    let h = hilbert_matrix(&p).unwrap();
    let d = laplace_dlp_matrix(&p).unwrap();
    let h2 = h.square().unwrap().matrix;
    let d2 = d.square().unwrap().matrix;
    let op = h2 * 0.25 + DMatrix::identity(256, 256) * 0.25 - d2;
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..5 {
        let rho = DVector::from_vec(random_smooth(&p, &mut rng));
        let res = (&op * &rho).norm() / rho.norm();
        assert!(res <= 1e-8, "residual {res:e}");
    }
}

#[test]
fn double_layer_of_one() {
    for curve in [ParametricCurve::circle(1.5, Vec2::new(0.2, 0.0)).unwrap(), ParametricCurve::droplet()] {
        let p = build_panelization(&curve, 12, 16).unwrap();
        let d = laplace_dlp_matrix(&p).unwrap();
        let v = d.apply(&vec![1.0; p.len()]);
        assert!(v.iter().all(|x| (x + 0.5).abs() < 1e-12), "{:?}", &v[..3]);
    }
}

#[test]
fn double_layer_constant_on_circle() {
    let r = 2.0;
    let p = build_panelization(&ParametricCurve::circle(r, Vec2::zeros()).unwrap(), 4, 8).unwrap();
    let d = laplace_dlp_matrix(&p).unwrap();
    for i in 0..p.len() {
        for j in 0..p.len() {
            let k = d.matrix[(i, j)] / p.nodes[j].weight;
            assert!((k + 1.0 / (4.0 * PI * r)).abs() < 1e-13);
        }
    }
}

#[test]
fn arc_derivative() {
    let r = 1.7;
    let p = build_panelization(&ParametricCurve::circle(r, Vec2::zeros()).unwrap(), 8, 16).unwrap();
    let dds = dds_matrix(&p).unwrap();
    assert!(dds.apply(&vec![3.0; p.len()]).iter().all(|v| v.abs() < 1e-11));
    let got = dds.apply(&values(&p, |t, _| t.sin()));
    assert!(max_err(&got, &values(&p, |t, _| t.cos() / r)) < 1e-10);

    let d = ParametricCurve::droplet();
    let p = build_panelization(&d, 16, 16).unwrap();
    let dds = dds_matrix(&p).unwrap();
    let got = dds.apply(&values(&p, |_, x| x.x));
    let want: Vec<f64> = p.nodes.iter().map(|n| n.tangent.x).collect();
    assert!(max_err(&got, &want) < 1e-9, "{:e}", max_err(&got, &want));
}

#[test]
fn derivative_of_hilbert_on_circle() {
    let r = 1.3;
    let p = build_panelization(&ParametricCurve::circle(r, Vec2::zeros()).unwrap(), 8, 16).unwrap();
    let dh = dds_matrix(&p).unwrap().compose(&hilbert_matrix(&p).unwrap()).unwrap();
    for m in 1..=8 {
        let mf = m as f64;
        let got = dh.apply(&values(&p, |t, _| (mf * t).cos()));
        // d/ds sin(mθ) = (m/r) cos(mθ)
        let want = values(&p, |t, _| mf / r * (mf * t).cos());
        assert!(max_err(&got, &want) < 1e-8 * mf, "m {m}: {:e}", max_err(&got, &want));
    }
}

#[test]
fn operators_are_block_diagonal() {
    let a = ParametricCurve::circle(1.0, Vec2::zeros()).unwrap();
    let b = ParametricCurve::starfish(0.2, 3, 0.0, Vec2::new(4.0, 0.0), 1.0).unwrap();
    let p = Panelization::new(&[a, b], 6, 12).unwrap();
    let n0 = p.components[0].nodes.len();
    for op in [hilbert_matrix(&p).unwrap(), laplace_dlp_matrix(&p).unwrap(), dds_matrix(&p).unwrap()] {
        let mut rho = vec![0.0; p.len()];
        for (i, n) in p.nodes.iter().enumerate().skip(n0) {
            rho[i] = n.t.cos();
        }
        let out = op.apply(&rho);
        assert!(out[..n0].iter().all(|&v| v == 0.0));
        assert!(out[n0..].iter().any(|&v| v != 0.0));
    }
}

#[test]
fn builds_are_deterministic() {
    let p = build_panelization(&ParametricCurve::droplet(), 8, 16).unwrap();
    let a = hilbert_matrix(&p).unwrap();
    let b = hilbert_matrix(&p).unwrap();
    assert!(a.matrix.iter().zip(b.matrix.iter()).all(|(x, y)| x.to_bits() == y.to_bits()));
}
