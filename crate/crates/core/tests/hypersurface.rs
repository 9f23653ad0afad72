use std::f64::consts::PI;

use finsler_core::calculus::linalg::sym_eigen;
use finsler_core::calculus::{Matrix, Vector};
use finsler_core::hypersurface::{EmbeddingSpec, Orientation, SphereProfile, Surface, WhichNormal};
use finsler_core::metric::{s_curvature, MetricSpec, VolumeDensity};
use finsler_core::navigation::WindFieldSpec;
use finsler_core::quadrature::ChartGrid;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn v(s: &[f64]) -> Vector {
    Vector::from_slice(s)
}

fn randers(n: usize) -> MetricSpec {
    let b = [0.3, -0.1, 0.15, 0.05];
    MetricSpec::randers(v(&b[..n]))
}

fn dilation_nav(c: f64) -> MetricSpec {
    MetricSpec::navigation(randers(3), WindFieldSpec::dilation(c, v(&[0.1, 0.0, -0.05])))
}

fn random_chart_point(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    // interior of the chart, away from the poles
    match n {
        2 => v(&[rng.gen_range(0.0..2.0 * PI)]),
        3 => v(&[rng.gen_range(0.3..PI - 0.3), rng.gen_range(0.0..2.0 * PI)]),
        _ => v(&[
            rng.gen_range(0.3..PI - 0.3),
            rng.gen_range(0.3..PI - 0.3),
            rng.gen_range(0.0..2.0 * PI),
        ]),
    }
}

/// `∂_y (½F²)` by central differences on `F` alone.
fn fd_legendre(metric: &MetricSpec, x: &Vector, y: &Vector) -> Vector {
    let n = y.len();
    let h = 1e-5;
    Vector::from_fn(n, |i| {
        let e = Vector::basis(n, i);
        let p = metric.f(x, &(*y + e * h)).unwrap().powi(2);
        let m = metric.f(x, &(*y - e * h)).unwrap().powi(2);
        (p - m) / (4.0 * h)
    })
}

#[test]
fn euclidean_sphere_normals_and_curvature() {
    let metric = MetricSpec::euclidean(3);
    let emb = EmbeddingSpec::sphere(3, 1.0);
    let outer = Surface::new(&emb, &metric, Orientation::Outer);
    let inner = Surface::new(&emb, &metric, Orientation::Inner);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let u = random_chart_point(&mut rng, 3);
        let f = outer.frame_at(&u).unwrap();
        assert!((f.xi - f.point).max_abs() < 1e-12);
        assert!((f.xi_minus + f.point).max_abs() < 1e-12);
        assert!((f.nu.dot(&f.xi) - 1.0).abs() < 1e-12);
        let k = inner.shape_operator_at(&u, WhichNormal::Primary).unwrap();
        for p in &k.principal {
            assert!((p - 1.0).abs() < 1e-10, "{p}");
        }
        let k_out = outer.shape_operator_at(&u, WhichNormal::Primary).unwrap();
        assert!((k_out.mean + 1.0).abs() < 1e-10);
        let k_opp = outer.shape_operator_at(&u, WhichNormal::Opposite).unwrap();
        assert!((k_opp.mean - 1.0).abs() < 1e-10);
    }
}

#[test]
fn randers_unit_normal_matches_brute_force_conditions() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for n in 2..=4 {
        let metric = randers(n);
        let emb = EmbeddingSpec::sphere(n, 1.3);
        for orientation in [Orientation::Inner, Orientation::Outer] {
            let s = Surface::new(&emb, &metric, orientation);
            for _ in 0..10 {
                let u = random_chart_point(&mut rng, n);
                let f = s.frame_at(&u).unwrap();
                assert!((metric.f(&f.point, &f.xi).unwrap() - 1.0).abs() < 1e-10);
                let nu = fd_legendre(&metric, &f.point, &f.xi);
                for t in &f.tangents {
                    assert!(nu.dot(t).abs() < 1e-8 * t.norm());
                }
                // points to the chosen side
                let radial = f.point - emb.center();
                assert!(orientation.sign() * f.xi.dot(&radial) > 0.0);
                assert!((nu - f.nu).max_abs() < 1e-8);
            }
        }
    }
}

#[test]
fn opposite_normal_is_not_negated_for_randers() {
    let metric = randers(3);
    let emb = EmbeddingSpec::sphere(3, 1.0);
    let s = Surface::new(&emb, &metric, Orientation::Outer);
    let f = s.frame_at(&v(&[1.0, 0.3])).unwrap();
    assert!((f.xi + f.xi_minus).max_abs() > 1e-3);
    assert!((metric.f(&f.point, &f.xi_minus).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn f_spheres_have_constant_curvature() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=4 {
        let metric = randers(n);
        let r = 0.7;
        let sphere = EmbeddingSpec::f_sphere(metric.clone(), r, false);
        let outer = Surface::new(&sphere, &metric, Orientation::Outer);
        let wulff = EmbeddingSpec::f_sphere(metric.clone(), r, true);
        let inner = Surface::new(&wulff, &metric, Orientation::Inner);
        for _ in 0..8 {
            let u = random_chart_point(&mut rng, n);
            let k = outer.shape_operator_at(&u, WhichNormal::Primary).unwrap();
            for p in &k.principal {
                assert!((p + 1.0 / r).abs() < 1e-9, "outer {p}");
            }
            let f = outer.frame_at(&u).unwrap();
            assert!((f.xi - f.point.scale(1.0 / r)).max_abs() < 1e-10);
            let k = inner.shape_operator_at(&u, WhichNormal::Primary).unwrap();
            for p in &k.principal {
                assert!((p - 1.0 / r).abs() < 1e-9, "inner {p}");
            }
        }
    }
}

#[test]
fn randers_f_spheres_are_umbilic_for_both_normals() {
    // Randers spheres are spheres of the quadratic navigation datum, so the
    // inner side is umbilic as well.
    let metric = randers(3);
    let r = 1.5;
    let sphere = EmbeddingSpec::f_sphere(metric.clone(), r, false);
    let inner = Surface::new(&sphere, &metric, Orientation::Inner);
    for u in [v(&[0.4, 0.0]), v(&[2.5, 3.0]), v(&[1.2, 5.0])] {
        let k = inner.shape_operator_at(&u, WhichNormal::Primary).unwrap();
        for p in &k.principal {
            assert!((p - 1.0 / r).abs() < 1e-9, "{p}");
        }
    }
}

#[test]
fn ellipsoid_curvature_matches_level_set_formula() {
    let metric = MetricSpec::euclidean(3);
    let axes = [1.0, 1.0, 2.0];
    let emb = EmbeddingSpec::ellipsoid(v(&axes));
    let s = Surface::new(&emb, &metric, Orientation::Inner);
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..20 {
        let u = random_chart_point(&mut rng, 3);
        let k = s.shape_operator_at(&u, WhichNormal::Primary).unwrap();
        let x = k.point;
        let grad = Vector::from_fn(3, |i| 2.0 * x[i] / (axes[i] * axes[i]));
        let hess = Matrix::diag(&[2.0, 2.0, 0.5]);
        let nrm = grad.scale(1.0 / grad.norm());
        // orthonormal tangent basis by Gram-Schmidt
        let mut basis = Vec::new();
        for i in 0..3 {
            let mut e = Vector::basis(3, i);
            e = e - nrm.scale(nrm.dot(&e));
            for b in &basis {
                let b: &Vector = b;
                e = e - b.scale(b.dot(&e));
            }
            if e.norm() > 1e-3 && basis.len() < 2 {
                basis.push(e.scale(1.0 / e.norm()));
            }
        }
        let w = Matrix::from_fn(2, 2, |a, b| hess.bilinear(&basis[a], &basis[b]) / grad.norm());
        let (mut expected, _) = sym_eigen(&w);
        expected.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in k.principal.iter().zip(&expected) {
            assert!((got - want).abs() < 1e-9, "{got} vs {want}");
        }
    }
}

#[test]
fn density_forms_agree() {
    let metrics = [randers(3), dilation_nav(0.05), dilation_nav(-0.08)];
    let emb = EmbeddingSpec::ellipsoid(v(&[1.0, 0.8, 1.2]));
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for metric in &metrics {
        for orientation in [Orientation::Inner, Orientation::Outer] {
            let s = Surface::new(&emb, metric, orientation).with_density(1.7);
            for _ in 0..10 {
                let u = random_chart_point(&mut rng, 3);
                let a = s.induced_volume_density(&u).unwrap();
                let b = s.contracted_volume_density(&u).unwrap();
                assert!((a - b).abs() < 1e-10 * a, "{a} {b}");
                let k = s.shape_operator_at(&u, WhichNormal::Primary).unwrap();
                assert!((k.density - a).abs() < 1e-12 * a);
            }
        }
    }
}

/// Monte Carlo volume of `{x : F(x) ≤ 1}` for a Minkowski norm.
fn mc_unit_ball_volume(metric: &MetricSpec, n: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let half = 2.0;
    let origin = Vector::zeros(n);
    let mut hits = 0usize;
    for _ in 0..samples {
        let x = Vector::from_fn(n, |_| rng.gen_range(-half..half));
        if metric.f(&origin, &x).unwrap() <= 1.0 {
            hits += 1;
        }
    }
    (2.0 * half).powi(n as i32) * hits as f64 / samples as f64
}

#[test]
fn volumes_and_areas() {
    let euclid = MetricSpec::euclidean(3);
    let sphere = EmbeddingSpec::sphere(3, 1.0);
    let grid = ChartGrid::sphere_chart(3, 24).unwrap();
    for o in [Orientation::Inner, Orientation::Outer] {
        let vol = Surface::new(&sphere, &euclid, o).domain_volume(&grid).unwrap();
        assert!((vol.pairing - 4.0 * PI / 3.0).abs() < 1e-10);
        assert!((vol.determinant - 4.0 * PI / 3.0).abs() < 1e-10);
    }
    let area = Surface::new(&sphere, &euclid, Orientation::Outer).area(&grid).unwrap();
    assert!((area - 4.0 * PI).abs() < 1e-10);

    let ell = EmbeddingSpec::ellipsoid(v(&[1.0, 1.0, 2.0]));
    let vol = Surface::new(&ell, &euclid, Orientation::Inner).domain_volume(&grid).unwrap();
    assert!((vol.determinant - 8.0 * PI / 3.0).abs() < 1e-9);
    assert!((vol.pairing - 8.0 * PI / 3.0).abs() < 1e-9);

    let circle = EmbeddingSpec::sphere(2, 1.0);
    let g2 = ChartGrid::sphere_chart(2, 16).unwrap();
    let vol = Surface::new(&circle, &MetricSpec::euclidean(2), Orientation::Outer)
        .domain_volume(&g2)
        .unwrap();
    assert!((vol.pairing - PI).abs() < 1e-12);

    // Randers unit ball: both forms against Monte Carlo, and the F-sphere
    // area with the outer normal equals n times the enclosed volume.
    let metric = randers(3);
    let ball = EmbeddingSpec::f_sphere(metric.clone(), 1.0, false);
    let s = Surface::new(&ball, &metric, Orientation::Outer);
    let vol = s.domain_volume(&grid).unwrap();
    let mc = mc_unit_ball_volume(&metric, 3, 2_000_000, 9);
    assert!((vol.determinant - vol.pairing).abs() < 1e-9);
    assert!((vol.determinant - mc).abs() < 0.01 * mc, "{} vs {mc}", vol.determinant);
    let area = s.area(&grid).unwrap();
    assert!((area - 3.0 * vol.determinant).abs() < 1e-9);
}

#[test]
fn quadrature_converges_on_smooth_surfaces() {
    let metric = dilation_nav(0.05);
    let emb = EmbeddingSpec::ellipsoid(v(&[1.0, 0.9, 1.3]));
    let s = Surface::new(&emb, &metric, Orientation::Inner);
    let a = s.area(&ChartGrid::sphere_chart(3, 16).unwrap()).unwrap();
    let b = s.area(&ChartGrid::sphere_chart(3, 32).unwrap()).unwrap();
    assert!((a - b).abs() < 1e-9 * b, "{a} {b}");
}

#[test]
fn r_means_of_umbilic_points() {
    let metric = randers(4);
    let wulff = EmbeddingSpec::f_sphere(metric.clone(), 2.0, true);
    let s = Surface::new(&wulff, &metric, Orientation::Inner);
    let k = s.shape_operator_at(&v(&[1.0, 2.0, 0.5]), WhichNormal::Primary).unwrap();
    for (r, h) in k.r_means.iter().enumerate() {
        assert!((h - 0.5f64.powi(r as i32 + 1)).abs() < 1e-9);
    }
}

#[test]
fn density_variation_matches_mean_curvature() {
    // (n - 1) Ĥ = H - S(ξ), with H from the first variation of dμ_ξ.
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let cases = [
        (randers(3), EmbeddingSpec::ellipsoid(v(&[1.0, 0.8, 1.2]))),
        (dilation_nav(0.05), EmbeddingSpec::sphere(3, 1.0)),
        (dilation_nav(-0.1), EmbeddingSpec::ellipsoid(v(&[0.9, 1.1, 1.0]))),
        (
            MetricSpec::navigation(
                MetricSpec::euclidean(2),
                WindFieldSpec::dilation(0.1, v(&[0.0, 0.0])),
            ),
            EmbeddingSpec::sphere(2, 1.0),
        ),
    ];
    for (metric, emb) in &cases {
        let n = emb.dim();
        for o in [Orientation::Inner, Orientation::Outer] {
            let s = Surface::new(emb, metric, o);
            for _ in 0..4 {
                let u = random_chart_point(&mut rng, n);
                let k = s.shape_operator_at(&u, WhichNormal::Primary).unwrap();
                let h = s.sigma_mean_curvature(&u, 1e-4).unwrap();
                let sc = s_curvature(metric, VolumeDensity::ConstantOne, &k.point, &k.xi).unwrap();
                let lhs = (n - 1) as f64 * k.mean;
                assert!((lhs - h + sc).abs() < 1e-6, "{lhs} {h} {sc}");
            }
        }
    }
}

#[test]
fn anisotropic_mean_curvature_agrees_on_minkowski_norms() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for n in 2..=4 {
        let metric = randers(n);
        let profile = SphereProfile::random(&mut rng, n, 0.1);
        let emb = EmbeddingSpec::PerturbedSphere { dim: n, radius: 1.0, profile, center: None };
        for o in [Orientation::Inner, Orientation::Outer] {
            let s = Surface::new(&emb, &metric, o);
            for _ in 0..5 {
                let u = random_chart_point(&mut rng, n);
                let a = s.euclidean_anisotropic(&u).unwrap();
                let k = s.shape_operator_at(&u, WhichNormal::Primary).unwrap();
                assert!((a.mean - (n - 1) as f64 * k.mean).abs() < 1e-8);
                assert!((a.normal - k.xi).max_abs() < 1e-10);
                // finite-difference oracle for S_F = -dν_F along the first chart direction
                let h = 1e-5;
                let mut up = u;
                up[0] += h;
                let mut dn = u;
                dn[0] -= h;
                let dnu = (s.euclidean_anisotropic(&up).unwrap().normal
                    - s.euclidean_anisotropic(&dn).unwrap().normal)
                    * (0.5 / h);
                let f = s.frame_at(&u).unwrap();
                let mut predicted = Vector::zeros(n);
                for b in 0..n - 1 {
                    predicted = predicted - f.tangents[b] * a.weingarten[(b, 0)];
                }
                assert!((dnu - predicted).max_abs() < 1e-6);
            }
        }
    }
}

#[test]
fn non_minkowski_anisotropic_is_unsupported() {
    let metric = dilation_nav(0.05);
    let emb = EmbeddingSpec::sphere(3, 1.0);
    let s = Surface::new(&emb, &metric, Orientation::Inner);
    assert!(s.euclidean_anisotropic(&v(&[1.0, 1.0])).is_err());
}

#[test]
fn flowed_surface_is_image_under_flow() {
    let wind = WindFieldSpec::dilation(0.1, v(&[0.2, 0.0, 0.0]));
    let base = EmbeddingSpec::sphere(3, 1.0);
    let flowed = EmbeddingSpec::Flowed { base: Box::new(base.clone()), wind: wind.clone(), t: 0.5 };
    let flow = finsler_core::navigation::affine_flow(&wind, 0.5);
    let u = v(&[0.7, 1.9]);
    let (p, _) = base.jet1(&u).unwrap();
    let (q, _) = flowed.jet1(&u).unwrap();
    assert!((flow.apply(&p) - q).max_abs() < 1e-13);
}
