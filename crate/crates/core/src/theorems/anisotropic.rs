use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::Vector;
use crate::error::Result;
use crate::hypersurface::{EmbeddingSpec, Orientation, SphereProfile, Surface, WhichNormal};
use crate::metric::MetricSpec;

use super::{max_abs, CheckReport, Scenario};

const CROSS_TOL: f64 = 1e-6;
const DENSITY_STEP: f64 = 1e-4;

fn random_chart_point(rng: &mut ChaCha8Rng, n: usize) -> Vector {
    let polar = |rng: &mut ChaCha8Rng| rng.gen_range(0.2..PI - 0.2);
    match n {
        2 => Vector::from_slice(&[rng.gen_range(0.0..2.0 * PI)]),
        3 => Vector::from_slice(&[polar(rng), rng.gen_range(0.0..2.0 * PI)]),
        _ => Vector::from_slice(&[polar(rng), polar(rng), rng.gen_range(0.0..2.0 * PI)]),
    }
}

fn random_minkowski(rng: &mut ChaCha8Rng, n: usize, index: usize) -> MetricSpec {
    if index.is_multiple_of(10) {
        return MetricSpec::euclidean(n);
    }
    let dir = Vector::from_fn(n, |_| rng.gen_range(-1.0..1.0));
    let len = rng.gen_range(0.0..0.6);
    MetricSpec::randers(dir.scale(len / dir.norm()))
}

/// Random Minkowski norms and perturbed spheres of the scenario dimension;
/// the scenario metric and embedding are not used.
pub fn anisotropic_cross_check(s: &Scenario) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "anisotropic_cross_check",
        "in Minkowski spaces H_F = H = (n-1) H^, with H_F the trace of -d(grad F*(nu))",
    );
    let n = s.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);
    let mut shape = Vec::new();
    let mut density = Vec::new();
    for i in 0..s.cross_pairs {
        let metric = random_minkowski(&mut rng, n, i);
        let profile = SphereProfile::random(&mut rng, n, 0.08);
        let radius = rng.gen_range(0.5..2.0);
        let embedding = EmbeddingSpec::PerturbedSphere { dim: n, radius, profile, center: None };
        let orientation = if rng.gen_bool(0.5) { Orientation::Inner } else { Orientation::Outer };
        let u = random_chart_point(&mut rng, n);
        let surface = Surface::new(&embedding, &metric, orientation);
        let hf = surface.euclidean_anisotropic(&u)?.mean;
        let k = surface.shape_operator_at(&u, WhichNormal::Primary)?;
        shape.push(hf - (n as f64 - 1.0) * k.mean);
        density.push(hf - surface.sigma_mean_curvature(&u, DENSITY_STEP)?);
    }
    report.residual("shape_operator", max_abs(shape), s.tol(CROSS_TOL));
    report.residual("density_variation", max_abs(density), s.tol(CROSS_TOL));

    // Calibration on the reversed F-sphere of radius r with inner normal.
    let metric = random_minkowski(&mut rng, n, 1);
    let r = 1.7;
    let wulff = EmbeddingSpec::f_sphere(metric.clone(), r, true);
    let surface = Surface::new(&wulff, &metric, Orientation::Inner);
    let u = random_chart_point(&mut rng, n);
    let hf = surface.euclidean_anisotropic(&u)?.mean;
    report.residual("wulff_calibration", (hf - (n as f64 - 1.0) / r).abs(), s.tol(CROSS_TOL));
    report.observe("pairs", s.cross_pairs as f64);
    Ok(report)
}
