use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::calculus::{Matrix, Vector};
use crate::error::{GeomError, Result};
use crate::hypersurface::{EmbeddingSpec, Orientation, SphereProfile, Surface, WhichNormal};
use crate::metric::{s_curvature, MetricSpec};
use crate::navigation::WindFieldSpec;
use crate::quadrature::{unit_sphere_point, ChartGrid};

use super::{max_abs, CheckReport, HkExpectation, Scenario};

const HK_TOL: f64 = 1e-3;
const VARIATION_TOL: f64 = 1e-3;
const TANGENTIAL_TOL: f64 = 1e-6;
const CMC_TOL: f64 = 1e-5;
const CMC_SPREAD: f64 = 1e-8;
const VARIATION_STEP: f64 = 1e-3;

struct HkSides {
    lhs: f64,
    rhs: f64,
    min_mean: f64,
    max_mean: f64,
}

fn hk_sides(
    s: &Scenario,
    metric: &MetricSpec,
    shift: f64,
    sigma: f64,
    grid: &ChartGrid,
) -> Result<std::result::Result<HkSides, String>> {
    let surface = Surface::new(&s.embedding, metric, Orientation::Inner).with_density(sigma);
    let curvatures = surface.curvatures(grid, WhichNormal::Primary)?;
    let means: Vec<f64> = curvatures.iter().map(|k| k.mean - shift).collect();
    let min_mean = means.iter().copied().fold(f64::INFINITY, f64::min);
    let max_mean = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(min_mean > 0.0) {
        return Ok(Err(format!(
            "inner-normal mean curvature (minus the dilation) is not positive: minimum {min_mean:.6e}"
        )));
    }
    let terms: Vec<f64> = curvatures
        .iter()
        .zip(&means)
        .zip(&grid.weights)
        .map(|((k, m), w)| k.density / m * w)
        .collect();
    let lhs = crate::quadrature::pairwise_sum(&terms);
    let n = s.dim() as f64;
    let rhs = n * surface.domain_volume(grid)?.determinant;
    Ok(Ok(HkSides { lhs, rhs, min_mean, max_mean }))
}

pub fn heintze_karcher(s: &Scenario) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "heintze_karcher",
        "integral of 1/(H^ - c) over the inner-normal induced volume is at least n V(U)",
    );
    if s.orientation != Orientation::Inner {
        report.note("orientation overridden: the inequality is stated for the inner normal");
    }
    let grid = s.grid()?;
    let (metric, c) = if s.wind.a.is_zero() && s.wind.b.is_zero() {
        (s.metric.clone(), 0.0)
    } else {
        let cert = s.certificate()?;
        s.check_wind_on(&grid)?;
        (s.navigated(), cert.dilation)
    };
    let sigma = s.sigma(&metric)?;
    let sides = match hk_sides(s, &metric, c, sigma, &grid)? {
        Ok(sides) => sides,
        Err(reason) => {
            report.precondition_failed(reason);
            return Ok(report);
        }
    };
    let gap = sides.lhs - sides.rhs;
    report.observe("lhs", sides.lhs);
    report.observe("rhs", sides.rhs);
    report.observe("gap", gap);
    report.observe("relative_gap", gap / sides.rhs);
    report.observe("mean_curvature_min", sides.min_mean);
    report.observe("mean_curvature_max", sides.max_mean);
    report.observe("dilation", c);
    report.residual("inequality", (-gap / sides.rhs).max(0.0), s.tol(HK_TOL));
    match s.hk_expect {
        HkExpectation::Inequality => {}
        HkExpectation::Equality => {
            report.residual("equality", (gap / sides.rhs).abs(), s.tol(HK_TOL));
            report.note(
                "only the constructive direction is exercised: equality on an umbilic \
                 hypersurface; rigidity (equality forces umbilicity) is not certified",
            );
        }
        HkExpectation::Strict => {
            let fine = ChartGrid::sphere_chart(s.dim(), 2 * s.grid_order)?;
            let refined = match hk_sides(s, &metric, c, sigma, &fine)? {
                Ok(sides) => sides,
                Err(reason) => {
                    report.precondition_failed(reason);
                    return Ok(report);
                }
            };
            let err = (refined.lhs - sides.lhs).abs() + (refined.rhs - sides.rhs).abs();
            report.observe("refinement_error", err);
            let ratio = if gap > 0.0 { 10.0 * err / gap } else { f64::INFINITY };
            report.residual("strictness", ratio, 1.0);
        }
    }
    Ok(report)
}

fn deformed(
    s: &Scenario,
    metric: &MetricSpec,
    profile: Option<SphereProfile>,
    ambient: Option<WindFieldSpec>,
    t: f64,
) -> EmbeddingSpec {
    EmbeddingSpec::Deformed {
        base: Box::new(s.embedding.clone()),
        metric: metric.clone(),
        orientation: s.orientation,
        profile,
        ambient,
        scale: t,
    }
}

fn step_error(e: GeomError) -> GeomError {
    match e {
        GeomError::Unsupported(m) => GeomError::StepTooLarge(format!(
            "deformed embedding degenerates within the difference step: {m}"
        )),
        GeomError::ChartDegeneracy(u) => GeomError::StepTooLarge(format!(
            "deformed embedding degenerates within the difference step at u = {u:?}"
        )),
        other => other,
    }
}

/// Central difference of a functional of the deformed embedding.
fn derivative<F>(h: f64, build: impl Fn(f64) -> EmbeddingSpec, value: F) -> Result<f64>
where
    F: Fn(&EmbeddingSpec) -> Result<f64>,
{
    Ok((value(&build(h))? - value(&build(-h))?) / (2.0 * h))
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> Matrix {
    let entries: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-0.5..0.5)).collect();
    Matrix::from_fn(n, n, |i, j| entries[i * n + j])
}

fn random_affine(rng: &mut ChaCha8Rng, n: usize) -> WindFieldSpec {
    let a = random_matrix(rng, n);
    let b = Vector::from_fn(n, |_| rng.gen_range(-0.5..0.5));
    WindFieldSpec::affine(a, b)
}

pub fn volume_variation(s: &Scenario) -> Result<CheckReport> {
    let mut report = CheckReport::new(
        "volume_variation",
        "dV/dt equals the flux of the variation field against the induced volume; CMC \
         hypersurfaces are critical for volume-preserving variations",
    );
    if !s.embedding.is_primitive() {
        return Err(GeomError::Unsupported("volume variation needs a primitive embedding".into()));
    }
    let n = s.dim();
    let o = s.orientation.sign();
    let metric = &s.metric;
    let sigma = s.sigma(metric)?;
    let grid = s.grid()?;
    let surface = Surface::new(&s.embedding, metric, s.orientation).with_density(sigma);
    let h = VARIATION_STEP * s.embedding.scale_length();
    let volume = |e: &EmbeddingSpec| -> Result<f64> {
        Surface::new(e, metric, s.orientation)
            .with_density(sigma)
            .domain_volume(&grid)
            .map(|v| v.determinant)
            .map_err(step_error)
    };
    let area = |e: &EmbeddingSpec| -> Result<f64> {
        Surface::new(e, metric, s.orientation).with_density(sigma).area(&grid).map_err(step_error)
    };
    let total = surface.area(&grid)?;
    let mut rng = ChaCha8Rng::seed_from_u64(s.seed);

    let mut first = Vec::new();
    let mut preserving = Vec::new();
    for _ in 0..s.variations {
        let field = random_affine(&mut rng, n);
        let flux = surface.integrate_frame(&grid, |f| Ok(f.nu.dot(&field.at(&f.point))))?;
        let size = surface.integrate_frame(&grid, |f| Ok(f.nu.dot(&field.at(&f.point)).abs()))?;
        let dv = derivative(h, |t| deformed(s, metric, None, Some(field.clone()), t), volume)?;
        first.push((dv - o * flux) / size);

        let kappa = flux / total;
        let projected = Some(SphereProfile::constant(-kappa));
        let dv = derivative(h, |t| deformed(s, metric, projected.clone(), Some(field.clone()), t), volume)?;
        preserving.push(dv / size);
    }
    report.residual("first_variation", max_abs(first), s.tol(VARIATION_TOL));
    report.residual("volume_preserving", max_abs(preserving), s.tol(VARIATION_TOL));

    if let EmbeddingSpec::Sphere { center, .. } = &s.embedding {
        let c = center.unwrap_or_else(|| Vector::zeros(n));
        let mut worst: f64 = 0.0;
        for _ in 0..s.variations {
            let raw = random_matrix(&mut rng, n);
            let skew = raw.sub(&raw.transpose());
            let field = WindFieldSpec::affine(skew, -skew.mul_vec(&c));
            let dv = derivative(h, |t| deformed(s, metric, None, Some(field.clone()), t), volume)?;
            let v0 = volume(&s.embedding)?;
            worst = worst.max(dv.abs() / (v0 * skew.norm()));
        }
        report.residual("tangential", worst, s.tol(TANGENTIAL_TOL));
    }

    // Criticality needs a hypersurface of constant σ-mean curvature H = (n−1)Ĥ + S.
    let curv = surface.curvatures(&grid, WhichNormal::Primary)?;
    let hs: Vec<f64> = curv
        .iter()
        .map(|k| Ok((n as f64 - 1.0) * k.mean + s_curvature(metric, s.density, &k.point, &k.xi)?))
        .collect::<Result<_>>()?;
    let hmin = hs.iter().copied().fold(f64::INFINITY, f64::min);
    let hmax = hs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let hmean = 0.5 * (hmin + hmax);
    report.observe("mean_curvature_spread", hmax - hmin);
    if hmax - hmin <= CMC_SPREAD * hmean.abs().max(1.0) {
        let mut worst: f64 = 0.0;
        for _ in 0..s.variations {
            let mut profile = SphereProfile::random(&mut rng, n, 1.0);
            let eta = |u: &Vector, p: &SphereProfile| p.eval(&unit_sphere_point(n, u));
            let mean = grid.integrate(|u| Ok(eta(u, &profile) * surface.induced_volume_density(u)?))? / total;
            profile.constant -= mean;
            let size = grid.integrate(|u| Ok(eta(u, &profile).abs() * surface.induced_volume_density(u)?))?;
            let da = derivative(h, |t| deformed(s, metric, Some(profile.clone()), None, t), area)?;
            worst = worst.max(da.abs() / (hmean.abs().max(1e-12) * size));
        }
        report.residual("cmc_criticality", worst, s.tol(CMC_TOL));
        report.observe("cmc_mean_curvature", hmean);
    } else {
        report.note("criticality skipped: the hypersurface is not of constant mean curvature");
    }
    Ok(report)
}
