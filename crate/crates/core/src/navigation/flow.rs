//! Homothety certificates, closed-form affine flows, the geodesic
//! reparametrization `a(t)` and a spray integrator.

use serde::Serialize;

use crate::calculus::{Dual, Matrix, SVec, Vector, D1};
use crate::error::{GeomError, Result};
use crate::metric::{spray_coefficients, MetricSpec};
use crate::quadrature::{unit_sphere_point, ChartGrid};

use super::WindFieldSpec;

/// Resolved sign convention: with `ψ_t = exp(tA)` the flow of `W = Ax + b`,
/// the pullback satisfies `ψ_t^* F = e^{−2ct} F` exactly when
/// `F_y(y)·(Ay) = −2c F(y)`; a pure dilation therefore has `A = −2c·I`.
pub const DILATION_CONVENTION: &str = "A = -2c*I  <=>  psi_t^* F = exp(-2ct) F";

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HomothetyCertificate {
    pub dilation: f64,
    /// `max |F_y(y)·(Ay) + 2c F(y)|` over `F`-unit samples.
    pub residual: f64,
    pub samples: usize,
    pub convention: &'static str,
}

impl HomothetyCertificate {
    pub const TOLERANCE: f64 = 1e-8;

    pub fn is_valid(&self) -> bool {
        self.residual <= Self::TOLERANCE
    }

    pub fn is_killing(&self) -> bool {
        self.is_valid() && self.dilation.abs() <= self.residual.max(1e-14)
    }
}

/// Deterministic unit directions covering the sphere.
pub fn sample_directions(n: usize) -> Vec<Vector> {
    let grid = ChartGrid::sphere_chart(n, 4).expect("fixed grid order is valid");
    grid.nodes.iter().map(|u| unit_sphere_point(n, u)).collect()
}

/// Fit the dilation `c` from the differential identity
/// `F_y(y)·(Ay) = −2c F(y)` at the given directions.
pub fn homothety_dilation(
    base: &MetricSpec,
    wind: &WindFieldSpec,
    samples: &[Vector],
) -> Result<HomothetyCertificate> {
    if !base.is_minkowski() {
        return Err(GeomError::Unsupported(
            "homothety certificates require a position-independent base metric".into(),
        ));
    }
    let n = base.dim();
    wind.validate(n)?;
    if samples.is_empty() {
        return Err(GeomError::Config("homothety fit needs at least one sample direction".into()));
    }
    let origin = Vector::zeros(n);
    let xs: SVec<D1> = SVec::lift(&origin);
    let mut rows = Vec::with_capacity(samples.len());
    for y in samples {
        let f = base.f(&origin, y)?;
        let unit = y.scale(1.0 / f);
        let ay = wind.a.mul_vec(&unit);
        let ys = SVec::from_fn(n, |i| Dual::new(unit[i], ay[i]));
        rows.push(base.eval(&xs, &ys)?.d);
    }
    // Least squares for r_i ≈ −2c with F(unit) = 1.
    let c = -rows.iter().sum::<f64>() / (2.0 * rows.len() as f64);
    let residual = rows.iter().map(|r| (r + 2.0 * c).abs()).fold(0.0, f64::max);
    Ok(HomothetyCertificate { dilation: c, residual, samples: rows.len(), convention: DILATION_CONVENTION })
}

/// `ψ_t(x) = linear·x + offset` with `linear = e^{tA}` and
/// `offset = (∫₀ᵗ e^{sA} ds) b`.
#[derive(Clone, Debug, PartialEq)]
pub struct AffineFlow {
    pub linear: Matrix,
    pub offset: Vector,
}

impl AffineFlow {
    pub fn apply(&self, x: &Vector) -> Vector {
        self.linear.mul_vec(x) + self.offset
    }

    /// `dψ_t`, constant in `x`.
    pub fn differential(&self) -> &Matrix {
        &self.linear
    }
}

pub fn affine_flow(wind: &WindFieldSpec, t: f64) -> AffineFlow {
    let n = wind.b.len();
    let a = &wind.a;
    let norm = a.norm() * t.abs();
    let mut halvings = 0;
    while norm / 2f64.powi(halvings) > 0.25 && halvings < 60 {
        halvings += 1;
    }
    let tau = t / 2f64.powi(halvings);
    let scaled = a.scale(tau);
    // E = Σ Z^k/k!, K = τ Σ Z^k/(k+1)!
    let mut e = Matrix::identity(n);
    let mut k = Matrix::identity(n);
    let mut term = Matrix::identity(n);
    for j in 1..=20 {
        term = term.matmul(&scaled).scale(1.0 / j as f64);
        e = e.add(&term);
        k = k.add(&term.scale(1.0 / (j + 1) as f64));
    }
    let mut k = k.scale(tau);
    for _ in 0..halvings {
        k = k.matmul(&Matrix::identity(n).add(&e));
        e = e.matmul(&e);
    }
    AffineFlow { linear: e, offset: k.mul_vec(&wind.b) }
}

/// `a(t) = (e^{2ct} − 1)/(2c)`, and `t` when `c = 0`.
pub fn reparam(c: f64, t: f64) -> f64 {
    if c == 0.0 {
        t
    } else {
        (2.0 * c * t).exp_m1() / (2.0 * c)
    }
}

#[derive(Clone, Debug)]
pub struct GeodesicSample {
    pub t: f64,
    pub x: Vector,
    pub v: Vector,
}

/// Classical RK4 on `ẍ = −2G(x, ẋ)`.
pub fn integrate_geodesic(
    spec: &MetricSpec,
    x0: &Vector,
    v0: &Vector,
    t_end: f64,
    steps: usize,
) -> Result<Vec<GeodesicSample>> {
    if steps == 0 {
        return Err(GeomError::Config("geodesic integration needs at least one step".into()));
    }
    let h = t_end / steps as f64;
    let rhs = |x: &Vector, v: &Vector| -> Result<(Vector, Vector)> {
        Ok((*v, spray_coefficients(spec, x, v)? * -2.0))
    };
    let mut out = Vec::with_capacity(steps + 1);
    let (mut x, mut v) = (*x0, *v0);
    out.push(GeodesicSample { t: 0.0, x, v });
    for i in 0..steps {
        let (k1x, k1v) = rhs(&x, &v)?;
        let (k2x, k2v) = rhs(&(x + k1x * (0.5 * h)), &(v + k1v * (0.5 * h)))?;
        let (k3x, k3v) = rhs(&(x + k2x * (0.5 * h)), &(v + k2v * (0.5 * h)))?;
        let (k4x, k4v) = rhs(&(x + k3x * h), &(v + k3v * h))?;
        x = x + (k1x + k2x * 2.0 + k3x * 2.0 + k4x) * (h / 6.0);
        v = v + (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        out.push(GeodesicSample { t: (i + 1) as f64 * h, x, v });
    }
    Ok(out)
}
