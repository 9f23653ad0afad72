//! Zermelo navigation: the metric `F̃` defined by `F(x, y − F̃W) = F̃`, the
//! homothety certificate for affine winds, their flows, and normal transport.

mod flow;

pub use flow::{
    affine_flow, homothety_dilation, integrate_geodesic, reparam, sample_directions, AffineFlow,
    GeodesicSample, HomothetyCertificate, DILATION_CONVENTION,
};

use serde::{Deserialize, Serialize};

use crate::calculus::{Dual, Matrix, Real, SVec, Vector, VectorField, D1};
use crate::error::{GeomError, Result};
use crate::metric::MetricSpec;

/// Affine wind `W(x) = A x + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WindFieldSpec {
    pub a: Matrix,
    pub b: Vector,
}

impl WindFieldSpec {
    pub fn zero(n: usize) -> Self {
        WindFieldSpec { a: Matrix::zeros(n, n), b: Vector::zeros(n) }
    }

    pub fn constant(b: Vector) -> Self {
        WindFieldSpec { a: Matrix::zeros(b.len(), b.len()), b }
    }

    /// `W(x) = −2c (x − center)`, whose flow scales any Minkowski norm by
    /// `e^{−2ct}`.
    pub fn dilation(c: f64, center: Vector) -> Self {
        let n = center.len();
        WindFieldSpec { a: Matrix::identity(n).scale(-2.0 * c), b: center * (2.0 * c) }
    }

    pub fn affine(a: Matrix, b: Vector) -> Self {
        WindFieldSpec { a, b }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if self.a.rows() != n || self.a.cols() != n || self.b.len() != n {
            return Err(GeomError::InvalidSpec(format!(
                "wind has shape A {}x{}, b {}; metric dimension is {n}",
                self.a.rows(),
                self.a.cols(),
                self.b.len()
            )));
        }
        Ok(())
    }

    pub fn at(&self, x: &Vector) -> Vector {
        self.eval(x)
    }
}

impl VectorField for WindFieldSpec {
    fn dim(&self) -> usize {
        self.b.len()
    }

    fn eval<T: Real>(&self, x: &SVec<T>) -> SVec<T> {
        self.a.mul_vec(x) + SVec::lift(&self.b)
    }
}

/// Fails unless `F(x, −W(x)) < 1`.
pub fn check_wind(base: &MetricSpec, wind: &WindFieldSpec, x: &Vector) -> Result<()> {
    let w = wind.at(x);
    if w.is_zero() {
        return Ok(());
    }
    let value = base.f(x, &(-w))?;
    if value < 1.0 {
        Ok(())
    } else {
        Err(GeomError::WindTooStrong { value, at: x.to_vec() })
    }
}

/// `F̃(x, y)`: the unique positive root of `φ(s) = F(x, y − sW) − s`.
pub fn solve_navigation(
    base: &MetricSpec,
    wind: &WindFieldSpec,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    navigation_root(base, x, &wind.at(x), y)
}

fn navigation_root(base: &MetricSpec, x: &Vector, w: &Vector, y: &Vector) -> Result<f64> {
    if y.is_zero() {
        return Err(GeomError::DegenerateDirection);
    }
    let fy = base.f(x, y)?;
    if w.is_zero() {
        return Ok(fy);
    }
    let fw = base.f(x, &(-*w))?;
    if !(fw < 1.0) {
        return Err(GeomError::WindTooStrong { value: fw, at: x.to_vec() });
    }
    let phi = |s: f64| -> Result<f64> {
        let z = *y - *w * s;
        Ok(if z.is_zero() { 0.0 } else { base.f(x, &z)? } - s)
    };
    let slope = |s: f64| phi_slope(base, x, w, y, s);

    // φ(0) = F(y) > 0 and φ(hi) ≤ F(y) − hi (1 − F(−W)) = 0; φ' ≤ F(−W) − 1 < 0.
    let (mut lo, mut hi) = (0.0, fy / (1.0 - fw));
    let mut s = fy.clamp(lo, hi);
    for _ in 0..200 {
        let p = phi(s)?;
        if p == 0.0 {
            return Ok(s);
        }
        if p > 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let d = slope(s)?;
        let newton = s - p / d;
        let next = if newton > lo && newton < hi && d < 0.0 { newton } else { 0.5 * (lo + hi) };
        let step = (next - s).abs();
        s = next;
        if step <= 2.0 * f64::EPSILON * s || hi - lo <= 2.0 * f64::EPSILON * s {
            break;
        }
    }
    let residual = phi(s)?.abs();
    if residual <= 1e-12 * s.max(fy) {
        Ok(s)
    } else {
        Err(GeomError::Bracket(format!(
            "navigation root did not settle (residual {residual:e} in [{lo}, {hi}])"
        )))
    }
}

/// `φ'(s) = −F_y(y − sW)·W − 1`.
fn phi_slope(base: &MetricSpec, x: &Vector, w: &Vector, y: &Vector, s: f64) -> Result<f64> {
    let xs: SVec<D1> = SVec::lift(x);
    let sd = Dual::var(s);
    let ys = SVec::from_fn(y.len(), |i| Dual::constant(y[i]) - Dual::constant(w[i]) * sd);
    Ok(base.eval(&xs, &ys)?.d - 1.0)
}

/// `F̃(x, y)` over any scalar type. The real root is solved on the real
/// parts and the infinitesimal parts are recovered by chord iterations
/// `s ← s − φ(s)/φ'(s₀)`, each of which is exact to one more order.
pub fn navigated_norm<T: Real>(
    base: &MetricSpec,
    wind: &WindFieldSpec,
    x: &SVec<T>,
    y: &SVec<T>,
) -> Result<T> {
    let xr = x.re();
    let yr = y.re();
    let wr = wind.at(&xr);
    let s0 = navigation_root(base, &xr, &wr, &yr)?;
    if wind.a.is_zero() && wind.b.is_zero() {
        return base.eval(x, y);
    }
    let slope = phi_slope(base, &xr, &wr, &yr, s0)?;
    let w = wind.eval(x);
    let mut s = T::cst(s0);
    for _ in 0..4 {
        let r = base.eval(x, &(*y - w.scale(s)))? - s;
        s -= r / slope;
    }
    Ok(s)
}

/// `ξ̃ = ξ + W(x)` for an `F`-unit normal `ξ`.
pub fn transformed_normal(
    base: &MetricSpec,
    wind: &WindFieldSpec,
    x: &Vector,
    xi: &Vector,
) -> Result<Vector> {
    let unit = base.f(x, xi)?;
    if (unit - 1.0).abs() > 1e-8 {
        return Err(GeomError::Precondition(format!("normal is not F-unit: F(x, xi) = {unit}")));
    }
    check_wind(base, wind, x)?;
    Ok(*xi + wind.at(x))
}
