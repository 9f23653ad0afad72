//! Legendre transform `L(y) = ½ ∂F²/∂y` and its inverse, and the dual norm.
//!
//! The inverse minimizes the strictly convex function `½F²(y) − τ(y)`, whose
//! unique critical point is `L⁻¹(τ)`; `F*(τ) = F(L⁻¹(τ))`.

use crate::calculus::diff::y_hessian;
use crate::calculus::linalg::{inverse, solve};
use crate::calculus::{Covector, Dual, Matrix, Real, SVec, Vector};
use crate::error::{GeomError, Result};

use super::{MetricSpec, SquaredNorm};

/// `∂(½F²)/∂y` at `(x, y)` over any scalar type.
pub fn half_sq_gradient<T: Real>(spec: &MetricSpec, x: &SVec<T>, y: &SVec<T>) -> Result<SVec<T>> {
    let n = y.len();
    let xs = SVec::from_fn(n, |q| Dual::constant(x[q]));
    let mut out = SVec::zeros(n);
    for i in 0..n {
        let ys = SVec::from_fn(n, |q| {
            Dual::new(y[q], if q == i { T::cst(1.0) } else { T::zero() })
        });
        let f = spec.eval(&xs, &ys)?;
        out[i] = (f * f).d * 0.5;
    }
    Ok(out)
}

/// `L(y) = g_y(y, ·)`.
pub fn legendre(spec: &MetricSpec, x: &Vector, y: &Vector) -> Result<Covector> {
    half_sq_gradient(spec, x, y)
}

/// `L⁻¹(τ)` by damped Newton iteration on `½F²(y) − τ(y)`.
pub fn legendre_inv(spec: &MetricSpec, x: &Vector, tau: &Covector) -> Result<Vector> {
    if tau.is_zero() {
        return Err(GeomError::DegenerateDirection);
    }
    let tau_norm = tau.norm();
    let objective = |y: &Vector| -> Result<f64> {
        let f = spec.f(x, y)?;
        Ok(0.5 * f * f - tau.dot(y))
    };
    let mut y = tau.scale(tau_norm / spec.f(x, tau)?);
    let mut residual = f64::INFINITY;
    for _ in 0..100 {
        let (_, grad, hess) = y_hessian(&SquaredNorm(spec), x, &y)?;
        let r = grad * 0.5 - *tau;
        let previous = residual;
        residual = r.norm();
        // Stop at round-off level, i.e. once Newton stops gaining.
        if residual <= 1e-15 * tau_norm || (residual <= 1e-12 * tau_norm && residual > 0.25 * previous) {
            return Ok(y);
        }
        let step = solve(&hess.scale(0.5), &r)?;
        // Near the minimizer the Armijo test drowns in round-off; Newton is
        // already in its quadratic regime there, so take the full step.
        if residual <= 1e-6 * tau_norm {
            y = y - step;
            continue;
        }
        let f0 = objective(&y)?;
        let slope = r.dot(&step);
        let mut t = 1.0;
        let mut next = y - step * t;
        while t > 1e-12 {
            if !next.is_zero() {
                if let Ok(f1) = objective(&next) {
                    if f1 <= f0 - 1e-4 * t * slope {
                        break;
                    }
                }
            }
            t *= 0.5;
            next = y - step * t;
        }
        y = next;
    }
    if residual <= 1e-11 * tau_norm {
        Ok(y)
    } else {
        Err(GeomError::NonConvergence { what: "inverse Legendre transform", residual })
    }
}

/// `L⁻¹(τ)` over any scalar type: the real root is found first, then
/// lifted by chord iterations with the frozen real Hessian, each of which
/// fixes one more order of the infinitesimal parts.
pub fn legendre_inv_generic<T: Real>(
    spec: &MetricSpec,
    x: &SVec<T>,
    tau: &SVec<T>,
) -> Result<SVec<T>> {
    let xr = x.re();
    let y0 = legendre_inv(spec, &xr, &tau.re())?;
    let g0_inv = inverse(&spec.fundamental_tensor(&xr, &y0)?.g)?;
    let mut y = SVec::lift(&y0);
    for _ in 0..4 {
        let r = half_sq_gradient(spec, x, &y)? - *tau;
        y = y - g0_inv.mul_vec(&r);
    }
    Ok(y)
}

/// `F*(x, τ) = max { τ(y) : F(x, y) = 1 }`.
pub fn dual_norm(spec: &MetricSpec, x: &Vector, tau: &Covector) -> Result<f64> {
    spec.f(x, &legendre_inv(spec, x, tau)?)
}

pub fn dual_norm_generic<T: Real>(spec: &MetricSpec, x: &SVec<T>, tau: &SVec<T>) -> Result<T> {
    spec.eval(x, &legendre_inv_generic(spec, x, tau)?)
}

/// Hessian of `F*` at `τ`: `(g(ξ)⁻¹ − ξ ξᵀ)/F*(τ)` with `ξ = L⁻¹(τ)/F*(τ)`.
pub fn dual_hessian(spec: &MetricSpec, x: &Vector, tau: &Covector) -> Result<Matrix> {
    let y = legendre_inv(spec, x, tau)?;
    let fs = spec.f(x, &y)?;
    let xi = y.scale(1.0 / fs);
    let g_inv = inverse(&spec.fundamental_tensor(x, &y)?.g)?;
    let n = y.len();
    Ok(Matrix::from_fn(n, n, |i, j| (g_inv[(i, j)] - xi[i] * xi[j]) / fs))
}
