//! Geodesic spray, nonlinear connection, Chern connection and S-curvature.
//!
//! With `f = F²`:
//! `G^i = ¼ g^{il} (f_{x^k y^l} y^k − f_{x^l})`, `N^i_j = ∂G^i/∂y^j`,
//! `δ/δx^k = ∂/∂x^k − N^m_k ∂/∂y^m`, and
//! `Γ^i_jk = ½ g^{il} (δg_lj/δx^k + δg_lk/δx^j − δg_jk/δx^l)`.

use crate::calculus::diff::{jacobian, DerivativeTable, DiffConfig, VectorField};
use crate::calculus::linalg::inverse;
use crate::calculus::{Matrix, Tensor3, Vector};
use crate::error::Result;

use super::density::VolumeDensity;
use super::{MetricSpec, SquaredNorm};

#[derive(Clone, Debug)]
pub struct ConnectionData {
    pub g: Matrix,
    pub g_inv: Matrix,
    /// `G^i`.
    pub spray: Vector,
    /// `N^i_j`.
    pub nonlinear: Matrix,
    /// `Γ^i_jk` with the reference vector the data was computed at.
    pub chern: Tensor3,
}

pub fn connection_at(
    spec: &MetricSpec,
    x: &Vector,
    w: &Vector,
    cfg: &DiffConfig,
) -> Result<ConnectionData> {
    let t = DerivativeTable::compute(&SquaredNorm(spec), x, w, cfg)?;
    let n = x.len();
    let g = Matrix::from_fn(n, n, |i, j| 0.5 * t.f_yy[i][j]);
    let g_inv = inverse(&g)?;

    let v = Vector::from_fn(n, |l| (0..n).map(|k| t.f_xy[k][l] * w[k]).sum::<f64>() - t.f_x[l]);
    let spray = g_inv.mul_vec(&v) * 0.25;

    let dv = Matrix::from_fn(n, n, |l, j| {
        (0..n).map(|k| t.f_xyy[k][l][j] * w[k]).sum::<f64>() + t.f_xy[j][l] - t.f_xy[l][j]
    });
    let mut nonlinear = g_inv.matmul(&dv).scale(0.25);
    for i in 0..n {
        for j in 0..n {
            let mut s = 0.0;
            for a in 0..n {
                for b in 0..n {
                    s += g_inv[(i, a)] * 0.5 * t.f_yyy[a][b][j] * spray[b];
                }
            }
            nonlinear[(i, j)] -= s;
        }
    }

    // d[l][j][k] = δg_lj/δx^k
    let mut d = [[[0.0; 4]; 4]; 4];
    for l in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.5 * t.f_xyy[k][l][j];
                for m in 0..n {
                    s -= nonlinear[(m, k)] * 0.5 * t.f_yyy[l][j][m];
                }
                d[l][j][k] = s;
            }
        }
    }
    let mut chern = Tensor3::zeros(n);
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let mut s = 0.0;
                for l in 0..n {
                    s += g_inv[(i, l)] * (d[l][j][k] + d[l][k][j] - d[j][k][l]);
                }
                chern[(i, j, k)] = 0.5 * s;
            }
        }
    }
    Ok(ConnectionData { g, g_inv, spray, nonlinear, chern })
}

/// `G^i(x, y)`; geodesics solve `ẍ^i + 2G^i(x, ẋ) = 0`.
pub fn spray_coefficients(spec: &MetricSpec, x: &Vector, y: &Vector) -> Result<Vector> {
    Ok(connection_at(spec, x, y, &DiffConfig::default())?.spray)
}

/// `Γ^i_jk(x, w)`.
pub fn chern_symbols(spec: &MetricSpec, x: &Vector, w: &Vector) -> Result<Tensor3> {
    Ok(connection_at(spec, x, w, &DiffConfig::default())?.chern)
}

/// `∇^w_v X = v^j ∂_j X^i + Γ^i_jk(w) v^j X^k` at `x`.
pub fn covariant_derivative<V: VectorField>(
    spec: &MetricSpec,
    field: &V,
    v: &Vector,
    x: &Vector,
    w: &Vector,
) -> Result<Vector> {
    let gamma = chern_symbols(spec, x, w)?;
    let value = field.eval(x);
    Ok(jacobian(field, x).mul_vec(v) + gamma.contract(v, &value))
}

/// `S(x, y) = ∂G^i/∂y^i − y^i ∂(ln σ)/∂x^i`.
pub fn s_curvature(
    spec: &MetricSpec,
    density: VolumeDensity,
    x: &Vector,
    y: &Vector,
) -> Result<f64> {
    let conn = connection_at(spec, x, y, &DiffConfig::default())?;
    let grad = density.log_gradient(spec, x)?;
    Ok(conn.nonlinear.trace() - y.dot(&grad))
}
