//! Partial derivatives of scalar fields `f(x, y)` on the tangent bundle.
//!
//! Exact mode propagates nested dual numbers; central-difference mode is kept
//! as an independent cross-check and uses nested symmetric stencils.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

use super::real::{seed1, seed2, seed3, Jet3, Real, D2, D3};
use super::vector::{Matrix, SVec, Vector};

/// A smooth scalar function of base point `x` and direction `y`, written
/// once over any [`Real`] scalar.
pub trait ScalarField: Sync {
    fn eval<T: Real>(&self, x: &SVec<T>, y: &SVec<T>) -> Result<T>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DiffMode {
    #[default]
    ExactPropagation,
    CentralDifference,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiffConfig {
    pub mode: DiffMode,
    /// Relative step for central differences; multiplied by the argument scale.
    pub fd_step: f64,
    pub max_order: usize,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig { mode: DiffMode::ExactPropagation, fd_step: f64::EPSILON.cbrt(), max_order: 3 }
    }
}

impl DiffConfig {
    pub fn central(fd_step: f64) -> Self {
        DiffConfig { mode: DiffMode::CentralDifference, fd_step, max_order: 3 }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.fd_step > 0.0) {
            return Err(GeomError::Config(format!("fd_step must be positive, got {}", self.fd_step)));
        }
        if self.max_order > 3 {
            return Err(GeomError::Config(format!("max_order {} exceeds 3", self.max_order)));
        }
        Ok(())
    }
}

/// Which argument a derivative index refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X(usize),
    Y(usize),
}

fn check_request(cfg: &DiffConfig, y: &Vector, vars: &[Var]) -> Result<()> {
    cfg.validate()?;
    if y.is_zero() {
        return Err(GeomError::DegenerateDirection);
    }
    if vars.len() > cfg.max_order {
        return Err(GeomError::Config(format!(
            "derivative order {} exceeds max_order {}",
            vars.len(),
            cfg.max_order
        )));
    }
    Ok(())
}

/// Mixed partial `∂^k f / ∂v_1 … ∂v_k` for `k ≤ 3` in the requested mode.
pub fn partial<F: ScalarField>(
    f: &F,
    x: &Vector,
    y: &Vector,
    vars: &[Var],
    cfg: &DiffConfig,
) -> Result<f64> {
    check_request(cfg, y, vars)?;
    match cfg.mode {
        DiffMode::ExactPropagation => exact_partial(f, x, y, vars),
        DiffMode::CentralDifference => {
            let scale = x.max_abs().max(y.max_abs()).max(1.0);
            fd_partial(f, x, y, vars, cfg.fd_step * scale)
        }
    }
}

/// `∂^k f / ∂y^{i_1} … ∂y^{i_k}`.
pub fn partial_y<F: ScalarField>(
    f: &F,
    x: &Vector,
    y: &Vector,
    indices: &[usize],
    cfg: &DiffConfig,
) -> Result<f64> {
    let vars: Vec<Var> = indices.iter().map(|&i| Var::Y(i)).collect();
    partial(f, x, y, &vars, cfg)
}

/// `∂f / ∂x^i`.
pub fn partial_x<F: ScalarField>(
    f: &F,
    x: &Vector,
    y: &Vector,
    index: usize,
    cfg: &DiffConfig,
) -> Result<f64> {
    partial(f, x, y, &[Var::X(index)], cfg)
}

fn exact_partial<F: ScalarField>(f: &F, x: &Vector, y: &Vector, vars: &[Var]) -> Result<f64> {
    let n = x.len();
    let hits = |slot: usize, v: Var| vars.get(slot) == Some(&v);
    match vars.len() {
        0 => f.eval(x, y),
        1 => {
            let xs = SVec::from_fn(n, |m| seed1(x[m], hits(0, Var::X(m))));
            let ys = SVec::from_fn(n, |m| seed1(y[m], hits(0, Var::Y(m))));
            Ok(f.eval(&xs, &ys)?.d)
        }
        2 => {
            let xs = SVec::from_fn(n, |m| seed2(x[m], hits(0, Var::X(m)), hits(1, Var::X(m))));
            let ys = SVec::from_fn(n, |m| seed2(y[m], hits(0, Var::Y(m)), hits(1, Var::Y(m))));
            Ok(f.eval(&xs, &ys)?.d.d)
        }
        _ => {
            let seed_x = |m| seed3(x[m], hits(0, Var::X(m)), hits(1, Var::X(m)), hits(2, Var::X(m)));
            let seed_y = |m| seed3(y[m], hits(0, Var::Y(m)), hits(1, Var::Y(m)), hits(2, Var::Y(m)));
            let xs = SVec::from_fn(n, seed_x);
            let ys = SVec::from_fn(n, seed_y);
            Ok(Jet3::from(f.eval(&xs, &ys)?).abc)
        }
    }
}

fn fd_partial<F: ScalarField>(f: &F, x: &Vector, y: &Vector, vars: &[Var], h: f64) -> Result<f64> {
    let Some((&first, rest)) = vars.split_first() else {
        return f.eval(x, y);
    };
    let shifted = |s: f64| {
        let (mut xp, mut yp) = (*x, *y);
        match first {
            Var::X(i) => xp[i] += s,
            Var::Y(i) => yp[i] += s,
        }
        (xp, yp)
    };
    let (xp, yp) = shifted(h);
    let (xm, ym) = shifted(-h);
    Ok((fd_partial(f, &xp, &yp, rest, h)? - fd_partial(f, &xm, &ym, rest, h)?) / (2.0 * h))
}

/// Every partial of `f` at `(x, y)` that the Finsler connection needs:
/// all orders ≤ 3 in `y`, plus one `x` derivative on top of up to two
/// `y` derivatives.
///
/// Index convention: `f_xy[k][i] = ∂²f/∂x^k∂y^i`,
/// `f_xyy[k][i][j] = ∂³f/∂x^k∂y^i∂y^j`.
#[derive(Clone, Debug)]
pub struct DerivativeTable {
    pub n: usize,
    pub f: f64,
    pub f_y: [f64; 4],
    pub f_x: [f64; 4],
    pub f_yy: [[f64; 4]; 4],
    pub f_xy: [[f64; 4]; 4],
    pub f_yyy: [[[f64; 4]; 4]; 4],
    pub f_xyy: [[[f64; 4]; 4]; 4],
}

impl DerivativeTable {
    pub fn compute<F: ScalarField>(f: &F, x: &Vector, y: &Vector, cfg: &DiffConfig) -> Result<Self> {
        check_request(cfg, y, &[])?;
        match cfg.mode {
            DiffMode::ExactPropagation => Self::exact(f, x, y),
            DiffMode::CentralDifference => {
                let scale = x.max_abs().max(y.max_abs()).max(1.0);
                Self::differences(f, x, y, cfg.fd_step * scale)
            }
        }
    }

    fn empty(n: usize) -> Self {
        DerivativeTable {
            n,
            f: 0.0,
            f_y: [0.0; 4],
            f_x: [0.0; 4],
            f_yy: [[0.0; 4]; 4],
            f_xy: [[0.0; 4]; 4],
            f_yyy: [[[0.0; 4]; 4]; 4],
            f_xyy: [[[0.0; 4]; 4]; 4],
        }
    }

    fn exact<F: ScalarField>(f: &F, x: &Vector, y: &Vector) -> Result<Self> {
        let n = x.len();
        let mut t = Self::empty(n);
        let xs_const: SVec<D3> = SVec::lift(x);
        // Pure y derivatives.
        for i in 0..n {
            for j in i..n {
                for m in j..n {
                    let ys = SVec::from_fn(n, |q| seed3(y[q], q == i, q == j, q == m));
                    let r = Jet3::from(f.eval(&xs_const, &ys)?);
                    t.f = r.value;
                    t.f_y[i] = r.a;
                    t.f_yy[i][j] = r.ab;
                    t.f_yy[j][i] = r.ab;
                    for (a, b, c) in perms(i, j, m) {
                        t.f_yyy[a][b][c] = r.abc;
                    }
                }
            }
        }
        // One x derivative on top of two y derivatives.
        let ys_plain = *y;
        for k in 0..n {
            let xs = SVec::from_fn(n, |q| seed3(x[q], false, false, q == k));
            for i in 0..n {
                for j in i..n {
                    let ys = SVec::from_fn(n, |q| seed3(ys_plain[q], q == i, q == j, false));
                    let r = Jet3::from(f.eval(&xs, &ys)?);
                    t.f_x[k] = r.c;
                    t.f_xy[k][i] = r.ac;
                    t.f_xy[k][j] = r.bc;
                    t.f_xyy[k][i][j] = r.abc;
                    t.f_xyy[k][j][i] = r.abc;
                }
            }
        }
        Ok(t)
    }

    fn differences<F: ScalarField>(f: &F, x: &Vector, y: &Vector, h: f64) -> Result<Self> {
        let n = x.len();
        let mut t = Self::empty(n);
        let p = |vars: &[Var]| fd_partial(f, x, y, vars, h);
        t.f = f.eval(x, y)?;
        for i in 0..n {
            t.f_y[i] = p(&[Var::Y(i)])?;
            t.f_x[i] = p(&[Var::X(i)])?;
            for j in 0..n {
                t.f_yy[i][j] = p(&[Var::Y(i), Var::Y(j)])?;
                t.f_xy[i][j] = p(&[Var::X(i), Var::Y(j)])?;
                for m in 0..n {
                    t.f_yyy[i][j][m] = p(&[Var::Y(i), Var::Y(j), Var::Y(m)])?;
                    t.f_xyy[i][j][m] = p(&[Var::X(i), Var::Y(j), Var::Y(m)])?;
                }
            }
        }
        Ok(t)
    }
}

fn perms(i: usize, j: usize, m: usize) -> [(usize, usize, usize); 6] {
    [(i, j, m), (i, m, j), (j, i, m), (j, m, i), (m, i, j), (m, j, i)]
}

/// Value, gradient and Hessian in `y` only (second-order propagation).
pub fn y_hessian<F: ScalarField>(f: &F, x: &Vector, y: &Vector) -> Result<(f64, Vector, Matrix)> {
    if y.is_zero() {
        return Err(GeomError::DegenerateDirection);
    }
    let n = x.len();
    let xs: SVec<D2> = SVec::lift(x);
    let mut value = 0.0;
    let mut grad = Vector::zeros(n);
    let mut hess = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let ys = SVec::from_fn(n, |q| seed2(y[q], q == i, q == j));
            let r = f.eval(&xs, &ys)?;
            value = r.v.v;
            grad[i] = r.v.d;
            grad[j] = r.d.v;
            hess[(i, j)] = r.d.d;
            hess[(j, i)] = r.d.d;
        }
    }
    Ok((value, grad, hess))
}

/// A smooth vector field on the base manifold, written once over any
/// [`Real`] scalar.
pub trait VectorField: Sync {
    fn dim(&self) -> usize;
    fn eval<T: Real>(&self, x: &SVec<T>) -> SVec<T>;
}

/// `J[i][j] = ∂X^i/∂x^j` by first-order propagation.
pub fn jacobian<V: VectorField>(field: &V, x: &Vector) -> Matrix {
    let n = x.len();
    let mut jac = Matrix::zeros(field.dim(), n);
    for j in 0..n {
        let xs = SVec::from_fn(n, |q| seed1(x[q], q == j));
        let v = field.eval(&xs);
        for i in 0..field.dim() {
            jac[(i, j)] = v[i].d;
        }
    }
    jac
}
