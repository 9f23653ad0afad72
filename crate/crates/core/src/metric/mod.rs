//! Finsler metrics and the objects derived from them.

mod connection;
mod density;
mod legendre;

pub use connection::{
    chern_symbols, connection_at, covariant_derivative, s_curvature, spray_coefficients,
    ConnectionData,
};
pub use density::{bh_density, VolumeDensity};
pub use legendre::{
    dual_hessian, dual_norm, dual_norm_generic, half_sq_gradient, legendre, legendre_inv,
    legendre_inv_generic,
};

use serde::{Deserialize, Serialize};

use crate::calculus::diff::y_hessian;
use crate::calculus::{Matrix, Real, SVec, ScalarField, Vector};
use crate::error::{GeomError, Result};
use crate::navigation::{navigated_norm, WindFieldSpec};

/// Declarative description of a Finsler metric on a domain of `R^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum MetricSpec {
    Euclidean { dim: usize },
    /// `F(y) = |y| + ⟨b, y⟩` with `|b| < 1`.
    Randers { b: Vector },
    /// `F̃` solving `F(x, y − F̃ W(x)) = F̃`.
    Navigation { base: Box<MetricSpec>, wind: WindFieldSpec },
}

impl MetricSpec {
    pub fn euclidean(dim: usize) -> Self {
        MetricSpec::Euclidean { dim }
    }

    pub fn randers(b: Vector) -> Self {
        MetricSpec::Randers { b }
    }

    pub fn navigation(base: MetricSpec, wind: WindFieldSpec) -> Self {
        MetricSpec::Navigation { base: Box::new(base), wind }
    }

    pub fn dim(&self) -> usize {
        match self {
            MetricSpec::Euclidean { dim } => *dim,
            MetricSpec::Randers { b } => b.len(),
            MetricSpec::Navigation { base, .. } => base.dim(),
        }
    }

    /// Structural checks that do not depend on a base point.
    pub fn validate(&self) -> Result<()> {
        match self {
            MetricSpec::Euclidean { dim } => {
                if !(2..=4).contains(dim) {
                    return Err(GeomError::InvalidSpec(format!("dimension {dim} outside 2..=4")));
                }
            }
            MetricSpec::Randers { b } => {
                if b.len() < 2 {
                    return Err(GeomError::InvalidSpec("randers b needs 2..=4 components".into()));
                }
                let nb = b.norm();
                if !(nb < 1.0) {
                    return Err(GeomError::InvalidSpec(format!(
                        "randers |b| = {nb} must be < 1 for strong convexity"
                    )));
                }
            }
            MetricSpec::Navigation { base, wind } => {
                base.validate()?;
                wind.validate(base.dim())?;
            }
        }
        Ok(())
    }

    /// `true` when `F` does not depend on the base point.
    pub fn is_minkowski(&self) -> bool {
        match self {
            MetricSpec::Euclidean { .. } | MetricSpec::Randers { .. } => true,
            MetricSpec::Navigation { base, wind } => base.is_minkowski() && wind.a.is_zero(),
        }
    }

    /// The position-independent metric underlying a chain of navigations.
    pub fn minkowski_root(&self) -> &MetricSpec {
        match self {
            MetricSpec::Navigation { base, .. } => base.minkowski_root(),
            m => m,
        }
    }

    /// `F(x, y)` over any scalar type.
    pub fn eval<T: Real>(&self, x: &SVec<T>, y: &SVec<T>) -> Result<T> {
        if y.re().is_zero() {
            return Err(GeomError::DegenerateDirection);
        }
        match self {
            MetricSpec::Euclidean { .. } => Ok(y.norm()),
            MetricSpec::Randers { b } => Ok(y.norm() + SVec::lift(b).dot(y)),
            MetricSpec::Navigation { base, wind } => navigated_norm(base, wind, x, y),
        }
    }

    pub fn f(&self, x: &Vector, y: &Vector) -> Result<f64> {
        self.eval(x, y)
    }

    /// `g_ij(x, y) = ½ ∂²F²/∂y^i∂y^j`.
    pub fn fundamental_tensor(&self, x: &Vector, y: &Vector) -> Result<FundamentalTensor> {
        let (_, _, h) = y_hessian(&SquaredNorm(self), x, y)?;
        Ok(FundamentalTensor { g: h.scale(0.5), x: *x, y: *y })
    }

    /// `F(x, −W(x)) < 1` at `x` for every navigation layer.
    pub fn check_admissible(&self, x: &Vector) -> Result<()> {
        if let MetricSpec::Navigation { base, wind } = self {
            base.check_admissible(x)?;
            crate::navigation::check_wind(base, wind, x)?;
        }
        Ok(())
    }
}

/// `F²` as a scalar field, the potential behind `g`, the spray and the
/// Chern connection.
pub struct SquaredNorm<'a>(pub &'a MetricSpec);

impl ScalarField for SquaredNorm<'_> {
    fn eval<T: Real>(&self, x: &SVec<T>, y: &SVec<T>) -> Result<T> {
        let f = self.0.eval(x, y)?;
        Ok(f * f)
    }
}

/// `F` itself as a scalar field.
pub struct Norm<'a>(pub &'a MetricSpec);

impl ScalarField for Norm<'_> {
    fn eval<T: Real>(&self, x: &SVec<T>, y: &SVec<T>) -> Result<T> {
        self.0.eval(x, y)
    }
}

#[derive(Clone, Debug)]
pub struct FundamentalTensor {
    pub g: Matrix,
    pub x: Vector,
    pub y: Vector,
}

impl FundamentalTensor {
    pub fn inner(&self, u: &Vector, v: &Vector) -> f64 {
        self.g.bilinear(u, v)
    }
}
