//! Volume densities on the base manifold.

use serde::{Deserialize, Serialize};

use crate::calculus::Vector;
use crate::error::{GeomError, Result};
use crate::quadrature::{integrate_unit_sphere, unit_ball_volume};

use super::MetricSpec;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VolumeDensity {
    #[default]
    ConstantOne,
    BusemannHausdorff,
}

const BH_ORDER: usize = 48;

impl VolumeDensity {
    pub fn value(&self, spec: &MetricSpec, x: &Vector) -> Result<f64> {
        match self {
            VolumeDensity::ConstantOne => Ok(1.0),
            VolumeDensity::BusemannHausdorff => bh_density(spec, x),
        }
    }

    /// `∂(ln σ)/∂x`.
    ///
    /// The Busemann–Hausdorff density depends only on the volume of the
    /// indicatrix. A navigated indicatrix at `x` is the base indicatrix
    /// translated by `W(x)`, so it inherits the base density; Euclidean and
    /// Randers norms are position independent.
    pub fn log_gradient(&self, spec: &MetricSpec, x: &Vector) -> Result<Vector> {
        match (self, spec) {
            (VolumeDensity::ConstantOne, _) => Ok(Vector::zeros(x.len())),
            (VolumeDensity::BusemannHausdorff, MetricSpec::Navigation { base, .. }) => {
                self.log_gradient(base, x)
            }
            (VolumeDensity::BusemannHausdorff, _) => Ok(Vector::zeros(x.len())),
        }
    }
}

/// `vol(B^n) / vol{y : F(x, y) ≤ 1}`, with the indicatrix volume computed
/// in polar form `(1/n) ∫_{S^{n−1}} F(θ)^{−n} dθ`.
pub fn bh_density(spec: &MetricSpec, x: &Vector) -> Result<f64> {
    let n = x.len();
    let volume = |order: usize| {
        integrate_unit_sphere(n, order, |theta| Ok(spec.f(x, theta)?.powi(-(n as i32))))
            .map(|v| v / n as f64)
    };
    let coarse = volume(BH_ORDER)?;
    let fine = volume(2 * BH_ORDER)?;
    let residual = (fine - coarse).abs() / fine;
    if !(residual <= 1e-9) {
        return Err(GeomError::NonConvergence { what: "indicatrix volume quadrature", residual });
    }
    Ok(unit_ball_volume(n) / fine)
}
