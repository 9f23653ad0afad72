//! Executable versions of the navigation, Heintze–Karcher, variational and
//! cross-formulation results, each producing a [`CheckReport`].

mod anisotropic;
mod integral;
mod report;
mod shift;

pub use anisotropic::anisotropic_cross_check;
pub use integral::{heintze_karcher, volume_variation};
pub use report::{CheckReport, Observation, Residual, Verdict};
pub use shift::{flowed_shift, mean_relations, navigation_shift, s_curvature_check, transformed_normal_check};

use serde::{Deserialize, Serialize};

use crate::calculus::Vector;
use crate::error::{GeomError, Result};
use crate::hypersurface::{EmbeddingSpec, Orientation};
use crate::metric::{MetricSpec, VolumeDensity};
use crate::navigation::{
    check_wind, homothety_dilation, sample_directions, HomothetyCertificate, WindFieldSpec,
};
use crate::quadrature::ChartGrid;

/// What the Heintze–Karcher check should expect from the gap `LHS − nV`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HkExpectation {
    /// Only `LHS ≥ nV`.
    #[default]
    Inequality,
    /// `|LHS − nV| ≤ tol · nV`.
    Equality,
    /// A positive gap that exceeds ten times the grid-refinement error.
    Strict,
}

/// Everything a check needs: base metric, wind, surface and numerics.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub metric: MetricSpec,
    pub wind: WindFieldSpec,
    pub embedding: EmbeddingSpec,
    pub orientation: Orientation,
    pub density: VolumeDensity,
    pub grid_order: usize,
    pub seed: u64,
    /// Multiplies every tolerance.
    pub tol_scale: f64,
    pub flow_times: Vec<f64>,
    pub hk_expect: HkExpectation,
    /// Number of random fields in the variational checks and of random
    /// pairs in the cross-formulation check.
    pub variations: usize,
    pub cross_pairs: usize,
}

impl Scenario {
    pub fn new(metric: MetricSpec, wind: WindFieldSpec, embedding: EmbeddingSpec) -> Self {
        Scenario {
            metric,
            wind,
            embedding,
            orientation: Orientation::Inner,
            density: VolumeDensity::ConstantOne,
            grid_order: 8,
            seed: 0,
            tol_scale: 1.0,
            flow_times: vec![0.1, 0.5],
            hk_expect: HkExpectation::Inequality,
            variations: 5,
            cross_pairs: 100,
        }
    }

    pub fn dim(&self) -> usize {
        self.metric.dim()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.dim();
        self.metric.validate()?;
        self.wind.validate(n)?;
        self.embedding.validate()?;
        if self.embedding.dim() != n {
            return Err(GeomError::Config(format!(
                "embedding dimension {} does not match metric dimension {n}",
                self.embedding.dim()
            )));
        }
        if self.grid_order < 2 {
            return Err(GeomError::Config("grid order must be at least 2".into()));
        }
        if !(self.tol_scale > 0.0 && self.tol_scale.is_finite()) {
            return Err(GeomError::Config("tolerance scale must be positive".into()));
        }
        Ok(())
    }

    pub fn grid(&self) -> Result<ChartGrid> {
        ChartGrid::sphere_chart(self.dim(), self.grid_order)
    }

    pub fn navigated(&self) -> MetricSpec {
        MetricSpec::navigation(self.metric.clone(), self.wind.clone())
    }

    pub(crate) fn tol(&self, base: f64) -> f64 {
        base * self.tol_scale
    }

    /// Constant ambient density used for induced volumes.
    pub(crate) fn sigma(&self, metric: &MetricSpec) -> Result<f64> {
        self.density.value(metric, &self.embedding.center())
    }

    pub fn certificate(&self) -> Result<HomothetyCertificate> {
        let cert = homothety_dilation(&self.metric, &self.wind, &sample_directions(self.dim()))?;
        if !cert.is_valid() {
            return Err(GeomError::Precondition(format!(
                "wind is not homothetic for the base metric (fit residual {:.3e})",
                cert.residual
            )));
        }
        Ok(cert)
    }

    /// `F(x, −W(x)) < 1` at every node of the surface.
    pub(crate) fn check_wind_on(&self, grid: &ChartGrid) -> Result<()> {
        grid.map(|u| {
            let (x, _) = self.embedding.jet1(u)?;
            check_wind(&self.metric, &self.wind, &x)
        })?;
        Ok(())
    }
}

/// The registered checks, in their canonical order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    NavigationShift,
    TransformedNormal,
    FlowedShift,
    MeanRelations,
    SCurvature,
    HeintzeKarcher,
    VolumeVariation,
    AnisotropicCrossCheck,
}

impl CheckKind {
    pub const ALL: [CheckKind; 8] = [
        CheckKind::NavigationShift,
        CheckKind::TransformedNormal,
        CheckKind::FlowedShift,
        CheckKind::MeanRelations,
        CheckKind::SCurvature,
        CheckKind::HeintzeKarcher,
        CheckKind::VolumeVariation,
        CheckKind::AnisotropicCrossCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CheckKind::NavigationShift => "navigation_shift",
            CheckKind::TransformedNormal => "transformed_normal",
            CheckKind::FlowedShift => "flowed_shift",
            CheckKind::MeanRelations => "mean_relations",
            CheckKind::SCurvature => "s_curvature",
            CheckKind::HeintzeKarcher => "heintze_karcher",
            CheckKind::VolumeVariation => "volume_variation",
            CheckKind::AnisotropicCrossCheck => "anisotropic_cross_check",
        }
    }

    pub fn from_name(name: &str) -> Option<CheckKind> {
        CheckKind::ALL.into_iter().find(|k| k.name() == name)
    }

    pub fn description(self) -> &'static str {
        match self {
            CheckKind::NavigationShift => {
                "principal curvatures under homothetic navigation shift by the dilation c"
            }
            CheckKind::TransformedNormal => "xi + W is the navigated unit normal",
            CheckKind::FlowedShift => {
                "principal curvatures of flowed parallel hypersurfaces under navigation"
            }
            CheckKind::MeanRelations => {
                "anisotropic, density and S-curvature mean-curvature identities under navigation"
            }
            CheckKind::SCurvature => "S-curvature of Minkowski and navigated metrics",
            CheckKind::HeintzeKarcher => {
                "integral of the inverse anisotropic mean curvature against n times the volume"
            }
            CheckKind::VolumeVariation => {
                "first variation of enclosed volume and criticality of CMC hypersurfaces"
            }
            CheckKind::AnisotropicCrossCheck => {
                "Euclidean anisotropic mean curvature against the Finsler shape operator"
            }
        }
    }

    pub fn run(self, scenario: &Scenario) -> Result<CheckReport> {
        scenario.validate()?;
        match self {
            CheckKind::NavigationShift => navigation_shift(scenario),
            CheckKind::TransformedNormal => transformed_normal_check(scenario),
            CheckKind::FlowedShift => flowed_shift(scenario),
            CheckKind::MeanRelations => mean_relations(scenario),
            CheckKind::SCurvature => s_curvature_check(scenario),
            CheckKind::HeintzeKarcher => heintze_karcher(scenario),
            CheckKind::VolumeVariation => volume_variation(scenario),
            CheckKind::AnisotropicCrossCheck => anisotropic_cross_check(scenario),
        }
    }
}

/// `max_i |a_i|`, NaN-propagating.
pub(crate) fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v.abs()) })
}

pub(crate) fn label(prefix: &str, t: f64) -> String {
    format!("{prefix}@t={t}")
}

pub(crate) fn unit_vector(v: &Vector) -> Vector {
    v.scale(1.0 / v.norm())
}
