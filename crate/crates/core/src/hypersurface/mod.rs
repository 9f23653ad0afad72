//! Closed hypersurfaces in Finsler spaces: frames, unit normals, shape
//! operators, induced volumes and integrals.

mod chart;
mod embedding;
mod frame;

pub use chart::{chart_orientation, generalized_cross, sphere_chart_jet, Tangents};
pub use embedding::{EmbeddingSpec, Orientation, SphereProfile, SurfaceJet};
pub use frame::{
    r_means, AnisotropicData, CurvatureData, DomainVolume, FrameData, Surface, WhichNormal,
};
