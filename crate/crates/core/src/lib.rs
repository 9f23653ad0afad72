//! Numerical Finsler geometry: metrics, Zermelo navigation, hypersurface
//! curvature and integral identities.

// `!(x > 0.0)` is used on purpose so that NaN takes the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop, clippy::large_enum_variant)]

pub mod calculus;
pub mod error;

pub use error::{GeomError, Result};
pub mod quadrature;
pub mod metric;
pub mod navigation;
pub mod hypersurface;
pub mod theorems;
