pub mod diff;
pub mod linalg;
pub mod real;
pub mod vector;

pub use diff::{jacobian, DerivativeTable, DiffConfig, DiffMode, ScalarField, VectorField};
pub use real::{Dual, Real, D1, D2, D3};
pub use vector::{Covector, Matrix, Point, SVec, Tensor3, Vector, MAX_DIM};
