//! Uniform 1-D grid, central-difference operators, discrete norms, the
//! trapezoidal nonlocal operator and the tridiagonal solver used per step.

mod grid;
mod integral;
mod ops;
mod tridiag;

pub use grid::{h1_seminorm, inner, l2_norm, seminorm_decomposition, GridFunction, SeminormParts, SpatialGrid};
pub use integral::{estimate_operator_norm, FastIntegral, IntegralKernel, IntegralOperator};
pub use ops::{gradient, laplacian};
pub use tridiag::{assemble_tridiagonal, thomas_solve, TridiagonalMatrix};
