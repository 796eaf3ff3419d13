//! Variable-step implicit-explicit BDF2 time stepping for one-dimensional
//! parabolic integro-differential equations
//!
//! ```text
//! u_t - c1 u_xx + c2 u_x + c3 u + int_Omega u(z, t) rho(z - x, t) dz = f
//! ```
//!
//! with Dirichlet data, on temporal meshes graded towards `t = 0` to resolve
//! a weak initial singularity. The nonlocal term is treated explicitly through
//! linear extrapolation, so each step is a single tridiagonal solve.
//!
//! The crate is organised bottom-up:
//!
//! * [`mesh`]: uniform and graded temporal meshes and the step-ratio condition.
//! * [`kernels`]: BDF2 kernels, their DOC and DCC companions and checks of the
//!   identities, positivity bounds and sharp DCC bounds they satisfy.
//! * [`spatial`]: grid, central differences, discrete norms, the trapezoidal
//!   nonlocal operator (direct and FFT) and the Thomas solver.
//! * [`stepper`]: the BDF1-started IMEX BDF2 march.
//! * [`problems`]: a manufactured benchmark and the Merton jump-diffusion call.
//! * [`harness`]: convergence studies, kernel reports, CSV and config I/O.

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
pub mod error;
pub mod harness;
pub mod kernels;
pub mod mesh;
pub mod problems;
pub mod spatial;
pub mod stepper;

pub use error::{Error, Result};
pub use mesh::{build_graded_mesh, check_ratio_condition, r_max, RatioReport, TimeMesh};
pub use problems::{manufactured_problem, merton_problem, merton_reference_price, price_at, MertonParams, PideProblem, Side};
pub use spatial::{GridFunction, SpatialGrid};
pub use stepper::{run, SolveOptions, SolveResult};
