//! Iterative reproducing-kernel collocation for the time-fractional Burgers
//! equation with variable coefficients
//!
//! ```text
//! D_η^α y + k1 y_ξξ + k2 y + k3 y_ξ + k4 y y_ξ = f,   (ξ, η) ∈ [0,1]²,
//! y(ξ,0) = y(0,η) = y(1,η) = 0,   0 < α <= 1.
//! ```

// Reference constants are kept at full printed precision, and `!(x >= y)`
// is used deliberately so NaN lands on the error path.
#![allow(clippy::excessive_precision, clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod fracmath;
pub mod kernels;
pub mod operator;
pub mod oracle;
pub mod orthonormalize;
pub mod problems;
pub mod solver;
pub mod verify;

pub use error::{Error, Result};
pub use fracmath::FractionalOrder;
pub use operator::{CollocationGrid, Problem};
pub use orthonormalize::{compute_beta, OrthonormalBasis};
pub use problems::ExampleId;
pub use solver::{solve, ApproximateSolution, SolverOptions};
