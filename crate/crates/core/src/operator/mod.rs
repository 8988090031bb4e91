//! The linear part `L = D_η^α + k1 ∂_ξξ + k2 + k3 ∂_ξ` of the equation, the
//! collocation basis `ψ_i = L K_(ξ_i, η_i)` it generates, and the Gram matrix
//! `⟨ψ_i, ψ_j⟩ = (L ψ_j)(ξ_i, η_i)`.

mod basis;
mod grid;
mod problem;
mod time;

pub use basis::{assemble_gram, gram_entry, psi_eval, BasisFunction, CollocationBasis, GramMatrix};
pub use grid::CollocationGrid;
pub use problem::{constant, ExactSolution, Problem, ScalarField, SeparableSolution};
pub use time::{caputo_time_kernel, double_caputo_time_kernel, TimeKernels};

/// Default Gauss–Jacobi node count for the outer Caputo transform.
pub const DEFAULT_QUADRATURE_NODES: usize = 64;
