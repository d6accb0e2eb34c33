//! Dense complex matrices, tensor legs, operator subspaces and linear maps
//! between them.

mod legs;
mod linmap;
mod matrix;
mod subspace;
mod svd;

pub use legs::{combine, embed_legs, flip, map_leg, partial_trace, permute_legs, slice_leg, LegSpace};
pub use linmap::{solve_linear_map, HomResidual, LinearMap, SolvedMap};
pub use svd::{pseudo_inverse, svd, Svd};
pub use matrix::{pauli, CMatrix, ONE, ZERO};
pub use subspace::{singular_values, span_close, subspace_equal, subspace_intersect, OperatorSubspace, SpanComparison};

/// Residual convention for operator identities: largest entrywise deviation.
pub fn identity_residual(lhs: &CMatrix, rhs: &CMatrix) -> f64 {
    lhs.max_abs_diff(rhs)
}
