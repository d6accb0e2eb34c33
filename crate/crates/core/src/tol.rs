//! Numerical thresholds shared by every construction and check.

/// Relative singular-value cut used for rank decisions.
pub const RANK: f64 = 1e-10;
/// Pass threshold for identities, memberships and span equalities.
pub const CHECK: f64 = 1e-9;
/// Least-squares residual above which a linear map is declared not well-defined.
pub const SOLVE: f64 = 1e-8;
/// Gram-matrix deviation allowed for a basis to count as orthonormal.
pub const ORTHONORMAL: f64 = 1e-10;
/// Principal-angle cosine cut for subspace intersections.
pub const ANGLE: f64 = 1e-10;
