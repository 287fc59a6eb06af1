//! Default tolerances.
//!
//! Thresholds are absolute and scale with the grid dimension `d`, since
//! rounding error grows with contraction length.

/// Construction threshold `1e-12 · d`: singular values, weights and matrix
/// entries below it count as zero.
pub fn tau(d: usize) -> f64 {
    1e-12 * d.max(1) as f64
}

/// Identity-check threshold `1e-9 · d`.
pub fn identity(d: usize) -> f64 {
    1e-9 * d.max(1) as f64
}

/// Norm deviation tolerated when a state is taken as already normalized.
pub const NORMALIZED: f64 = 1e-12;

/// Norm below which an amplitude vector is rejected as zero.
pub const ZERO_NORM: f64 = 1e-14;

/// Max entry of `|U·U† − I|` tolerated for inputs declared unitary.
pub const UNITARY: f64 = 1e-10;

/// Minimum pairwise eigenvalue gap relative to `‖M‖_F` in `joint_diag`.
pub const EIGEN_GAP_REL: f64 = 1e-8;

/// Maximum condition number of the eigenvector matrix in `joint_diag`.
pub const MAX_CONDITION: f64 = 1e8;

/// Slack allowed by the extremal scan before a sample counts as a violation.
pub const EXTREMAL_SLACK: f64 = 1e-8;

/// Slack in majorization partial sums.
pub const MAJORIZATION_SLACK: f64 = 1e-10;

/// Slack in the appendix inequality chain.
pub const CHAIN_SLACK: f64 = 1e-9;
