//! Schmidt-type decompositions of pairs of bipartite pure states, purity
//! identities for rank-one reductions, and Bloch (Gell-Mann) sector
//! analysis with majorization checks.
//!
//! States are dA x dB amplitude grids `A[j][k]` for `Σ A[j][k] |j⟩|k⟩`.
//! Random states and unitaries come from [`random::HaarSampler`], a ChaCha20
//! generator seeded with a `u64`; the same seed gives the same samples on
//! every platform.

pub mod bloch;
pub mod cli;
pub mod decomp;
pub mod error;
pub mod json;
pub mod linalg;
pub mod majorization;
pub mod partial_trace;
pub mod purity;
pub mod random;
pub mod state;
pub mod tol;
