//! Standard Schmidt decomposition and the two joint decompositions of a pair
//! of states, plus the dispatcher that picks a branch for orthogonal pairs.

mod joint_diag;
mod joint_svd;
mod schmidt;

use serde::Serialize;

pub use joint_diag::{joint_diag, nonzero_spectrum, reduction_spectra_gap, JointDiagDecomposition};
pub use joint_svd::{joint_svd, JointSvdDecomposition};
pub use schmidt::{schmidt, SchmidtDecomposition};

use crate::error::Result;
use crate::state::{self, BipartiteState, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum JointKind {
    SvdOnB,
    SvdOnA,
    SeparateSchmidt,
}

/// Outcome of [`joint_decompose`].
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", content = "payload")]
pub enum JointDecomposition {
    /// `Tr_B|ψ⟩⟨φ| ≠ 0`.
    SvdOnB(JointSvdDecomposition),
    /// `Tr_B|ψ⟩⟨φ| = 0` but `Tr_A|ψ⟩⟨φ| ≠ 0`.
    SvdOnA(JointSvdDecomposition),
    /// Both reductions vanish: the states have disjoint support and no
    /// joint basis is singled out.
    SeparateSchmidt { psi: SchmidtDecomposition, phi: SchmidtDecomposition },
}

impl JointDecomposition {
    pub fn kind(&self) -> JointKind {
        match self {
            Self::SvdOnB(_) => JointKind::SvdOnB,
            Self::SvdOnA(_) => JointKind::SvdOnA,
            Self::SeparateSchmidt { .. } => JointKind::SeparateSchmidt,
        }
    }

    pub fn reconstruct(&self) -> (BipartiteState, BipartiteState) {
        match self {
            Self::SvdOnB(d) | Self::SvdOnA(d) => d.reconstruct(),
            Self::SeparateSchmidt { psi, phi } => (psi.reconstruct(), phi.reconstruct()),
        }
    }
}

/// SVD-based decomposition on the first non-vanishing reduction (B, then A),
/// or separate Schmidt decompositions when both vanish.
pub fn joint_decompose(psi: &BipartiteState, phi: &BipartiteState) -> Result<JointDecomposition> {
    for side in [Side::TracedOverB, Side::TracedOverA] {
        if !state::reduce_rank1(psi, phi, side)?.is_zero() {
            let d = joint_svd(psi, phi, side)?;
            return Ok(match side {
                Side::TracedOverB => JointDecomposition::SvdOnB(d),
                Side::TracedOverA => JointDecomposition::SvdOnA(d),
            });
        }
    }
    Ok(JointDecomposition::SeparateSchmidt { psi: schmidt(psi), phi: schmidt(phi) })
}
