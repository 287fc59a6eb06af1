//! Purity equality of the two marginals and its generalizations to pairs and
//! quadruples of states.
//!
//! Each check evaluates both sides through the grid products and again
//! through [`partial_trace`] on the explicit outer products. `abs_gap` is the
//! largest disagreement among all of these numbers, so a report holds only
//! when the identity and the oracle agree.

use serde::Serialize;

use crate::decomp::joint_svd;
use crate::error::Result;
use crate::json;
use crate::linalg::{self, C64};
use crate::partial_trace::partial_trace;
use crate::state::{self, BipartiteState, Side};

pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const CROSS_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub name: String,
    #[serde(serialize_with = "json::complex")]
    pub lhs: C64,
    #[serde(serialize_with = "json::complex")]
    pub rhs: C64,
    pub abs_gap: f64,
    pub tolerance: f64,
    pub holds: bool,
    /// Largest difference between a fast evaluation and its oracle.
    pub oracle_gap: f64,
    /// `Σ q_j²` from the joint SVD, where that applies.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sum_q_sq: Option<f64>,
}

impl IdentityReport {
    fn new(name: &str, lhs: C64, rhs: C64, oracle_gap: f64, tolerance: f64) -> Self {
        let abs_gap = (lhs - rhs).norm().max(oracle_gap);
        Self {
            name: name.into(),
            lhs,
            rhs,
            abs_gap,
            tolerance,
            holds: abs_gap <= tolerance,
            oracle_gap,
            sum_q_sq: None,
        }
    }

    /// Same report judged against another tolerance.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self.holds = self.abs_gap <= tolerance;
        self
    }
}

fn tr_product(a: &linalg::CMatrix, b: &linalg::CMatrix) -> C64 {
    (a * b).trace()
}

/// Reduction of `|x⟩⟨y|` by the explicit oracle.
fn oracle_reduction(x: &BipartiteState, y: &BipartiteState, side: Side) -> Result<linalg::CMatrix> {
    let (da, db) = x.dims();
    partial_trace(&state::outer(x, y)?, da, db, side)
}

/// `Tr ρ_A² = Tr ρ_B²`, with `Σλ_j²` from the Schmidt decomposition as the
/// oracle.
pub fn check_purity_equal(psi: &BipartiteState) -> IdentityReport {
    let lhs = psi.purity(Side::TracedOverB);
    let rhs = psi.purity(Side::TracedOverA);
    let schmidt = crate::decomp::schmidt(psi).purity();
    let oracle_gap = (lhs - schmidt).abs().max((rhs - schmidt).abs());
    IdentityReport::new("purity_equal", linalg::real(lhs), linalg::real(rhs), oracle_gap, DEFAULT_TOLERANCE)
}

/// `Tr[(Tr_A|ψ⟩⟨φ|)²] = Tr[(Tr_B|ψ⟩⟨φ|)²]`.
pub fn reduction_square_identity(psi: &BipartiteState, phi: &BipartiteState) -> Result<IdentityReport> {
    let ma = state::reduce_rank1(psi, phi, Side::TracedOverA)?.matrix;
    let mb = state::reduce_rank1(psi, phi, Side::TracedOverB)?.matrix;
    let lhs = tr_product(&ma, &ma);
    let rhs = tr_product(&mb, &mb);
    let oa = oracle_reduction(psi, phi, Side::TracedOverA)?;
    let ob = oracle_reduction(psi, phi, Side::TracedOverB)?;
    let oracle_gap = (lhs - tr_product(&oa, &oa)).norm().max((rhs - tr_product(&ob, &ob)).norm());
    Ok(IdentityReport::new("reduction_square", lhs, rhs, oracle_gap, DEFAULT_TOLERANCE))
}

/// `Tr[Tr_B|ψ⟩⟨φ| · Tr_B|φ⟩⟨ψ|] = Tr[ρ_A^ψ ρ_A^φ] = Σ_j q_j²`.
///
/// Here `ρ_A^ψ = Tr_A|ψ⟩⟨ψ|` lives on party B. When the B-reduction
/// vanishes both traces are zero and `sum_q_sq` is reported as `0`.
pub fn cross_purity_identity(psi: &BipartiteState, phi: &BipartiteState) -> Result<IdentityReport> {
    let m = state::reduce_rank1(psi, phi, Side::TracedOverB)?;
    let m_rev = state::reduce_rank1(phi, psi, Side::TracedOverB)?.matrix;
    let lhs = tr_product(&m.matrix, &m_rev);
    let rho_psi = psi.reduced_density(Side::TracedOverA);
    let rho_phi = phi.reduced_density(Side::TracedOverA);
    let rhs = tr_product(&rho_psi, &rho_phi);

    let sum_q_sq =
        if m.is_zero() { 0.0 } else { joint_svd(psi, phi, Side::TracedOverB)?.q.iter().map(|q| q * q).sum() };
    let o1 =
        tr_product(&oracle_reduction(psi, phi, Side::TracedOverB)?, &oracle_reduction(phi, psi, Side::TracedOverB)?);
    let o2 =
        tr_product(&oracle_reduction(psi, psi, Side::TracedOverA)?, &oracle_reduction(phi, phi, Side::TracedOverA)?);
    let oracle_gap = [(lhs - o1).norm(), (rhs - o2).norm(), (lhs - sum_q_sq).norm(), (rhs - sum_q_sq).norm()]
        .into_iter()
        .fold(0.0, f64::max);
    let mut report = IdentityReport::new("cross_purity", lhs, rhs, oracle_gap, CROSS_TOLERANCE);
    report.sum_q_sq = Some(sum_q_sq);
    Ok(report)
}

/// `Tr[Tr_A|ψ⟩⟨χ| · Tr_A|φ⟩⟨ζ|] = Tr[Tr_B|ψ⟩⟨ζ| · Tr_B|φ⟩⟨χ|]`; note that
/// `χ` and `ζ` swap places between the sides.
pub fn four_state_identity(
    psi: &BipartiteState,
    phi: &BipartiteState,
    chi: &BipartiteState,
    zeta: &BipartiteState,
) -> Result<IdentityReport> {
    let lhs = tr_product(
        &state::reduce_rank1(psi, chi, Side::TracedOverA)?.matrix,
        &state::reduce_rank1(phi, zeta, Side::TracedOverA)?.matrix,
    );
    let rhs = tr_product(
        &state::reduce_rank1(psi, zeta, Side::TracedOverB)?.matrix,
        &state::reduce_rank1(phi, chi, Side::TracedOverB)?.matrix,
    );
    let o_lhs =
        tr_product(&oracle_reduction(psi, chi, Side::TracedOverA)?, &oracle_reduction(phi, zeta, Side::TracedOverA)?);
    let o_rhs =
        tr_product(&oracle_reduction(psi, zeta, Side::TracedOverB)?, &oracle_reduction(phi, chi, Side::TracedOverB)?);
    let oracle_gap = (lhs - o_lhs).norm().max((rhs - o_rhs).norm());
    Ok(IdentityReport::new("four_state", lhs, rhs, oracle_gap, DEFAULT_TOLERANCE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::random::HaarSampler;

    fn ket(j: usize, k: usize) -> BipartiteState {
        BipartiteState::basis(2, 2, j, k).unwrap()
    }

    fn bell() -> BipartiteState {
        BipartiteState::maximally_entangled(2).unwrap()
    }

    fn close(z: C64, x: f64) -> bool {
        (z - x).norm() < 1e-14
    }

    #[test]
    fn purity_fixtures() {
        let r = check_purity_equal(&bell());
        assert!(r.holds && close(r.lhs, 0.5) && close(r.rhs, 0.5));
        let r = check_purity_equal(&ket(0, 0));
        assert!(r.holds && close(r.lhs, 1.0));
        let r = check_purity_equal(&HaarSampler::new(5).state(5, 5).unwrap());
        assert!(r.holds && r.oracle_gap < 1e-10);
    }

    #[test]
    fn reduction_square_fixtures() {
        let r = reduction_square_identity(&bell(), &bell()).unwrap();
        assert!(r.holds && close(r.lhs, 0.5));
        let r = reduction_square_identity(&bell(), &ket(0, 0)).unwrap();
        assert!(r.holds && close(r.lhs, 0.5) && close(r.rhs, 0.5));
    }

    #[test]
    fn cross_purity_fixtures() {
        let r = cross_purity_identity(&bell(), &ket(0, 0)).unwrap();
        assert!(r.holds && close(r.lhs, 0.5) && (r.sum_q_sq.unwrap() - 0.5).abs() < 1e-14);
        let r = cross_purity_identity(&ket(0, 0), &ket(1, 1)).unwrap();
        assert!(r.holds && close(r.lhs, 0.0) && close(r.rhs, 0.0) && r.sum_q_sq == Some(0.0));
        let psi = HaarSampler::new(8).state(3, 3).unwrap();
        let r = cross_purity_identity(&psi, &psi).unwrap();
        assert!(r.holds && close(r.lhs, psi.purity(Side::TracedOverB)));
    }

    #[test]
    fn four_state_specializations() {
        let mut rng = HaarSampler::new(21);
        let psi = rng.state(3, 3).unwrap();
        let phi = rng.state(3, 3).unwrap();
        let r = four_state_identity(&psi, &phi, &psi, &phi).unwrap();
        assert!(r.holds && r.lhs.im.abs() < 1e-12);
        let cross = cross_purity_identity(&psi, &phi).unwrap();
        assert!((r.lhs - cross.rhs).norm() < 1e-12);
        let r = four_state_identity(&psi, &psi, &psi, &psi).unwrap();
        assert!(close(r.lhs, psi.purity(Side::TracedOverA)));
    }

    #[test]
    fn random_tuples_hold() {
        let mut rng = HaarSampler::new(77);
        for d in 2..=4 {
            for _ in 0..10 {
                let s: Vec<_> = (0..4).map(|_| rng.state(d, d).unwrap()).collect();
                assert!(reduction_square_identity(&s[0], &s[1]).unwrap().holds);
                assert!(cross_purity_identity(&s[0], &s[1]).unwrap().holds);
                assert!(four_state_identity(&s[0], &s[1], &s[2], &s[3]).unwrap().holds);
            }
        }
    }

    #[test]
    fn mismatched_dims_rejected() {
        let a = BipartiteState::basis(2, 3, 0, 0).unwrap();
        assert!(matches!(reduction_square_identity(&a, &ket(0, 0)), Err(Error::DimensionMismatch(_))));
        assert!(matches!(four_state_identity(&a, &a, &a, &ket(0, 0)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn retolerancing_updates_verdict() {
        let r = check_purity_equal(&bell()).with_tolerance(-1.0);
        assert!(!r.holds);
    }
}
