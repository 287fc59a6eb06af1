use std::f64::consts::PI;

use serde::Serialize;

use crate::decomp::joint_svd::{oriented, unorient};
use crate::error::{DiagFailure, Error, Result};
use crate::json;
use crate::linalg::{self, CMatrix, C64};
use crate::state::{self, BipartiteState, Side};
use crate::tol;

/// Diagonalization-based joint decomposition:
///
/// ```text
/// |ψ⟩ = Σ_j √ξ_j |s_j⟩|t_j⟩        |φ⟩ = Σ_k √η_k e^{−iφ_k} |s⁻¹_k⟩|t⁻¹_k⟩
/// ```
///
/// from `M = Tr_B|ψ⟩⟨φ| = S·D·S⁻¹` with `D = diag(Δ_j e^{iφ_j})`. Columns of
/// `S` are `|s_j⟩`; the rows of `S⁻¹` are `⟨s⁻¹_k|`. The pairs `{s_j}`,
/// `{s⁻¹_k}` and `{t_j}`, `{t⁻¹_k}` are dual bases and `√(ξ_j η_j) = Δ_j`.
/// We fix `ξ_j = ‖j̃^ψ‖²`, so every `|t_j⟩` is normalized, and put the whole
/// phase on `φ`'s side.
#[derive(Clone, Debug, Serialize)]
pub struct JointDiagDecomposition {
    pub side: Side,
    /// Columns `|s_j⟩`, normalized and gauged.
    #[serde(serialize_with = "json::matrix")]
    pub right_basis: CMatrix,
    /// Columns `|s⁻¹_k⟩`, i.e. the conjugate-transposed rows of `S⁻¹`.
    #[serde(serialize_with = "json::matrix")]
    pub left_dual_basis: CMatrix,
    #[serde(serialize_with = "json::matrix")]
    pub t_basis: CMatrix,
    #[serde(serialize_with = "json::matrix")]
    pub t_dual_basis: CMatrix,
    pub delta: Vec<f64>,
    /// Eigenvalue phases in `(−π, π]`.
    pub phases: Vec<f64>,
    pub xi: Vec<f64>,
    pub eta: Vec<f64>,
    /// Condition number of `S`.
    pub condition: f64,
    /// Smallest pairwise eigenvalue distance.
    pub min_gap: f64,
}

fn phase_of(z: C64) -> f64 {
    let p = z.im.atan2(z.re);
    if p <= -PI {
        PI
    } else {
        p
    }
}

/// Eigenvalue order: modulus descending, ties (within `tie`) by ascending
/// phase, then by original index.
fn eigen_order(values: &[C64], tie: f64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        let (ma, mb) = (values[a].norm(), values[b].norm());
        if (ma - mb).abs() > tie {
            mb.total_cmp(&ma)
        } else {
            phase_of(values[a]).total_cmp(&phase_of(values[b])).then(a.cmp(&b))
        }
    });
    order
}

/// Joint decomposition from the eigendecomposition of the reduction on
/// `side`. Refused with [`Error::NotDiagonalizable`] when an eigenvalue is
/// below `τ(d)`, two eigenvalues are closer than `1e-8·‖M‖_F`, or the
/// eigenvector matrix has condition number above `1e8`.
pub fn joint_diag(psi: &BipartiteState, phi: &BipartiteState, side: Side) -> Result<JointDiagDecomposition> {
    let reduction = state::reduce_rank1(psi, phi, side)?;
    if reduction.is_zero() {
        return Err(Error::ZeroReduction(side));
    }
    let m = &reduction.matrix;
    let n = m.nrows();
    let a = oriented(psi, side);
    let b = oriented(phi, side);
    let threshold = tol::tau(a.nrows().max(a.ncols()));
    let m_norm = m.norm();

    let (q, t) = linalg::schur(m).ok_or(Error::NotDiagonalizable(DiagFailure::NoConvergence))?;
    let values: Vec<C64> = t.diagonal().iter().copied().collect();

    if let Some(small) = values.iter().map(|z| z.norm()).find(|&x| x < threshold) {
        return Err(Error::NotDiagonalizable(DiagFailure::SmallEigenvalue { magnitude: small, threshold }));
    }
    let mut min_gap = f64::INFINITY;
    for i in 0..n {
        for j in (i + 1)..n {
            min_gap = min_gap.min((values[i] - values[j]).norm());
        }
    }
    let gap_threshold = tol::EIGEN_GAP_REL * m_norm;
    if min_gap < gap_threshold {
        return Err(Error::NotDiagonalizable(DiagFailure::Degenerate { gap: min_gap, threshold: gap_threshold }));
    }

    let s_schur = &q * linalg::triangular_eigenvectors(&t, f64::EPSILON * m_norm);
    let order = eigen_order(&values, threshold);
    let mut s = CMatrix::from_fn(n, n, |r, c| s_schur[(r, order[c])]);
    let lambda: Vec<C64> = order.iter().map(|&k| values[k]).collect();
    for j in 0..n {
        let norm = s.column(j).norm();
        let p = linalg::gauge_phase(&linalg::column_vec(&s, j));
        let scale = p.conj() / norm;
        s.column_mut(j).iter_mut().for_each(|z| *z *= scale);
    }

    let condition = linalg::condition_number(&s);
    if condition.is_nan() || condition > tol::MAX_CONDITION {
        return Err(Error::NotDiagonalizable(DiagFailure::IllConditioned { condition, threshold: tol::MAX_CONDITION }));
    }
    let s_inv = s.clone().try_inverse().ok_or(Error::NotDiagonalizable(DiagFailure::IllConditioned {
        condition: f64::INFINITY,
        threshold: tol::MAX_CONDITION,
    }))?;

    // rows: j̃^ψ of S⁻¹·A and k̃^φ of S†·B
    let tilde_psi = &s_inv * &a;
    let tilde_phi = s.adjoint() * &b;
    let delta: Vec<f64> = lambda.iter().map(|z| z.norm()).collect();
    let phases: Vec<f64> = lambda.iter().map(|&z| phase_of(z)).collect();
    let xi: Vec<f64> = (0..n).map(|j| tilde_psi.row(j).iter().map(|z| z.norm_sqr()).sum()).collect();
    let eta: Vec<f64> = (0..n).map(|j| delta[j] * delta[j] / xi[j]).collect();

    let cols = a.ncols();
    let t_basis = CMatrix::from_fn(cols, n, |r, j| tilde_psi[(j, r)] / xi[j].sqrt());
    let t_dual_basis =
        CMatrix::from_fn(cols, n, |r, k| tilde_phi[(k, r)] * C64::from_polar(1.0, phases[k]) / eta[k].sqrt());

    Ok(JointDiagDecomposition {
        side,
        right_basis: s,
        left_dual_basis: s_inv.adjoint(),
        t_basis,
        t_dual_basis,
        delta,
        phases,
        xi,
        eta,
        condition,
        min_gap,
    })
}

impl JointDiagDecomposition {
    pub fn len(&self) -> usize {
        self.delta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.delta.is_empty()
    }

    /// The complex eigenvalues `Δ_j e^{iφ_j}` in stored order.
    pub fn eigenvalues(&self) -> Vec<C64> {
        self.delta.iter().zip(&self.phases).map(|(&d, &p)| C64::from_polar(d, p)).collect()
    }

    /// Max modulus of `⟨s_j|s⁻¹_k⟩ − δ_jk`.
    pub fn s_duality_residual(&self) -> f64 {
        let n = self.len();
        linalg::max_abs_diff(&(self.right_basis.adjoint() * &self.left_dual_basis), &CMatrix::identity(n, n))
    }

    /// Max modulus of `⟨t_j|t⁻¹_k⟩ − δ_jk`.
    pub fn t_duality_residual(&self) -> f64 {
        let n = self.len();
        linalg::max_abs_diff(&(self.t_basis.adjoint() * &self.t_dual_basis), &CMatrix::identity(n, n))
    }

    /// Max of `|√(ξ_j η_j) − Δ_j|`.
    pub fn weight_residual(&self) -> f64 {
        (0..self.len()).map(|j| ((self.xi[j] * self.eta[j]).sqrt() - self.delta[j]).abs()).fold(0.0, f64::max)
    }

    /// Max modulus of `M − Σ_j Δ_j e^{iφ_j}|s_j⟩⟨s⁻¹_j|` for the given reduction.
    pub fn similarity_residual(&self, reduction: &CMatrix) -> f64 {
        let d = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(self.eigenvalues()));
        linalg::max_abs_diff(&(&self.right_basis * d * self.left_dual_basis.adjoint()), reduction)
    }

    /// `(ψ, φ)` rebuilt from both expansions.
    pub fn reconstruct(&self) -> (BipartiteState, BipartiteState) {
        let n = self.len();
        let psi_coeff = nalgebra::DVector::from_iterator(n, self.xi.iter().map(|x| linalg::real(x.sqrt())));
        let phi_coeff =
            nalgebra::DVector::from_iterator(n, (0..n).map(|k| C64::from_polar(self.eta[k].sqrt(), -self.phases[k])));
        let psi = &self.right_basis * CMatrix::from_diagonal(&psi_coeff) * self.t_basis.transpose();
        let phi = &self.left_dual_basis * CMatrix::from_diagonal(&phi_coeff) * self.t_dual_basis.transpose();
        (
            BipartiteState::from_grid_unchecked(unorient(psi, self.side)),
            BipartiteState::from_grid_unchecked(unorient(phi, self.side)),
        )
    }
}

/// Nonzero eigenvalues (modulus above `rel·‖M‖_F`) of a general matrix.
pub fn nonzero_spectrum(m: &CMatrix, rel: f64) -> Vec<C64> {
    let cut = rel * m.norm();
    linalg::eigenvalues(m).unwrap_or_default().into_iter().filter(|z| z.norm() > cut).collect()
}

/// Multiset distance between the nonzero spectra of `Tr_A|ψ⟩⟨φ|` and
/// `Tr_B|ψ⟩⟨φ|`.
pub fn reduction_spectra_gap(psi: &BipartiteState, phi: &BipartiteState) -> Result<f64> {
    let ma = state::reduce_rank1(psi, phi, Side::TracedOverA)?.matrix;
    let mb = state::reduce_rank1(psi, phi, Side::TracedOverB)?.matrix;
    Ok(linalg::multiset_distance(&nonzero_spectrum(&ma, 1e-6), &nonzero_spectrum(&mb, 1e-6)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::schmidt;
    use crate::linalg::{max_abs_diff, real, unitarity_defect};
    use crate::random::HaarSampler;

    #[test]
    fn bell_against_unequal_superposition() {
        let bell = BipartiteState::maximally_entangled(2).unwrap();
        let (s1, s2) = ((1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt());
        let phi = BipartiteState::from_amplitudes(2, 2, &[real(s1), real(0.0), real(0.0), real(s2)], false).unwrap();
        let d = joint_diag(&bell, &phi, Side::TracedOverB).unwrap();
        // M = diag(1/√6, 1/√3)
        assert!((d.delta[0] - s1).abs() < 1e-14);
        assert!((d.delta[1] - (1.0f64 / 6.0).sqrt()).abs() < 1e-14);
        assert!(d.phases.iter().all(|p| p.abs() < 1e-14));
        assert!((d.xi[0] - 0.5).abs() < 1e-14 && (d.xi[1] - 0.5).abs() < 1e-14);
        assert!((d.eta[0] - 2.0 / 3.0).abs() < 1e-14 && (d.eta[1] - 1.0 / 3.0).abs() < 1e-14);
        assert!(d.weight_residual() < 1e-14);
    }

    #[test]
    fn nilpotent_reduction_is_refused() {
        // M = |0⟩⟨1|: characteristic polynomial λ², single Jordan block
        let a = BipartiteState::basis(2, 2, 0, 0).unwrap();
        let b = BipartiteState::basis(2, 2, 1, 0).unwrap();
        let m = state::reduce_rank1(&a, &b, Side::TracedOverB).unwrap().matrix;
        assert_eq!(m.trace(), real(0.0));
        assert_eq!(m.determinant(), real(0.0));
        match joint_diag(&a, &b, Side::TracedOverB) {
            Err(Error::NotDiagonalizable(DiagFailure::SmallEigenvalue { .. })) => {}
            other => panic!("expected refusal, got {other:?}"),
        }
    }

    #[test]
    fn vanishing_reduction_is_reported() {
        let a = BipartiteState::basis(2, 2, 0, 0).unwrap();
        let b = BipartiteState::basis(2, 2, 0, 1).unwrap();
        assert_eq!(joint_diag(&a, &b, Side::TracedOverB).unwrap_err(), Error::ZeroReduction(Side::TracedOverB));
    }

    #[test]
    fn degenerate_spectrum_is_refused() {
        // ψ = φ = Bell gives M = I/2
        let bell = BipartiteState::maximally_entangled(2).unwrap();
        assert!(matches!(
            joint_diag(&bell, &bell, Side::TracedOverB),
            Err(Error::NotDiagonalizable(DiagFailure::Degenerate { .. }))
        ));
    }

    #[test]
    fn equal_states_reduce_to_schmidt() {
        let psi = HaarSampler::new(31).state(3, 3).unwrap();
        let d = joint_diag(&psi, &psi, Side::TracedOverB).unwrap();
        let s = schmidt(&psi);
        assert!(unitarity_defect(&d.right_basis) < 1e-10);
        for j in 0..3 {
            assert!((d.delta[j] - s.lambdas[j]).abs() < 1e-12);
            assert!(d.phases[j].abs() < 1e-10);
        }
    }

    #[test]
    fn random_pairs_satisfy_invariants() {
        let mut rng = HaarSampler::new(99);
        for d in [2, 3, 4, 6] {
            let psi = rng.state(d, d).unwrap();
            let phi = rng.state(d, d).unwrap();
            for side in [Side::TracedOverB, Side::TracedOverA] {
                let dec = joint_diag(&psi, &phi, side).unwrap();
                assert!(dec.s_duality_residual() < 1e-8);
                assert!(dec.t_duality_residual() < 1e-8);
                assert!(dec.weight_residual() < 1e-8);
                let m = state::reduce_rank1(&psi, &phi, side).unwrap().matrix;
                assert!(dec.similarity_residual(&m) < 1e-10);
                let (p, f) = dec.reconstruct();
                assert!(max_abs_diff(p.amplitudes(), psi.amplitudes()) < 1e-8);
                assert!(max_abs_diff(f.amplitudes(), phi.amplitudes()) < 1e-8);
                let t_norms: Vec<f64> = (0..d).map(|j| dec.t_basis.column(j).norm()).collect();
                assert!(t_norms.iter().all(|n| (n - 1.0).abs() < 1e-12));
                let other = state::reduce_rank1(&psi, &phi, side.other()).unwrap().matrix;
                assert!(linalg::multiset_distance(&dec.eigenvalues(), &nonzero_spectrum(&other, 1e-6)) < 1e-8);
            }
        }
    }

    #[test]
    fn ordering_breaks_modulus_ties_by_phase() {
        let vals = [C64::from_polar(1.0, 0.5), C64::from_polar(2.0, 0.0), C64::from_polar(1.0, -0.5)];
        assert_eq!(eigen_order(&vals, 1e-12), vec![1, 2, 0]);
        assert_eq!(phase_of(C64::new(-1.0, -0.0)), PI);
    }
}
