use serde::Serialize;

use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{self, CMatrix, C64, ZERO};
use crate::state::{self, BipartiteState, Side};
use crate::tol;

/// SVD-based joint decomposition of two states:
///
/// ```text
/// |ψ⟩ = Σ_j √μ_j |u_j⟩|d_j^ψ⟩        |φ⟩ = Σ_k √ν_k |v_k⟩|d_k^φ⟩
/// ```
///
/// where `Tr_B|ψ⟩⟨φ| = Σ_j q_j |u_j⟩⟨v_j|` is an SVD (for `TracedOverB`; the
/// roles of the parties swap for `TracedOverA`). `{u_j}` and `{v_k}` are
/// orthonormal, the normalized `{d_j^ψ}`, `{d_k^φ}` are dual:
/// `√(μ_j ν_k)⟨d_k^φ|d_j^ψ⟩ = q_j δ_jk`.
#[derive(Clone, Debug, Serialize)]
pub struct JointSvdDecomposition {
    pub side: Side,
    #[serde(serialize_with = "json::matrix")]
    pub basis_u: CMatrix,
    #[serde(serialize_with = "json::matrix")]
    pub basis_v: CMatrix,
    pub q: Vec<f64>,
    pub mu: Vec<f64>,
    pub nu: Vec<f64>,
    #[serde(serialize_with = "json::matrix")]
    pub dual_psi: CMatrix,
    #[serde(serialize_with = "json::matrix")]
    pub dual_phi: CMatrix,
    /// `μ_j = 0`: `d_j^ψ` is undefined and stored as a zero column.
    pub degenerate_psi: Vec<bool>,
    /// `ν_k = 0`: `d_k^φ` is undefined and stored as a zero column.
    pub degenerate_phi: Vec<bool>,
    /// Numerical rank of the reduction (count of `q_j > τ`).
    pub reduction_rank: usize,
    /// Count of `μ_j > τ`, the Schmidt rank of `ψ`.
    pub schmidt_rank_psi: usize,
    /// Count of `ν_k > τ`, the Schmidt rank of `φ`.
    pub schmidt_rank_phi: usize,
}

/// Grids with the kept party on the rows.
pub(crate) fn oriented(state: &BipartiteState, side: Side) -> CMatrix {
    match side {
        Side::TracedOverB => state.amplitudes().clone(),
        Side::TracedOverA => state.amplitudes().transpose(),
    }
}

pub(crate) fn unorient(grid: CMatrix, side: Side) -> CMatrix {
    match side {
        Side::TracedOverB => grid,
        Side::TracedOverA => grid.transpose(),
    }
}

fn normalized_rows_as_columns(rows: &CMatrix, weights: &[f64], threshold: f64) -> (CMatrix, Vec<bool>) {
    let mut out = CMatrix::zeros(rows.ncols(), rows.nrows());
    let mut degenerate = vec![false; rows.nrows()];
    for (j, &w) in weights.iter().enumerate() {
        if w < threshold {
            degenerate[j] = true;
            continue;
        }
        let s = w.sqrt();
        for k in 0..rows.ncols() {
            out[(k, j)] = rows[(j, k)] / s;
        }
    }
    (out, degenerate)
}

/// Joint decomposition from the SVD of the reduction on `side`.
pub fn joint_svd(psi: &BipartiteState, phi: &BipartiteState, side: Side) -> Result<JointSvdDecomposition> {
    let reduction = state::reduce_rank1(psi, phi, side)?;
    if reduction.is_zero() {
        return Err(Error::ZeroReduction(side));
    }
    let a = oriented(psi, side);
    let b = oriented(phi, side);
    let threshold = tol::tau(a.nrows().max(a.ncols()));

    let (mut u, q, mut v) = linalg::svd_sorted(&reduction.matrix);
    for (j, &qj) in q.iter().enumerate() {
        let pu = linalg::gauge_phase(&linalg::column_vec(&u, j));
        u.column_mut(j).iter_mut().for_each(|z| *z *= pu.conj());
        // keep u_j q_j v_j† fixed when q_j carries weight
        let pv = if qj > threshold { pu } else { linalg::gauge_phase(&linalg::column_vec(&v, j)) };
        v.column_mut(j).iter_mut().for_each(|z| *z *= pv.conj());
    }

    let tilde_psi = u.adjoint() * &a;
    let tilde_phi = v.adjoint() * &b;
    let row_weight = |m: &CMatrix, j: usize| m.row(j).iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mu_all: Vec<f64> = (0..q.len()).map(|j| row_weight(&tilde_psi, j)).collect();
    let nu_all: Vec<f64> = (0..q.len()).map(|j| row_weight(&tilde_phi, j)).collect();

    let keep: Vec<usize> =
        (0..q.len()).filter(|&j| !(mu_all[j] < threshold && nu_all[j] < threshold && q[j] < threshold)).collect();
    let pick_cols = |m: &CMatrix| CMatrix::from_fn(m.nrows(), keep.len(), |r, c| m[(r, keep[c])]);
    let pick_rows = |m: &CMatrix| CMatrix::from_fn(keep.len(), m.ncols(), |r, c| m[(keep[r], c)]);
    let mu: Vec<f64> = keep.iter().map(|&j| mu_all[j]).collect();
    let nu: Vec<f64> = keep.iter().map(|&j| nu_all[j]).collect();
    let (dual_psi, degenerate_psi) = normalized_rows_as_columns(&pick_rows(&tilde_psi), &mu, threshold);
    let (dual_phi, degenerate_phi) = normalized_rows_as_columns(&pick_rows(&tilde_phi), &nu, threshold);

    Ok(JointSvdDecomposition {
        side,
        basis_u: pick_cols(&u),
        basis_v: pick_cols(&v),
        q: keep.iter().map(|&j| q[j]).collect(),
        reduction_rank: q.iter().filter(|&&x| x > threshold).count(),
        schmidt_rank_psi: mu.iter().filter(|&&x| x > threshold).count(),
        schmidt_rank_phi: nu.iter().filter(|&&x| x > threshold).count(),
        mu,
        nu,
        dual_psi,
        dual_phi,
        degenerate_psi,
        degenerate_phi,
    })
}

impl JointSvdDecomposition {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    fn scaled_duals(&self, dual: &CMatrix, weights: &[f64]) -> CMatrix {
        CMatrix::from_fn(dual.nrows(), dual.ncols(), |r, c| dual[(r, c)] * weights[c].sqrt())
    }

    /// Unnormalized `|j̃^ψ⟩ = √μ_j |d_j^ψ⟩` as columns.
    pub fn tilde_psi(&self) -> CMatrix {
        self.scaled_duals(&self.dual_psi, &self.mu)
    }

    /// Unnormalized `|k̃^φ⟩ = √ν_k |d_k^φ⟩` as columns.
    pub fn tilde_phi(&self) -> CMatrix {
        self.scaled_duals(&self.dual_phi, &self.nu)
    }

    /// Max modulus of `√(μ_j ν_k)⟨d_k^φ|d_j^ψ⟩ − q_j δ_jk`.
    pub fn duality_residual(&self) -> f64 {
        let gram = self.tilde_phi().adjoint() * self.tilde_psi();
        let n = self.len();
        let mut worst: f64 = 0.0;
        for k in 0..n {
            for j in 0..n {
                let target = if j == k { self.q[j] } else { 0.0 };
                worst = worst.max((gram[(k, j)] - linalg::real(target)).norm());
            }
        }
        worst
    }

    /// `Σ_j q_j⟨v_j|u_j⟩`, equal to `⟨φ|ψ⟩`.
    pub fn overlap_sum(&self) -> C64 {
        (0..self.len())
            .map(|j| self.basis_v.column(j).dotc(&self.basis_u.column(j)) * self.q[j])
            .fold(ZERO, |acc, z| acc + z)
    }

    /// `(ψ, φ)` rebuilt from both expansions.
    pub fn reconstruct(&self) -> (BipartiteState, BipartiteState) {
        let psi = &self.basis_u * self.tilde_psi().transpose();
        let phi = &self.basis_v * self.tilde_phi().transpose();
        (
            BipartiteState::from_grid_unchecked(unorient(psi, self.side)),
            BipartiteState::from_grid_unchecked(unorient(phi, self.side)),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::schmidt;
    use crate::linalg::{max_abs_diff, orthonormality_defect};
    use crate::random::HaarSampler;
    use crate::state::overlap;

    fn bell() -> BipartiteState {
        BipartiteState::maximally_entangled(2).unwrap()
    }

    #[test]
    fn bell_against_product() {
        let h = 0.5f64.sqrt();
        let d = joint_svd(&bell(), &BipartiteState::basis(2, 2, 0, 0).unwrap(), Side::TracedOverB).unwrap();
        assert_eq!(d.len(), 2);
        assert!((d.q[0] - h).abs() < 1e-15 && d.q[1].abs() < 1e-15);
        assert!((d.mu[0] - 0.5).abs() < 1e-15 && (d.mu[1] - 0.5).abs() < 1e-15);
        assert!((d.nu[0] - 1.0).abs() < 1e-15 && d.nu[1].abs() < 1e-15);
        assert!(max_abs_diff(&d.basis_u, &CMatrix::identity(2, 2)) < 1e-15);
        assert!(max_abs_diff(&d.basis_v, &CMatrix::identity(2, 2)) < 1e-15);
        assert_eq!(d.degenerate_phi, vec![false, true]);
        assert_eq!(d.reduction_rank, 1);
        assert_eq!(d.schmidt_rank_psi, 2);
        assert!(d.duality_residual() < 1e-15);
    }

    #[test]
    fn vanishing_reduction_is_an_error() {
        let a = BipartiteState::basis(2, 2, 0, 0).unwrap();
        let b = BipartiteState::basis(2, 2, 0, 1).unwrap();
        assert_eq!(joint_svd(&a, &b, Side::TracedOverB).unwrap_err(), Error::ZeroReduction(Side::TracedOverB));
        assert!(joint_svd(&a, &b, Side::TracedOverA).is_ok());
    }

    #[test]
    fn equal_states_reduce_to_schmidt() {
        let psi = HaarSampler::new(5).state(3, 3).unwrap();
        let d = joint_svd(&psi, &psi, Side::TracedOverB).unwrap();
        let s = schmidt(&psi);
        for j in 0..3 {
            assert!((d.q[j] - s.lambdas[j]).abs() < 1e-12);
            assert!((d.mu[j] - s.lambdas[j]).abs() < 1e-12);
            assert!((d.nu[j] - s.lambdas[j]).abs() < 1e-12);
        }
        assert!(max_abs_diff(&d.basis_u, &d.basis_v) < 1e-10);
        assert!(max_abs_diff(&d.dual_psi, &d.dual_phi) < 1e-10);
        // same columns as the Schmidt basis once both are gauged
        assert!(max_abs_diff(&d.basis_u, &s.basis_a) < 1e-10);
    }

    #[test]
    fn random_pairs_satisfy_invariants() {
        let mut rng = HaarSampler::new(77);
        for (da, db) in [(2, 2), (3, 4), (4, 3), (5, 5)] {
            let psi = rng.state(da, db).unwrap();
            let phi = rng.state(da, db).unwrap();
            for side in [Side::TracedOverB, Side::TracedOverA] {
                let d = joint_svd(&psi, &phi, side).unwrap();
                assert!(d.duality_residual() < 1e-9);
                assert!((d.mu.iter().sum::<f64>() - 1.0).abs() < 1e-10);
                assert!((d.nu.iter().sum::<f64>() - 1.0).abs() < 1e-10);
                assert!((d.overlap_sum() - overlap(&psi, &phi).unwrap()).norm() < 1e-9);
                assert!(orthonormality_defect(&d.basis_u) < 1e-12);
                assert!(orthonormality_defect(&d.basis_v) < 1e-12);
                let (p, f) = d.reconstruct();
                assert!(max_abs_diff(p.amplitudes(), psi.amplitudes()) < 1e-9);
                assert!(max_abs_diff(f.amplitudes(), phi.amplitudes()) < 1e-9);
                let red = state::reduce_rank1(&psi, &phi, side).unwrap();
                assert_eq!(d.reduction_rank, linalg::numerical_rank(&red.matrix, tol::tau(da.max(db))));
            }
        }
    }
}
