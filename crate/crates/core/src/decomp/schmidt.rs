use serde::Serialize;

use crate::json;
use crate::linalg::{self, CMatrix};
use crate::state::BipartiteState;
use crate::tol;

/// `|ψ⟩ = Σ_j √λ_j |a_j⟩|b_j⟩` with orthonormal `{a_j}`, `{b_j}`.
#[derive(Clone, Debug, Serialize)]
pub struct SchmidtDecomposition {
    /// Schmidt coefficients, descending and positive.
    pub lambdas: Vec<f64>,
    /// `dA×r`, columns `|a_j⟩`.
    #[serde(serialize_with = "json::matrix")]
    pub basis_a: CMatrix,
    /// `dB×r`, columns `|b_j⟩`.
    #[serde(serialize_with = "json::matrix")]
    pub basis_b: CMatrix,
    pub rank: usize,
}

/// Schmidt decomposition from the SVD `A = U·Σ·V†`: `λ_j = σ_j²`,
/// `a_j = U_j`, `b_j = V_j*`. Singular values below `τ(d)` are dropped and
/// each `a_j` is gauged so its largest entry is real positive.
pub fn schmidt(state: &BipartiteState) -> SchmidtDecomposition {
    let (da, db) = state.dims();
    let (u, s, v) = linalg::svd_sorted(state.amplitudes());
    let threshold = tol::tau(da.max(db));
    let rank = s.iter().filter(|&&x| x > threshold).count();

    let mut basis_a = u.columns(0, rank).into_owned();
    let mut basis_b = v.columns(0, rank).map(|z| z.conj());
    for j in 0..rank {
        let p = linalg::gauge_phase(&linalg::column_vec(&basis_a, j));
        basis_a.column_mut(j).iter_mut().for_each(|z| *z *= p.conj());
        basis_b.column_mut(j).iter_mut().for_each(|z| *z *= p);
    }
    SchmidtDecomposition { lambdas: s[..rank].iter().map(|x| x * x).collect(), basis_a, basis_b, rank }
}

impl SchmidtDecomposition {
    /// `Σ_j λ_j²`, the purity of either marginal.
    pub fn purity(&self) -> f64 {
        self.lambdas.iter().map(|l| l * l).sum()
    }

    /// `Σ_j √λ_j a_j b_jᵀ` as a grid.
    pub fn reconstruct_grid(&self) -> CMatrix {
        let sqrt_l = nalgebra::DVector::from_iterator(self.rank, self.lambdas.iter().map(|l| linalg::real(l.sqrt())));
        &self.basis_a * CMatrix::from_diagonal(&sqrt_l) * self.basis_b.transpose()
    }

    pub fn reconstruct(&self) -> BipartiteState {
        BipartiteState::from_grid_unchecked(self.reconstruct_grid())
    }

    /// Full local unitaries `(U_A, U_B)` whose action takes the state to
    /// its Schmidt form `a_jk = √λ_j δ_jk`.
    pub fn to_schmidt_basis(&self) -> (CMatrix, CMatrix) {
        let ua = linalg::complete_unitary(&self.basis_a).adjoint();
        let ub = linalg::complete_unitary(&self.basis_b).adjoint();
        (ua, ub)
    }

    /// The state written in its own Schmidt basis, `dA×dB` with `√λ_j` on
    /// the diagonal.
    pub fn schmidt_form(&self, dim_a: usize, dim_b: usize) -> BipartiteState {
        let mut grid = CMatrix::zeros(dim_a, dim_b);
        for (j, l) in self.lambdas.iter().enumerate() {
            grid[(j, j)] = linalg::real(l.sqrt());
        }
        BipartiteState::from_grid_unchecked(grid)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, orthonormality_defect};
    use crate::random::haar_random_state;
    use crate::state::{apply_local, Side};

    #[test]
    fn product_state_has_rank_one() {
        let d = schmidt(&BipartiteState::basis(2, 2, 0, 0).unwrap());
        assert_eq!(d.rank, 1);
        assert!((d.lambdas[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn bell_has_equal_coefficients() {
        let d = schmidt(&BipartiteState::maximally_entangled(2).unwrap());
        assert_eq!(d.rank, 2);
        for l in &d.lambdas {
            assert!((l - 0.5).abs() < 1e-14);
        }
    }

    #[test]
    fn random_state_matches_eigen_oracle() {
        let psi = haar_random_state(4, 4, 17).unwrap();
        let d = schmidt(&psi);
        assert!(max_abs_diff(&d.reconstruct_grid(), psi.amplitudes()) < 1e-9);
        let oracle = linalg::hermitian_eigenvalues(&psi.reduced_density(Side::TracedOverB));
        for (l, e) in d.lambdas.iter().zip(&oracle) {
            assert!((l - e).abs() < 1e-12);
        }
        assert!(orthonormality_defect(&d.basis_a) < 1e-12);
        assert!(orthonormality_defect(&d.basis_b) < 1e-12);
        assert!((d.lambdas.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn gauge_makes_largest_entry_real_positive() {
        let d = schmidt(&haar_random_state(3, 5, 3).unwrap());
        for j in 0..d.rank {
            let col = linalg::column_vec(&d.basis_a, j);
            let big = col.iter().copied().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
            assert!(big.im.abs() < 1e-14 && big.re > 0.0);
        }
    }

    #[test]
    fn schmidt_basis_unitaries_diagonalize() {
        let psi = haar_random_state(3, 2, 8).unwrap();
        let d = schmidt(&psi);
        let (ua, ub) = d.to_schmidt_basis();
        let rotated = apply_local(&psi, &ua, &ub).unwrap();
        assert!(max_abs_diff(rotated.amplitudes(), d.schmidt_form(3, 2).amplitudes()) < 1e-12);
    }
}
