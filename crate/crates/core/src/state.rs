//! Bipartite pure states, rank-1 reductions and local unitaries.
//!
//! A state on `C^dA ⊗ C^dB` is stored as its `dA×dB` amplitude grid `A` with
//! `a_jk = (⟨j| ⊗ ⟨k|)|ψ⟩`; the flat index of `(j, k)` is `j·dB + k`. With
//! this layout `Tr_B|ψ⟩⟨φ| = A·B†` and `Tr_A|ψ⟩⟨φ| = Aᵀ·B*` hold entrywise.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, C64};
use crate::tol;

/// Which party a partial trace removes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `Tr_A`, leaves an operator on party B.
    TracedOverA,
    /// `Tr_B`, leaves an operator on party A.
    TracedOverB,
}

impl Side {
    pub fn other(self) -> Self {
        match self {
            Self::TracedOverA => Self::TracedOverB,
            Self::TracedOverB => Self::TracedOverA,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TracedOverA => write!(f, "party A"),
            Self::TracedOverB => write!(f, "party B"),
        }
    }
}

/// A normalized pure state of two parties.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteState {
    amplitudes: CMatrix,
}

impl BipartiteState {
    /// Builds a state from flat amplitudes in `j·dB + k` order.
    pub fn from_amplitudes(dim_a: usize, dim_b: usize, amplitudes: &[C64], normalize: bool) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidDimension(dim_a.min(dim_b)));
        }
        if amplitudes.len() != dim_a * dim_b {
            return Err(Error::dims(format!("{} amplitudes for a {dim_a}x{dim_b} grid", amplitudes.len())));
        }
        Self::from_grid(CMatrix::from_row_slice(dim_a, dim_b, amplitudes), normalize)
    }

    /// Builds a state from a `dA×dB` amplitude grid.
    pub fn from_grid(grid: CMatrix, normalize: bool) -> Result<Self> {
        if grid.nrows() == 0 || grid.ncols() == 0 {
            return Err(Error::InvalidDimension(0));
        }
        if grid.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = grid.norm();
        if norm < tol::ZERO_NORM {
            return Err(Error::ZeroVector(norm));
        }
        if normalize {
            Ok(Self { amplitudes: grid.unscale(norm) })
        } else if (norm - 1.0).abs() > tol::NORMALIZED {
            Err(Error::NotNormalized(norm))
        } else {
            Ok(Self { amplitudes: grid })
        }
    }

    /// Wraps a grid known to be normalized up to roundoff (reconstructions).
    pub(crate) fn from_grid_unchecked(amplitudes: CMatrix) -> Self {
        Self { amplitudes }
    }

    /// Product basis state `|j⟩|k⟩`.
    pub fn basis(dim_a: usize, dim_b: usize, j: usize, k: usize) -> Result<Self> {
        if j >= dim_a || k >= dim_b {
            return Err(Error::dims(format!("basis index ({j},{k}) outside {dim_a}x{dim_b}")));
        }
        let mut grid = CMatrix::zeros(dim_a, dim_b);
        grid[(j, k)] = linalg::ONE;
        Self::from_grid(grid, false)
    }

    /// `Σ_j |jj⟩/√d`; `maximally_entangled(2)` is the Bell state.
    pub fn maximally_entangled(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        Self::from_grid(CMatrix::identity(d, d), true)
    }

    pub fn dim_a(&self) -> usize {
        self.amplitudes.nrows()
    }

    pub fn dim_b(&self) -> usize {
        self.amplitudes.ncols()
    }

    pub fn dims(&self) -> (usize, usize) {
        self.amplitudes.shape()
    }

    /// The amplitude grid `A`, rows indexed by party A.
    pub fn amplitudes(&self) -> &CMatrix {
        &self.amplitudes
    }

    pub fn amplitude(&self, j: usize, k: usize) -> C64 {
        self.amplitudes[(j, k)]
    }

    /// Amplitudes in flat `j·dB + k` order.
    pub fn to_flat(&self) -> Vec<C64> {
        let (da, db) = self.dims();
        (0..da * db).map(|i| self.amplitudes[(i / db, i % db)]).collect()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    /// Zero-extends both parties to dimension `d`.
    pub fn padded(&self, d: usize) -> Result<Self> {
        let (da, db) = self.dims();
        if d < da || d < db {
            return Err(Error::dims(format!("cannot pad {da}x{db} down to {d}")));
        }
        let mut grid = CMatrix::zeros(d, d);
        grid.view_mut((0, 0), (da, db)).copy_from(&self.amplitudes);
        Ok(Self { amplitudes: grid })
    }

    /// Pads to `max(dA, dB)` when the dimensions differ.
    pub fn square(&self) -> Self {
        let d = self.dim_a().max(self.dim_b());
        self.padded(d).expect("padding to the larger dimension")
    }

    /// `ρ_A = Tr_B|ψ⟩⟨ψ|` or `ρ_B = Tr_A|ψ⟩⟨ψ|`.
    pub fn reduced_density(&self, side: Side) -> CMatrix {
        reduction_matrix(&self.amplitudes, &self.amplitudes, side)
    }

    /// Local purity `Tr ρ²` of the reduction on the remaining party.
    pub fn purity(&self, side: Side) -> f64 {
        linalg::hs_norm_sq(&self.reduced_density(side))
    }

    fn check_same_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::dims(format!(
                "{}x{} vs {}x{}",
                self.dim_a(),
                self.dim_b(),
                other.dim_a(),
                other.dim_b()
            )));
        }
        Ok(())
    }
}

/// Partial trace of `|ψ⟩⟨φ|` on one party.
#[derive(Clone, Debug, PartialEq)]
pub struct Rank1Reduction {
    pub side: Side,
    /// `A·B†` (`dA×dA`) for `TracedOverB`, `Aᵀ·B*` (`dB×dB`) for `TracedOverA`.
    pub matrix: CMatrix,
}

impl Rank1Reduction {
    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }

    /// `true` when every entry is below `τ(d)`.
    pub fn is_zero(&self) -> bool {
        linalg::max_abs(&self.matrix) < tol::tau(self.matrix.nrows())
    }
}

pub(crate) fn reduction_matrix(a: &CMatrix, b: &CMatrix, side: Side) -> CMatrix {
    match side {
        Side::TracedOverB => a * b.adjoint(),
        Side::TracedOverA => a.transpose() * b.conjugate(),
    }
}

/// `Tr_B|ψ⟩⟨φ|` or `Tr_A|ψ⟩⟨φ|`.
pub fn reduce_rank1(psi: &BipartiteState, phi: &BipartiteState, side: Side) -> Result<Rank1Reduction> {
    psi.check_same_dims(phi)?;
    Ok(Rank1Reduction { side, matrix: reduction_matrix(&psi.amplitudes, &phi.amplitudes, side) })
}

/// `⟨φ|ψ⟩ = Σ_jk b*_jk a_jk`.
pub fn overlap(psi: &BipartiteState, phi: &BipartiteState) -> Result<C64> {
    psi.check_same_dims(phi)?;
    Ok(linalg::hs_inner(&phi.amplitudes, &psi.amplitudes))
}

/// `(U_A ⊗ U_B)|ψ⟩`, i.e. the grid becomes `U_A·A·U_Bᵀ`.
pub fn apply_local(state: &BipartiteState, u_a: &CMatrix, u_b: &CMatrix) -> Result<BipartiteState> {
    let (da, db) = state.dims();
    if u_a.shape() != (da, da) || u_b.shape() != (db, db) {
        return Err(Error::dims(format!(
            "local unitaries {:?} and {:?} for a {da}x{db} state",
            u_a.shape(),
            u_b.shape()
        )));
    }
    let defect = linalg::unitarity_defect(u_a).max(linalg::unitarity_defect(u_b));
    if defect > tol::UNITARY {
        return Err(Error::NotUnitary(defect));
    }
    Ok(BipartiteState { amplitudes: u_a * &state.amplitudes * u_b.transpose() })
}

/// Flat constructor mirroring [`BipartiteState::from_amplitudes`].
pub fn state_from_amplitudes(
    dim_a: usize,
    dim_b: usize,
    amplitudes: &[C64],
    normalize: bool,
) -> Result<BipartiteState> {
    BipartiteState::from_amplitudes(dim_a, dim_b, amplitudes, normalize)
}

/// Outer product `|ψ⟩⟨φ|` as a `dAdB×dAdB` matrix in flat index order.
pub fn outer(psi: &BipartiteState, phi: &BipartiteState) -> Result<CMatrix> {
    psi.check_same_dims(phi)?;
    let x = psi.to_flat();
    let y = phi.to_flat();
    Ok(CMatrix::from_fn(x.len(), y.len(), |r, c| x[r] * y[c].conj()))
}

#[cfg(test)]
pub(crate) fn zero_grid(da: usize, db: usize) -> CMatrix {
    CMatrix::from_element(da, db, linalg::ZERO)
}
