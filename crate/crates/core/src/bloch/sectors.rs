use serde::Serialize;

use crate::bloch::expansion::{bloch_expand, BlochExpansion};
use crate::bloch::gell_mann::{gell_mann_basis, HermitianBasis};
use crate::decomp::schmidt;
use crate::error::Result;
use crate::linalg::{self, CMatrix};
use crate::state::{self, BipartiteState};

pub const UNITS: &str = "len*: raw squared coefficient sums; diag_*/offdiag_*: squared lengths divided by d^2";

/// Squared lengths of the 0-, 1- and 2-sectors of an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SectorLengths {
    pub len0: f64,
    pub len1a: f64,
    pub len1b: f64,
    pub len2: f64,
}

impl SectorLengths {
    pub fn total(&self) -> f64 {
        self.len0 + self.len1a + self.len1b + self.len2
    }

    /// Largest componentwise difference.
    pub fn max_diff(&self, other: &Self) -> f64 {
        [self.len0 - other.len0, self.len1a - other.len1a, self.len1b - other.len1b, self.len2 - other.len2]
            .iter()
            .map(|x| x.abs())
            .fold(0.0, f64::max)
    }
}

pub fn sector_lengths(x: &BlochExpansion) -> SectorLengths {
    let n = x.d * x.d;
    let c = &x.coeffs;
    let sq = |j: usize, k: usize| c[(j, k)].norm_sqr();
    SectorLengths {
        len0: sq(0, 0),
        len1a: (1..n).map(|j| sq(j, 0)).sum(),
        len1b: (1..n).map(|k| sq(0, k)).sum(),
        len2: (1..n).flat_map(|j| (1..n).map(move |k| (j, k))).map(|(j, k)| sq(j, k)).sum(),
    }
}

/// Sector lengths of `|Ψ⟩⟨Ψ|` together with the separate contributions of its
/// product-basis diagonal and offdiagonal parts.
#[derive(Clone, Debug, Serialize)]
pub struct SectorReport {
    pub basis_label: String,
    pub units: &'static str,
    /// Local dimension after padding.
    pub d: usize,
    /// Original `(dA, dB)` when padding was applied.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub padded_from: Option<(usize, usize)>,
    pub len0: f64,
    pub len1a: f64,
    pub len1b: f64,
    pub len2: f64,
    pub diag_0: f64,
    pub diag_1: f64,
    pub diag_2: f64,
    pub offdiag_1: f64,
    pub offdiag_2: f64,
}

impl SectorReport {
    pub fn lengths(&self) -> SectorLengths {
        SectorLengths { len0: self.len0, len1a: self.len1a, len1b: self.len1b, len2: self.len2 }
    }

    /// Normalized total, `Tr ρ² = 1` for a pure state.
    pub fn contribution_total(&self) -> f64 {
        self.diag_0 + self.diag_1 + self.diag_2 + self.offdiag_1 + self.offdiag_2
    }
}

/// `(diag, offdiag)` with `diag = Σ_kl |a_kl|² |kl⟩⟨kl|` and
/// `offdiag = |Ψ⟩⟨Ψ| − diag`, both in the current product basis.
pub fn diag_offdiag_split(state: &BipartiteState) -> (CMatrix, CMatrix) {
    let proj = state::outer(state, state).expect("same state");
    let mut diag = CMatrix::zeros(proj.nrows(), proj.ncols());
    for i in 0..proj.nrows() {
        diag[(i, i)] = proj[(i, i)];
    }
    let off = &proj - &diag;
    (diag, off)
}

/// Square copy of `state` padded with zero amplitudes, plus the original
/// dims when padding was needed.
pub(crate) fn square_state(state: &BipartiteState) -> (BipartiteState, Option<(usize, usize)>) {
    let dims = state.dims();
    if dims.0 == dims.1 {
        (state.clone(), None)
    } else {
        (state.square(), Some(dims))
    }
}

fn one_and_two(x: &BlochExpansion) -> (f64, f64) {
    let l = sector_lengths(x);
    (l.len1a + l.len1b, l.len2)
}

/// Sector report of `state` in its current basis using a prepared basis.
pub fn sector_contributions_with(state: &BipartiteState, basis: &HermitianBasis, label: &str) -> Result<SectorReport> {
    let (sq, padded_from) = square_state(state);
    let d = sq.dim_a();
    let (diag, off) = diag_offdiag_split(&sq);
    let xd = bloch_expand(&diag, basis)?;
    let xo = bloch_expand(&off, basis)?;
    let total = BlochExpansion { d, coeffs: &xd.coeffs + &xo.coeffs, hermitian_input: true };
    let lengths = sector_lengths(&total);
    let norm = (d * d) as f64;
    let (d1, d2) = one_and_two(&xd);
    let (o1, o2) = one_and_two(&xo);
    Ok(SectorReport {
        basis_label: label.to_string(),
        units: UNITS,
        d,
        padded_from,
        len0: lengths.len0,
        len1a: lengths.len1a,
        len1b: lengths.len1b,
        len2: lengths.len2,
        diag_0: xd.coeffs[(0, 0)].norm_sqr() / norm,
        diag_1: d1 / norm,
        diag_2: d2 / norm,
        offdiag_1: o1 / norm,
        offdiag_2: o2 / norm,
    })
}

/// Sector report of `state` in its current product basis; unequal local
/// dimensions are padded to the larger one.
pub fn sector_contributions(state: &BipartiteState) -> Result<SectorReport> {
    let d = state.dim_a().max(state.dim_b()).max(2);
    let basis = gell_mann_basis(d)?;
    let mut report = sector_contributions_with(&state.padded(d)?, &basis, "current")?;
    report.padded_from = padding_of(state, d);
    Ok(report)
}

fn padding_of(state: &BipartiteState, d: usize) -> Option<(usize, usize)> {
    if state.dims() == (d, d) {
        None
    } else {
        Some(state.dims())
    }
}

/// The state rewritten in its own Schmidt basis (after padding).
pub fn to_schmidt_basis(state: &BipartiteState) -> BipartiteState {
    let (sq, _) = square_state(state);
    let d = sq.dim_a();
    schmidt(&sq).schmidt_form(d, d)
}

/// Sector report in the Schmidt basis.
pub fn schmidt_basis_contributions(state: &BipartiteState) -> Result<SectorReport> {
    let d = state.dim_a().max(state.dim_b()).max(2);
    let basis = gell_mann_basis(d)?;
    let mut report = sector_contributions_with(&to_schmidt_basis(&state.padded(d)?), &basis, "schmidt")?;
    report.padded_from = padding_of(state, d);
    Ok(report)
}

/// `C² = 2(1 − Σλ_j²)`.
pub fn concurrence_sq(state: &BipartiteState) -> f64 {
    2.0 * (1.0 - schmidt(state).purity())
}

/// Normalized diag 2-sector contribution straight from the grid:
/// `Σ|a_jk|⁴ − (Σh_j² + Σh'_k²)/d + 1/d²` with the marginal diagonals
/// `h`, `h'` and `d` the larger local dimension.
pub fn diag_2sector_fast(grid: &CMatrix) -> f64 {
    let (rows, cols) = grid.shape();
    let d = rows.max(cols).max(2) as f64;
    let (mut sum_p2, mut h2, mut hp2) = (0.0, 0.0, 0.0);
    for j in 0..rows {
        let mut h = 0.0;
        for k in 0..cols {
            let p = grid[(j, k)].norm_sqr();
            sum_p2 += p * p;
            h += p;
        }
        h2 += h * h;
    }
    for k in 0..cols {
        let h: f64 = (0..rows).map(|j| grid[(j, k)].norm_sqr()).sum();
        hp2 += h * h;
    }
    sum_p2 - (h2 + hp2) / d + 1.0 / (d * d)
}

/// Largest modulus among the 1-sector coefficients whose nontrivial factor
/// is a non-diagonal basis element.
pub fn max_nondiagonal_one_sector(x: &BlochExpansion, basis: &HermitianBasis) -> f64 {
    (1..x.d * x.d)
        .filter(|&j| !basis.is_diagonal(j))
        .map(|j| x.coeffs[(j, 0)].norm().max(x.coeffs[(0, j)].norm()))
        .fold(0.0, f64::max)
}

/// Expansion of the projector `|Ψ⟩⟨Ψ|` (after padding).
pub fn projector_expansion(state: &BipartiteState, basis: &HermitianBasis) -> Result<BlochExpansion> {
    let sq = state.padded(basis.dim())?;
    bloch_expand(&state::outer(&sq, &sq)?, basis)
}

/// Squared Hilbert–Schmidt norms of the diag and offdiag parts.
pub fn split_norms(state: &BipartiteState) -> (f64, f64) {
    let (diag, off) = diag_offdiag_split(state);
    (linalg::hs_norm_sq(&diag), linalg::hs_norm_sq(&off))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{c, real};
    use crate::random::HaarSampler;
    use crate::state::apply_local;

    fn bell() -> BipartiteState {
        BipartiteState::maximally_entangled(2).unwrap()
    }

    #[test]
    fn bell_sectors() {
        let r = sector_contributions(&bell()).unwrap();
        assert!(r.lengths().max_diff(&SectorLengths { len0: 1.0, len1a: 0.0, len1b: 0.0, len2: 3.0 }) < 1e-14);
        assert!((r.offdiag_2 - 0.5).abs() < 1e-14);
        assert!((r.diag_2 - 0.25).abs() < 1e-14);
        assert!(r.offdiag_1.abs() < 1e-14);
        assert!((r.contribution_total() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn product_state_sectors() {
        let r = sector_contributions(&BipartiteState::basis(2, 2, 0, 0).unwrap()).unwrap();
        assert!(r.lengths().max_diff(&SectorLengths { len0: 1.0, len1a: 1.0, len1b: 1.0, len2: 1.0 }) < 1e-14);
        assert!(r.offdiag_1 == 0.0 && r.offdiag_2 == 0.0);
    }

    #[test]
    fn split_is_orthogonal() {
        let (bd, bo) = split_norms(&bell());
        assert!((bd - 0.5).abs() < 1e-14 && (bo - 0.5).abs() < 1e-14);
        let (_, po) = split_norms(&BipartiteState::basis(3, 3, 1, 2).unwrap());
        assert_eq!(po, 0.0);
        let psi = HaarSampler::new(9).state(3, 4).unwrap();
        let (diag, off) = diag_offdiag_split(&psi);
        assert!(linalg::hs_inner(&diag, &off).norm() < 1e-10);
        let (nd, no) = split_norms(&psi);
        assert!((nd + no - 1.0).abs() < 1e-10);
    }

    #[test]
    fn per_sector_sums_match_lengths() {
        let mut rng = HaarSampler::new(10);
        for d in 2..=4 {
            let psi = rng.state(d, d).unwrap();
            let r = sector_contributions(&psi).unwrap();
            let n = (d * d) as f64;
            assert!((n * (r.diag_1 + r.offdiag_1) - (r.len1a + r.len1b)).abs() < 1e-10);
            assert!((n * (r.diag_2 + r.offdiag_2) - r.len2).abs() < 1e-10);
            assert!((n * r.diag_0 - r.len0).abs() < 1e-10);
            assert!((r.lengths().total() - n).abs() < 1e-8);
            assert!((diag_2sector_fast(psi.amplitudes()) - r.diag_2).abs() < 1e-12);
        }
    }

    #[test]
    fn schmidt_basis_structure() {
        let mut rng = HaarSampler::new(11);
        for d in 2..=4 {
            let psi = rng.state(d, d).unwrap();
            let r = schmidt_basis_contributions(&psi).unwrap();
            assert!(r.offdiag_1 < 1e-9);
            assert!((r.offdiag_2 - concurrence_sq(&psi) / 2.0).abs() < 1e-8);
            let basis = gell_mann_basis(d).unwrap();
            let x = projector_expansion(&to_schmidt_basis(&psi), &basis).unwrap();
            assert!(max_nondiagonal_one_sector(&x, &basis) < 1e-9);
        }
    }

    #[test]
    fn lengths_invariant_under_local_unitaries() {
        let mut rng = HaarSampler::new(12);
        let psi = rng.state(3, 3).unwrap();
        let base = sector_contributions(&psi).unwrap().lengths();
        for _ in 0..5 {
            let (ua, ub) = rng.local_pair(3, 3).unwrap();
            let moved = sector_contributions(&apply_local(&psi, &ua, &ub).unwrap()).unwrap();
            assert!(moved.lengths().max_diff(&base) < 1e-8);
        }
    }

    #[test]
    fn unequal_dims_are_padded() {
        let psi = BipartiteState::from_amplitudes(1, 2, &[real(1.0), c(0.0, 1.0)], true).unwrap();
        let r = sector_contributions(&psi).unwrap();
        assert_eq!(r.d, 2);
        assert_eq!(r.padded_from, Some((1, 2)));
        assert!((r.lengths().total() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn concurrence_fixtures() {
        assert!((concurrence_sq(&bell()) - 1.0).abs() < 1e-14);
        assert!(concurrence_sq(&BipartiteState::basis(2, 3, 1, 1).unwrap()).abs() < 1e-14);
        let psi = HaarSampler::new(13).state(4, 4).unwrap();
        let oracle = 2.0 * (1.0 - psi.purity(crate::state::Side::TracedOverB));
        assert!((concurrence_sq(&psi) - oracle).abs() < 1e-10);
    }
}
