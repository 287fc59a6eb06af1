//! Majorization of the marginal diagonal by the Schmidt spectrum, the
//! doubly stochastic transfer matrix between them, and the chain of bounds
//! on the offdiagonal 2-sector length.

use serde::Serialize;

use crate::bloch::{sector_contributions, to_schmidt_basis};
use crate::decomp::schmidt;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::state::{BipartiteState, Side};
use crate::tol;

/// Diagonal of the marginal on the remaining party: `h_j = Σ_l |a_jl|²` for
/// [`Side::TracedOverB`], `h_l = Σ_j |a_jl|²` for [`Side::TracedOverA`].
pub fn diagonal_vector(state: &BipartiteState, side: Side) -> Vec<f64> {
    let a = state.amplitudes();
    match side {
        Side::TracedOverB => a.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).sum()).collect(),
        Side::TracedOverA => a.column_iter().map(|c| c.iter().map(|z| z.norm_sqr()).sum()).collect(),
    }
}

fn sorted_desc(v: &[f64]) -> Vec<f64> {
    let mut s = v.to_vec();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// `λ ≻ h`: every partial sum of the descending-sorted `λ` is at least the
/// matching partial sum of `h` (up to `1e-10`).
pub fn majorizes(lam: &[f64], h: &[f64]) -> Result<bool> {
    if lam.len() != h.len() {
        return Err(Error::LengthMismatch(lam.len(), h.len()));
    }
    let (sl, sh): (f64, f64) = (lam.iter().sum(), h.iter().sum());
    if (sl - sh).abs() > 1e-9 {
        return Err(Error::SumMismatch(sl, sh));
    }
    let (lam, h) = (sorted_desc(lam), sorted_desc(h));
    let (mut pl, mut ph) = (0.0, 0.0);
    for (l, x) in lam.iter().zip(&h) {
        pl += l;
        ph += x;
        if pl < ph - tol::MAJORIZATION_SLACK {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `S₂(v) = Σ_{j<k} v_j v_k`.
pub fn elementary_symmetric_2(v: &[f64]) -> f64 {
    let mut s = 0.0;
    for j in 0..v.len() {
        for k in (j + 1)..v.len() {
            s += v[j] * v[k];
        }
    }
    s
}

/// Witness for `λ ≻ h`: `h = M·λ` with the doubly stochastic
/// `M_jk = |U_jk|²`, `U` the completed Schmidt basis of the marginal.
#[derive(Clone, Debug, Serialize)]
pub struct MajorizationWitness {
    pub side: Side,
    /// Schmidt spectrum padded with zeros to the marginal dimension.
    pub lam: Vec<f64>,
    pub h: Vec<f64>,
    pub transfer: Vec<Vec<f64>>,
    pub majorizes: bool,
    /// Max deviation of a row or column sum from 1.
    pub stochastic_defect: f64,
    /// Max entry of `|h − M·λ|`.
    pub transfer_residual: f64,
    pub s2_lam: f64,
    pub s2_h: f64,
}

/// Max deviation of a row or column sum of `m` from 1.
pub fn doubly_stochastic_defect(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let rows = m.iter().map(|r| (r.iter().sum::<f64>() - 1.0).abs());
    let cols = (0..n).map(|k| (m.iter().map(|r| r[k]).sum::<f64>() - 1.0).abs());
    rows.chain(cols).fold(0.0, f64::max)
}

/// `M_jk = |U_jk|²`.
pub fn transfer_matrix(u: &CMatrix) -> Vec<Vec<f64>> {
    u.row_iter().map(|r| r.iter().map(|z| z.norm_sqr()).collect()).collect()
}

pub fn majorization_witness(state: &BipartiteState, side: Side) -> Result<MajorizationWitness> {
    let s = schmidt(state);
    let basis = match side {
        Side::TracedOverB => &s.basis_a,
        Side::TracedOverA => &s.basis_b,
    };
    let u = linalg::complete_unitary(basis);
    let n = u.nrows();
    let mut lam = s.lambdas.clone();
    lam.resize(n, 0.0);
    let h = diagonal_vector(state, side);
    let transfer = transfer_matrix(&u);
    let transfer_residual =
        (0..n).map(|j| (h[j] - (0..n).map(|k| transfer[j][k] * lam[k]).sum::<f64>()).abs()).fold(0.0, f64::max);
    Ok(MajorizationWitness {
        side,
        majorizes: majorizes(&lam, &h)?,
        stochastic_defect: doubly_stochastic_defect(&transfer),
        transfer_residual,
        s2_lam: elementary_symmetric_2(&lam),
        s2_h: elementary_symmetric_2(&h),
        lam,
        h,
        transfer,
    })
}

fn probabilities(state: &BipartiteState) -> (Vec<Vec<f64>>, usize) {
    let sq = state.square();
    let a = sq.amplitudes();
    let d = a.nrows();
    ((0..d).map(|j| (0..d).map(|k| a[(j, k)].norm_sqr()).collect()).collect(), d)
}

/// Closed form for the offdiagonal 2-sector length built from the weights
/// `P_jk = |a_jk|²` alone:
///
/// ```text
/// Σ_{(jk)≠(lm)} P_jk P_lm − (1/d) Σ_{j≠l,k} P_jk P_lk − (1/d) Σ_{j,k≠l} P_jk P_jl
/// ```
///
/// It coincides with the Bloch-expansion value only when no two rows (and
/// no two columns) of the grid overlap in more than one position, e.g. in
/// the Schmidt basis. [`offdiag_2sector_exact`] is the general form.
pub fn offdiag_2sector_closed_form(state: &BipartiteState) -> f64 {
    let (p, d) = probabilities(state);
    let inv_d = 1.0 / d as f64;
    let mut total = 0.0;
    let mut rows = 0.0;
    let mut cols = 0.0;
    for j in 0..d {
        for k in 0..d {
            for l in 0..d {
                for m in 0..d {
                    let w = p[j][k] * p[l][m];
                    if (j, k) != (l, m) {
                        total += w;
                    }
                    if j != l && k == m {
                        rows += w;
                    }
                    if j == l && k != m {
                        cols += w;
                    }
                }
            }
        }
    }
    total - inv_d * rows - inv_d * cols
}

/// Offdiagonal 2-sector length from the grid:
/// `1 − Σ|a_jk|⁴ − (1/d)(Σ_{j≠l}|(ρ_A)_jl|² + Σ_{k≠m}|(ρ_B)_km|²)`, i.e. the
/// offdiagonal total minus its 1-sector part, which involves the coherent
/// sums `(ρ_A)_jl = Σ_k a_jk a*_lk`.
pub fn offdiag_2sector_exact(state: &BipartiteState) -> f64 {
    let sq = state.square();
    let d = sq.dim_a();
    let (p, _) = probabilities(&sq);
    let sum_p2: f64 = p.iter().flatten().map(|x| x * x).sum();
    let off = |m: CMatrix| -> f64 {
        let mut s = 0.0;
        for j in 0..d {
            for l in 0..d {
                if j != l {
                    s += m[(j, l)].norm_sqr();
                }
            }
        }
        s
    };
    let one = off(sq.reduced_density(Side::TracedOverB)) + off(sq.reduced_density(Side::TracedOverA));
    sq.norm().powi(4) - sum_p2 - one / d as f64
}

/// Both sides of the index split
/// `Σ_{(jk)≠(lm)} = Σ_{j≠l, k, m} + Σ_{j=l, k≠m}` on the weights `|a|²`.
#[derive(Clone, Debug, Serialize)]
pub struct SummationRule {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn summation_rule_check(state: &BipartiteState) -> SummationRule {
    let a = state.amplitudes();
    let (da, db) = state.dims();
    let p = |j: usize, k: usize| a[(j, k)].norm_sqr();
    let mut lhs = 0.0;
    for j in 0..da {
        for k in 0..db {
            for l in 0..da {
                for m in 0..db {
                    if (j, k) != (l, m) {
                        lhs += p(j, k) * p(l, m);
                    }
                }
            }
        }
    }
    // j ≠ l part from the row sums h_j, j = l part row by row
    let h: Vec<f64> = (0..da).map(|j| (0..db).map(|k| p(j, k)).sum()).collect();
    let rows: f64 =
        (0..da).flat_map(|j| (0..da).map(move |l| (j, l))).filter(|(j, l)| j != l).map(|(j, l)| h[j] * h[l]).sum();
    let within: f64 = (0..da).map(|j| h[j] * h[j] - (0..db).map(|k| p(j, k).powi(2)).sum::<f64>()).sum();
    let rhs = rows + within;
    SummationRule { lhs, rhs, holds: (lhs - rhs).abs() <= 1e-12 }
}

/// `closed_form ≥ middle ≥ half_concurrence_sq`, where the middle term is
/// the party-symmetrized `½(Σ_{j≠l} h_j h_l + Σ_{k≠m} h'_k h'_m)`.
#[derive(Clone, Debug, Serialize)]
pub struct ChainReport {
    pub closed_form: f64,
    pub middle: f64,
    pub half_concurrence_sq: f64,
    /// Offdiagonal 2-sector length from the Bloch expansion, for comparison.
    pub bloch_offdiag_2: f64,
    /// Largest amount by which an inequality of the chain fails (0 if none).
    pub violation: f64,
    pub holds: bool,
    /// `closed_form − half_concurrence_sq` evaluated in the Schmidt basis.
    pub schmidt_gap: f64,
    pub tight_in_schmidt_basis: bool,
}

fn chain_terms(state: &BipartiteState) -> (f64, f64, f64) {
    let closed = offdiag_2sector_closed_form(state);
    let sq = state.square();
    let ha = diagonal_vector(&sq, Side::TracedOverB);
    let hb = diagonal_vector(&sq, Side::TracedOverA);
    let middle = elementary_symmetric_2(&ha) + elementary_symmetric_2(&hb);
    let half_c2 = 1.0 - schmidt(state).purity();
    (closed, middle, half_c2)
}

pub fn inequality_chain(state: &BipartiteState) -> Result<ChainReport> {
    let (closed, middle, half_c2) = chain_terms(state);
    let (schmidt_closed, _, _) = chain_terms(&to_schmidt_basis(state));
    let violation = (middle - closed).max(half_c2 - middle).max(0.0);
    let schmidt_gap = schmidt_closed - half_c2;
    Ok(ChainReport {
        closed_form: closed,
        middle,
        half_concurrence_sq: half_c2,
        bloch_offdiag_2: sector_contributions(state)?.offdiag_2,
        violation,
        holds: violation <= tol::CHAIN_SLACK,
        schmidt_gap,
        tight_in_schmidt_basis: schmidt_gap.abs() < tol::CHAIN_SLACK,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real;
    use crate::random::HaarSampler;
    use crate::state::apply_local;

    fn bell() -> BipartiteState {
        BipartiteState::maximally_entangled(2).unwrap()
    }

    fn plus_zero() -> BipartiteState {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        BipartiteState::from_amplitudes(2, 2, &[real(s), real(0.0), real(s), real(0.0)], false).unwrap()
    }

    #[test]
    fn diagonal_vector_fixtures() {
        assert_eq!(diagonal_vector(&bell(), Side::TracedOverB).len(), 2);
        let h = diagonal_vector(&bell(), Side::TracedOverB);
        assert!(h.iter().all(|x| (x - 0.5).abs() < 1e-15));
        let h = diagonal_vector(&plus_zero(), Side::TracedOverB);
        assert!(h.iter().all(|x| (x - 0.5).abs() < 1e-15));
        let w = majorization_witness(&plus_zero(), Side::TracedOverB).unwrap();
        assert!((w.lam[0] - 1.0).abs() < 1e-15 && w.lam[1].abs() < 1e-15);
        let psi = HaarSampler::new(1).state(3, 5).unwrap();
        for side in [Side::TracedOverA, Side::TracedOverB] {
            assert!((diagonal_vector(&psi, side).iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn majorization_fixtures() {
        assert!(majorizes(&[1.0, 0.0], &[0.5, 0.5]).unwrap());
        assert!(majorizes(&[0.5, 0.5], &[0.5, 0.5]).unwrap());
        assert!(!majorizes(&[0.6, 0.4], &[0.7, 0.3]).unwrap());
        assert!(matches!(majorizes(&[1.0], &[0.5, 0.5]), Err(Error::LengthMismatch(1, 2))));
        assert!(matches!(majorizes(&[1.0, 0.0], &[0.5, 0.4]), Err(Error::SumMismatch(..))));
    }

    #[test]
    fn s2_fixtures() {
        assert!((elementary_symmetric_2(&[0.5, 0.5]) - 0.25).abs() < 1e-15);
        assert_eq!(elementary_symmetric_2(&[1.0, 0.0]), 0.0);
    }

    #[test]
    fn witnesses_on_random_bases() {
        let mut rng = HaarSampler::new(2);
        for d in 2..=4 {
            let psi = rng.state(d, d).unwrap();
            for _ in 0..5 {
                let (ua, ub) = rng.local_pair(d, d).unwrap();
                let moved = apply_local(&psi, &ua, &ub).unwrap();
                for side in [Side::TracedOverA, Side::TracedOverB] {
                    let w = majorization_witness(&moved, side).unwrap();
                    assert!(w.majorizes);
                    assert!(w.stochastic_defect < 1e-10);
                    assert!(w.transfer_residual < 1e-9);
                    assert!(w.s2_lam <= w.s2_h + 1e-12);
                }
            }
        }
    }

    #[test]
    fn closed_forms_on_fixtures() {
        assert!((offdiag_2sector_closed_form(&bell()) - 0.5).abs() < 1e-15);
        assert_eq!(offdiag_2sector_closed_form(&BipartiteState::basis(2, 2, 0, 0).unwrap()), 0.0);
        assert!((offdiag_2sector_exact(&bell()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn exact_form_matches_bloch_expansion() {
        let mut rng = HaarSampler::new(3);
        for (da, db) in [(2, 2), (3, 3), (4, 4), (2, 3)] {
            let psi = rng.state(da, db).unwrap();
            let bloch = sector_contributions(&psi).unwrap().offdiag_2;
            assert!((offdiag_2sector_exact(&psi) - bloch).abs() < 1e-12);
        }
    }

    #[test]
    fn weight_only_form_misses_coherent_one_sector_terms() {
        // (|00⟩ + |01⟩ + |10⟩ − |11⟩)/2: rows 0 and 1 overlap in two columns
        let psi = BipartiteState::from_amplitudes(2, 2, &[real(1.0), real(1.0), real(1.0), real(-1.0)], true).unwrap();
        assert!((offdiag_2sector_closed_form(&psi) - 0.5).abs() < 1e-15);
        assert!((offdiag_2sector_exact(&psi) - 0.75).abs() < 1e-15);
        assert!((sector_contributions(&psi).unwrap().offdiag_2 - 0.75).abs() < 1e-14);
    }

    #[test]
    fn summation_rule_fixtures() {
        let r = summation_rule_check(&bell());
        assert!(r.holds && (r.lhs - 0.5).abs() < 1e-15);
        let r = summation_rule_check(&BipartiteState::basis(2, 2, 0, 0).unwrap());
        assert!(r.holds && r.lhs == 0.0);
        assert!(summation_rule_check(&HaarSampler::new(4).state(4, 4).unwrap()).holds);
    }

    #[test]
    fn chain_fixtures() {
        let c = inequality_chain(&bell()).unwrap();
        for x in [c.closed_form, c.middle, c.half_concurrence_sq] {
            assert!((x - 0.5).abs() < 1e-14);
        }
        assert!(c.holds && c.tight_in_schmidt_basis);

        let c = inequality_chain(&plus_zero()).unwrap();
        assert!((c.closed_form - 0.25).abs() < 1e-15);
        assert!((c.middle - 0.25).abs() < 1e-15);
        assert!(c.half_concurrence_sq.abs() < 1e-15);
        assert!(c.holds && c.tight_in_schmidt_basis);
    }

    #[test]
    fn chain_holds_on_random_bases() {
        let mut rng = HaarSampler::new(5);
        for d in 2..=4 {
            for _ in 0..5 {
                let psi = rng.state(d, d).unwrap();
                let (ua, ub) = rng.local_pair(d, d).unwrap();
                let c = inequality_chain(&apply_local(&psi, &ua, &ub).unwrap()).unwrap();
                assert!(c.holds, "violation {}", c.violation);
                assert!(c.tight_in_schmidt_basis);
                assert!(c.bloch_offdiag_2 >= c.half_concurrence_sq - 1e-10);
            }
        }
    }
}
