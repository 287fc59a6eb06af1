//! Dense complex helpers shared by the decompositions.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Max entry modulus of `a − b`. Panics on shape mismatch.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Max entry of `|U·U† − I|`, or infinity for a non-square input.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    if !u.is_square() {
        return f64::INFINITY;
    }
    let n = u.nrows();
    max_abs_diff(&(u * u.adjoint()), &CMatrix::identity(n, n))
}

/// Max entry of `|V†·V − I|` for a set of columns.
pub fn orthonormality_defect(v: &CMatrix) -> f64 {
    let n = v.ncols();
    max_abs_diff(&(v.adjoint() * v), &CMatrix::identity(n, n))
}

pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    max_abs_diff(m, &m.adjoint())
}

/// Unit phase of the largest-magnitude entry of a column (first one wins
/// ties). Multiplying the column by its conjugate makes that entry real
/// positive. Zero columns give `1`.
pub fn gauge_phase(col: &[C64]) -> C64 {
    let mut best = ZERO;
    let mut best_abs = 0.0;
    for &z in col {
        let a = z.norm();
        if a > best_abs * (1.0 + 1e-12) {
            best = z;
            best_abs = a;
        }
    }
    if best_abs == 0.0 {
        ONE
    } else {
        best / best_abs
    }
}

pub(crate) fn column_vec(m: &CMatrix, j: usize) -> Vec<C64> {
    m.column(j).iter().copied().collect()
}

/// SVD `m = U·diag(s)·V†` with singular values sorted descending.
///
/// Square inputs give square unitary `U` and `V`; rectangular inputs give the
/// thin factors.
pub fn svd_sorted(m: &CMatrix) -> (CMatrix, Vec<f64>, CMatrix) {
    let svd = m.clone().svd(true, true);
    let u = svd.u.expect("U requested");
    let v = svd.v_t.expect("V^T requested").adjoint();
    let s: Vec<f64> = svd.singular_values.iter().copied().collect();
    let mut order: Vec<usize> = (0..s.len()).collect();
    order.sort_by(|&a, &b| s[b].total_cmp(&s[a]).then(a.cmp(&b)));
    let u = CMatrix::from_fn(u.nrows(), order.len(), |r, k| u[(r, order[k])]);
    let v = CMatrix::from_fn(v.nrows(), order.len(), |r, k| v[(r, order[k])]);
    let s = order.iter().map(|&k| s[k]).collect();
    (u, s, v)
}

pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Number of singular values above `threshold`.
pub fn numerical_rank(m: &CMatrix, threshold: f64) -> usize {
    singular_values(m).iter().filter(|&&s| s > threshold).count()
}

/// Ratio of extreme singular values; infinity when singular.
pub fn condition_number(m: &CMatrix) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Complex Schur form `m = Q·T·Q†`, `T` upper triangular.
pub fn schur(m: &CMatrix) -> Option<(CMatrix, CMatrix)> {
    let n = m.nrows();
    nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 1000 * n.max(1)).map(|s| s.unpack())
}

/// Eigenvalues of a general square matrix, in Schur order.
pub fn eigenvalues(m: &CMatrix) -> Option<Vec<C64>> {
    schur(m).map(|(_, t)| t.diagonal().iter().copied().collect())
}

/// Right eigenvectors of an upper-triangular `t`, by back substitution.
/// Column `k` solves `(T − t_kk)·y = 0` with `y_k = 1` and `y_i = 0` below.
/// Denominators smaller than `floor` are clamped to `floor`.
pub(crate) fn triangular_eigenvectors(t: &CMatrix, floor: f64) -> CMatrix {
    let n = t.nrows();
    let mut y = CMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = ONE;
        for i in (0..k).rev() {
            let mut acc = ZERO;
            for j in (i + 1)..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            let mut den = t[(i, i)] - lambda;
            if den.norm() < floor {
                den = real(floor);
            }
            y[(i, k)] = -acc / den;
        }
    }
    y
}

/// Extend orthonormal columns to a full `d×d` unitary by Gram–Schmidt
/// against the standard basis vectors with the largest residuals.
pub fn complete_unitary(cols: &CMatrix) -> CMatrix {
    let d = cols.nrows();
    let mut basis: Vec<CVector> = (0..cols.ncols()).map(|j| cols.column(j).into_owned()).collect();
    while basis.len() < d {
        let mut best: Option<CVector> = None;
        let mut best_norm = 0.0;
        for e in 0..d {
            let mut v = CVector::zeros(d);
            v[e] = ONE;
            // two passes of Gram–Schmidt
            for _ in 0..2 {
                for b in &basis {
                    let p = b.dotc(&v);
                    v -= b * p;
                }
            }
            let nv = v.norm();
            if nv > best_norm {
                best_norm = nv;
                best = Some(v);
            }
        }
        let v = best.expect("d > 0");
        basis.push(v / C64::new(best_norm, 0.0));
    }
    CMatrix::from_fn(d, d, |r, k| basis[k][r])
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Hilbert–Schmidt inner product `Tr(a†·b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> C64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn hs_norm_sq(a: &CMatrix) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

pub fn trace(m: &CMatrix) -> C64 {
    m.trace()
}

/// Greedy multiset matching of two complex lists; returns the largest
/// distance in the matching, or infinity when lengths differ.
pub fn multiset_distance(a: &[C64], b: &[C64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for x in a {
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (k, y) in b.iter().enumerate() {
            if !used[k] {
                let d = (x - y).norm();
                if d < best_d {
                    best_d = d;
                    best = Some(k);
                }
            }
        }
        if let Some(k) = best {
            used[k] = true;
        }
        worst = worst.max(best_d);
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_sorted_reconstructs() {
        let m = CMatrix::from_fn(3, 3, |i, j| c((i * 2 + j) as f64 - 1.5, (i as f64) - (j as f64) * 0.5));
        let (u, s, v) = svd_sorted(&m);
        assert!(s.windows(2).all(|w| w[0] >= w[1]));
        let sd = CMatrix::from_diagonal(&CVector::from_iterator(3, s.iter().map(|&x| real(x))));
        assert!(max_abs_diff(&(&u * sd * v.adjoint()), &m) < 1e-13);
        assert!(unitarity_defect(&u) < 1e-13);
        assert!(unitarity_defect(&v) < 1e-13);
    }

    #[test]
    fn triangular_eigenvectors_of_schur_form() {
        let m = CMatrix::from_fn(4, 4, |i, j| c(((i * 5 + j * 3) % 7) as f64 - 3.0, ((i + j) % 3) as f64 - 1.0));
        let (q, t) = schur(&m).unwrap();
        let s = &q * triangular_eigenvectors(&t, 1e-300);
        for k in 0..4 {
            let col = s.column(k).into_owned();
            let lhs = &m * &col;
            let rhs = &col * t[(k, k)];
            assert!((lhs - rhs).norm() < 1e-11 * col.norm().max(1.0));
        }
    }

    #[test]
    fn complete_unitary_extends_partial_basis() {
        let s = 1.0 / 2f64.sqrt();
        let cols = CMatrix::from_column_slice(3, 1, &[real(s), c(0.0, s), ZERO]);
        let u = complete_unitary(&cols);
        assert!(unitarity_defect(&u) < 1e-14);
        assert!(max_abs_diff(&u.columns(0, 1).into_owned(), &cols) < 1e-15);
    }

    #[test]
    fn gauge_phase_picks_largest_entry() {
        let p = gauge_phase(&[c(0.1, 0.0), c(0.0, -2.0), c(1.0, 1.0)]);
        assert!((p - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(gauge_phase(&[ZERO, ZERO]), ONE);
    }

    #[test]
    fn multiset_distance_ignores_order() {
        let a = [c(1.0, 0.0), c(0.0, 2.0)];
        let b = [c(0.0, 2.0), c(1.0, 1e-12)];
        assert!(multiset_distance(&a, &b) < 1e-11);
        assert_eq!(multiset_distance(&a, &b[..1]), f64::INFINITY);
    }
}
