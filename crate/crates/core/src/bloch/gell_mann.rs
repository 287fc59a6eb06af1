use crate::error::{Error, Result};
use crate::linalg::{real, CMatrix, C64};

/// Identity plus `d² − 1` traceless Hermitian matrices with
/// `Tr(g_j g_k) = d·δ_jk`.
///
/// Order after the identity: symmetric pairs `|j⟩⟨k| + |k⟩⟨j|` for `j < k`
/// lexicographically, then antisymmetric pairs `−i|j⟩⟨k| + i|k⟩⟨j|`, then the
/// `d − 1` diagonal elements. For `d = 2` this is `I, σ_x, σ_y, σ_z`.
#[derive(Clone, Debug)]
pub struct HermitianBasis {
    d: usize,
    elements: Vec<CMatrix>,
    diagonal_family: Vec<bool>,
}

pub fn gell_mann_basis(d: usize) -> Result<HermitianBasis> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let scale = (d as f64 / 2.0).sqrt();
    let mut elements = vec![CMatrix::identity(d, d)];
    let pairs: Vec<(usize, usize)> = (0..d).flat_map(|j| ((j + 1)..d).map(move |k| (j, k))).collect();

    for &(j, k) in &pairs {
        let mut g = CMatrix::zeros(d, d);
        g[(j, k)] = real(scale);
        g[(k, j)] = real(scale);
        elements.push(g);
    }
    for &(j, k) in &pairs {
        let mut g = CMatrix::zeros(d, d);
        g[(j, k)] = C64::new(0.0, -scale);
        g[(k, j)] = C64::new(0.0, scale);
        elements.push(g);
    }
    for l in 1..d {
        let norm = scale * (2.0 / (l * (l + 1)) as f64).sqrt();
        let mut g = CMatrix::zeros(d, d);
        for m in 0..l {
            g[(m, m)] = real(norm);
        }
        g[(l, l)] = real(-(l as f64) * norm);
        elements.push(g);
    }

    let mut diagonal_family = vec![false; d * d];
    diagonal_family[0] = true;
    for flag in &mut diagonal_family[(1 + 2 * pairs.len())..] {
        *flag = true;
    }
    Ok(HermitianBasis { d, elements, diagonal_family })
}

impl HermitianBasis {
    pub fn dim(&self) -> usize {
        self.d
    }

    /// `g_0 = I` followed by the traceless elements.
    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Whether `g_j` is diagonal (the identity counts).
    pub fn is_diagonal(&self, j: usize) -> bool {
        self.diagonal_family[j]
    }

    /// `Tr(g_j g_k)` for all `j, k`, including the identity slot.
    pub fn gram(&self) -> CMatrix {
        let n = self.len();
        CMatrix::from_fn(n, n, |j, k| (&self.elements[j] * &self.elements[k]).trace())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermiticity_defect, max_abs_diff};

    #[test]
    fn qubit_basis_is_pauli() {
        let b = gell_mann_basis(2).unwrap();
        let i = C64::new(0.0, 1.0);
        let x = CMatrix::from_row_slice(2, 2, &[real(0.0), real(1.0), real(1.0), real(0.0)]);
        let y = CMatrix::from_row_slice(2, 2, &[real(0.0), -i, i, real(0.0)]);
        let z = CMatrix::from_row_slice(2, 2, &[real(1.0), real(0.0), real(0.0), real(-1.0)]);
        assert_eq!(b.elements()[1], x);
        assert_eq!(b.elements()[2], y);
        assert!(max_abs_diff(&b.elements()[3], &z) < 1e-15);
        assert!(b.is_diagonal(3) && !b.is_diagonal(1));
    }

    #[test]
    fn gram_and_casimir() {
        for d in 2..=6 {
            let b = gell_mann_basis(d).unwrap();
            assert_eq!(b.len(), d * d);
            let n = d as f64;
            assert!(max_abs_diff(&b.gram(), &(CMatrix::identity(d * d, d * d) * real(n))) < 1e-12);
            let mut casimir = CMatrix::zeros(d, d);
            for g in &b.elements()[1..] {
                assert!(hermiticity_defect(g) < 1e-15);
                assert!(g.trace().norm() < 1e-12);
                casimir += g * g;
            }
            assert!(max_abs_diff(&casimir, &(CMatrix::identity(d, d) * real(n * n - 1.0))) < 1e-12);
            assert_eq!((0..d * d).filter(|&j| b.is_diagonal(j)).count(), d);
        }
    }

    #[test]
    fn rejects_small_dimension() {
        assert!(gell_mann_basis(1).is_err());
    }
}
