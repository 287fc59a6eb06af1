use serde::Serialize;

use crate::bloch::gell_mann::HermitianBasis;
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::{self, CMatrix, C64, ZERO};

/// Coefficients `x_jk = Tr[(g_j ⊗ g_k)·O]` of an operator on `C^d ⊗ C^d`, so
/// that `O = (1/d²) Σ_jk x_jk g_j ⊗ g_k`. Index 0 is the identity slot.
#[derive(Clone, Debug, Serialize)]
pub struct BlochExpansion {
    pub d: usize,
    #[serde(serialize_with = "json::matrix")]
    pub coeffs: CMatrix,
    pub hermitian_input: bool,
}

/// Expands a `d²×d²` operator (flat index `j·d + k`) in the tensor basis.
pub fn bloch_expand(op: &CMatrix, basis: &HermitianBasis) -> Result<BlochExpansion> {
    let d = basis.dim();
    let n = d * d;
    if op.shape() != (n, n) {
        return Err(Error::dims(format!("operator {:?} for local dimension {d}", op.shape())));
    }
    let g = basis.elements();
    let mut coeffs = CMatrix::zeros(n, n);
    for (k, h) in g.iter().enumerate() {
        // r[a,c] = Σ_{b,e} h[e,b]·O[(a,b),(c,e)], a partial trace of (I⊗h)·O
        let r = CMatrix::from_fn(d, d, |a, c| {
            let mut acc = ZERO;
            for b in 0..d {
                for e in 0..d {
                    let w = h[(e, b)];
                    if w != ZERO {
                        acc += w * op[(a * d + b, c * d + e)];
                    }
                }
            }
            acc
        });
        for (j, gj) in g.iter().enumerate() {
            coeffs[(j, k)] = gj.iter().zip(r.transpose().iter()).map(|(x, y)| x * y).sum::<C64>();
        }
    }
    Ok(BlochExpansion { d, coeffs, hermitian_input: linalg::hermiticity_defect(op) < 1e-12 })
}

impl BlochExpansion {
    /// `(1/d²) Σ_jk x_jk g_j ⊗ g_k`.
    pub fn reconstruct(&self, basis: &HermitianBasis) -> CMatrix {
        let d = self.d;
        let mut out = CMatrix::zeros(d * d, d * d);
        let g = basis.elements();
        for j in 0..d * d {
            for k in 0..d * d {
                let x = self.coeffs[(j, k)];
                if x.norm() > 0.0 {
                    out += linalg::kron(&g[j], &g[k]) * x;
                }
            }
        }
        out / linalg::real((d * d) as f64)
    }

    /// `Σ_jk |x_jk|²`.
    pub fn total_length(&self) -> f64 {
        self.coeffs.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest imaginary part of any coefficient.
    pub fn max_imaginary(&self) -> f64 {
        self.coeffs.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }
}
