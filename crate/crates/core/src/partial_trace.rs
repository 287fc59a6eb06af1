//! Explicit-index partial traces of full `dAdB×dAdB` operators.
//!
//! These deliberately avoid the grid shortcuts used elsewhere and serve as an
//! independent oracle for them.

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, ZERO};
use crate::state::Side;

/// Partial trace of `op`, whose rows and columns use the flat index
/// `j·dB + k`.
pub fn partial_trace(op: &CMatrix, dim_a: usize, dim_b: usize, side: Side) -> Result<CMatrix> {
    let n = dim_a * dim_b;
    if op.shape() != (n, n) {
        return Err(Error::dims(format!("operator {:?} for {dim_a}x{dim_b}", op.shape())));
    }
    let out = match side {
        Side::TracedOverB => CMatrix::from_fn(dim_a, dim_a, |j, l| {
            (0..dim_b).fold(ZERO, |acc, k| acc + op[(j * dim_b + k, l * dim_b + k)])
        }),
        Side::TracedOverA => CMatrix::from_fn(dim_b, dim_b, |k, m| {
            (0..dim_a).fold(ZERO, |acc, j| acc + op[(j * dim_b + k, j * dim_b + m)])
        }),
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use crate::random::HaarSampler;
    use crate::state::{outer, reduce_rank1};

    #[test]
    fn agrees_with_grid_reductions() {
        let mut rng = HaarSampler::new(12);
        for (da, db) in [(2, 2), (2, 3), (4, 3)] {
            let psi = rng.state(da, db).unwrap();
            let phi = rng.state(da, db).unwrap();
            let op = outer(&psi, &phi).unwrap();
            for side in [Side::TracedOverA, Side::TracedOverB] {
                let fast = reduce_rank1(&psi, &phi, side).unwrap().matrix;
                assert!(max_abs_diff(&fast, &partial_trace(&op, da, db, side).unwrap()) < 1e-14);
            }
        }
    }

    #[test]
    fn rejects_wrong_shape() {
        assert!(partial_trace(&CMatrix::zeros(4, 4), 2, 3, Side::TracedOverB).is_err());
    }
}
