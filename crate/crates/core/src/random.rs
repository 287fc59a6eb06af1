//! Seeded Haar sampling.
//!
//! Generator contract: a `ChaCha20Rng` created with `seed_from_u64(seed)`
//! feeds `rand_distr::StandardNormal`; each complex Gaussian entry is
//! `(x + i·y)/√2` with `x` drawn before `y`, grids are filled row by row.
//! States normalize such a vector. Unitaries are the `Q` factor of a
//! Householder QR of a Gaussian grid with the phases of `diag(R)` moved into
//! `Q`, which makes the distribution Haar.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::state::BipartiteState;

/// Stream of Haar-distributed states and unitaries from one seed.
#[derive(Clone, Debug)]
pub struct HaarSampler {
    rng: ChaCha20Rng,
}

impl HaarSampler {
    pub fn new(seed: u64) -> Self {
        Self { rng: ChaCha20Rng::seed_from_u64(seed) }
    }

    fn gaussian(&mut self) -> C64 {
        let x: f64 = self.rng.sample(StandardNormal);
        let y: f64 = self.rng.sample(StandardNormal);
        C64::new(x, y) * std::f64::consts::FRAC_1_SQRT_2
    }

    pub fn gaussian_grid(&mut self, rows: usize, cols: usize) -> CMatrix {
        let mut m = CMatrix::zeros(rows, cols);
        for r in 0..rows {
            for c in 0..cols {
                m[(r, c)] = self.gaussian();
            }
        }
        m
    }

    pub fn state(&mut self, dim_a: usize, dim_b: usize) -> Result<BipartiteState> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::InvalidDimension(0));
        }
        BipartiteState::from_grid(self.gaussian_grid(dim_a, dim_b), true)
    }

    pub fn unitary(&mut self, d: usize) -> Result<CMatrix> {
        if d == 0 {
            return Err(Error::InvalidDimension(0));
        }
        let qr = self.gaussian_grid(d, d).qr();
        let (mut q, r) = qr.unpack();
        for j in 0..d {
            let rjj = r[(j, j)];
            let phase = if rjj.norm() > 0.0 { rjj / rjj.norm() } else { C64::new(1.0, 0.0) };
            for i in 0..d {
                q[(i, j)] *= phase;
            }
        }
        Ok(q)
    }

    /// A pair `(U_A, U_B)` of independent Haar unitaries.
    pub fn local_pair(&mut self, dim_a: usize, dim_b: usize) -> Result<(CMatrix, CMatrix)> {
        Ok((self.unitary(dim_a)?, self.unitary(dim_b)?))
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }
}

pub fn haar_random_state(dim_a: usize, dim_b: usize, seed: u64) -> Result<BipartiteState> {
    HaarSampler::new(seed).state(dim_a, dim_b)
}

pub fn haar_random_unitary(d: usize, seed: u64) -> Result<CMatrix> {
    HaarSampler::new(seed).unitary(d)
}
