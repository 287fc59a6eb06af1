//! Joint decomposition through diagonalization of the non-Hermitian
//! reduction, including a refused case.

use joint_schmidt::decomp::{joint_diag, reduction_spectra_gap};
use joint_schmidt::error::Error;
use joint_schmidt::random::HaarSampler;
use joint_schmidt::state::{BipartiteState, Side};

fn main() -> joint_schmidt::error::Result<()> {
    let mut rng = HaarSampler::new(5);
    let (psi, phi) = (rng.state(3, 3)?, rng.state(3, 3)?);
    let dec = joint_diag(&psi, &phi, Side::TracedOverB)?;
    println!("eigenvalues {:?}", dec.eigenvalues());
    println!("xi          {:?}", dec.xi);
    println!("eta         {:?}", dec.eta);
    println!("condition   {:.3e}  min gap {:.3e}", dec.condition, dec.min_gap);
    println!(
        "residuals   s {:.2e}  t {:.2e}  weights {:.2e}",
        dec.s_duality_residual(),
        dec.t_duality_residual(),
        dec.weight_residual()
    );
    println!("Tr_A vs Tr_B spectra {:.2e}", reduction_spectra_gap(&psi, &phi)?);

    // |00> against |10>: the reduction is nilpotent.
    let a = BipartiteState::basis(2, 2, 0, 0)?;
    let b = BipartiteState::basis(2, 2, 1, 0)?;
    match joint_diag(&a, &b, Side::TracedOverB) {
        Err(Error::NotDiagonalizable(why)) => println!("|00>,|10> refused: {why}"),
        other => println!("unexpected: {other:?}"),
    }
    Ok(())
}
