//! Majorization of diagonals by Schmidt weights and the bound chain on the
//! off-diagonal 2-sector.

use joint_schmidt::majorization::{
    inequality_chain, majorization_witness, offdiag_2sector_closed_form, offdiag_2sector_exact,
};
use joint_schmidt::random::HaarSampler;
use joint_schmidt::state::{apply_local, BipartiteState, Side};

fn main() -> joint_schmidt::error::Result<()> {
    let mut rng = HaarSampler::new(4);
    let psi = rng.state(3, 3)?;
    let (ua, ub) = rng.local_pair(3, 3)?;
    let v = apply_local(&psi, &ua, &ub)?;

    let w = majorization_witness(&v, Side::TracedOverB)?;
    println!("lambda^2  {:?}", w.lam);
    println!("diag rho  {:?}", w.h);
    println!("majorizes {}  stochastic defect {:.2e}", w.majorizes, w.stochastic_defect);

    let chain = inequality_chain(&v)?;
    println!(
        "chain  {:.6} >= {:.6} >= {:.6}  holds {}",
        chain.closed_form, chain.middle, chain.half_concurrence_sq, chain.holds
    );
    println!(
        "offdiag_2: bloch {:.6}  exact form {:.6}  weight-only form {:.6}",
        chain.bloch_offdiag_2,
        offdiag_2sector_exact(&v),
        offdiag_2sector_closed_form(&v)
    );

    // A state where the weight-only form misses coherent terms.
    let half = joint_schmidt::linalg::real(0.5);
    let s = BipartiteState::from_amplitudes(2, 2, &[half, half, half, -half], false)?;
    let chain = inequality_chain(&s)?;
    println!("signed state: bloch {:.3}  weight-only {:.3}", chain.bloch_offdiag_2, offdiag_2sector_closed_form(&s));
    Ok(())
}
