//! Schmidt decomposition of a random 3x4 state and of a fixed qubit pair.

use joint_schmidt::decomp::schmidt;
use joint_schmidt::linalg::{c, max_abs_diff};
use joint_schmidt::random::haar_random_state;
use joint_schmidt::state::{BipartiteState, Side};

fn main() -> joint_schmidt::error::Result<()> {
    let psi = haar_random_state(3, 4, 11)?;
    let s = schmidt(&psi);
    println!("lambdas      {:?}", s.lambdas);
    println!("rank         {}", s.rank);
    println!("sum lambda^2 {:.15}", s.lambdas.iter().map(|l| l * l).sum::<f64>());
    println!("recon error  {:.2e}", max_abs_diff(&s.reconstruct_grid(), psi.amplitudes()));
    println!("purity A/B   {:.15} {:.15}", psi.purity(Side::TracedOverB), psi.purity(Side::TracedOverA));

    // sqrt(1/3)|00> + sqrt(2/3)|11>
    let amps = [c((1.0f64 / 3.0).sqrt(), 0.0), c(0.0, 0.0), c(0.0, 0.0), c((2.0f64 / 3.0).sqrt(), 0.0)];
    let phi = BipartiteState::from_amplitudes(2, 2, &amps, false)?;
    let s = schmidt(&phi);
    println!("fixed state  lambdas {:?}", s.lambdas);
    Ok(())
}
