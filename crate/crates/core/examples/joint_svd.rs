//! Joint decomposition of two states through the SVD of Tr_B |psi><phi|.

use joint_schmidt::decomp::joint_svd;
use joint_schmidt::random::HaarSampler;
use joint_schmidt::state::{overlap, Side};

fn main() -> joint_schmidt::error::Result<()> {
    let mut rng = HaarSampler::new(3);
    let (psi, phi) = (rng.state(3, 3)?, rng.state(3, 3)?);
    let dec = joint_svd(&psi, &phi, Side::TracedOverB)?;

    println!("q   {:?}", dec.q);
    println!("mu  {:?}", dec.mu);
    println!("nu  {:?}", dec.nu);
    println!("sum mu {:.15}  sum nu {:.15}", dec.mu.iter().sum::<f64>(), dec.nu.iter().sum::<f64>());
    println!("duality residual {:.2e}", dec.duality_residual());
    println!("overlap          {:.12}", overlap(&psi, &phi)?);
    println!("sum q_k^2 ...    {:.12}", dec.overlap_sum());

    let (p, f) = dec.reconstruct();
    let err = |a: &joint_schmidt::state::BipartiteState, b: &joint_schmidt::state::BipartiteState| {
        joint_schmidt::linalg::max_abs_diff(a.amplitudes(), b.amplitudes())
    };
    println!("reconstruction   {:.2e} {:.2e}", err(&p, &psi), err(&f, &phi));
    Ok(())
}
