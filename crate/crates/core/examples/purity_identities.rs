//! Purity identities for rank-one reductions on random states.

use joint_schmidt::purity;
use joint_schmidt::random::HaarSampler;

fn main() -> joint_schmidt::error::Result<()> {
    let mut rng = HaarSampler::new(17);
    let t = (0..4).map(|_| rng.state(3, 3)).collect::<Result<Vec<_>, _>>()?;
    let reports = [
        purity::check_purity_equal(&t[0]),
        purity::reduction_square_identity(&t[0], &t[1])?,
        purity::cross_purity_identity(&t[0], &t[1])?,
        purity::four_state_identity(&t[0], &t[1], &t[2], &t[3])?,
    ];
    for r in &reports {
        println!("{:18} gap {:.2e}  tol {:.0e}  holds {}", r.name, r.abs_gap, r.tolerance, r.holds);
    }
    Ok(())
}
