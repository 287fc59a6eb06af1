//! Dispatch of the joint decomposition: which reduction is usable.

use joint_schmidt::decomp::joint_decompose;
use joint_schmidt::state::{reduce_rank1, BipartiteState, Side};

fn main() -> joint_schmidt::error::Result<()> {
    let pairs = [
        ("|00>,|11>", BipartiteState::basis(2, 2, 0, 0)?, BipartiteState::basis(2, 2, 1, 1)?),
        ("|00>,|01>", BipartiteState::basis(2, 2, 0, 0)?, BipartiteState::basis(2, 2, 0, 1)?),
        ("|00>,|10>", BipartiteState::basis(2, 2, 0, 0)?, BipartiteState::basis(2, 2, 1, 0)?),
        ("bell,bell", BipartiteState::maximally_entangled(2)?, BipartiteState::maximally_entangled(2)?),
    ];
    for (name, psi, phi) in &pairs {
        let zero_b = reduce_rank1(psi, phi, Side::TracedOverB)?.is_zero();
        let zero_a = reduce_rank1(psi, phi, Side::TracedOverA)?.is_zero();
        let dec = joint_decompose(psi, phi)?;
        println!("{name:10} Tr_B zero {zero_b:5}  Tr_A zero {zero_a:5}  -> {:?}", dec.kind());
    }
    Ok(())
}
