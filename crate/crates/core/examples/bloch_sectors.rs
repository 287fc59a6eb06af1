//! Sector lengths and contributions of a state in its given basis and in
//! its Schmidt basis.

use joint_schmidt::bloch::{concurrence_sq, schmidt_basis_contributions, sector_contributions};
use joint_schmidt::random::haar_random_state;
use joint_schmidt::state::BipartiteState;

fn show(name: &str, psi: &BipartiteState) -> joint_schmidt::error::Result<()> {
    let cur = sector_contributions(psi)?;
    let sch = schmidt_basis_contributions(psi)?;
    println!("{name}");
    println!("  lengths (0, 1A, 1B, 2)  {:.6} {:.6} {:.6} {:.6}", cur.len0, cur.len1a, cur.len1b, cur.len2);
    println!(
        "  given basis    diag {:.6} {:.6} {:.6}  offdiag {:.6} {:.6}",
        cur.diag_0, cur.diag_1, cur.diag_2, cur.offdiag_1, cur.offdiag_2
    );
    println!(
        "  schmidt basis  diag {:.6} {:.6} {:.6}  offdiag {:.6} {:.6}",
        sch.diag_0, sch.diag_1, sch.diag_2, sch.offdiag_1, sch.offdiag_2
    );
    println!("  C^2/2 {:.6}", concurrence_sq(psi) / 2.0);
    Ok(())
}

fn main() -> joint_schmidt::error::Result<()> {
    show("bell", &BipartiteState::maximally_entangled(2)?)?;
    show("product |00>", &BipartiteState::basis(2, 2, 0, 0)?)?;
    show("random 3x3", &haar_random_state(3, 3, 2)?)?;
    Ok(())
}
