//! The Schmidt basis maximizes the diagonal 2-sector: random local bases
//! never beat it and the optimizer climbs back to it.

use joint_schmidt::bloch::{extremal_scan, optimize_diag_2sector, write_scan_csv};
use joint_schmidt::random::haar_random_state;

fn main() -> joint_schmidt::error::Result<()> {
    let psi = haar_random_state(3, 3, 21)?;
    let scan = extremal_scan(&psi, 200, 1)?;
    println!("schmidt diag_2  {:.10}", scan.reference.diag_2);
    println!("best random     {:.10}", scan.max_diag_2);
    println!("violations      {}", scan.violations);

    let opt = optimize_diag_2sector(&psi, 3, 200, 1)?;
    println!("optimizer       {:.12}  gap {:.2e}  sweeps {}", opt.best, opt.gap, opt.sweeps);

    let mut out = Vec::new();
    write_scan_csv(&scan.rows[..3], &mut out)?;
    print!("{}", String::from_utf8_lossy(&out));
    Ok(())
}
