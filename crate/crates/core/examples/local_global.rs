//! The local-global formula and the psi identity over every flat.

use multiarr::charpoly::{local_data, local_global_from, psi_flat_identity_from, Policy};
use multiarr::Multiarrangement;

fn main() -> Result<(), multiarr::Error> {
    let a = Multiarrangement::parse_default("x^2y^2z(x+y+z)(x-y+z)", 3)?;
    let data = local_data(&a, Policy::default())?;
    let report = local_global_from(&data);
    for e in &report.entries {
        println!("X = {:?}, p = {}: C_p(X) = {}, sum over Y = {}", e.flat, e.p, e.local, e.sum);
    }
    println!("local-global: {}", if report.all_pass { "pass" } else { "FAIL" });
    for x in 0..data.lattice.len() {
        let f = psi_flat_identity_from(&data, x);
        println!("{:?}: {} = {}  {}", f.flat, f.lhs, f.rhs, if f.pass { "ok" } else { "FAIL" });
    }
    Ok(())
}
