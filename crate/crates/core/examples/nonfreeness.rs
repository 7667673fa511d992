//! Local and global mixed products and non-freeness certificates.

use multiarr::charpoly::Policy;
use multiarr::freeness::{balanced_bound, certify_nonfree, gmp, lmp};
use multiarr::Multiarrangement;

fn main() -> Result<(), multiarr::Error> {
    for poly in ["x^2y^2(x-y)^2(x-z)^2(y-z)^2", "x^2y(x-y)(x-z)(y-z)^2", "x^2y^2z(x+y+z)(x-y+z)", "x^2yz^3"] {
        let a = Multiarrangement::parse_default(poly, 3)?;
        let report = lmp(&a, 2, None)?;
        let bound = balanced_bound(a.total_multiplicity(), 3, 2)?;
        println!("{}: LMP(2) = {}, balanced bound {}", poly, report.value, bound);
        println!("  {}", certify_nonfree(&a, Policy::default())?);
    }
    println!("GMP(2) of (3, 3, 4) = {}", gmp(&[3, 3, 4], 2)?);
    Ok(())
}
