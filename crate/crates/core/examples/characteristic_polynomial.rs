//! psi(t, q), the characteristic polynomial and the Poincare polynomial.

use multiarr::charpoly::{chi_pi, psi, Policy};
use multiarr::kernel::UniPoly;
use multiarr::Multiarrangement;

fn main() -> Result<(), multiarr::Error> {
    let ziegler = Multiarrangement::parse_default("x^3y^3(x-y)(x+y)", 2)?;
    println!("psi = {}", psi(&ziegler, Policy::default())?.poly);

    let a = Multiarrangement::parse_default("x^2y^2z(x+y+z)(x-y+z)", 3)?;
    let deleted = Multiarrangement::parse_default("x^2yz(x+y+z)(x-y+z)", 3)?;
    let cp = chi_pi(&a, Policy::default())?;
    let cd = chi_pi(&deleted, Policy::default())?;
    println!("chi(A, m)   = {}", cp.chi);
    println!("pi(A, m)    = {}", cp.pi);
    println!("chi(A', m') = {}", cd.chi);

    // the restriction has exponents (2, 3)
    let gap = cd.chi.sub(&UniPoly::from_roots(&[2, 3])).sub(&cp.chi);
    println!("chi(A', m') - (t - 2)(t - 3) - chi(A, m) = {}", gap);
    Ok(())
}
