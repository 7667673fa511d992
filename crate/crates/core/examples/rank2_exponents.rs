//! Exponents of rank-two multiarrangements with a basis checked by Saito's criterion.

use multiarr::arrangement::default_vars;
use multiarr::derivations::rank2_exponents;
use multiarr::Multiarrangement;

fn main() -> Result<(), multiarr::Error> {
    let vars = default_vars(2);
    // same lattice, different exponents
    for poly in ["x^3y^3(x-y)(x+y)", "x^3y^3(x-y)(x-2y)"] {
        let a = Multiarrangement::parse(poly, &vars)?;
        let e = rank2_exponents(&a)?;
        println!("{}: exponents ({}, {})", poly, e.d1, e.d2);
        for theta in &e.basis {
            println!("  {}", theta.display_with(&vars));
        }
        println!("  det = {} * Q", e.ziegler_scalar(&a)?);
    }
    Ok(())
}
