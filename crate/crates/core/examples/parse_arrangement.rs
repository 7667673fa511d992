//! Building multiarrangements from defining polynomials and from JSON.

use multiarr::arrangement::{default_vars, ArrangementInput};
use multiarr::Multiarrangement;

fn main() -> Result<(), multiarr::Error> {
    let vars = default_vars(3);
    let a = Multiarrangement::parse("x^2y^2z(x+y+z)(x-y+z)", &vars)?;
    println!("{} hyperplanes, |m| = {}", a.len(), a.total_multiplicity());
    for (form, m) in a.hyperplanes() {
        println!("  {}  m = {}", form.display_with(&vars), m);
    }

    // proportional forms merge and their multiplicities add
    let b = Multiarrangement::parse("x(2x)(y)", &default_vars(2))?;
    println!("x(2x)(y) -> multiplicities {:?}", b.multiplicities());

    let json = r#"{"hyperplanes": [{"coeffs": [1, 0], "mult": 3}, {"coeffs": [0, 1], "mult": 3}, {"coeffs": [1, -1]}, {"coeffs": [1, 1]}]}"#;
    let c = ArrangementInput::from_json(json)?.build()?;
    println!("from JSON: {}", c.display_with(&default_vars(2)));

    match Multiarrangement::parse("x^2y + 1", &default_vars(2)) {
        Err(e) => println!("rejected: {}", e),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
