//! Certifying freeness from an explicit basis.

use multiarr::arrangement::default_vars;
use multiarr::charpoly::Policy;
use multiarr::derivations::{DerivationEntry, PDerivation};
use multiarr::freeness::check_factorization;
use multiarr::Multiarrangement;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vars = default_vars(3);
    let a = Multiarrangement::parse("x^2y^3z", &vars)?;
    let json = r#"[
        [{"I": ["x"], "coeffs": "x^2"}],
        [{"I": ["y"], "coeffs": "y^3"}],
        [{"I": ["z"], "coeffs": "z"}]
    ]"#;
    let entries: Vec<Vec<DerivationEntry>> = serde_json::from_str(json)?;
    let basis = entries.iter().map(|e| PDerivation::from_entries(e, &vars)).collect::<Result<Vec<_>, _>>()?;
    println!("{}", check_factorization(&a, &basis, Policy::default())?);

    // x * d[x] is not in D(A, m) once m(x) = 2
    let bad: Vec<Vec<DerivationEntry>> = serde_json::from_str(&json.replace("x^2", "x"))?;
    let bad = bad.iter().map(|e| PDerivation::from_entries(e, &vars)).collect::<Result<Vec<_>, _>>()?;
    println!("{}", check_factorization(&a, &bad, Policy::default())?);
    Ok(())
}
