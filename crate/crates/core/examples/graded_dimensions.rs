//! Graded dimensions of D^p and the stabilized Hilbert numerators.

use multiarr::charpoly::{hilbert_numerator, Policy};
use multiarr::derivations::graded_dimension;
use multiarr::Multiarrangement;

fn main() -> Result<(), multiarr::Error> {
    let a = Multiarrangement::parse_default("x^2y^2z(x+y+z)(x-y+z)", 3)?;
    for p in 0..=a.dim() {
        let dims = (0..=10).map(|d| graded_dimension(&a, p, d)).collect::<Result<Vec<_>, _>>()?;
        println!("dim D^{}_d, d = 0..10: {:?}", p, dims);
    }
    for p in 1..a.dim() {
        let s = hilbert_numerator(&a, p, Policy::default())?;
        println!(
            "H(D^{}, q) = ({}) / (1 - q)^{}   [window {}, degree {}]",
            p,
            s.numerator_poly().display_var("q"),
            s.ell,
            s.window,
            s.horizon
        );
    }
    Ok(())
}
