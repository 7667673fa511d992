//! Flats of the intersection lattice and their Moebius values.

use multiarr::lattice::build_lattice;
use multiarr::Multiarrangement;

fn main() -> Result<(), multiarr::Error> {
    let a = Multiarrangement::parse_default("xy(x-y)(x-z)(y-z)", 3)?;
    let l = build_lattice(&a);
    let bottom = l.rank_indices(0)[0];
    for k in 0..=a.dim() {
        println!("rank {}: {} flats", k, l.rank_count(k));
        for x in l.rank_indices(k) {
            println!("  {:?}  mu = {}", l.flat(x).hyperplanes, l.mobius(bottom, x)?);
        }
    }
    Ok(())
}
