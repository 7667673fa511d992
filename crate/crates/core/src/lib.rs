pub mod arrangement;
pub mod charpoly;
pub mod cli;
pub mod derivations;
pub mod error;
pub mod freeness;
pub mod kernel;
pub mod lattice;

pub use arrangement::{LinearForm, Multiarrangement};
pub use error::Error;
