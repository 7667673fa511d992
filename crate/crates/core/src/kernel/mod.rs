//! Exact scalars, polynomials and linear algebra shared by every other module.

pub mod linalg;
pub mod modular;
pub mod poly;
pub mod residue;

pub use linalg::{kernel_basis, kernel_dimension, rank, Echelon, IntRow, Matrix};
pub use poly::{int, monomial_count, monomials, BiPoly, MultiPoly, Scalar, UniPoly};
pub use residue::{residue_map, residue_matrix, ResidueMap};

use crate::error::Error;

/// `k`-th elementary symmetric polynomial of `values`; `e_0 = 1`.
pub fn elem_sym(k: usize, values: &[i64]) -> Result<i64, Error> {
    if k > values.len() {
        return Err(Error::OutOfRange(format!("k = {} exceeds tuple length {}", k, values.len())));
    }
    // e[j] after processing a prefix of values
    let mut e = vec![0i64; k + 1];
    e[0] = 1;
    for &v in values {
        for j in (1..=k).rev() {
            e[j] += e[j - 1] * v;
        }
    }
    Ok(e[k])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_symmetric_values() {
        assert_eq!(elem_sym(2, &[3, 5]).unwrap(), 15);
        assert_eq!(elem_sym(0, &[7, 1, 2]).unwrap(), 1);
        assert_eq!(elem_sym(0, &[]).unwrap(), 1);
        assert_eq!(elem_sym(2, &[3, 3, 4]).unwrap(), 33);
        assert!(elem_sym(3, &[1, 2]).is_err());
    }
}
