//! Residues of homogeneous polynomials modulo a power of a linear form.
//!
//! For `alpha = sum a_i x_i` pick a coordinate `k` with `a_k != 0` and change
//! coordinates to `u = alpha`, `w_i = x_i (i != k)`. A degree-`d` polynomial
//! `f` is divisible by `alpha^m` iff every term of `f(u, w)` has `u`-degree at
//! least `m`, so the residue is the truncation to `u`-degree `< m`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::linalg::Matrix;
use super::poly::{binomial, monomials, Scalar};
use crate::error::Error;

/// Integer form of the residue map, scaled by `a_k^d` so no denominators
/// appear. Columns follow [`monomials`]`(ell, d)`.
#[derive(Clone, Debug)]
pub struct ResidueMap {
    /// Coordinate replaced by `alpha`.
    pub pivot: usize,
    /// The common factor `a_k^d` multiplying every entry.
    pub scale: BigInt,
    pub ncols: usize,
    /// Sparse rows, entries sorted by column.
    pub rows: Vec<Vec<(usize, BigInt)>>,
}

/// Coordinate used for the change of basis: the first entry of smallest
/// nonzero absolute value, so the completion is unimodular whenever alpha has
/// a unit entry.
pub fn pivot_coordinate(alpha: &[i64]) -> Option<usize> {
    alpha.iter().enumerate().filter(|(_, &a)| a != 0).min_by_key(|(i, &a)| (a.unsigned_abs(), *i)).map(|(i, _)| i)
}

pub fn residue_map(alpha: &[i64], m: u32, d: u32) -> Result<ResidueMap, Error> {
    let ell = alpha.len();
    let k = pivot_coordinate(alpha).ok_or(Error::ZeroForm)?;
    if m == 0 {
        return Err(Error::Invalid("multiplicity must be positive".into()));
    }
    let a_k = BigInt::from(alpha[k]);
    let others: Vec<usize> = (0..ell).filter(|&i| i != k).collect();
    let nw = others.len();

    // L = -sum_{i != k} a_i w_i and its powers up to d
    let mut lpow: Vec<HashMap<Vec<u32>, BigInt>> = Vec::with_capacity(d as usize + 1);
    lpow.push(HashMap::from([(vec![0; nw], BigInt::one())]));
    for n in 1..=d as usize {
        let mut next: HashMap<Vec<u32>, BigInt> = HashMap::new();
        for (e, c) in &lpow[n - 1] {
            for (wi, &i) in others.iter().enumerate() {
                if alpha[i] == 0 {
                    continue;
                }
                let mut e2 = e.clone();
                e2[wi] += 1;
                *next.entry(e2).or_insert_with(BigInt::zero) -= c * BigInt::from(alpha[i]);
            }
        }
        next.retain(|_, v| !v.is_zero());
        lpow.push(next);
    }

    let mut row_index: HashMap<(u32, Vec<u32>), usize> = HashMap::new();
    for j in 0..m.min(d + 1) {
        for beta in monomials(nw, d - j) {
            let n = row_index.len();
            row_index.insert((j, beta), n);
        }
    }
    let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); row_index.len()];

    let cols = monomials(ell, d);
    let a_pows: Vec<BigInt> = (0..=d).map(|i| num_traits::pow(a_k.clone(), i as usize)).collect();
    for (col, gamma) in cols.iter().enumerate() {
        let e = gamma[k];
        let rest: Vec<u32> = others.iter().map(|&i| gamma[i]).collect();
        let factor = &a_pows[(d - e) as usize];
        // accumulate per row for this column
        let mut acc: HashMap<usize, BigInt> = HashMap::new();
        for j in 0..m.min(e + 1) {
            let b = binomial(i64::from(e), i64::from(j)) * factor;
            for (delta, c) in &lpow[(e - j) as usize] {
                let beta: Vec<u32> = delta.iter().zip(&rest).map(|(a, b)| a + b).collect();
                let r = row_index[&(j, beta)];
                *acc.entry(r).or_insert_with(BigInt::zero) += &b * c;
            }
        }
        for (r, v) in acc {
            if !v.is_zero() {
                rows[r].push((col, v));
            }
        }
    }
    Ok(ResidueMap { pivot: k, scale: a_pows[d as usize].clone(), ncols: cols.len(), rows })
}

/// Matrix of `f -> (f mod alpha^m)` on homogeneous polynomials of degree `d`
/// in `ell` variables, expressed in the coordinates `(alpha, x_i (i != k))`.
/// Its kernel is exactly the set of `f` divisible by `alpha^m`.
pub fn residue_matrix(alpha: &[i64], m: u32, d: u32, ell: usize) -> Result<Matrix, Error> {
    if alpha.len() != ell {
        return Err(Error::Invalid(format!("linear form has {} coefficients, expected {}", alpha.len(), ell)));
    }
    let map = residue_map(alpha, m, d)?;
    let mut out = Matrix::zeros(map.rows.len(), map.ncols);
    for (r, row) in map.rows.iter().enumerate() {
        for (c, v) in row {
            out.set(r, *c, Scalar::new(v.clone(), map.scale.clone()));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::linalg::kernel_dimension;

    #[test]
    fn x_divides_only_multiples_of_x() {
        let m = residue_matrix(&[1, 0], 1, 1, 2).unwrap();
        assert_eq!(kernel_dimension(&m), 1);
    }

    #[test]
    fn no_linear_multiple_of_x_squared() {
        let m = residue_matrix(&[1, 0], 2, 1, 2).unwrap();
        assert_eq!(kernel_dimension(&m), 0);
    }

    #[test]
    fn quadrics_divisible_by_x_minus_y() {
        // x(x - y) and y(x - y)
        let m = residue_matrix(&[1, -1], 1, 2, 2).unwrap();
        assert_eq!(kernel_dimension(&m), 2);
    }

    #[test]
    fn zero_form_rejected() {
        assert!(matches!(residue_matrix(&[0, 0], 1, 1, 2), Err(Error::ZeroForm)));
    }

    #[test]
    fn non_unit_pivot_is_scaled_consistently() {
        // (2x + 3y)^2 divides exactly the multiples of it in degree 3: two of them
        let m = residue_matrix(&[2, 3], 2, 3, 2).unwrap();
        assert_eq!(kernel_dimension(&m), 2);
    }
}
