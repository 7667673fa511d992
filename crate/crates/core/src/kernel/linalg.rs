//! Exact linear algebra over the rationals.
//!
//! Rows are cleared of denominators and kept primitive (content 1, positive
//! leading entry), then eliminated fraction-free over the integers. Pivots are
//! keyed by leading column, so the reduced echelon form and with it the kernel
//! basis do not depend on the order rows arrive in.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::Scalar;

/// Dense rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<Scalar>>) -> Self {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix row");
            data.extend(r);
        }
        Matrix { rows: n, cols, data }
    }

    pub fn from_ints(cols: usize, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| super::poly::int(v)).collect()).collect())
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).filter(|(a, _)| !a.is_zero()).map(|(a, b)| a * b).sum())
            .collect()
    }

    fn to_int_rows(&self) -> Vec<IntRow> {
        (0..self.rows)
            .filter_map(|r| {
                let entries = self.row(r).iter().enumerate().filter(|(_, v)| !v.is_zero()).map(|(c, v)| (c, v.clone()));
                IntRow::from_rational(entries)
            })
            .collect()
    }
}

/// Sparse integer row: sorted by column, no zeros, primitive with positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntRow {
    entries: Vec<(usize, BigInt)>,
}

impl IntRow {
    /// Builds a normalized row from unsorted integer entries; duplicates are
    /// summed. Returns `None` for the zero row.
    pub fn new(mut entries: Vec<(usize, BigInt)>) -> Option<Self> {
        entries.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, BigInt)> = Vec::with_capacity(entries.len());
        for (c, v) in entries {
            match merged.last_mut() {
                Some((lc, lv)) if *lc == c => *lv += v,
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !v.is_zero());
        Self::normalized(merged)
    }

    pub fn from_rational(entries: impl Iterator<Item = (usize, Scalar)>) -> Option<Self> {
        let entries: Vec<(usize, Scalar)> = entries.collect();
        let lcm = entries.iter().fold(BigInt::one(), |acc, (_, v)| acc.lcm(v.denom()));
        Self::new(entries.into_iter().map(|(c, v)| (c, (v * Scalar::from_integer(lcm.clone())).to_integer())).collect())
    }

    fn normalized(mut entries: Vec<(usize, BigInt)>) -> Option<Self> {
        if entries.is_empty() {
            return None;
        }
        let mut g = BigInt::zero();
        for (_, v) in &entries {
            g = g.gcd(v);
            if g.is_one() {
                break;
            }
        }
        let flip = entries[0].1.is_negative();
        if !g.is_one() || flip {
            let g = if flip { -g } else { g };
            for (_, v) in entries.iter_mut() {
                *v = &*v / &g;
            }
        }
        Some(IntRow { entries })
    }

    pub fn lead(&self) -> usize {
        self.entries[0].0
    }

    pub fn entries(&self) -> &[(usize, BigInt)] {
        &self.entries
    }

    fn get(&self, col: usize) -> Option<&BigInt> {
        self.entries.binary_search_by_key(&col, |e| e.0).ok().map(|i| &self.entries[i].1)
    }

    /// `a * self - b * other`, merged.
    fn combine(&self, a: &BigInt, other: &IntRow, b: &BigInt) -> Vec<(usize, BigInt)> {
        let mut out = Vec::with_capacity(self.entries.len() + other.entries.len());
        let (mut i, mut j) = (0, 0);
        let (x, y) = (&self.entries, &other.entries);
        while i < x.len() || j < y.len() {
            let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
            let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
            if take_x {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            } else if take_y {
                out.push((y[j].0, -(b * &y[j].1)));
                j += 1;
            } else {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
        out
    }

    /// Eliminates column `col` of `self` using `pivot`, whose entry there is
    /// nonzero.
    fn eliminate(&self, col: usize, pivot: &IntRow) -> Option<IntRow> {
        let Some(a) = self.get(col) else { return Some(self.clone()) };
        let p = pivot.get(col).expect("pivot entry");
        let g = a.gcd(p);
        let (ps, as_) = (p / &g, a / &g);
        Self::normalized(self.combine(&ps, pivot, &as_))
    }
}

/// Incremental row echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    pivots: BTreeMap<usize, IntRow>,
}

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon { cols, pivots: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `row` against the current pivots; inserts it if it is
    /// independent. Returns whether the rank grew.
    pub fn insert(&mut self, row: IntRow) -> bool {
        let mut row = row;
        loop {
            let lead = row.lead();
            debug_assert!(lead < self.cols);
            match self.pivots.get(&lead) {
                None => {
                    self.pivots.insert(lead, row);
                    return true;
                }
                Some(p) => match row.eliminate(lead, p) {
                    Some(r) => row = r,
                    None => return false,
                },
            }
        }
    }

    /// Fully reduces the pivot rows (reduced echelon form, up to the integer
    /// scaling of each row).
    pub fn reduce(&mut self) {
        let keys: Vec<usize> = self.pivots.keys().rev().copied().collect();
        for (idx, &k) in keys.iter().enumerate() {
            let mut row = self.pivots.remove(&k).unwrap();
            // pivots to the right of k are already fully reduced
            for &k2 in keys[..idx].iter().rev() {
                if row.get(k2).is_some() {
                    row = row.eliminate(k2, &self.pivots[&k2]).expect("independent pivot rows");
                }
            }
            self.pivots.insert(k, row);
        }
    }

    /// Kernel basis from the reduced form: one vector per free column, with a
    /// 1 in that column and 0 in every other free column.
    pub fn kernel_basis(&mut self) -> Vec<Vec<Scalar>> {
        self.reduce();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !self.pivots.contains_key(c)) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = Scalar::one();
            for (&pc, row) in &self.pivots {
                if let Some(val) = row.get(free) {
                    let lead = row.get(pc).unwrap();
                    v[pc] = -Scalar::new(val.clone(), lead.clone());
                }
            }
            out.push(v);
        }
        out
    }
}

/// Rank of an exact matrix.
pub fn rank(m: &Matrix) -> usize {
    let mut e = Echelon::new(m.ncols());
    for r in m.to_int_rows() {
        e.insert(r);
    }
    e.rank()
}

/// `cols - rank(m)`.
pub fn kernel_dimension(m: &Matrix) -> usize {
    m.ncols() - rank(m)
}

/// Exact kernel basis, in the canonical form given by the reduced echelon
/// form with pivots chosen left to right.
pub fn kernel_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
    let mut e = Echelon::new(m.ncols());
    for r in m.to_int_rows() {
        e.insert(r);
    }
    e.kernel_basis()
}

/// Rank of a system given as sparse integer rows. Shorter rows are inserted
/// first; the result does not depend on the insertion order.
pub fn rank_of_rows(cols: usize, mut rows: Vec<IntRow>) -> usize {
    rows.sort_by_key(|r| (r.entries.len(), r.lead()));
    let mut e = Echelon::new(cols);
    for r in rows {
        e.insert(r);
    }
    e.rank()
}

pub fn kernel_of_rows(cols: usize, mut rows: Vec<IntRow>) -> Vec<Vec<Scalar>> {
    rows.sort_by_key(|r| (r.entries.len(), r.lead()));
    let mut e = Echelon::new(cols);
    for r in rows {
        e.insert(r);
    }
    e.kernel_basis()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::poly::int;

    #[test]
    fn identity_has_trivial_kernel() {
        let m = Matrix::from_ints(2, &[vec![1, 0], vec![0, 1]]);
        assert_eq!(kernel_dimension(&m), 0);
    }

    #[test]
    fn zero_row_kernel_is_everything() {
        let m = Matrix::from_ints(3, &[vec![0, 0, 0]]);
        assert_eq!(kernel_dimension(&m), 3);
        assert_eq!(kernel_dimension(&Matrix::zeros(0, 4)), 4);
    }

    #[test]
    fn dependent_rows() {
        // [[1,2],[2,4]] reduces to [[1,2],[0,0]] by hand: one free column.
        let m = Matrix::from_ints(2, &[vec![1, 2], vec![2, 4]]);
        assert_eq!(kernel_dimension(&m), 1);
        let k = kernel_basis(&m);
        assert_eq!(k, vec![vec![int(-2), int(1)]]);
    }

    #[test]
    fn kernel_basis_vectors_annihilate() {
        let m = Matrix::from_ints(4, &[vec![2, -3, 0, 5], vec![4, -6, 1, 0], vec![6, -9, 1, 5]]);
        let k = kernel_basis(&m);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn rational_entries() {
        let half = Scalar::new(1.into(), 2.into());
        let m = Matrix::from_rows(2, vec![vec![half.clone(), int(1)], vec![int(1), int(2)]]);
        assert_eq!(kernel_dimension(&m), 1);
    }
}
