//! The linear system cutting out the degree-`d` piece of `D^p(A, m)`.
//!
//! Unknowns are the coefficients of `f_I` for every `p`-subset `I` (blocks in
//! lexicographic order of `I`, monomials in [`monomials`] order within a
//! block). For each hyperplane `H` with form `alpha` and each `(p-1)`-subset
//! `J`, the polynomial
//!
//! ```text
//! theta(alpha, x_J) = sum_{i not in J} sign(i, J) * a_i * f_{J+i}
//! ```
//!
//! must be divisible by `alpha^{m(H)}`. `sign(i, J)` is the parity of the
//! number of elements of `J` smaller than `i`: moving `x_i` from the front to
//! its sorted place in `J+i` takes that many transpositions. For example with
//! `J = {0, 2}` and `i = 1` the argument list `(x_1, x_0, x_2)` needs one swap,
//! so `theta(x_1, x_0, x_2) = -f_{012}`.
//!
//! Coordinate arguments suffice: `theta` is a derivation in each slot, so
//! `theta(alpha, g_2, ..., g_p)` is an `S`-combination of the
//! `theta(alpha, x_J)`. Moreover with `k` the coordinate replaced by `alpha`
//! in the residue map, the conditions with `k in J` are combinations of the
//! others (substitute `x_k = (alpha - sum_{i != k} a_i x_i) / a_k` and use
//! `theta(alpha, alpha, ...) = 0`), so only `J` avoiding `k` are imposed.

use std::collections::HashMap;

use num_bigint::BigInt;

use crate::arrangement::Multiarrangement;
use crate::kernel::linalg::{rank_of_rows, IntRow};
use crate::kernel::{monomial_count, residue_map};

/// `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        rec(0, n, k, &mut Vec::new(), &mut out);
    }
    out
}

/// Sign of `x_i` moved into sorted position within `J + i`.
pub(crate) fn insertion_sign(i: usize, j: &[usize]) -> i64 {
    if j.iter().filter(|&&x| x < i).count() % 2 == 0 {
        1
    } else {
        -1
    }
}

pub struct System {
    pub blocks: Vec<Vec<usize>>,
    pub block_size: usize,
    pub rows: Vec<IntRow>,
}

impl System {
    pub fn ncols(&self) -> usize {
        self.blocks.len() * self.block_size
    }
}

pub fn build(a: &Multiarrangement, p: usize, d: u32) -> System {
    let ell = a.dim();
    let blocks = subsets(ell, p);
    let block_index: HashMap<&[usize], usize> = blocks.iter().enumerate().map(|(i, b)| (b.as_slice(), i)).collect();
    let block_size = monomial_count(ell, d as usize);
    let mut rows = Vec::new();
    if p == 0 {
        return System { blocks, block_size, rows };
    }
    for (form, m) in a.hyperplanes() {
        let alpha = form.coeffs();
        let rmap = residue_map(alpha, *m, d).expect("hyperplane forms are nonzero");
        let k = rmap.pivot;
        let others: Vec<usize> = (0..ell).filter(|&i| i != k).collect();
        for jsub in subsets(others.len(), p - 1) {
            let j: Vec<usize> = jsub.iter().map(|&s| others[s]).collect();
            // (block offset, signed coefficient) for each i outside J
            let terms: Vec<(usize, BigInt)> = (0..ell)
                .filter(|i| !j.contains(i) && alpha[*i] != 0)
                .map(|i| {
                    let mut set = j.clone();
                    set.push(i);
                    set.sort_unstable();
                    let b = block_index[set.as_slice()];
                    (b * block_size, BigInt::from(insertion_sign(i, &j) * alpha[i]))
                })
                .collect();
            for rrow in &rmap.rows {
                let mut entries = Vec::with_capacity(rrow.len() * terms.len());
                for (offset, coef) in &terms {
                    for (c, v) in rrow {
                        entries.push((offset + c, coef * v));
                    }
                }
                if let Some(r) = IntRow::new(entries) {
                    rows.push(r);
                }
            }
        }
    }
    System { blocks, block_size, rows }
}

pub fn dimension(a: &Multiarrangement, p: usize, d: u32) -> usize {
    let sys = build(a, p, d);
    let n = sys.ncols();
    n - rank_of_rows(n, sys.rows)
}
