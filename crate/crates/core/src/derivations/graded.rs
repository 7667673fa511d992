//! Graded pieces of `D^p(A, m)` computed degree by degree with exact answers.
//!
//! At degree `d` the kernel dimension of the system modulo a large prime is an
//! upper bound for the rational dimension. Exact integer kernel vectors that
//! stay independent modulo the prime give a matching lower bound. They come
//! from `x_i * B_{d-1}` (the module is closed under multiplication), and the
//! remaining ones are lifted with Dixon's method and verified against every
//! row. If lifting fails the degree is solved by fraction-free elimination.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::system::{build, System};
use crate::arrangement::Multiarrangement;
use crate::kernel::linalg::{kernel_of_rows, IntRow};
use crate::kernel::modular::{self, dense_row, ModEchelon};
use crate::kernel::monomials;

/// Sparse integer vector with increasing indices.
pub type SparseVec = Vec<(usize, BigInt)>;

const LIFT_STEPS: usize = 4096;

#[derive(Clone, Debug)]
struct Element {
    coeffs: SparseVec,
    /// Largest variable index this element may still be multiplied by first.
    last: usize,
}

#[derive(Clone, Debug)]
pub struct GradedSequence {
    arrangement: Multiarrangement,
    p: usize,
    dims: Vec<usize>,
    basis: Vec<Element>,
}

fn primitive(mut v: SparseVec) -> SparseVec {
    let g = v.iter().fold(BigInt::zero(), |g, (_, x)| g.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for (_, x) in v.iter_mut() {
            *x /= &g;
        }
    }
    if v.first().is_some_and(|(_, x)| x.is_negative()) {
        for (_, x) in v.iter_mut() {
            *x = -std::mem::take(x);
        }
    }
    v
}

fn annihilates(rows: &[IntRow], v: &SparseVec) -> bool {
    let lookup: HashMap<usize, &BigInt> = v.iter().map(|(i, x)| (*i, x)).collect();
    rows.iter().all(|r| {
        let s: BigInt = r.entries().iter().filter_map(|(c, a)| lookup.get(c).map(|x| a * *x)).sum();
        s.is_zero()
    })
}

fn to_dense(v: &SparseVec, n: usize) -> Vec<u64> {
    let mut d = vec![0u64; n];
    for (i, x) in v {
        d[*i] = modular::from_bigint(x);
    }
    d
}

impl GradedSequence {
    pub fn new(arrangement: &Multiarrangement, p: usize) -> Self {
        GradedSequence { arrangement: arrangement.clone(), p, dims: Vec::new(), basis: Vec::new() }
    }

    /// Dimensions of the degrees computed so far, starting at 0.
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Highest degree computed so far.
    pub fn degree(&self) -> Option<u32> {
        self.dims.len().checked_sub(1).map(|d| d as u32)
    }

    /// Integer basis of the current degree, coordinates as in the system.
    pub fn basis(&self) -> Vec<SparseVec> {
        self.basis.iter().map(|e| e.coeffs.clone()).collect()
    }

    pub fn advance_to(&mut self, d: u32) -> usize {
        while self.dims.len() <= d as usize {
            self.advance();
        }
        self.dims[d as usize]
    }

    /// Candidates `x_i * b` for the current degree, restricted ones first.
    fn candidates(&self, d: u32) -> Vec<Element> {
        if d == 0 || self.basis.is_empty() {
            return Vec::new();
        }
        let ell = self.arrangement.dim();
        let prev = monomials(ell, d - 1);
        let cur: HashMap<Vec<u32>, usize> = monomials(ell, d).into_iter().enumerate().map(|(i, m)| (m, i)).collect();
        let (bs_prev, bs_cur) = (prev.len(), cur.len());
        let shift: Vec<Vec<usize>> = (0..ell)
            .map(|i| {
                prev.iter()
                    .map(|m| {
                        let mut m2 = m.clone();
                        m2[i] += 1;
                        cur[&m2]
                    })
                    .collect()
            })
            .collect();
        let times = |e: &Element, i: usize| {
            let mut coeffs: SparseVec = e
                .coeffs
                .iter()
                .map(|(idx, x)| ((idx / bs_prev) * bs_cur + shift[i][idx % bs_prev], x.clone()))
                .collect();
            coeffs.sort_unstable_by_key(|(i, _)| *i);
            Element { coeffs, last: i }
        };
        let mut out = Vec::new();
        for i in 0..ell {
            out.extend(self.basis.iter().filter(|e| e.last <= i).map(|e| times(e, i)));
        }
        for i in 0..ell {
            out.extend(self.basis.iter().filter(|e| e.last > i).map(|e| times(e, i)));
        }
        out
    }

    fn advance(&mut self) {
        let d = self.dims.len() as u32;
        let sys = build(&self.arrangement, self.p, d);
        let n = sys.ncols();

        let mut em = ModEchelon::new(n);
        let mut pivot_rows = Vec::new();
        for (ri, row) in sys.rows.iter().enumerate() {
            if em.rank() == n {
                break;
            }
            if em.insert(dense_row(row, n)) {
                pivot_rows.push(ri);
            }
        }
        let upper = n - em.rank();

        let mut ec = ModEchelon::new(n);
        let mut basis = Vec::with_capacity(upper);
        for cand in self.candidates(d) {
            if ec.rank() == upper {
                break;
            }
            if ec.insert(to_dense(&cand.coeffs, n)) {
                basis.push(cand);
            }
        }

        if ec.rank() < upper {
            match lift_missing(&sys, &em, &pivot_rows, &mut ec, upper) {
                Some(extra) => basis.extend(extra.into_iter().map(|coeffs| Element { coeffs, last: 0 })),
                None => {
                    basis = exact_kernel(&sys);
                }
            }
        }
        self.dims.push(basis.len());
        self.basis = basis;
    }
}

/// Lifts kernel vectors for free columns until the candidate echelon reaches
/// `upper`. `None` if some lift fails (entries too large or a bad prime).
fn lift_missing(
    sys: &System,
    em: &ModEchelon,
    pivot_rows: &[usize],
    ec: &mut ModEchelon,
    upper: usize,
) -> Option<Vec<SparseVec>> {
    let n = sys.ncols();
    let leads = em.leads().to_vec();
    let lead_pos: HashMap<usize, usize> = leads.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let r = leads.len();
    // dense A = M[R, leads] and the exact rows of R
    let mut a = vec![vec![0i128; r]; r];
    let mut rest: Vec<HashMap<usize, i128>> = vec![HashMap::new(); r];
    for (i, &ri) in pivot_rows.iter().enumerate() {
        for (c, x) in sys.rows[ri].entries() {
            let v = modular::to_i128(x).filter(|v| v.unsigned_abs() < 1u128 << 56)?;
            match lead_pos.get(c) {
                Some(&j) => a[i][j] = v,
                None => {
                    rest[i].insert(*c, v);
                }
            }
        }
    }
    let am: Vec<Vec<u64>> = a.iter().map(|row| row.iter().map(|&x| modular::from_i128(x)).collect()).collect();
    let a_inv = modular::inverse(&am)?;
    let mut out = Vec::new();
    for g in (0..n).filter(|c| !lead_pos.contains_key(c)) {
        if ec.rank() == upper {
            break;
        }
        if !ec.insert(em.kernel_vector(g)) {
            continue;
        }
        let b: Vec<i128> = rest.iter().map(|m| -m.get(&g).copied().unwrap_or(0)).collect();
        let (nums, den) = modular::dixon_solve(&a, &a_inv, &b, LIFT_STEPS)?;
        let mut v: SparseVec = leads.iter().zip(nums).filter(|(_, x)| !x.is_zero()).map(|(&c, x)| (c, x)).collect();
        v.push((g, den));
        v.sort_unstable_by_key(|(i, _)| *i);
        let v = primitive(v);
        if !annihilates(&sys.rows, &v) {
            return None;
        }
        out.push(v);
    }
    Some(out)
}

fn exact_kernel(sys: &System) -> Vec<Element> {
    kernel_of_rows(sys.ncols(), sys.rows.clone())
        .into_iter()
        .map(|v| {
            let row = IntRow::from_rational(v.into_iter().enumerate()).expect("kernel vectors are nonzero");
            Element { coeffs: primitive(row.entries().to_vec()), last: 0 }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivations::system::dimension;

    fn check_against_elimination(poly: &str, dim: usize, p: usize, top: u32) {
        let a = Multiarrangement::parse_default(poly, dim).unwrap();
        let mut seq = GradedSequence::new(&a, p);
        for d in 0..=top {
            assert_eq!(seq.advance_to(d), dimension(&a, p, d), "{} p={} d={}", poly, p, d);
        }
    }

    #[test]
    fn agrees_with_elimination() {
        check_against_elimination("x^3y^3(x-y)(x+y)", 2, 1, 9);
        check_against_elimination("x^2y^2z(x+y+z)(x-y+z)", 3, 1, 7);
        check_against_elimination("x^2y^2z(x+y+z)(x-y+z)", 3, 2, 7);
        check_against_elimination("(2x+3y-z)^2(x-5y+2z)(3x+y+4z)^2", 3, 2, 6);
        check_against_elimination("xyz", 3, 0, 3);
        check_against_elimination("x^2y(x-y)(x-z)(y-z)^2", 3, 3, 9);
    }

    #[test]
    fn basis_vectors_lie_in_the_module() {
        let a = Multiarrangement::parse_default("(x+y-z)^2(x-2y+z)(2x+y+3z)^2", 3).unwrap();
        let mut seq = GradedSequence::new(&a, 1);
        for d in 0..6 {
            seq.advance_to(d);
            let sys = build(&a, 1, d);
            for v in seq.basis() {
                assert!(annihilates(&sys.rows, &v));
            }
        }
    }
}
