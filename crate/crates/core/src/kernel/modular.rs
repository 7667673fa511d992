//! Arithmetic modulo the Mersenne prime `2^61 - 1`, a semi-echelon form over
//! that field, and Dixon p-adic lifting for exact rational solutions.
//!
//! Nothing here decides a dimension on its own. A rank computed modulo the
//! prime is a lower bound for the rank over the rationals (a nonzero minor mod
//! p is a nonzero integer minor); callers pair it with exactly verified kernel
//! vectors to pin the rational dimension down.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::linalg::IntRow;

pub const MODULUS: u64 = (1 << 61) - 1;

#[inline]
fn fold(x: u128) -> u64 {
    let s = (x & MODULUS as u128) as u64 + (x >> 61) as u64;
    let s = (s & MODULUS) + (s >> 61);
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn mul(a: u64, b: u64) -> u64 {
    fold(a as u128 * b as u128)
}

#[inline]
pub fn add(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODULUS {
        s - MODULUS
    } else {
        s
    }
}

#[inline]
pub fn neg(a: u64) -> u64 {
    if a == 0 {
        0
    } else {
        MODULUS - a
    }
}

pub fn inv(a: u64) -> u64 {
    assert!(a != 0, "inverse of zero");
    let mut base = a;
    let mut e = MODULUS - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

pub fn from_bigint(v: &BigInt) -> u64 {
    let m = BigInt::from(MODULUS);
    let r = v.mod_floor(&m);
    r.to_u64().expect("reduced residue")
}

pub fn from_i128(v: i128) -> u64 {
    v.rem_euclid(MODULUS as i128) as u64
}

/// Dense row of a sparse integer row, reduced mod p.
pub fn dense_row(row: &IntRow, n: usize) -> Vec<u64> {
    let mut v = vec![0u64; n];
    for (c, x) in row.entries() {
        v[*c] = from_bigint(x);
    }
    v
}

/// Semi-echelon form: row `i` has a 1 at `leads[i]` and zeros at the leads of
/// all earlier rows.
#[derive(Clone, Debug)]
pub struct ModEchelon {
    n: usize,
    rows: Vec<Vec<u64>>,
    leads: Vec<usize>,
}

impl ModEchelon {
    pub fn new(n: usize) -> Self {
        ModEchelon { n, rows: Vec::new(), leads: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn leads(&self) -> &[usize] {
        &self.leads
    }

    fn reduce(&self, v: &mut [u64]) {
        for (row, &lead) in self.rows.iter().zip(&self.leads) {
            let f = v[lead];
            if f == 0 {
                continue;
            }
            let nf = neg(f);
            for (x, &r) in v[lead..].iter_mut().zip(&row[lead..]) {
                if r != 0 {
                    *x = fold(*x as u128 + nf as u128 * r as u128);
                }
            }
        }
    }

    /// Inserts `v` if it is independent of the current rows.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        debug_assert_eq!(v.len(), self.n);
        self.reduce(&mut v);
        let Some(lead) = v.iter().position(|&x| x != 0) else { return false };
        let s = inv(v[lead]);
        for x in v[lead..].iter_mut() {
            *x = mul(*x, s);
        }
        self.rows.push(v);
        self.leads.push(lead);
        true
    }

    /// Kernel vector of the row space for a non-lead column `free`: 1 at
    /// `free`, 0 at every other non-lead column.
    pub fn kernel_vector(&self, free: usize) -> Vec<u64> {
        let r = self.rank();
        let mut x = vec![0u64; self.n];
        x[free] = 1;
        // rows are upper unitriangular on the lead columns in insertion order
        for i in (0..r).rev() {
            let row = &self.rows[i];
            let mut s = row[free];
            for j in i + 1..r {
                let c = row[self.leads[j]];
                if c != 0 {
                    s = add(s, mul(c, x[self.leads[j]]));
                }
            }
            x[self.leads[i]] = neg(s);
        }
        x
    }
}

/// Inverse of a square matrix mod p; `None` when singular.
pub fn inverse(a: &[Vec<u64>]) -> Option<Vec<Vec<u64>>> {
    let n = a.len();
    let mut m: Vec<Vec<u64>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| u64::from(i == j)));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != 0)?;
        m.swap(col, piv);
        let s = inv(m[col][col]);
        for x in m[col].iter_mut() {
            *x = mul(*x, s);
        }
        let pivot_row = m[col].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r == col || row[col] == 0 {
                continue;
            }
            let f = neg(row[col]);
            for (x, &p) in row.iter_mut().zip(&pivot_row) {
                if p != 0 {
                    *x = fold(*x as u128 + f as u128 * p as u128);
                }
            }
        }
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Reconstructs `n / d` from `u mod modulus` with `|n|, d <= bound`.
fn rational_reconstruct(u: &BigInt, modulus: &BigInt, bound: &BigInt) -> Option<(BigInt, BigInt)> {
    let (mut r0, mut r1) = (modulus.clone(), u.mod_floor(modulus));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > *bound {
        return None;
    }
    if t1.is_negative() {
        Some((-r1, -t1))
    } else {
        Some((r1, t1))
    }
}

/// Solves `A y = b` over the rationals for a square integer matrix that is
/// invertible mod p, by Dixon lifting. Returns `(numerators, denominator)`,
/// checked against `A y = b` exactly. `None` if the entries are too large for
/// the `i128` fast path or the precision cap is reached.
pub fn dixon_solve(a: &[Vec<i128>], a_inv: &[Vec<u64>], b: &[i128], max_steps: usize) -> Option<(Vec<BigInt>, BigInt)> {
    let n = a.len();
    if n == 0 {
        return Some((Vec::new(), BigInt::one()));
    }
    let mut residual: Vec<i128> = b.to_vec();
    let mut digits: Vec<Vec<u64>> = Vec::new();
    let p = BigInt::from(MODULUS);
    let mut step = 0;
    let mut next_check = 4;
    while step < max_steps {
        let cm: Vec<u64> = residual.iter().map(|&c| from_i128(c)).collect();
        let x: Vec<u64> =
            a_inv.iter().map(|row| row.iter().zip(&cm).fold(0u64, |acc, (&r, &c)| add(acc, mul(r, c)))).collect();
        for (res, row) in residual.iter_mut().zip(a) {
            let mut s: i128 = *res;
            for (&aij, &xj) in row.iter().zip(&x) {
                if aij != 0 && xj != 0 {
                    s = s.checked_sub(aij.checked_mul(xj as i128)?)?;
                }
            }
            debug_assert_eq!(s.rem_euclid(MODULUS as i128), 0);
            *res = s / MODULUS as i128;
        }
        digits.push(x);
        step += 1;
        if step == next_check || residual.iter().all(|&c| c == 0) {
            next_check = step * 2;
            if let Some(sol) = reconstruct(&digits, &p, a, b) {
                return Some(sol);
            }
        }
    }
    None
}

fn reconstruct(digits: &[Vec<u64>], p: &BigInt, a: &[Vec<i128>], b: &[i128]) -> Option<(Vec<BigInt>, BigInt)> {
    let n = a.len();
    let modulus = num_traits::pow(p.clone(), digits.len());
    let bound = (&modulus / BigInt::from(2)).sqrt();
    let mut den = BigInt::one();
    let mut nums: Vec<BigInt> = Vec::with_capacity(n);
    for i in 0..n {
        let mut u = BigInt::zero();
        for d in digits.iter().rev() {
            u = u * p + BigInt::from(d[i]);
        }
        let scaled = (u * &den).mod_floor(&modulus);
        let (num, d) = rational_reconstruct(&scaled, &modulus, &bound)?;
        if !d.is_one() {
            for v in nums.iter_mut() {
                *v *= &d;
            }
            den *= &d;
        }
        nums.push(num);
    }
    // exact check A * nums == den * b
    for (row, bi) in a.iter().zip(b) {
        let s: BigInt = row.iter().zip(&nums).map(|(&aij, x)| BigInt::from(aij) * x).sum();
        if s != BigInt::from(*bi) * &den {
            return None;
        }
    }
    Some((nums, den))
}

/// Converts an exact integer to `i128` when it fits.
pub fn to_i128(v: &BigInt) -> Option<i128> {
    let (sign, digits) = v.to_u64_digits();
    if digits.len() > 2 {
        return None;
    }
    let mag = digits.iter().rev().fold(0u128, |acc, &d| (acc << 64) | d as u128);
    if mag > i128::MAX as u128 {
        return None;
    }
    Some(if sign == Sign::Minus { -(mag as i128) } else { mag as i128 })
}
