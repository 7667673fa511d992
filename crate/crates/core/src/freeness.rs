//! Local and global mixed products, the balanced bound and freeness verdicts.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::{default_vars, Multiarrangement};
use crate::charpoly::{chi_pi, integer_coeffs, Policy};
use crate::derivations::{rank2_exponents, ziegler_check, DerivationEntry, PDerivation};
use crate::error::Error;
use crate::kernel::{elem_sym, UniPoly};
use crate::lattice::{build_lattice, localize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FlatExponents {
    pub flat: Vec<usize>,
    pub exponents: Vec<u32>,
    pub product: i64,
    pub evidence: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixedProductReport {
    pub k: usize,
    pub value: i64,
    pub flats: Vec<FlatExponents>,
}

/// Bases for rank `>= 3` flats, keyed by the flat's hyperplane indices and
/// written in the coordinates of the localization.
pub type LocalBases = HashMap<Vec<usize>, Vec<PDerivation>>;

pub fn lmp(a: &Multiarrangement, k: usize, local_bases: Option<&LocalBases>) -> Result<MixedProductReport, Error> {
    if k > a.dim() {
        return Err(Error::OutOfRange(format!("k = {} exceeds dimension {}", k, a.dim())));
    }
    let l = build_lattice(a);
    let flats = l.rank_indices(k);
    if k >= 3 {
        let missing =
            flats.iter().filter(|&&x| local_bases.is_none_or(|b| !b.contains_key(&l.flat(x).hyperplanes))).count();
        if missing > 0 {
            return Err(Error::LocalFreenessUndetermined(missing));
        }
    }
    let per_flat: Vec<FlatExponents> = flats
        .par_iter()
        .map(|&x| {
            let flat = l.flat(x);
            let loc = localize(a, flat);
            let (exponents, evidence) = match k {
                0 => (vec![], "empty flat".to_string()),
                1 => (vec![loc.total_multiplicity()], "single hyperplane".to_string()),
                2 => {
                    let e = rank2_exponents(&loc)?;
                    let c = e.ziegler_scalar(&loc)?;
                    (vec![e.d1, e.d2], format!("rank-two basis, Saito scalar {}", c))
                }
                _ => {
                    let basis = &local_bases.expect("checked above")[&flat.hyperplanes];
                    let c = ziegler_check(&loc, basis)?;
                    if c.is_zero() {
                        return Err(Error::NotSaitoBasis);
                    }
                    let mut degs =
                        basis.iter().map(|t| t.degree().map(|d| d.unwrap_or(0))).collect::<Result<Vec<_>, _>>()?;
                    degs.sort_unstable();
                    (degs, format!("supplied basis, Saito scalar {}", c))
                }
            };
            let product = exponents.iter().map(|&d| i64::from(d)).product();
            Ok(FlatExponents { flat: flat.hyperplanes.clone(), exponents, product, evidence })
        })
        .collect::<Result<_, Error>>()?;
    let value = per_flat.iter().map(|f| f.product).sum();
    Ok(MixedProductReport { k, value, flats: per_flat })
}

pub fn gmp(exponents: &[i64], k: usize) -> Result<i64, Error> {
    elem_sym(k, exponents)
}

/// The most balanced tuple of `ell` nonnegative integers summing to `total`.
pub fn balanced_tuple(total: u32, ell: usize) -> Vec<i64> {
    if ell == 0 {
        return Vec::new();
    }
    let (q, r) = (total as usize / ell, total as usize % ell);
    (0..ell).map(|i| (q + usize::from(i >= ell - r)) as i64).collect()
}

/// `e_k` of the most balanced tuple, the maximum of `e_k` over nonnegative
/// integer tuples with the given sum.
pub fn balanced_bound(total: u32, ell: usize, k: usize) -> Result<i64, Error> {
    if k == 0 || k > ell {
        return Err(Error::OutOfRange(format!("k = {} must lie in 1..={}", k, ell)));
    }
    elem_sym(k, &balanced_tuple(total, ell))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// `LMP(k) > e_k(balanced tuple)`
    MixedProductBound { k: usize, lmp: i64, bound: i64, balanced: Vec<i64> },
    /// `chi` has no factorization into `t - d` with integers `d >= 0`.
    ChiDoesNotSplit { chi: String },
    /// `e_k(roots of chi) != LMP(k)`
    MixedProductMismatch { k: usize, lmp: i64, gmp: i64, roots: Vec<i64> },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::MixedProductBound { k, lmp, bound, balanced } => {
                write!(f, "LMP({}) = {} > {} = e_{}{:?}", k, lmp, bound, k, balanced)
            }
            Witness::ChiDoesNotSplit { chi } => write!(f, "chi = {} does not split over nonnegative integers", chi),
            Witness::MixedProductMismatch { k, lmp, gmp, roots } => {
                write!(f, "LMP({}) = {} but e_{}{:?} = {}", k, lmp, k, roots, gmp)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum FreenessVerdict {
    NotFree { witness: Witness },
    FreeCertified { exponents: Vec<u32>, basis: Vec<Vec<DerivationEntry>>, scalar: String, chi: String },
    Unknown { candidate_exponents: Option<Vec<i64>>, diagnostics: Vec<String> },
}

impl FreenessVerdict {
    pub fn is_not_free(&self) -> bool {
        matches!(self, FreenessVerdict::NotFree { .. })
    }
}

impl fmt::Display for FreenessVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FreenessVerdict::NotFree { witness } => write!(f, "NotFree: {}", witness),
            FreenessVerdict::FreeCertified { exponents, chi, scalar, .. } => {
                write!(f, "FreeCertified: exponents {:?}, chi = {}, Saito scalar {}", exponents, chi, scalar)
            }
            FreenessVerdict::Unknown { candidate_exponents, diagnostics } => {
                write!(f, "Unknown")?;
                if let Some(c) = candidate_exponents {
                    write!(f, ": candidate exponents {:?}", c)?;
                }
                for d in diagnostics {
                    write!(f, "; {}", d)?;
                }
                Ok(())
            }
        }
    }
}

/// Roots `d >= 0` with `chi = prod (t - d)`, if `chi` splits that way.
pub fn nonnegative_integer_roots(chi: &UniPoly) -> Option<Vec<i64>> {
    let mut coeffs = integer_coeffs(chi)?;
    let deg = coeffs.len().checked_sub(1)?;
    if coeffs[deg] != 1 {
        return None;
    }
    let mut roots = Vec::with_capacity(deg);
    while coeffs.len() > 1 {
        // a root d >= 0 satisfies d <= sum of the other roots = -coeffs[deg-1]
        let bound = -coeffs[coeffs.len() - 2];
        let root = (0..=bound.max(0))
            .find(|&d| coeffs.iter().rev().fold(0i128, |acc, &c| acc * d as i128 + c as i128) == 0)?;
        // synthetic division by (t - root)
        let n = coeffs.len() - 1;
        let mut q = vec![0i64; n];
        let mut carry = 0i64;
        for i in (0..n).rev() {
            carry = coeffs[i + 1] + carry * root;
            q[i] = carry;
        }
        coeffs = q;
        roots.push(root);
    }
    roots.sort_unstable();
    Some(roots)
}

pub fn certify_nonfree(a: &Multiarrangement, policy: Policy) -> Result<FreenessVerdict, Error> {
    let ell = a.dim();
    let total = a.total_multiplicity();
    let mut lmps: Vec<(usize, i64)> = vec![(1, i64::from(total))];
    if ell >= 2 {
        let l2 = lmp(a, 2, None)?.value;
        let bound = balanced_bound(total, ell, 2)?;
        if l2 > bound {
            return Ok(FreenessVerdict::NotFree {
                witness: Witness::MixedProductBound { k: 2, lmp: l2, bound, balanced: balanced_tuple(total, ell) },
            });
        }
        lmps.push((2, l2));
    }
    let cp = chi_pi(a, policy)?;
    let Some(roots) = nonnegative_integer_roots(&cp.chi) else {
        return Ok(FreenessVerdict::NotFree { witness: Witness::ChiDoesNotSplit { chi: cp.chi.to_string() } });
    };
    for (k, value) in lmps {
        let g = elem_sym(k, &roots)?;
        if g != value {
            return Ok(FreenessVerdict::NotFree {
                witness: Witness::MixedProductMismatch { k, lmp: value, gmp: g, roots },
            });
        }
    }
    Ok(FreenessVerdict::Unknown {
        candidate_exponents: Some(roots),
        diagnostics: vec!["necessary conditions hold; freeness needs a basis".into()],
    })
}

pub fn check_factorization(
    a: &Multiarrangement,
    basis: &[PDerivation],
    policy: Policy,
) -> Result<FreenessVerdict, Error> {
    let unknown = |msg: String| FreenessVerdict::Unknown { candidate_exponents: None, diagnostics: vec![msg] };
    let c = match ziegler_check(a, basis) {
        Ok(c) if c.is_zero() => return Ok(unknown("determinant vanishes".into())),
        Ok(c) => c,
        Err(e) => return Ok(unknown(e.to_string())),
    };
    let mut exponents = basis.iter().map(|t| t.degree().map(|d| d.unwrap_or(0))).collect::<Result<Vec<_>, _>>()?;
    exponents.sort_unstable();
    let ds: Vec<i64> = exponents.iter().map(|&d| i64::from(d)).collect();
    let cp = chi_pi(a, policy)?;
    let expected_chi = UniPoly::from_roots(&ds);
    let expected_pi = ds.iter().fold(UniPoly::one(), |acc, &d| acc.mul(&UniPoly::from_ints(&[1, d])));
    if cp.chi != expected_chi || cp.pi != expected_pi {
        return Err(Error::Inconsistent(format!("basis degrees {:?} but chi = {}", exponents, cp.chi)));
    }
    let vars = default_vars(a.dim());
    Ok(FreenessVerdict::FreeCertified {
        exponents,
        basis: basis.iter().map(|t| t.entries(&vars)).collect(),
        scalar: c.to_string(),
        chi: cp.chi.to_string(),
    })
}
