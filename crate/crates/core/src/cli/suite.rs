use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::Multiarrangement;
use crate::charpoly::{chi_pi, hilbert_numerator, psi, Policy};
use crate::derivations::{graded_dimension, rank2_exponents};
use crate::error::Error;
use crate::freeness::{
    balanced_bound, balanced_tuple, certify_nonfree, check_factorization, gmp, lmp, FreenessVerdict, Witness,
};
use crate::kernel::{int, BiPoly, UniPoly};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteRow {
    pub name: String,
    pub expected: String,
    pub got: String,
    pub pass: bool,
}

const ZIEGLER_1: &str = "x^3y^3(x-y)(x+y)";
const ZIEGLER_2: &str = "x^3y^3(x-y)(x-2y)";
const GLOBAL: &str = "x^2y^2z(x+y+z)(x-y+z)";
const DELETED: &str = "x^2yz(x+y+z)(x-y+z)";
const DOUBLED: &str = "x^2y^2(x-y)^2(x-z)^2(y-z)^2";
const UNEVEN: &str = "x^2y(x-y)(x-z)(y-z)^2";

type Check = fn() -> Result<String, Error>;

fn arr(poly: &str, dim: usize) -> Result<Multiarrangement, Error> {
    Multiarrangement::parse_default(poly, dim)
}

fn chi_of(poly: &str, dim: usize) -> Result<UniPoly, Error> {
    Ok(chi_pi(&arr(poly, dim)?, Policy::default())?.chi)
}

fn exponents_of(poly: &str) -> Result<String, Error> {
    let e = rank2_exponents(&arr(poly, 2)?)?;
    Ok(format!("({}, {})", e.d1, e.d2))
}

fn lmp2(poly: &str) -> Result<String, Error> {
    Ok(lmp(&arr(poly, 3)?, 2, None)?.value.to_string())
}

fn witness_of(poly: &str) -> Result<String, Error> {
    Ok(match certify_nonfree(&arr(poly, 3)?, Policy::default())? {
        FreenessVerdict::NotFree { witness: Witness::MixedProductBound { lmp, bound, .. } } => {
            format!("NotFree {} > {}", lmp, bound)
        }
        v => v.to_string(),
    })
}

fn free_rank2_psi(d: &[u32]) -> BiPoly {
    d.iter().fold(BiPoly::from_q(UniPoly::one()), |acc, &di| {
        let f = BiPoly::from_t_coeffs(vec![
            UniPoly::from_ints(&vec![1; di as usize]),
            UniPoly::monomial(di as usize, int(-1)),
        ]);
        acc.mul(&f)
    })
}

fn checks() -> Vec<(&'static str, &'static str, Check)> {
    vec![
        ("GMP(2) of (3, 5)", "15", || Ok(gmp(&[3, 5], 2)?.to_string())),
        ("balanced bound, |m| = 10, l = 3", "33 via [3, 3, 4]", || {
            Ok(format!("{} via {:?}", balanced_bound(10, 3, 2)?, balanced_tuple(10, 3)))
        }),
        ("balanced bound, |m| = 7, l = 3", "16 via [2, 2, 3]", || {
            Ok(format!("{} via {:?}", balanced_bound(7, 3, 2)?, balanced_tuple(7, 3)))
        }),
        ("parse x^3y^3(x-y)(x+y)", "4 hyperplanes, m = [1, 1, 3, 3]", || {
            let a = arr(ZIEGLER_1, 2)?;
            let mut m = a.multiplicities();
            m.sort_unstable();
            Ok(format!("{} hyperplanes, m = {:?}", a.len(), m))
        }),
        ("parse x^2y^2z(x+y+z)(x-y+z)", "5 hyperplanes, |m| = 7", || {
            let a = arr(GLOBAL, 3)?;
            Ok(format!("{} hyperplanes, |m| = {}", a.len(), a.total_multiplicity()))
        }),
        ("dim D^3_9 of x^2y^2z(x+y+z)(x-y+z)", "6", || Ok(graded_dimension(&arr(GLOBAL, 3)?, 3, 9)?.to_string())),
        ("dim D^1_3 of x^3y^3(x-y)(x+y)", "1", || Ok(graded_dimension(&arr(ZIEGLER_1, 2)?, 1, 3)?.to_string())),
        ("exponents of x^3y^3(x-y)(x+y)", "(3, 5)", || exponents_of(ZIEGLER_1)),
        ("exponents of x^3y^3(x-y)(x-2y)", "(4, 4)", || exponents_of(ZIEGLER_2)),
        ("P_2 of x^3y^3(x-y)(x+y)", "q^8", || {
            Ok(hilbert_numerator(&arr(ZIEGLER_1, 2)?, 2, Policy::default())?
                .numerator_poly()
                .display_var("q")
                .to_string())
        }),
        ("P_1 of x^3y^3(x-y)(x+y)", "q^5 + q^3", || {
            Ok(hilbert_numerator(&arr(ZIEGLER_1, 2)?, 1, Policy::default())?
                .numerator_poly()
                .display_var("q")
                .to_string())
        }),
        ("psi of x^3y^3(x-y)(x+y) is the free product", "true", || {
            Ok((psi(&arr(ZIEGLER_1, 2)?, Policy::default())?.poly == free_rank2_psi(&[3, 5])).to_string())
        }),
        ("psi(t, 1) of x^3y^3(x-y)(x+y)", "t^2 - 8t + 15", || {
            Ok(psi(&arr(ZIEGLER_1, 2)?, Policy::default())?.poly.eval_q(&int(1)).to_string())
        }),
        ("chi of x^3y^3(x-y)(x+y)", "t^2 - 8t + 15", || Ok(chi_of(ZIEGLER_1, 2)?.to_string())),
        ("chi of x^3y^3(x-y)(x-2y)", "t^2 - 8t + 16", || Ok(chi_of(ZIEGLER_2, 2)?.to_string())),
        ("chi of x^2y^2z(x+y+z)(x-y+z)", "t^3 - 7t^2 + 18t - 17", || Ok(chi_of(GLOBAL, 3)?.to_string())),
        ("chi of x^2yz(x+y+z)(x-y+z)", "t^3 - 6t^2 + 13t - 10", || Ok(chi_of(DELETED, 3)?.to_string())),
        ("chi(A', m') - (t - 2)(t - 3) - chi(A, m)", "1", || {
            let restricted = UniPoly::from_roots(&[2, 3]);
            Ok(chi_of(DELETED, 3)?.sub(&restricted).sub(&chi_of(GLOBAL, 3)?).to_string())
        }),
        ("chi of the empty arrangement in 3 variables", "t^3", || {
            Ok(chi_pi(&Multiarrangement::empty(3), Policy::default())?.chi.to_string())
        }),
        ("C_2 = LMP(2) for x^2y^2z(x+y+z)(x-y+z)", "18 = 18", || {
            let a = arr(GLOBAL, 3)?;
            Ok(format!("{} = {}", chi_pi(&a, Policy::default())?.c[2], lmp(&a, 2, None)?.value))
        }),
        ("LMP(2) of (xy(x-y)(x-z)(y-z))^2", "34", || lmp2(DOUBLED)),
        ("LMP(2) of x^2y(x-y)(x-z)(y-z)^2", "17", || lmp2(UNEVEN)),
        ("GMP(2) of (4, 4)", "16", || Ok(gmp(&[4, 4], 2)?.to_string())),
        ("check-free (xy(x-y)(x-z)(y-z))^2", "NotFree 34 > 33", || witness_of(DOUBLED)),
        ("check-free x^2y(x-y)(x-z)(y-z)^2", "NotFree 17 > 16", || witness_of(UNEVEN)),
        ("solver basis of x^3y^3(x-y)(x+y)", "FreeCertified t^2 - 8t + 15", || {
            let a = arr(ZIEGLER_1, 2)?;
            let e = rank2_exponents(&a)?;
            Ok(match check_factorization(&a, &e.basis, Policy::default())? {
                FreenessVerdict::FreeCertified { chi, .. } => format!("FreeCertified {}", chi),
                v => v.to_string(),
            })
        }),
    ]
}

/// Runs every published example. Rows come back in a fixed order.
pub fn published_examples() -> Vec<SuiteRow> {
    checks()
        .into_par_iter()
        .map(|(name, expected, check)| {
            let got = check().unwrap_or_else(|e| format!("error: {}", e));
            SuiteRow { name: name.into(), expected: expected.into(), pass: got == expected, got }
        })
        .collect()
}
