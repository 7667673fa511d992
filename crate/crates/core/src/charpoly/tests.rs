use proptest::prelude::*;

use super::*;
use crate::lattice::rref;

fn arr(poly: &str, dim: usize) -> Multiarrangement {
    Multiarrangement::parse_default(poly, dim).unwrap()
}

fn chi_of(poly: &str, dim: usize) -> UniPoly {
    chi_pi(&arr(poly, dim), Policy::default()).unwrap().chi
}

/// Whitney's formula: sum over subsets S of (-1)^|S| t^{ell - rank S}.
fn whitney(a: &Multiarrangement) -> UniPoly {
    let forms: Vec<Vec<i64>> = a.hyperplanes().iter().map(|h| h.0.coeffs().to_vec()).collect();
    let n = forms.len();
    let mut acc = UniPoly::zero();
    for mask in 0u32..(1 << n) {
        let rows: Vec<Vec<i64>> = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| forms[i].clone()).collect();
        let r = if rows.is_empty() { 0 } else { rref(&rows).len() };
        let sign = if mask.count_ones() % 2 == 0 { 1 } else { -1 };
        acc = acc.add(&UniPoly::monomial(a.dim() - r, int(sign)));
    }
    acc
}

#[test]
fn extreme_numerators() {
    let a = arr("x^2y^2z(x+y+z)(x-y+z)", 3);
    assert_eq!(hilbert_numerator(&a, 0, Policy::default()).unwrap().numerator, vec![1]);
    let top = hilbert_numerator(&a, 3, Policy::default()).unwrap().numerator;
    assert_eq!(top, [vec![0; 7], vec![1]].concat());
}

#[test]
fn ziegler_numerator() {
    let s = hilbert_numerator(&arr("x^3y^3(x-y)(x+y)", 2), 1, Policy::default()).unwrap();
    assert_eq!(s.numerator, vec![0, 0, 0, 1, 0, 1]);
    for (d, &k) in s.dims.iter().enumerate() {
        assert_eq!(s.dimension_from_numerator(d as u32), k as i64);
    }
}

#[test]
fn horizon_cap_is_reported() {
    let a = arr("x^3y^3(x-y)(x+y)", 2);
    let tight = Policy { window: None, max_horizon: Some(4) };
    assert!(matches!(hilbert_numerator(&a, 1, tight), Err(Error::NotStabilized { p: 1, .. })));
}

#[test]
fn psi_of_empty_line_and_free_rank_two() {
    assert_eq!(psi(&Multiarrangement::empty(1), Policy::default()).unwrap().poly, BiPoly::monomial(1, 0, int(-1)));
    for (q, ds) in [("x^3y^3(x-y)(x+y)", [3usize, 5]), ("x^3y^3(x-y)(x-2y)", [4, 4])] {
        let expected = ds.iter().fold(BiPoly::from_q(UniPoly::one()), |acc, &d| {
            let geo = BiPoly::from_q(UniPoly::from_ints(&vec![1; d]));
            acc.mul(&geo.add(&BiPoly::monomial(1, d, int(-1))))
        });
        let got = psi(&arr(q, 2), Policy::default()).unwrap().poly;
        assert_eq!(got, expected, "{}", q);
        let at_one = got.eval_q(&int(1));
        assert_eq!(at_one, UniPoly::from_ints(&[ds[0] as i64, -1]).mul(&UniPoly::from_ints(&[ds[1] as i64, -1])));
    }
}

#[test]
fn published_characteristic_polynomials() {
    assert_eq!(chi_of("x^3y^3(x-y)(x+y)", 2), UniPoly::from_roots(&[3, 5]));
    assert_eq!(chi_of("x^3y^3(x-y)(x-2y)", 2), UniPoly::from_roots(&[4, 4]));
    assert_eq!(chi_of("x^2y^2z(x+y+z)(x-y+z)", 3), UniPoly::from_ints(&[-17, 18, -7, 1]));
    assert_eq!(chi_of("x^2yz(x+y+z)(x-y+z)", 3), UniPoly::from_ints(&[-10, 13, -6, 1]));
    assert_eq!(chi_of("x^2yz(x+y+z)(x-y+z)", 3), UniPoly::from_roots(&[2]).mul(&UniPoly::from_ints(&[5, -4, 1])));
    for n in 0..4 {
        assert_eq!(chi_pi(&Multiarrangement::empty(n), Policy::default()).unwrap().chi, UniPoly::monomial(n, int(1)));
    }
}

#[test]
fn poincare_and_coefficients() {
    let c = chi_pi(&arr("x^2y^2z(x+y+z)(x-y+z)", 3), Policy::default()).unwrap();
    assert_eq!(c.c, vec![1, 7, 18, 17]);
    assert_eq!(c.pi, UniPoly::from_ints(&[1, 7, 18, 17]));
    assert!(c.is_monic(3));
}

#[test]
fn lattice_characteristic_polynomials() {
    assert_eq!(chi_lattice_simple(&arr("xyz", 3)).unwrap(), UniPoly::from_roots(&[1, 1, 1]));
    assert_eq!(chi_lattice_simple(&arr("xy(x-y)", 2)).unwrap(), UniPoly::from_roots(&[1, 2]));
    let braid = arr("xy(x-y)(x-z)(y-z)", 3);
    assert_eq!(chi_lattice_simple(&braid).unwrap(), whitney(&braid));
    assert!(chi_lattice_simple(&arr("x^2y", 2)).is_err());
}

#[test]
fn local_global_on_the_deletion_example() {
    let a = arr("x^2y^2z(x+y+z)(x-y+z)", 3);
    let data = local_data(&a, Policy::default()).unwrap();
    let report = local_global_from(&data);
    assert!(report.all_pass, "{:?}", report.entries.iter().filter(|e| !e.pass).collect::<Vec<_>>());
    for x in 0..data.lattice.len() {
        let id = psi_flat_identity_from(&data, x);
        assert!(id.pass, "flat {:?}: {} vs {}", id.flat, id.lhs, id.rhs);
    }
    let top = data.lattice.top();
    assert_eq!(data.local[top].c[2], 18);
}

#[test]
fn flat_identity_at_a_hyperplane() {
    let a = arr("x^3y(x-y)^2", 2);
    let data = local_data(&a, Policy::default()).unwrap();
    for h in data.lattice.rank_indices(1) {
        let id = psi_flat_identity_from(&data, h);
        let m = a.hyperplanes()[data.lattice.flat(h).hyperplanes[0]].1;
        assert_eq!(id.rhs, UniPoly::monomial(1, int(m as i64)));
        assert!(id.pass);
    }
    let v = psi_flat_identity_from(&data, 0);
    assert_eq!(v.lhs, UniPoly::monomial(2, int(1)));
}

fn factor(dim: usize) -> impl Strategy<Value = Multiarrangement> {
    prop::collection::vec((prop::collection::vec(-2i64..=2, dim), 1u32..=3), 0..=3).prop_filter_map(
        "nonzero",
        move |hs| {
            if hs.iter().any(|(c, _)| c.iter().all(|&x| x == 0)) {
                None
            } else {
                Multiarrangement::new(dim, hs).ok()
            }
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn psi_is_multiplicative(a in factor(1), b in factor(2)) {
        let pa = psi(&a, Policy::default()).unwrap().poly;
        let pb = psi(&b, Policy::default()).unwrap().poly;
        let pab = psi(&a.product(&b), Policy::default()).unwrap().poly;
        prop_assert_eq!(pab, pa.mul(&pb));
    }

    #[test]
    fn simple_arrangements_match_the_lattice(
        forms in prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 1..=5)
    ) {
        prop_assume!(forms.iter().all(|f| f.iter().any(|&x| x != 0)));
        let a = Multiarrangement::new(3, forms.into_iter().map(|f| (f, 1))).unwrap();
        let a = a.underlying();
        let from_psi = chi_pi(&a, Policy::default()).unwrap().chi;
        prop_assert_eq!(&from_psi, &chi_lattice_simple(&a).unwrap());
        prop_assert_eq!(from_psi, whitney(&a));
    }

    #[test]
    fn numerators_reproduce_dimensions(a in factor(3), p in 1usize..=2) {
        let s = hilbert_numerator(&a, p, Policy::default()).unwrap();
        for (d, &k) in s.dims.iter().enumerate() {
            prop_assert_eq!(s.dimension_from_numerator(d as u32), k as i64);
        }
    }
}
