//! Intersection lattice of a multiarrangement: flats, ranks, the Möbius
//! function and localization at a flat.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arrangement::Multiarrangement;
use crate::error::Error;
use crate::kernel::{int, Scalar};

/// Reduced row echelon form over the rationals; zero rows dropped.
pub fn rref(rows: &[Vec<i64>]) -> Vec<Vec<Scalar>> {
    let mut m: Vec<Vec<Scalar>> = rows.iter().map(|r| r.iter().map(|&x| int(x)).collect()).collect();
    let ncols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, piv);
        let s = m[r][c].clone();
        for x in m[r].iter_mut() {
            *x = &*x / &s;
        }
        let pivot = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

fn in_span(basis: &[Vec<Scalar>], v: &[i64]) -> bool {
    // basis is in rref: subtract along pivots
    let mut w: Vec<Scalar> = v.iter().map(|&x| int(x)).collect();
    for row in basis {
        let lead = row.iter().position(|x| !x.is_zero()).expect("rref rows are nonzero");
        if !w[lead].is_zero() {
            let f = w[lead].clone();
            for (x, p) in w.iter_mut().zip(row) {
                *x -= &f * p;
            }
        }
    }
    w.iter().all(Zero::is_zero)
}

fn primitive_row(row: &[Scalar]) -> Vec<i64> {
    let lcm = row.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = row.iter().map(|x| (x * Scalar::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    ints.iter().map(|x| (x / &g).to_i64().expect("small coefficients")).collect()
}

/// A flat `X`, identified by the hyperplanes containing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Flat {
    /// Indices into the arrangement's hyperplane list, sorted.
    pub hyperplanes: Vec<usize>,
    /// Codimension `r(X)`.
    pub rank: usize,
    /// Integer basis of the span of the defining forms, in echelon form.
    pub equations: Vec<Vec<i64>>,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    dim: usize,
    flats: Vec<Flat>,
    /// `mobius[x]` maps each `y <= x` to `mu(y, x)`.
    mobius: Vec<BTreeMap<usize, i64>>,
}

pub fn build_lattice(a: &Multiarrangement) -> Lattice {
    let ell = a.dim();
    let forms: Vec<&[i64]> = a.hyperplanes().iter().map(|(f, _)| f.coeffs()).collect();
    let mut by_set: BTreeSet<(usize, Vec<usize>)> = BTreeSet::new();
    let mut spans: HashMap<Vec<usize>, Vec<Vec<Scalar>>> = HashMap::new();
    by_set.insert((0, Vec::new()));
    spans.insert(Vec::new(), Vec::new());
    let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
    for k in 1..=ell {
        let mut next = BTreeSet::new();
        for x in &frontier {
            for (h, form) in forms.iter().enumerate() {
                if x.contains(&h) {
                    continue;
                }
                let mut rows: Vec<Vec<i64>> = x.iter().map(|&i| forms[i].to_vec()).collect();
                rows.push(form.to_vec());
                let basis = rref(&rows);
                debug_assert_eq!(basis.len(), k);
                let closed: Vec<usize> = (0..forms.len()).filter(|&i| in_span(&basis, forms[i])).collect();
                if !spans.contains_key(&closed) {
                    spans.insert(closed.clone(), basis);
                    next.insert(closed);
                }
            }
        }
        for x in &next {
            by_set.insert((k, x.clone()));
        }
        frontier = next.into_iter().collect();
        if frontier.is_empty() {
            break;
        }
    }
    let flats: Vec<Flat> = by_set
        .into_iter()
        .map(|(rank, hs)| {
            let equations = spans[&hs].iter().map(|r| primitive_row(r)).collect();
            Flat { hyperplanes: hs, rank, equations }
        })
        .collect();
    let mobius = mobius_table(&flats);
    Lattice { dim: ell, flats, mobius }
}

fn leq(y: &Flat, x: &Flat) -> bool {
    y.hyperplanes.iter().all(|h| x.hyperplanes.binary_search(h).is_ok())
}

fn mobius_table(flats: &[Flat]) -> Vec<BTreeMap<usize, i64>> {
    // flats are sorted by rank, so every z < x precedes x
    let mut table: Vec<BTreeMap<usize, i64>> = Vec::with_capacity(flats.len());
    for (xi, x) in flats.iter().enumerate() {
        let mut row = BTreeMap::new();
        row.insert(xi, 1i64);
        for yi in (0..xi).rev() {
            let y = &flats[yi];
            if y.rank >= x.rank || !leq(y, x) {
                continue;
            }
            // mu(y, x) = -sum_{y < z <= x} mu(z, x)
            let s: i64 = row.iter().filter(|(&zi, _)| zi != yi && leq(y, &flats[zi])).map(|(_, &v)| v).sum();
            row.insert(yi, -s);
        }
        table.push(row);
    }
    table
}

impl Lattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Flats ordered by rank, then by index set.
    pub fn flats(&self) -> &[Flat] {
        &self.flats
    }

    pub fn flat(&self, i: usize) -> &Flat {
        &self.flats[i]
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    /// Indices of the flats in `L_k`.
    pub fn rank_indices(&self, k: usize) -> Vec<usize> {
        (0..self.flats.len()).filter(|&i| self.flats[i].rank == k).collect()
    }

    pub fn rank_count(&self, k: usize) -> usize {
        self.flats.iter().filter(|f| f.rank == k).count()
    }

    /// Index of the flat with this exact hyperplane set.
    pub fn index_of(&self, hyperplanes: &[usize]) -> Option<usize> {
        self.flats.iter().position(|f| f.hyperplanes == hyperplanes)
    }

    /// The center `∩ A`, the unique flat of maximal rank.
    pub fn top(&self) -> usize {
        self.flats.len() - 1
    }

    pub fn leq(&self, y: usize, x: usize) -> bool {
        leq(&self.flats[y], &self.flats[x])
    }

    /// Flats `y <= x`.
    pub fn below(&self, x: usize) -> Vec<usize> {
        (0..self.flats.len()).filter(|&y| self.leq(y, x)).collect()
    }

    pub fn mobius(&self, y: usize, x: usize) -> Result<i64, Error> {
        self.mobius[x].get(&y).copied().ok_or(Error::Incomparable)
    }
}

pub fn mobius(l: &Lattice, y: usize, x: usize) -> Result<i64, Error> {
    l.mobius(y, x)
}

/// `(A_X, m_X)` rewritten in the coordinates given by the first `r(X)`
/// independent forms of `A_X`.
pub fn localize(a: &Multiarrangement, x: &Flat) -> Multiarrangement {
    let hs: Vec<(&[i64], u32)> =
        x.hyperplanes.iter().map(|&i| (a.hyperplanes()[i].0.coeffs(), a.hyperplanes()[i].1)).collect();
    let mut chosen: Vec<Vec<i64>> = Vec::new();
    for (f, _) in &hs {
        let mut trial = chosen.clone();
        trial.push(f.to_vec());
        if rref(&trial).len() == trial.len() {
            chosen = trial;
        }
        if chosen.len() == x.rank {
            break;
        }
    }
    let r = chosen.len();
    let forms = hs.iter().map(|(f, m)| (coordinates(&chosen, f), *m));
    Multiarrangement::new(r, forms).expect("localized forms are nonzero")
}

/// Integer vector proportional to the coordinates of `v` in the independent
/// rows `basis`.
fn coordinates(basis: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    let r = basis.len();
    let n = v.len();
    // solve c * basis = v via rref of the transposed augmented system
    let mut rows: Vec<Vec<i64>> =
        (0..n).map(|j| basis.iter().map(|b| b[j]).chain(std::iter::once(v[j])).collect()).collect();
    rows.retain(|row| row.iter().any(|&x| x != 0));
    let red = rref(&rows);
    let mut c = vec![Scalar::zero(); r];
    for row in &red {
        let lead = row.iter().position(|x| !x.is_zero()).unwrap();
        assert!(lead < r, "form is not in the span of the chosen basis");
        c[lead] = row[r].clone();
    }
    let out = primitive_row(&c);
    let sign = if out.iter().find(|&&x| x != 0).is_some_and(|x| x.is_negative()) { -1 } else { 1 };
    out.into_iter().map(|x| x * sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::derivations::rank2_exponents;
    use proptest::prelude::*;

    fn arr(poly: &str, dim: usize) -> Multiarrangement {
        Multiarrangement::parse_default(poly, dim).unwrap()
    }

    /// Möbius values straight from the definition, over all pairs.
    fn brute_mobius(l: &Lattice, y: usize, x: usize) -> i64 {
        if y == x {
            return 1;
        }
        -(0..l.len()).filter(|&z| z != x && l.leq(y, z) && l.leq(z, x)).map(|z| brute_mobius(l, y, z)).sum::<i64>()
    }

    #[test]
    fn small_lattices() {
        let b = build_lattice(&arr("xy", 2));
        assert_eq!(b.len(), 4);
        assert_eq!(b.rank_count(2), 1);
        assert_eq!(b.mobius(0, b.top()).unwrap(), 1);

        let c = build_lattice(&arr("xy(x-y)", 2));
        assert_eq!((c.rank_count(1), c.rank_count(2)), (3, 1));
        assert_eq!(c.mobius(0, c.top()).unwrap(), 2);
        assert_eq!(c.mobius(c.top(), c.top()).unwrap(), 1);
        assert!(matches!(c.mobius(1, 2), Err(Error::Incomparable)));

        let e = build_lattice(&Multiarrangement::empty(2));
        assert_eq!(e.len(), 1);
    }

    #[test]
    fn two_triple_lines_and_four_double_points() {
        let l = build_lattice(&arr("xy(x-y)(x-z)(y-z)", 3));
        // 10 pairs of planes; two triple lines absorb three pairs each
        let mut lines = BTreeSet::new();
        let forms: Vec<Vec<i64>> =
            arr("xy(x-y)(x-z)(y-z)", 3).hyperplanes().iter().map(|h| h.0.coeffs().to_vec()).collect();
        for i in 0..5 {
            for j in i + 1..5 {
                let span = rref(&[forms[i].clone(), forms[j].clone()]);
                let closed: Vec<usize> = (0..5).filter(|&k| in_span(&span, &forms[k])).collect();
                lines.insert(closed);
            }
        }
        assert_eq!(lines.len(), 6);
        assert_eq!(l.rank_count(2), 6);
        assert_eq!(l.rank_count(3), 1);
    }

    #[test]
    fn localizations() {
        let a = arr("x^2y^2(x-y)^2(x-z)^2(y-z)^2", 3);
        let l = build_lattice(&a);
        assert_eq!(localize(&a, l.flat(0)), Multiarrangement::empty(0));
        for h in l.rank_indices(1) {
            let loc = localize(&a, l.flat(h));
            assert_eq!((loc.dim(), loc.total_multiplicity(), loc.len()), (1, 2, 1));
        }
        let xs: Vec<usize> =
            a.hyperplanes().iter().enumerate().filter(|(_, (f, _))| f.coeffs()[2] == 0).map(|(i, _)| i).collect();
        let x = l.index_of(&xs).unwrap();
        let loc = localize(&a, l.flat(x));
        assert_eq!(loc.dim(), 2);
        assert_eq!(loc.len(), 3);
        assert_eq!(loc.multiplicities(), vec![2, 2, 2]);
        assert_eq!(rank2_exponents(&loc).unwrap().d1, 3);
    }

    #[test]
    fn hyperplane_multiplicities_sum_to_total() {
        let a = arr("x^2y(x-y)(x-z)(y-z)^2", 3);
        let l = build_lattice(&a);
        let s: u32 = l.rank_indices(1).iter().map(|&i| localize(&a, l.flat(i)).total_multiplicity()).sum();
        assert_eq!(s, a.total_multiplicity());
    }

    fn rank3() -> impl Strategy<Value = Multiarrangement> {
        prop::collection::vec((prop::collection::vec(-2i64..=2, 3), 1u32..=3), 1..=6).prop_filter_map("nonzero", |hs| {
            if hs.iter().any(|(c, _)| c.iter().all(|&x| x == 0)) {
                None
            } else {
                Multiarrangement::new(3, hs).ok()
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]

        #[test]
        fn mobius_matches_definition_and_dual_recursion(a in rank3()) {
            let l = build_lattice(&a);
            for x in 0..l.len() {
                for y in l.below(x) {
                    prop_assert_eq!(l.mobius(y, x).unwrap(), brute_mobius(&l, y, x));
                    let s: i64 = (0..l.len()).filter(|&z| l.leq(y, z) && l.leq(z, x)).map(|z| l.mobius(z, x).unwrap()).sum();
                    prop_assert_eq!(s, i64::from(y == x));
                }
            }
        }

        #[test]
        fn flats_are_closed_and_ranked(a in rank3()) {
            let l = build_lattice(&a);
            let forms: Vec<&[i64]> = a.hyperplanes().iter().map(|h| h.0.coeffs()).collect();
            for f in l.flats() {
                let rows: Vec<Vec<i64>> = f.hyperplanes.iter().map(|&i| forms[i].to_vec()).collect();
                let span = rref(&rows);
                prop_assert_eq!(span.len(), f.rank);
                for (i, form) in forms.iter().enumerate() {
                    prop_assert_eq!(in_span(&span, form), f.hyperplanes.contains(&i));
                }
            }
        }

        #[test]
        fn boolean_mobius_has_unit_values(m in prop::collection::vec(1u32..=3, 3)) {
            let a = Multiarrangement::new(3, vec![(vec![1, 0, 0], m[0]), (vec![0, 1, 0], m[1]), (vec![0, 0, 1], m[2])]).unwrap();
            let l = build_lattice(&a);
            for x in 0..l.len() {
                prop_assert_eq!(l.mobius(0, x).unwrap().abs(), 1);
            }
        }

        #[test]
        fn localization_basis_choice_does_not_change_exponents(a in rank3()) {
            let l = build_lattice(&a);
            for x in l.rank_indices(2) {
                let flat = l.flat(x);
                let loc = localize(&a, flat);
                // the same flat with hyperplanes listed in reverse picks another basis
                let rev: Vec<usize> = flat.hyperplanes.iter().rev().copied().collect();
                let hs: Vec<(&[i64], u32)> = rev.iter().map(|&i| (a.hyperplanes()[i].0.coeffs(), a.hyperplanes()[i].1)).collect();
                let mut chosen: Vec<Vec<i64>> = Vec::new();
                for (f, _) in &hs {
                    let mut trial = chosen.clone();
                    trial.push(f.to_vec());
                    if rref(&trial).len() == trial.len() && chosen.len() < 2 {
                        chosen = trial;
                    }
                }
                let other = Multiarrangement::new(2, hs.iter().map(|(f, m)| (coordinates(&chosen, f), *m))).unwrap();
                let (e1, e2) = (rank2_exponents(&loc).unwrap(), rank2_exponents(&other).unwrap());
                prop_assert_eq!((e1.d1, e1.d2), (e2.d1, e2.d2));
            }
        }
    }
}
