//! Graded pieces of `D^p(A, m)`, p-derivations, wedge products, the Saito
//! criterion for multiarrangements and exponents in rank two.

pub mod graded;
pub mod system;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arrangement::{default_vars, parse_polynomial, Multiarrangement};
use crate::error::Error;
use crate::kernel::{monomials, MultiPoly, Scalar};
use graded::{GradedSequence, SparseVec};
use system::subsets;

/// `theta = sum_I f_I * d_I` with `I` ranging over sorted `p`-subsets of the
/// coordinates. `d_I(g_1, ..., g_p) = det[dg_j / dx_{i_k}]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDerivation {
    dim: usize,
    p: usize,
    coeffs: BTreeMap<Vec<usize>, MultiPoly>,
}

/// Sign of the shuffle taking the concatenation `a ++ b` to sorted order.
fn shuffle_sign(a: &[usize], b: &[usize]) -> i64 {
    let inversions: usize = a.iter().map(|x| b.iter().filter(|y| *y < x).count()).sum();
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

fn det(m: Vec<Vec<MultiPoly>>, nvars: usize) -> MultiPoly {
    let n = m.len();
    if n == 0 {
        return MultiPoly::one(nvars);
    }
    let mut acc = MultiPoly::zero(nvars);
    for (j, entry) in m[0].iter().enumerate() {
        if entry.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
            .collect();
        let term = entry.mul(&det(minor, nvars));
        acc = if j % 2 == 0 { acc.add(&term) } else { acc.sub(&term) };
    }
    acc
}

impl PDerivation {
    pub fn zero(dim: usize, p: usize) -> Self {
        PDerivation { dim, p, coeffs: BTreeMap::new() }
    }

    /// Builds from `(subset, coefficient)` pairs. Subsets may be unsorted; the
    /// coefficient is multiplied by the sign of the sorting permutation.
    pub fn new(
        dim: usize,
        p: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, MultiPoly)>,
    ) -> Result<Self, Error> {
        if p > dim {
            return Err(Error::OutOfRange(format!("p = {} exceeds dimension {}", p, dim)));
        }
        let mut theta = PDerivation::zero(dim, p);
        for (subset, f) in entries {
            if subset.len() != p || subset.iter().any(|&i| i >= dim) {
                return Err(Error::Invalid(format!("{:?} is not a {}-subset of 0..{}", subset, p, dim)));
            }
            if f.nvars() != dim {
                return Err(Error::Invalid("coefficient has the wrong number of variables".into()));
            }
            let mut sorted = subset.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if sorted.len() != p {
                return Err(Error::Invalid(format!("repeated index in {:?}", subset)));
            }
            let inversions: usize = (0..p).map(|a| (a + 1..p).filter(|&b| subset[b] < subset[a]).count()).sum();
            let f = if inversions.is_multiple_of(2) { f } else { MultiPoly::zero(dim).sub(&f) };
            theta.add_to(sorted, &f);
        }
        Ok(theta)
    }

    /// `f * d/dx_i`
    pub fn coordinate(f: MultiPoly, i: usize) -> Self {
        let dim = f.nvars();
        let mut theta = PDerivation::zero(dim, 1);
        theta.add_to(vec![i], &f);
        theta
    }

    fn add_to(&mut self, subset: Vec<usize>, f: &MultiPoly) {
        let e = self.coeffs.entry(subset).or_insert_with(|| MultiPoly::zero(self.dim));
        *e = e.add(f);
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, subset: &[usize]) -> MultiPoly {
        self.coeffs.get(subset).cloned().unwrap_or_else(|| MultiPoly::zero(self.dim))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &MultiPoly)> {
        self.coeffs.iter()
    }

    /// Common degree of the coefficients; `None` for the zero derivation.
    pub fn degree(&self) -> Result<Option<u32>, Error> {
        let mut deg = None;
        for f in self.coeffs.values() {
            let d = f.homogeneous_degree().map_err(|_| Error::Invalid("coefficients are not homogeneous".into()))?;
            match (deg, d) {
                (_, None) => {}
                (None, Some(d)) => deg = Some(d),
                (Some(a), Some(b)) if a != b => {
                    return Err(Error::Invalid("coefficients have different degrees".into()));
                }
                _ => {}
            }
        }
        Ok(deg)
    }

    /// `theta(g_1, ..., g_p)`
    pub fn evaluate(&self, args: &[MultiPoly]) -> Result<MultiPoly, Error> {
        if args.len() != self.p {
            return Err(Error::Invalid(format!("expected {} arguments, got {}", self.p, args.len())));
        }
        let grads: Vec<Vec<MultiPoly>> =
            args.iter().map(|g| (0..self.dim).map(|i| g.derivative(i)).collect()).collect();
        let mut acc = MultiPoly::zero(self.dim);
        for (subset, f) in &self.coeffs {
            let m: Vec<Vec<MultiPoly>> = subset.iter().map(|&i| grads.iter().map(|g| g[i].clone()).collect()).collect();
            acc = acc.add(&f.mul(&det(m, self.dim)));
        }
        Ok(acc)
    }

    /// Checks `theta(alpha_H, x_J) in alpha_H^{m(H)} S` for every hyperplane
    /// and every `(p-1)`-subset `J`.
    pub fn check_membership(&self, a: &Multiarrangement) -> Result<(), Error> {
        if a.dim() != self.dim {
            return Err(Error::Invalid("derivation and arrangement live in different dimensions".into()));
        }
        if self.p == 0 {
            return Ok(());
        }
        for (h, (form, m)) in a.hyperplanes().iter().enumerate() {
            let alpha = form.to_poly();
            let power = alpha.pow(*m);
            for j in subsets(self.dim, self.p - 1) {
                let mut args = vec![alpha.clone()];
                args.extend(j.iter().map(|&i| MultiPoly::var(self.dim, i)));
                let g = self.evaluate(&args)?;
                if g.div_exact(&power).is_none() {
                    return Err(Error::NotInModule { p: self.p, hyperplane: h });
                }
            }
        }
        Ok(())
    }

    pub fn wedge(&self, other: &Self) -> Result<Self, Error> {
        if self.dim != other.dim {
            return Err(Error::Invalid("wedge of derivations in different dimensions".into()));
        }
        if self.p + other.p > self.dim {
            return Err(Error::OutOfRange(format!("wedge degree {} exceeds dimension {}", self.p + other.p, self.dim)));
        }
        let mut out = PDerivation::zero(self.dim, self.p + other.p);
        for (i, f) in &self.coeffs {
            for (j, g) in &other.coeffs {
                if i.iter().any(|x| j.contains(x)) {
                    continue;
                }
                let mut k: Vec<usize> = i.iter().chain(j).copied().collect();
                k.sort_unstable();
                let fg = f.mul(g);
                let term = if shuffle_sign(i, j) == 1 { fg } else { MultiPoly::zero(self.dim).sub(&fg) };
                out.add_to(k, &term);
            }
        }
        Ok(out)
    }

    pub fn display_with<'a>(&'a self, vars: &'a [String]) -> impl fmt::Display + 'a {
        DisplayDerivation { theta: self, vars }
    }

    /// `(subset of variable names, coefficient string)` pairs.
    pub fn entries(&self, vars: &[String]) -> Vec<DerivationEntry> {
        self.coeffs
            .iter()
            .map(|(i, f)| DerivationEntry {
                subset: i.iter().map(|&k| SubsetIndex::Name(vars[k].clone())).collect(),
                coeffs: f.display_with(vars).to_string(),
            })
            .collect()
    }

    pub fn from_entries(entries: &[DerivationEntry], vars: &[String]) -> Result<Self, Error> {
        let p = entries.first().map_or(1, |e| e.subset.len());
        let parsed = entries
            .iter()
            .map(|e| {
                let subset = e.subset.iter().map(|s| s.resolve(vars)).collect::<Result<Vec<_>, _>>()?;
                Ok((subset, parse_polynomial(&e.coeffs, vars)?))
            })
            .collect::<Result<Vec<_>, Error>>()?;
        PDerivation::new(vars.len(), p, parsed)
    }

    fn from_vector(dim: usize, p: usize, d: u32, v: &SparseVec) -> Self {
        let blocks = subsets(dim, p);
        let monos = monomials(dim, d);
        let bs = monos.len();
        let mut per_block: BTreeMap<usize, Vec<(Vec<u32>, Scalar)>> = BTreeMap::new();
        for (idx, x) in v {
            per_block.entry(idx / bs).or_default().push((monos[idx % bs].clone(), Scalar::from_integer(x.clone())));
        }
        let coeffs =
            per_block.into_iter().map(|(b, terms)| (blocks[b].clone(), MultiPoly::from_terms(dim, terms))).collect();
        PDerivation { dim, p, coeffs }
    }
}

struct DisplayDerivation<'a> {
    theta: &'a PDerivation,
    vars: &'a [String],
}

impl fmt::Display for DisplayDerivation<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.theta.is_zero() {
            return write!(f, "0");
        }
        for (n, (subset, c)) in self.theta.coeffs.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            let names: Vec<&str> = subset.iter().map(|&i| self.vars[i].as_str()).collect();
            write!(f, "({})*d[{}]", c.display_with(self.vars), names.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Display for PDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_vars(self.dim)))
    }
}

/// A coordinate index given by position or by variable name.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SubsetIndex {
    Position(usize),
    Name(String),
}

impl SubsetIndex {
    fn resolve(&self, vars: &[String]) -> Result<usize, Error> {
        match self {
            SubsetIndex::Position(i) if *i < vars.len() => Ok(*i),
            SubsetIndex::Position(i) => Err(Error::OutOfRange(format!("coordinate index {}", i))),
            SubsetIndex::Name(n) => {
                vars.iter().position(|v| v == n).ok_or_else(|| Error::Invalid(format!("unknown variable `{}`", n)))
            }
        }
    }
}

/// One term `f_I * d_I` in serialized form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DerivationEntry {
    #[serde(rename = "I")]
    pub subset: Vec<SubsetIndex>,
    pub coeffs: String,
}

type MemoKey = (Multiarrangement, usize);

fn memo() -> &'static Mutex<HashMap<MemoKey, Vec<usize>>> {
    static MEMO: OnceLock<Mutex<HashMap<MemoKey, Vec<usize>>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Records dimensions computed elsewhere (by a [`GradedSequence`]).
pub(crate) fn remember(a: &Multiarrangement, p: usize, dims: &[usize]) {
    let mut memo = memo().lock().expect("memo lock");
    let entry = memo.entry((a.clone(), p)).or_default();
    if dims.len() > entry.len() {
        *entry = dims.to_vec();
    }
}

/// `dim_Q D^p(A, m)_d`
pub fn graded_dimension(a: &Multiarrangement, p: usize, d: u32) -> Result<usize, Error> {
    if p > a.dim() {
        return Err(Error::OutOfRange(format!("p = {} exceeds dimension {}", p, a.dim())));
    }
    if let Some(dims) = memo().lock().expect("memo lock").get(&(a.clone(), p)) {
        if let Some(&k) = dims.get(d as usize) {
            return Ok(k);
        }
    }
    let mut seq = GradedSequence::new(a, p);
    let k = seq.advance_to(d);
    remember(a, p, seq.dims());
    Ok(k)
}

/// A basis of `D^p(A, m)_d` with primitive integer coefficients.
pub fn graded_basis(a: &Multiarrangement, p: usize, d: u32) -> Result<Vec<PDerivation>, Error> {
    if p > a.dim() {
        return Err(Error::OutOfRange(format!("p = {} exceeds dimension {}", p, a.dim())));
    }
    let mut seq = GradedSequence::new(a, p);
    seq.advance_to(d);
    remember(a, p, seq.dims());
    Ok(seq.basis().iter().map(|v| PDerivation::from_vector(a.dim(), p, d, v)).collect())
}

/// Saito's criterion: returns `c` with `det[theta_i(x_j)] = c * Q~`, or 0 when
/// the determinant vanishes.
pub fn ziegler_check(a: &Multiarrangement, thetas: &[PDerivation]) -> Result<Scalar, Error> {
    let ell = a.dim();
    if thetas.len() != ell {
        return Err(Error::Invalid(format!("expected {} derivations, got {}", ell, thetas.len())));
    }
    for theta in thetas {
        if theta.p != 1 || theta.dim != ell {
            return Err(Error::Invalid("basis elements must be 1-derivations in the ambient dimension".into()));
        }
        theta.check_membership(a)?;
    }
    let mut total = 0u32;
    for theta in thetas {
        match theta.degree()? {
            Some(d) => total += d,
            None => return Ok(Scalar::zero()),
        }
    }
    if total != a.total_multiplicity() {
        return Err(Error::DegreeMismatch { got: total, expected: a.total_multiplicity() });
    }
    let mut acc: Option<PDerivation> = None;
    for theta in thetas {
        acc = Some(match acc {
            None => theta.clone(),
            Some(prev) => prev.wedge(theta)?,
        });
    }
    let full: Vec<usize> = (0..ell).collect();
    let d = acc.map_or_else(|| MultiPoly::one(ell), |w| w.coeff(&full));
    if d.is_zero() {
        return Ok(Scalar::zero());
    }
    let q = d.div_exact(&a.defining_poly()).ok_or(Error::NotSaitoBasis)?;
    match q.homogeneous_degree() {
        Ok(Some(0)) => Ok(q.coeff(&vec![0; ell])),
        _ => Err(Error::NotSaitoBasis),
    }
}

/// Exponents of a rank-two multiarrangement with a certified basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExponentPair {
    pub d1: u32,
    pub d2: u32,
    pub basis: [PDerivation; 2],
}

pub fn rank2_exponents(a: &Multiarrangement) -> Result<ExponentPair, Error> {
    if a.dim() != 2 {
        return Err(Error::Invalid(format!("rank-two solver needs 2 variables, got {}", a.dim())));
    }
    let total = a.total_multiplicity();
    let mut seq = GradedSequence::new(a, 1);
    let mut d1 = None;
    for d in 0..=total {
        if seq.advance_to(d) > 0 {
            d1 = Some(d);
            break;
        }
    }
    let d1 = d1.ok_or(Error::SearchExhausted(total))?;
    let theta1 = PDerivation::from_vector(2, 1, d1, &seq.basis()[0]);
    let d2 = total - d1;
    if d2 < d1 {
        return Err(Error::SearchExhausted(total));
    }
    seq.advance_to(d2);
    remember(a, 1, seq.dims());
    for v in seq.basis() {
        let theta2 = PDerivation::from_vector(2, 1, d2, &v);
        let pair = [theta1.clone(), theta2];
        if !ziegler_check(a, &pair)?.is_zero() {
            return Ok(ExponentPair { d1, d2, basis: pair });
        }
    }
    Err(Error::SearchExhausted(total))
}

impl ExponentPair {
    /// Scalar `c` with `det = c * Q~` for the stored basis.
    pub fn ziegler_scalar(&self, a: &Multiarrangement) -> Result<Scalar, Error> {
        ziegler_check(a, &self.basis)
    }
}
