//! Multiarrangements of central hyperplanes: normalized linear forms with
//! positive multiplicities, parsing, products and the defining polynomial.

mod input;
mod parse;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::kernel::MultiPoly;

pub use input::ArrangementInput;
pub use parse::parse_polynomial;

/// A nonzero integer linear form in canonical shape: entries with gcd 1 and
/// first nonzero entry positive. Two forms define the same hyperplane iff
/// their canonical forms are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct LinearForm(Vec<i64>);

impl LinearForm {
    pub fn new(coeffs: Vec<i64>) -> Result<Self, Error> {
        let g = coeffs.iter().fold(0i64, |g, &c| g.gcd(&c));
        if g == 0 {
            return Err(Error::ZeroForm);
        }
        let first = coeffs.iter().copied().find(|&c| c != 0).unwrap();
        let g = if first < 0 { -g } else { g };
        Ok(LinearForm(coeffs.into_iter().map(|c| c / g).collect()))
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn to_poly(&self) -> MultiPoly {
        MultiPoly::linear(&self.0)
    }

    fn padded(&self, left: usize, right: usize) -> LinearForm {
        let mut v = vec![0; left];
        v.extend_from_slice(&self.0);
        v.resize(v.len() + right, 0);
        LinearForm(v)
    }

    /// Renders as a linear expression, e.g. `x - 2y`.
    pub fn display_with(&self, vars: &[String]) -> String {
        let mut s = String::new();
        for (i, &c) in self.0.iter().enumerate().filter(|(_, &c)| c != 0) {
            if s.is_empty() {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(if c < 0 { " - " } else { " + " });
            }
            if c.abs() != 1 {
                s.push_str(&c.abs().to_string());
            }
            s.push_str(&vars[i]);
        }
        s
    }
}

impl TryFrom<Vec<i64>> for LinearForm {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self, Error> {
        LinearForm::new(v)
    }
}

impl From<LinearForm> for Vec<i64> {
    fn from(f: LinearForm) -> Vec<i64> {
        f.0
    }
}

/// Default variable names: `x, y, z, w` up to four variables, `x1..xn` beyond.
pub fn default_vars(dim: usize) -> Vec<String> {
    if dim <= 4 {
        ["x", "y", "z", "w"][..dim].iter().map(|s| s.to_string()).collect()
    } else {
        (1..=dim).map(|i| format!("x{}", i)).collect()
    }
}

/// A central multiarrangement in a vector space of dimension `dim`.
///
/// Hyperplanes are pairwise distinct and sorted lexicographically by their
/// canonical coefficient vectors; every multiplicity is at least 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Multiarrangement {
    dim: usize,
    hyperplanes: Vec<(LinearForm, u32)>,
}

impl Multiarrangement {
    /// The empty multiarrangement in dimension `dim`.
    pub fn empty(dim: usize) -> Self {
        Multiarrangement { dim, hyperplanes: Vec::new() }
    }

    /// Normalizes the forms and merges proportional ones by adding
    /// multiplicities.
    pub fn new(dim: usize, forms: impl IntoIterator<Item = (Vec<i64>, u32)>) -> Result<Self, Error> {
        let mut hs: Vec<(LinearForm, u32)> = Vec::new();
        for (coeffs, m) in forms {
            if coeffs.len() != dim {
                return Err(Error::Invalid(format!("form has {} coefficients in dimension {}", coeffs.len(), dim)));
            }
            if m == 0 {
                return Err(Error::Invalid("multiplicities must be positive".into()));
            }
            hs.push((LinearForm::new(coeffs)?, m));
        }
        hs.sort();
        let mut merged: Vec<(LinearForm, u32)> = Vec::with_capacity(hs.len());
        for (f, m) in hs {
            match merged.last_mut() {
                Some((g, k)) if *g == f => *k += m,
                _ => merged.push((f, m)),
            }
        }
        Ok(Multiarrangement { dim, hyperplanes: merged })
    }

    /// Parses a defining polynomial such as `x^3y^3(x-y)(x+y)`.
    pub fn parse(text: &str, vars: &[String]) -> Result<Self, Error> {
        let factors = parse::parse_factors(text, vars)?;
        Self::new(vars.len(), factors)
    }

    /// Parses using [`default_vars`].
    pub fn parse_default(text: &str, dim: usize) -> Result<Self, Error> {
        Self::parse(text, &default_vars(dim))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hyperplanes(&self) -> &[(LinearForm, u32)] {
        &self.hyperplanes
    }

    pub fn len(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hyperplanes.is_empty()
    }

    pub fn multiplicities(&self) -> Vec<u32> {
        self.hyperplanes.iter().map(|h| h.1).collect()
    }

    /// `|m|`
    pub fn total_multiplicity(&self) -> u32 {
        self.hyperplanes.iter().map(|h| h.1).sum()
    }

    pub fn is_simple(&self) -> bool {
        self.hyperplanes.iter().all(|h| h.1 == 1)
    }

    /// Same hyperplanes with all multiplicities set to 1.
    pub fn underlying(&self) -> Self {
        Multiarrangement { dim: self.dim, hyperplanes: self.hyperplanes.iter().map(|(f, _)| (f.clone(), 1)).collect() }
    }

    pub fn with_multiplicities(&self, mult: &[u32]) -> Result<Self, Error> {
        if mult.len() != self.len() {
            return Err(Error::Invalid("multiplicity list length".into()));
        }
        Self::new(self.dim, self.hyperplanes.iter().zip(mult).map(|((f, _), &m)| (f.coeffs().to_vec(), m)))
    }

    /// `Q~ = prod alpha_H^{m(H)}`, expanded.
    pub fn defining_poly(&self) -> MultiPoly {
        self.hyperplanes.iter().fold(MultiPoly::one(self.dim), |acc, (f, m)| acc.mul(&f.to_poly().pow(*m)))
    }

    /// The product multiarrangement in dimension `dim1 + dim2`: forms of
    /// `self` padded with zeros on the right, those of `other` on the left.
    pub fn product(&self, other: &Self) -> Self {
        let (l1, l2) = (self.dim, other.dim);
        let forms = self
            .hyperplanes
            .iter()
            .map(|(f, m)| (f.padded(0, l2), *m))
            .chain(other.hyperplanes.iter().map(|(f, m)| (f.padded(l1, 0), *m)));
        let mut hyperplanes: Vec<_> = forms.collect();
        hyperplanes.sort();
        Multiarrangement { dim: l1 + l2, hyperplanes }
    }

    /// Whether `self ⊆ other`: every hyperplane of `self` occurs in `other`
    /// with at least the same multiplicity.
    pub fn is_submultiarrangement_of(&self, other: &Self) -> bool {
        self.dim == other.dim
            && self.hyperplanes.iter().all(|(f, m)| other.hyperplanes.iter().any(|(g, k)| f == g && m <= k))
    }

    /// Renders the defining polynomial in factored form, e.g.
    /// `x^3*y^3*(x - y)*(x + y)`; the empty arrangement renders as `1`.
    pub fn display_with(&self, vars: &[String]) -> String {
        if self.hyperplanes.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .hyperplanes
            .iter()
            .map(|(f, m)| {
                let nz = f.coeffs().iter().filter(|&&c| c != 0).count();
                let base = if nz == 1 { f.display_with(vars) } else { format!("({})", f.display_with(vars)) };
                if *m == 1 {
                    base
                } else {
                    format!("{}^{}", base, m)
                }
            })
            .collect();
        parts.join("*")
    }
}

impl fmt::Display for Multiarrangement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_vars(self.dim)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vec<String> {
        default_vars(2)
    }

    #[test]
    fn ziegler_rank_two_example() {
        let a = Multiarrangement::parse("x^3 y^3 (x-y) (x+y)", &xy()).unwrap();
        assert_eq!(a.len(), 4);
        let mut mults = a.multiplicities();
        mults.sort();
        assert_eq!(mults, vec![1, 1, 3, 3]);
        assert_eq!(a.total_multiplicity(), 8);
    }

    #[test]
    fn proportional_forms_merge() {
        let a = Multiarrangement::parse("(x-y)(y-x)", &xy()).unwrap();
        assert_eq!(a.hyperplanes(), &[(LinearForm(vec![1, -1]), 2)]);
    }

    #[test]
    fn deletion_restriction_example_parses() {
        let a = Multiarrangement::parse_default("x^2y^2z(x+y+z)(x-y+z)", 3).unwrap();
        assert_eq!(a.len(), 5);
        assert_eq!(a.total_multiplicity(), 7);
        let mut m = a.multiplicities();
        m.sort();
        assert_eq!(m, vec![1, 1, 1, 2, 2]);
    }

    #[test]
    fn canonical_ordering_is_lexicographic() {
        let a = Multiarrangement::parse_default("y x (x-y) (x+y)", 2).unwrap();
        let forms: Vec<&[i64]> = a.hyperplanes().iter().map(|h| h.0.coeffs()).collect();
        assert_eq!(forms, vec![&[0, 1][..], &[1, -1], &[1, 0], &[1, 1]]);
    }

    #[test]
    fn products() {
        let a = Multiarrangement::parse("x^2", &["x".to_string()]).unwrap();
        let b = Multiarrangement::parse("x^3", &["x".to_string()]).unwrap();
        let p = a.product(&b);
        assert_eq!(p, Multiarrangement::parse_default("x^2 y^3", 2).unwrap());
        assert_eq!(Multiarrangement::empty(1).product(&Multiarrangement::empty(1)), Multiarrangement::empty(2));
        let z = Multiarrangement::parse("x^3y^3(x-y)(x+y)", &xy()).unwrap().product(&Multiarrangement::empty(1));
        assert_eq!(z.dim(), 3);
        assert_eq!(z.total_multiplicity(), 8);
    }

    #[test]
    fn defining_polynomials() {
        let vars = xy();
        let a = Multiarrangement::parse("x y", &vars).unwrap();
        assert_eq!(a.defining_poly(), parse_polynomial("x*y", &vars).unwrap());
        assert_eq!(Multiarrangement::empty(2).defining_poly(), MultiPoly::one(2));
        let b = Multiarrangement::parse("x^2 y", &vars).unwrap();
        assert_eq!(b.defining_poly(), parse_polynomial("x^2*y", &vars).unwrap());
    }

    #[test]
    fn display_reparses() {
        let a = Multiarrangement::parse_default("x^2y^2z(x+y+z)(x-y+z)", 3).unwrap();
        let s = a.to_string();
        assert_eq!(Multiarrangement::parse_default(&s, 3).unwrap(), a);
    }
}
