//! Exact polynomial types: sparse multivariate polynomials over the rationals,
//! univariate polynomials in `t`, and bivariate polynomials in `(t, q)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::Error;

/// Exact rational scalar. `BigRational` keeps itself in lowest terms with a
/// positive denominator.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub(crate) fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

/// Number of monomials of degree `d` in `nvars` variables.
pub fn monomial_count(nvars: usize, d: usize) -> usize {
    if nvars == 0 {
        return usize::from(d == 0);
    }
    let c = binomial((d + nvars - 1) as i64, (nvars - 1) as i64);
    usize::try_from(c).expect("monomial count fits in usize")
}

/// All exponent vectors of total degree `d` in `nvars` variables, in
/// descending lexicographic order (`x^d` first).
pub fn monomials(nvars: usize, d: u32) -> Vec<Vec<u32>> {
    fn rec(nvars: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() + 1 == nvars {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=d).rev() {
            prefix.push(e);
            rec(nvars, d - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    rec(nvars, d, &mut Vec::with_capacity(nvars), &mut out);
    out
}

/// Sparse polynomial in `nvars` variables; no zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Scalar>,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, Scalar::one())
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, Scalar::one());
        p
    }

    /// The linear form `sum coeffs[i] * x_i`.
    pub fn linear(coeffs: &[i64]) -> Self {
        let n = coeffs.len();
        let mut p = Self::zero(n);
        for (i, &c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            p.add_term(e, int(c));
        }
        p
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Vec<u32>, Scalar)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.len(), nvars, "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: &[u32]) -> Scalar {
        self.terms.get(exp).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add_term(&mut self, exp: Vec<u32>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exp) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    /// Common total degree of all terms. `Ok(None)` for the zero polynomial,
    /// an error when the polynomial is inhomogeneous.
    pub fn homogeneous_degree(&self) -> Result<Option<u32>, Error> {
        let mut deg = None;
        for e in self.terms.keys() {
            let d: u32 = e.iter().sum();
            match deg {
                None => deg = Some(d),
                Some(d0) if d0 != d => return Err(Error::Invalid("polynomial is not homogeneous".into())),
                _ => {}
            }
        }
        Ok(deg)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MultiPoly { nvars: self.nvars, terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Scalar::one()))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn derivative(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut e2 = e.clone();
                e2[i] -= 1;
                out.add_term(e2, c * int(i64::from(e[i])));
            }
        }
        out
    }

    /// Re-embeds into `nvars` variables, placing variable `i` at `offset + i`.
    pub fn embed(&self, nvars: usize, offset: usize) -> Self {
        assert!(offset + self.nvars <= nvars);
        let mut out = Self::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            e2[offset..offset + self.nvars].copy_from_slice(e);
            out.add_term(e2, c.clone());
        }
        out
    }

    /// Exact division; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem_lex(divisor);
        r.is_zero().then_some(q)
    }

    /// Multivariate division by a single polynomial using the leading term
    /// in descending lex order. The remainder is zero iff `divisor` divides
    /// `self`.
    pub fn div_rem_lex(&self, divisor: &Self) -> (Self, Self) {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let (lead_e, lead_c) = divisor.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())).unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.nvars);
        let mut out_rem = Self::zero(self.nvars);
        while let Some((e, c)) = rem.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            if e.iter().zip(&lead_e).all(|(a, b)| a >= b) {
                let qe: Vec<u32> = e.iter().zip(&lead_e).map(|(a, b)| a - b).collect();
                let qc = &c / &lead_c;
                let mono = Self::from_terms(self.nvars, [(qe.clone(), qc.clone())]);
                rem = rem.sub(&mono.mul(divisor));
                quot.add_term(qe, qc);
            } else {
                rem.terms.remove(&e);
                out_rem.add_term(e, c);
            }
        }
        (quot, out_rem)
    }

    /// Renders with the given variable names, e.g. `x^2*y - 3*z`.
    pub fn display_with<'a>(&'a self, vars: &'a [String]) -> impl fmt::Display + 'a {
        DisplayMulti { poly: self, vars }
    }
}

struct DisplayMulti<'a> {
    poly: &'a MultiPoly,
    vars: &'a [String],
}

impl fmt::Display for DisplayMulti<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.poly.terms.iter().rev() {
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| if k == 1 { self.vars[i].clone() } else { format!("{}^{}", self.vars[i], k) })
                .collect();
            write_signed_term(f, c, &mono.join("*"), "*", first)?;
            first = false;
        }
        Ok(())
    }
}

fn write_signed_term(f: &mut fmt::Formatter<'_>, c: &Scalar, mono: &str, sep: &str, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    if first {
        if neg {
            write!(f, "-")?;
        }
    } else if neg {
        write!(f, " - ")?;
    } else {
        write!(f, " + ")?;
    }
    if mono.is_empty() {
        write!(f, "{}", abs)
    } else if abs.is_one() {
        write!(f, "{}", mono)
    } else {
        write!(f, "{}{}{}", abs, sep, mono)
    }
}

/// Univariate polynomial, coefficients stored in ascending powers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct UniPoly {
    coeffs: Vec<Scalar>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_coeffs(vec![Scalar::one()])
    }

    /// `t^k`
    pub fn monomial(k: usize, c: Scalar) -> Self {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Self::from_coeffs(v)
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// `prod (t - r)` over the given roots.
    pub fn from_roots(roots: &[i64]) -> Self {
        roots.iter().fold(Self::one(), |acc, &r| acc.mul(&Self::from_ints(&[-r, 1])))
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn neg(&self) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        self.coeffs.iter().rev().fold(Scalar::zero(), |acc, c| acc * x + c)
    }

    /// `p(-t)`
    pub fn negate_var(&self) -> Self {
        Self::from_coeffs(
            self.coeffs.iter().enumerate().map(|(i, c)| if i % 2 == 1 { -c } else { c.clone() }).collect(),
        )
    }

    /// Divides by `(1 - q)`, returning `None` if the division is inexact.
    pub fn div_one_minus(&self) -> Option<Self> {
        // p = (1 - q) s  <=>  s_k = sum_{i <= k} p_i, with sum of all p_i = 0.
        let mut acc = Scalar::zero();
        let mut out = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            acc += c;
            out.push(acc.clone());
        }
        if !acc.is_zero() {
            return None;
        }
        out.pop();
        Some(Self::from_coeffs(out))
    }

    /// Whether every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn display_var<'a>(&'a self, var: &'a str) -> impl fmt::Display + 'a {
        DisplayUni { poly: self, var }
    }
}

struct DisplayUni<'a> {
    poly: &'a UniPoly,
    var: &'a str,
}

impl fmt::Display for DisplayUni<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.poly.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match k {
                0 => String::new(),
                1 => self.var.to_string(),
                _ => format!("{}^{}", self.var, k),
            };
            write_signed_term(f, c, &mono, "", first)?;
            first = false;
        }
        Ok(())
    }
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_var("t"))
    }
}

/// Polynomial in `(t, q)`, stored as `sum_i t^i * c_i(q)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct BiPoly {
    t_coeffs: Vec<UniPoly>,
}

impl BiPoly {
    pub fn zero() -> Self {
        BiPoly { t_coeffs: Vec::new() }
    }

    pub fn from_t_coeffs(mut t_coeffs: Vec<UniPoly>) -> Self {
        while t_coeffs.last().is_some_and(UniPoly::is_zero) {
            t_coeffs.pop();
        }
        BiPoly { t_coeffs }
    }

    /// A polynomial in `q` alone.
    pub fn from_q(p: UniPoly) -> Self {
        Self::from_t_coeffs(vec![p])
    }

    /// `t^i q^j` with coefficient `c`.
    pub fn monomial(i: usize, j: usize, c: Scalar) -> Self {
        let mut v = vec![UniPoly::zero(); i + 1];
        v[i] = UniPoly::monomial(j, c);
        Self::from_t_coeffs(v)
    }

    pub fn is_zero(&self) -> bool {
        self.t_coeffs.is_empty()
    }

    /// Coefficient of `t^i` as a polynomial in `q`.
    pub fn t_coeff(&self, i: usize) -> UniPoly {
        self.t_coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn t_degree(&self) -> Option<usize> {
        self.t_coeffs.len().checked_sub(1)
    }

    pub fn q_degree(&self) -> Option<usize> {
        self.t_coeffs.iter().filter_map(UniPoly::degree).max()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Scalar {
        self.t_coeff(i).coeff(j)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.t_coeffs.len().max(other.t_coeffs.len());
        Self::from_t_coeffs((0..n).map(|i| self.t_coeff(i).add(&other.t_coeff(i))).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![UniPoly::zero(); self.t_coeffs.len() + other.t_coeffs.len() - 1];
        for (i, a) in self.t_coeffs.iter().enumerate() {
            for (j, b) in other.t_coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::from_t_coeffs(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_t_coeffs(self.t_coeffs.iter().map(|p| p.scale(c)).collect())
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::from_q(UniPoly::one()), |acc, _| acc.mul(self))
    }

    /// Exact division by `(1 - q)`; `None` when inexact.
    pub fn div_one_minus_q(&self) -> Option<Self> {
        let parts: Option<Vec<UniPoly>> = self.t_coeffs.iter().map(UniPoly::div_one_minus).collect();
        parts.map(Self::from_t_coeffs)
    }

    /// Substitutes `q = value`, leaving a polynomial in `t`.
    pub fn eval_q(&self, value: &Scalar) -> UniPoly {
        UniPoly::from_coeffs(self.t_coeffs.iter().map(|p| p.eval(value)).collect())
    }

    /// `p(-t, q)`
    pub fn negate_t(&self) -> Self {
        Self::from_t_coeffs(
            self.t_coeffs.iter().enumerate().map(|(i, p)| if i % 2 == 1 { p.neg() } else { p.clone() }).collect(),
        )
    }

    /// Nonzero terms as `(t power, q power, coefficient)`, ascending.
    pub fn terms(&self) -> Vec<(usize, usize, Scalar)> {
        let mut out = Vec::new();
        for (i, p) in self.t_coeffs.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    out.push((i, j, c.clone()));
                }
            }
        }
        out
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, j, c) in self.terms().into_iter().rev() {
            let mut parts = Vec::new();
            match i {
                0 => {}
                1 => parts.push("t".to_string()),
                _ => parts.push(format!("t^{}", i)),
            }
            match j {
                0 => {}
                1 => parts.push("q".to_string()),
                _ => parts.push(format!("q^{}", j)),
            }
            write_signed_term(f, &c, &parts.join("*"), "*", first)?;
            first = false;
        }
        Ok(())
    }
}
