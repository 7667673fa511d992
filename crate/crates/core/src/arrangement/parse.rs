//! Parsers for defining polynomials (products of linear forms) and for general
//! polynomial expressions.
//!
//! Variable names are matched greedily against the supplied list, so with
//! variables `x, y, z` the input `x^2y^2z` reads as `x^2 * y^2 * z`.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::kernel::{MultiPoly, Scalar};

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    vars: &'a [String],
}

impl<'a> Cursor<'a> {
    fn new(src: &'a str, vars: &'a [String]) -> Self {
        Cursor { src, pos: 0, vars }
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, Error> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while let Some(c) = self.rest().chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.rest().chars().next()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += c.len_utf8();
            true
        } else {
            false
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn uint(&mut self) -> Result<BigInt, Error> {
        self.skip_ws();
        let digits: usize = self.rest().chars().take_while(char::is_ascii_digit).count();
        if digits == 0 {
            return self.err("expected an integer");
        }
        let n: BigInt = self.rest()[..digits].parse().expect("ascii digits");
        self.pos += digits;
        Ok(n)
    }

    fn small_uint(&mut self) -> Result<u32, Error> {
        let start = self.pos;
        let n = self.uint()?;
        u32::try_from(n).map_err(|_| Error::Parse { pos: start, msg: "exponent too large".into() })
    }

    /// Longest variable name that prefixes the remaining input.
    fn var(&mut self) -> Option<usize> {
        self.skip_ws();
        let rest = self.rest();
        let best = self
            .vars
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_empty() && rest.starts_with(v.as_str()))
            .max_by_key(|(_, v)| v.len())?;
        self.pos += best.1.len();
        Some(best.0)
    }

    fn unknown_identifier<T>(&mut self) -> Result<T, Error> {
        let name: String = self.rest().chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
        self.err(format!("unknown variable `{}`", name))
    }

    fn at_identifier(&mut self) -> bool {
        self.peek().is_some_and(|c| c.is_alphabetic() || c == '_')
    }
}

/// Parses a product of linear factors into `(coefficient vector, multiplicity)`
/// pairs, unnormalized and unmerged. The single token `1` yields no factors.
pub(crate) fn parse_factors(text: &str, vars: &[String]) -> Result<Vec<(Vec<i64>, u32)>, Error> {
    let mut cur = Cursor::new(text, vars);
    if cur.at_end() {
        return cur.err("empty input; use `1` for the empty arrangement");
    }
    if cur.eat('1') {
        if cur.at_end() {
            return Ok(Vec::new());
        }
        return cur.err("constant factors are not allowed");
    }
    let mut out = Vec::new();
    loop {
        let atom = if cur.eat('(') {
            let form = linear(&mut cur)?;
            if !cur.eat(')') {
                return cur.err("expected `)`; factors must be linear");
            }
            form
        } else if let Some(i) = cur.var() {
            let mut e = vec![0i64; vars.len()];
            e[i] = 1;
            e
        } else if cur.at_identifier() {
            return cur.unknown_identifier();
        } else {
            return cur.err("expected a variable or a parenthesized linear form");
        };
        let mult = if cur.eat('^') {
            let k = cur.small_uint()?;
            if k == 0 {
                return cur.err("exponent must be at least 1");
            }
            k
        } else {
            1
        };
        if atom.iter().all(|&c| c == 0) {
            return Err(Error::ZeroForm);
        }
        out.push((atom, mult));
        cur.eat('*');
        if cur.at_end() {
            return Ok(out);
        }
    }
}

/// `linear := ['+'|'-'] term (('+'|'-') term)*`, `term := [uint ['*']] var`.
fn linear(cur: &mut Cursor<'_>) -> Result<Vec<i64>, Error> {
    let mut coeffs = vec![0i64; cur.vars.len()];
    let mut first = true;
    loop {
        let neg = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            break;
        };
        first = false;
        let c: i64 = if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
            let start = cur.pos;
            let n = cur.uint()?;
            cur.eat('*');
            i64::try_from(n).map_err(|_| Error::Parse { pos: start, msg: "coefficient too large".into() })?
        } else {
            1
        };
        let Some(i) = cur.var() else {
            if cur.at_identifier() {
                return cur.unknown_identifier();
            }
            if cur.at_end() {
                return cur.err("unexpected end of input; expected a variable");
            }
            return cur.err("constant term: only linear forms through the origin are allowed");
        };
        if cur.peek() == Some('^') || cur.product_follows() {
            return cur.err("nonlinear factor");
        }
        coeffs[i] += if neg { -c } else { c };
    }
    Ok(coeffs)
}

impl Cursor<'_> {
    /// Whether a multiplicative factor follows, with or without `*`.
    fn product_follows(&mut self) -> bool {
        let save = self.pos;
        self.eat('*');
        let found = self.peek() == Some('(') || self.var().is_some();
        self.pos = save;
        found
    }
}

/// Parses a general polynomial expression with integer or `a/b` rational
/// literals, `+ - *`, `^` with nonnegative integer exponents, parentheses and
/// implicit multiplication.
pub fn parse_polynomial(text: &str, vars: &[String]) -> Result<MultiPoly, Error> {
    let mut cur = Cursor::new(text, vars);
    let p = expr(&mut cur)?;
    if !cur.at_end() {
        return cur.err("unexpected trailing input");
    }
    Ok(p)
}

fn expr(cur: &mut Cursor<'_>) -> Result<MultiPoly, Error> {
    let n = cur.vars.len();
    let mut acc = MultiPoly::zero(n);
    let mut first = true;
    loop {
        let neg = if cur.eat('-') {
            true
        } else if cur.eat('+') || first {
            false
        } else {
            break;
        };
        first = false;
        let t = term(cur)?;
        acc = if neg { acc.sub(&t) } else { acc.add(&t) };
    }
    Ok(acc)
}

fn term(cur: &mut Cursor<'_>) -> Result<MultiPoly, Error> {
    let mut acc = power(cur)?;
    loop {
        if cur.eat('*')
            || matches!(cur.peek(), Some(c) if c == '(' || c.is_ascii_digit() || c.is_alphabetic() || c == '_')
        {
            acc = acc.mul(&power(cur)?);
        } else {
            return Ok(acc);
        }
    }
}

fn power(cur: &mut Cursor<'_>) -> Result<MultiPoly, Error> {
    let base = primary(cur)?;
    if cur.eat('^') {
        let k = cur.small_uint()?;
        Ok(base.pow(k))
    } else {
        Ok(base)
    }
}

fn primary(cur: &mut Cursor<'_>) -> Result<MultiPoly, Error> {
    let n = cur.vars.len();
    if cur.eat('(') {
        let e = expr(cur)?;
        if !cur.eat(')') {
            return cur.err("expected `)`");
        }
        return Ok(e);
    }
    if cur.peek().is_some_and(|c| c.is_ascii_digit()) {
        let num = cur.uint()?;
        let den = if cur.rest().starts_with('/') {
            cur.pos += 1;
            let d = cur.uint()?;
            if d.is_zero() {
                return cur.err("zero denominator");
            }
            d
        } else {
            BigInt::one()
        };
        return Ok(MultiPoly::constant(n, Scalar::new(num, den)));
    }
    if let Some(i) = cur.var() {
        return Ok(MultiPoly::var(n, i));
    }
    if cur.at_identifier() {
        return cur.unknown_identifier();
    }
    cur.err("expected a number, variable or `(`")
}
