//! Hilbert numerators of `D^p`, the polynomial `psi(A, m; t, q)`, the
//! characteristic and Poincaré polynomials and the local-global identities.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::arrangement::Multiarrangement;
use crate::derivations::graded::GradedSequence;
use crate::derivations::remember;
use crate::error::Error;
use crate::kernel::poly::binomial;
use crate::kernel::{int, BiPoly, UniPoly};
use crate::lattice::{build_lattice, localize, Lattice};

/// Horizon policy for Hilbert numerators. `None` fields take the defaults:
/// window `ell + 2`, cap `4 * (p|m| + ell + 2)`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct Policy {
    pub window: Option<usize>,
    pub max_horizon: Option<u32>,
}

impl Policy {
    fn widened(self, a: &Multiarrangement, p: usize) -> Policy {
        let ell = a.dim();
        let window = self.window.unwrap_or(ell + 2);
        let cap = self.max_horizon.unwrap_or(4 * initial_horizon(a, p));
        Policy { window: Some(2 * window), max_horizon: Some(2 * cap) }
    }
}

fn initial_horizon(a: &Multiarrangement, p: usize) -> u32 {
    p as u32 * a.total_multiplicity() + a.dim() as u32 + 2
}

/// `H(D^p, q) = P_p(q) / (1 - q)^ell`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GradedSeries {
    pub p: usize,
    pub ell: usize,
    /// Coefficients of `P_p` in ascending powers of `q`.
    pub numerator: Vec<i64>,
    pub window: usize,
    /// Highest degree whose dimension was computed.
    pub horizon: u32,
    /// `dim D^p_d` for `d = 0..=horizon`.
    pub dims: Vec<usize>,
}

impl GradedSeries {
    pub fn numerator_poly(&self) -> UniPoly {
        UniPoly::from_ints(&self.numerator)
    }

    /// `dim D^p_d` recovered from the numerator.
    pub fn dimension_from_numerator(&self, d: u32) -> i64 {
        let ell = self.ell as i64;
        self.numerator
            .iter()
            .enumerate()
            .map(|(k, &n)| {
                let j = d as i64 - k as i64;
                if j < 0 {
                    0
                } else if ell == 0 {
                    i64::from(j == 0) * n
                } else {
                    n * binomial(j + ell - 1, ell - 1).to_i64().expect("small binomial")
                }
            })
            .sum()
    }
}

/// `n_k = sum_i (-1)^i C(ell, i) h_{k-i}`
fn numerator_from_dims(dims: &[usize], ell: usize) -> Vec<i64> {
    (0..dims.len())
        .map(|k| {
            (0..=ell.min(k))
                .map(|i| {
                    let c = binomial(ell as i64, i as i64).to_i64().expect("small binomial");
                    let s = if i % 2 == 0 { 1 } else { -1 };
                    s * c * dims[k - i] as i64
                })
                .sum()
        })
        .collect()
}

type SeriesKey = (Multiarrangement, usize, Policy);

fn series_memo() -> &'static Mutex<HashMap<SeriesKey, GradedSeries>> {
    static MEMO: OnceLock<Mutex<HashMap<SeriesKey, GradedSeries>>> = OnceLock::new();
    MEMO.get_or_init(|| Mutex::new(HashMap::new()))
}

pub fn hilbert_numerator(a: &Multiarrangement, p: usize, policy: Policy) -> Result<GradedSeries, Error> {
    let ell = a.dim();
    if p > ell {
        return Err(Error::OutOfRange(format!("p = {} exceeds dimension {}", p, ell)));
    }
    let key = (a.clone(), p, policy);
    if let Some(s) = series_memo().lock().expect("memo lock").get(&key) {
        return Ok(s.clone());
    }
    let window = policy.window.unwrap_or(ell + 2).max(1);
    let start = initial_horizon(a, p);
    let cap = policy.max_horizon.unwrap_or(4 * start);
    let mut horizon = start.min(cap);
    let mut seq = GradedSequence::new(a, p);
    loop {
        seq.advance_to(horizon);
        let dims = seq.dims().to_vec();
        let mut numerator = numerator_from_dims(&dims, ell);
        let tail = numerator.len().saturating_sub(window);
        if numerator.len() >= window && numerator[tail..].iter().all(|&n| n == 0) {
            while numerator.last() == Some(&0) {
                numerator.pop();
            }
            remember(a, p, &dims);
            let series = GradedSeries { p, ell, numerator, window, horizon, dims };
            series_memo().lock().expect("memo lock").insert(key, series.clone());
            return Ok(series);
        }
        if horizon >= cap {
            remember(a, p, &dims);
            return Err(Error::NotStabilized { p, horizon });
        }
        horizon = (horizon * 2).min(cap);
    }
}

/// `psi` together with the numerators it was assembled from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PsiPolynomial {
    pub poly: BiPoly,
    /// `P_0, ..., P_ell` in ascending powers of `q`.
    pub numerators: Vec<Vec<i64>>,
    /// Numerators computed by linear algebra (`0 < p < ell`).
    pub series: Vec<GradedSeries>,
    /// Times the stabilization policy had to be widened; nonzero means the
    /// default window and cap were not enough.
    pub retries: usize,
}

/// `t(q - 1) - 1`
fn psi_factor() -> BiPoly {
    BiPoly::from_t_coeffs(vec![UniPoly::from_ints(&[-1]), UniPoly::from_ints(&[-1, 1])])
}

/// `1 + q + ... + q^{m-1} - q^m t`, the value for a single hyperplane of
/// multiplicity `m` in one variable.
fn psi_single(m: u32) -> BiPoly {
    let ones = UniPoly::from_ints(&vec![1; m as usize]);
    BiPoly::from_t_coeffs(vec![ones, UniPoly::monomial(m as usize, int(-1))])
}

fn assemble(numerators: &[Vec<i64>], ell: usize) -> Option<BiPoly> {
    let f = psi_factor();
    let mut n = BiPoly::zero();
    for (p, num) in numerators.iter().enumerate() {
        n = n.add(&BiPoly::from_q(UniPoly::from_ints(num)).mul(&f.pow(p as u32)));
    }
    (0..ell).try_fold(n, |acc, _| acc.div_one_minus_q())
}

pub fn psi(a: &Multiarrangement, policy: Policy) -> Result<PsiPolynomial, Error> {
    const RETRIES: usize = 2;
    let ell = a.dim();
    let total = a.total_multiplicity();
    let mut closed_top = vec![0i64; total as usize + 1];
    closed_top[total as usize] = 1;
    if ell == 0 {
        return Ok(PsiPolynomial {
            poly: BiPoly::from_q(UniPoly::one()),
            numerators: vec![vec![1]],
            series: vec![],
            retries: 0,
        });
    }
    if ell == 1 {
        let poly = if a.is_empty() { psi_single(0) } else { psi_single(total) };
        return Ok(PsiPolynomial { poly, numerators: vec![vec![1], closed_top], series: vec![], retries: 0 });
    }
    let mut policies: Vec<Policy> = vec![policy; ell + 1];
    for attempt in 0..=RETRIES {
        let series: Vec<GradedSeries> =
            (1..ell).into_par_iter().map(|p| hilbert_numerator(a, p, policies[p])).collect::<Result<_, _>>()?;
        let mut numerators = vec![vec![1i64]];
        numerators.extend(series.iter().map(|s| s.numerator.clone()));
        numerators.push(closed_top.clone());
        if let Some(poly) = assemble(&numerators, ell) {
            return Ok(PsiPolynomial { poly, numerators, series, retries: attempt });
        }
        if attempt < RETRIES {
            for (p, pol) in policies.iter_mut().enumerate().take(ell).skip(1) {
                *pol = pol.widened(a, p);
            }
        }
    }
    Err(Error::PolynomialityFailure { ell })
}

/// `chi`, `pi` and the coefficients `C_p` of `pi`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPoly {
    pub chi: UniPoly,
    pub pi: UniPoly,
    pub c: Vec<i64>,
    pub psi: BiPoly,
}

impl CharPoly {
    pub fn from_psi(psi: &BiPoly, ell: usize) -> Result<Self, Error> {
        let at_one = psi.eval_q(&int(1));
        let chi = if ell.is_multiple_of(2) { at_one } else { at_one.neg() };
        // pi(t) = (-t)^ell chi(-1/t): the t^{ell-k} coefficient is (-1)^{ell-k} chi_k
        let pi = UniPoly::from_coeffs(
            (0..=ell)
                .map(|p| {
                    let c = chi.coeff(ell - p);
                    if p % 2 == 0 {
                        c
                    } else {
                        -c
                    }
                })
                .collect(),
        );
        if chi.degree().is_some_and(|d| d > ell) {
            return Err(Error::Inconsistent(format!("chi has degree above {}", ell)));
        }
        let c = (0..=ell)
            .map(|p| {
                let x = pi.coeff(p);
                if x.is_integer() {
                    x.to_integer().to_i64().ok_or_else(|| Error::Inconsistent("coefficient overflow".into()))
                } else {
                    Err(Error::Inconsistent(format!("non-integral coefficient {}", x)))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CharPoly { chi, pi, c, psi: psi.clone() })
    }

    pub fn is_monic(&self, ell: usize) -> bool {
        self.chi.degree() == Some(ell) && self.chi.leading() == int(1)
    }
}

pub fn chi_pi(a: &Multiarrangement, policy: Policy) -> Result<CharPoly, Error> {
    CharPoly::from_psi(&psi(a, policy)?.poly, a.dim())
}

/// `sum_X mu(V, X) t^{dim X}` for a simple arrangement.
pub fn chi_lattice_simple(a: &Multiarrangement) -> Result<UniPoly, Error> {
    if !a.is_simple() {
        return Err(Error::Invalid("the lattice characteristic polynomial needs all multiplicities equal to 1".into()));
    }
    Ok(chi_from_lattice(&build_lattice(a)))
}

pub(crate) fn chi_from_lattice(l: &Lattice) -> UniPoly {
    l.flats().iter().enumerate().fold(UniPoly::zero(), |acc, (x, f)| {
        let mu = l.mobius(0, x).expect("V is below every flat");
        acc.add(&UniPoly::monomial(l.dim() - f.rank, int(mu)))
    })
}

/// Characteristic data of every localization, indexed like the flats.
pub struct LocalData {
    pub lattice: Lattice,
    pub local: Vec<CharPoly>,
}

pub fn local_data(a: &Multiarrangement, policy: Policy) -> Result<LocalData, Error> {
    let lattice = build_lattice(a);
    let locs: Vec<Multiarrangement> = lattice.flats().iter().map(|f| localize(a, f)).collect();
    let mut unique: Vec<Multiarrangement> = Vec::new();
    for m in &locs {
        if !unique.contains(m) {
            unique.push(m.clone());
        }
    }
    let computed: Vec<CharPoly> = unique.par_iter().map(|m| chi_pi(m, policy)).collect::<Result<_, _>>()?;
    let by_arr: HashMap<&Multiarrangement, &CharPoly> = unique.iter().zip(&computed).collect();
    let local = locs.iter().map(|m| by_arr[m].clone()).collect();
    Ok(LocalData { lattice, local })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalGlobalEntry {
    pub flat: Vec<usize>,
    pub rank: usize,
    pub p: usize,
    /// `C_p(X)`
    pub local: i64,
    /// `sum_{Y in L(A_X)_p} C_p(Y)`
    pub sum: i64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LocalGlobalReport {
    pub entries: Vec<LocalGlobalEntry>,
    pub all_pass: bool,
}

pub fn local_global_check(a: &Multiarrangement, policy: Policy) -> Result<LocalGlobalReport, Error> {
    Ok(local_global_from(&local_data(a, policy)?))
}

pub fn local_global_from(data: &LocalData) -> LocalGlobalReport {
    let l = &data.lattice;
    let top: Vec<i64> = l.flats().iter().zip(&data.local).map(|(f, cp)| cp.c[f.rank]).collect();
    let mut entries = Vec::new();
    for (x, fx) in l.flats().iter().enumerate() {
        for p in 0..=fx.rank {
            let sum: i64 = l.below(x).into_iter().filter(|&y| l.flat(y).rank == p).map(|y| top[y]).sum();
            let local = data.local[x].c[p];
            entries.push(LocalGlobalEntry {
                flat: fx.hyperplanes.clone(),
                rank: fx.rank,
                p,
                local,
                sum,
                pass: local == sum,
            });
        }
    }
    let all_pass = entries.iter().all(|e| e.pass);
    LocalGlobalReport { entries, all_pass }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlatIdentity {
    pub flat: Vec<usize>,
    /// `sum_{Y <= X} mu(Y, X) psi(A_Y, m_Y; -t, 1)`
    pub lhs: UniPoly,
    /// `C_{r(X)}(X) t^{dim X}`
    pub rhs: UniPoly,
    pub pass: bool,
}

/// Checks the identity at flat `x` using the characteristic data of every
/// localization. `psi` of `A_Y` in the ambient space is the essential one
/// times `(-t)^{dim Y}`.
pub fn psi_flat_identity_from(data: &LocalData, x: usize) -> FlatIdentity {
    let l = &data.lattice;
    let ell = l.dim();
    let mut lhs = UniPoly::zero();
    for y in l.below(x) {
        let mu = l.mobius(y, x).expect("y is below x");
        let dim_y = ell - l.flat(y).rank;
        let ess = data.local[y].psi.eval_q(&int(1)).negate_var();
        lhs = lhs.add(&ess.mul(&UniPoly::monomial(dim_y, int(mu))));
    }
    let fx = l.flat(x);
    let rhs = UniPoly::monomial(ell - fx.rank, int(data.local[x].c[fx.rank]));
    let pass = lhs == rhs;
    FlatIdentity { flat: fx.hyperplanes.clone(), lhs, rhs, pass }
}

pub fn psi_flat_identity(a: &Multiarrangement, x: usize, policy: Policy) -> Result<FlatIdentity, Error> {
    let data = local_data(a, policy)?;
    if x >= data.lattice.len() {
        return Err(Error::OutOfRange(format!("flat index {}", x)));
    }
    Ok(psi_flat_identity_from(&data, x))
}

/// `t^k` divides `chi`.
pub fn divisible_by_t_power(chi: &UniPoly, k: usize) -> bool {
    (0..k).all(|i| chi.coeff(i).is_zero())
}

/// Integer coefficients of a polynomial known to be integral.
pub fn integer_coeffs(p: &UniPoly) -> Option<Vec<i64>> {
    p.coeffs().iter().map(|c| if c.is_integer() { c.to_integer().to_i64() } else { None }).collect()
}

#[cfg(test)]
mod tests;
