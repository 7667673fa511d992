//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::time::{Duration, Instant};

use multiarr::charpoly::{chi_pi, local_data, local_global_from, psi, psi_flat_identity_from, Policy};
use multiarr::derivations::{graded_dimension, rank2_exponents, PDerivation};
use multiarr::freeness::{balanced_bound, certify_nonfree, check_factorization, lmp, FreenessVerdict, Witness};
use multiarr::kernel::residue::residue_map;
use multiarr::kernel::{int, monomials, BiPoly, MultiPoly, UniPoly};
use multiarr::lattice::{build_lattice, Lattice};
use multiarr::Multiarrangement;
use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 0x6d75_6c74_6961_7272;

struct Instance {
    label: String,
    a: Multiarrangement,
}

#[derive(Default)]
struct Run {
    instances: Vec<Instance>,
    lattices: Vec<Lattice>,
    failures: usize,
}

impl Run {
    fn add(&mut self, label: impl Into<String>, a: &Multiarrangement) {
        self.instances.push(Instance { label: label.into(), a: a.clone() });
    }

    fn report(&mut self, id: u32, title: &str, ok: bool, detail: String, elapsed: Duration, limit: &str) {
        if !ok {
            self.failures += 1;
        }
        println!(
            "criterion {:>2} {}  {}: {} [{:.2} s; limit {}]",
            id,
            if ok { "PASS" } else { "FAIL" },
            title,
            detail,
            elapsed.as_secs_f64(),
            limit
        );
    }
}

fn arr(poly: &str, dim: usize) -> Multiarrangement {
    Multiarrangement::parse_default(poly, dim).unwrap_or_else(|e| panic!("{}: {}", poly, e))
}

fn chi(a: &Multiarrangement) -> Result<UniPoly, String> {
    chi_pi(a, Policy::default()).map(|c| c.chi).map_err(|e| e.to_string())
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let t = Instant::now();
    let out = f();
    (out, t.elapsed())
}

fn criterion_1(run: &mut Run) {
    let limit = Duration::from_secs(10);
    let mut ok = true;
    let mut details = Vec::new();
    let mut total = Duration::ZERO;
    for (poly, roots) in [("x^3y^3(x-y)(x+y)", [3, 5]), ("x^3y^3(x-y)(x-2y)", [4, 4])] {
        let a = arr(poly, 2);
        let expected = UniPoly::from_roots(&roots);
        let ((solver, pipeline), dt) = timed(|| {
            let solver = rank2_exponents(&a).map(|e| UniPoly::from_roots(&[e.d1.into(), e.d2.into()]));
            (solver, chi(&a))
        });
        total += dt;
        let pass = solver.as_ref() == Ok(&expected) && pipeline.as_ref() == Ok(&expected) && dt < limit;
        ok &= pass;
        details.push(format!(
            "{} -> {} ({:.2} s)",
            poly,
            pipeline.map_or_else(|e| e, |p| p.to_string()),
            dt.as_secs_f64()
        ));
        run.add(poly, &a);
    }
    run.report(1, "rank-two exponents and chi", ok, details.join("; "), total, "10 s each");
}

fn criterion_2(run: &mut Run) {
    let limit = Duration::from_secs(120);
    let mut ok = true;
    let mut details = Vec::new();
    let mut total = Duration::ZERO;
    for (poly, coeffs) in [("x^2y^2z(x+y+z)(x-y+z)", [-17, 18, -7, 1]), ("x^2yz(x+y+z)(x-y+z)", [-10, 13, -6, 1])] {
        let a = arr(poly, 3);
        let (got, dt) = timed(|| chi(&a));
        total += dt;
        let pass = got.as_ref() == Ok(&UniPoly::from_ints(&coeffs)) && dt < limit;
        ok &= pass;
        details.push(format!("{} -> {} ({:.2} s)", poly, got.map_or_else(|e| e, |p| p.to_string()), dt.as_secs_f64()));
        run.add(poly, &a);
    }
    // (t - 2)(t^2 - 4t + 5)
    let factored = UniPoly::from_roots(&[2]).mul(&UniPoly::from_ints(&[5, -4, 1]));
    ok &= chi(&arr("x^2yz(x+y+z)(x-y+z)", 3)).as_ref() == Ok(&factored);
    run.report(2, "three-variable chi values", ok, details.join("; "), total, "120 s each");
}

fn criterion_3(run: &mut Run) {
    let ((ok, detail), dt) = timed(|| {
        let full = chi(&arr("x^2y^2z(x+y+z)(x-y+z)", 3));
        let deleted = chi(&arr("x^2yz(x+y+z)(x-y+z)", 3));
        match (full, deleted) {
            (Ok(full), Ok(deleted)) => {
                let restricted = UniPoly::from_roots(&[2, 3]);
                let predicted = deleted.sub(&restricted);
                let gap = predicted.sub(&full);
                (
                    predicted != full && gap == UniPoly::from_ints(&[1]),
                    format!("chi(A', m') - (t - 2)(t - 3) - chi(A, m) = {}", gap),
                )
            }
            (a, b) => (false, format!("{:?} {:?}", a.err(), b.err())),
        }
    });
    run.report(3, "deletion-restriction fails", ok, detail, dt, "instantaneous");
}

fn criterion_4(run: &mut Run) {
    let limit = Duration::from_secs(10);
    let mut ok = true;
    let mut details = Vec::new();
    let mut total = Duration::ZERO;
    for (poly, expect_lmp, expect_bound) in [("x^2y^2(x-y)^2(x-z)^2(y-z)^2", 34, 33), ("x^2y(x-y)(x-z)(y-z)^2", 17, 16)]
    {
        let a = arr(poly, 3);
        let ((value, bound, verdict), dt) = timed(|| {
            let value = lmp(&a, 2, None).map(|r| r.value);
            let bound = balanced_bound(a.total_multiplicity(), 3, 2);
            (value, bound, certify_nonfree(&a, Policy::default()))
        });
        total += dt;
        let refuted = matches!(
            &verdict,
            Ok(FreenessVerdict::NotFree { witness: Witness::MixedProductBound { lmp, bound, .. } })
                if *lmp == expect_lmp && *bound == expect_bound
        );
        let pass = value == Ok(expect_lmp) && bound == Ok(expect_bound) && refuted && dt < limit;
        ok &= pass;
        details.push(format!(
            "{}: LMP(2) = {:?}, bound {:?}, NotFree = {} ({:.2} s)",
            poly,
            value,
            bound,
            refuted,
            dt.as_secs_f64()
        ));
        run.add(poly, &a);
    }
    run.report(4, "non-freeness certificates", ok, details.join("; "), total, "10 s each");
}

fn embed(theta: &PDerivation, dim: usize, offset: usize) -> PDerivation {
    let terms = theta.terms().map(|(s, f)| (s.iter().map(|i| i + offset).collect(), f.embed(dim, offset)));
    PDerivation::new(dim, theta.p(), terms).expect("embedding keeps subsets valid")
}

fn boolean_basis(mults: &[u32]) -> (Multiarrangement, Vec<PDerivation>) {
    let n = mults.len();
    let forms = (0..n).map(|i| {
        let mut c = vec![0; n];
        c[i] = 1;
        (c, mults[i])
    });
    let a = Multiarrangement::new(n, forms).unwrap();
    let basis = (0..n).map(|i| PDerivation::coordinate(MultiPoly::var(n, i).pow(mults[i]), i)).collect();
    (a, basis)
}

fn rank2_basis(poly: &str) -> (Multiarrangement, Vec<PDerivation>) {
    let a = arr(poly, 2);
    let e = rank2_exponents(&a).expect("rank-two solver");
    (a, e.basis.to_vec())
}

fn product_basis(
    a: (Multiarrangement, Vec<PDerivation>),
    b: (Multiarrangement, Vec<PDerivation>),
) -> (Multiarrangement, Vec<PDerivation>) {
    let (l1, l2) = (a.0.dim(), b.0.dim());
    let dim = l1 + l2;
    let basis = a.1.iter().map(|t| embed(t, dim, 0)).chain(b.1.iter().map(|t| embed(t, dim, l1))).collect();
    (a.0.product(&b.0), basis)
}

fn criterion_5(run: &mut Run) {
    let corpus: Vec<(String, (Multiarrangement, Vec<PDerivation>))> = vec![
        ("boolean (2,3,1)".into(), boolean_basis(&[2, 3, 1])),
        ("boolean (1,4,2)".into(), boolean_basis(&[1, 4, 2])),
        ("boolean (2,2,2)".into(), boolean_basis(&[2, 2, 2])),
        ("x^3y^3(x-y)(x+y) x z^2".into(), product_basis(rank2_basis("x^3y^3(x-y)(x+y)"), boolean_basis(&[2]))),
        ("x^3y^3(x-y)(x-2y) x z".into(), product_basis(rank2_basis("x^3y^3(x-y)(x-2y)"), boolean_basis(&[1]))),
        ("xy(x-y) x zw".into(), product_basis(rank2_basis("xy(x-y)"), boolean_basis(&[1, 1]))),
        ("x^3y^3(x-y)(x+y)".into(), rank2_basis("x^3y^3(x-y)(x+y)")),
        ("x^2y^2(x-y)^2(x+y)^2".into(), rank2_basis("x^2y^2(x-y)^2(x+y)^2")),
        ("x^5y^4(x-y)".into(), rank2_basis("x^5y^4(x-y)")),
        ("xy(x-y)(x+y)(x-2y)".into(), rank2_basis("xy(x-y)(x+y)(x-2y)")),
    ];
    let limit = Duration::from_secs(60);
    let (results, dt) = timed(|| {
        corpus
            .iter()
            .map(|(label, (a, basis))| {
                let verdict = check_factorization(a, basis, Policy::default());
                let ok = match &verdict {
                    Ok(FreenessVerdict::FreeCertified { exponents, .. }) => {
                        let roots: Vec<i64> = exponents.iter().map(|&d| d.into()).collect();
                        chi(a) == Ok(UniPoly::from_roots(&roots))
                    }
                    _ => false,
                };
                let summary = match &verdict {
                    Ok(FreenessVerdict::FreeCertified { exponents, .. }) => format!("{} {:?}", label, exponents),
                    Ok(v) => format!("{}: {}", label, v),
                    Err(e) => format!("{}: error {}", label, e),
                };
                (ok, summary)
            })
            .collect::<Vec<_>>()
    });
    for (label, (a, _)) in &corpus {
        run.add(label.clone(), a);
    }
    let ok = results.iter().all(|r| r.0) && corpus.len() == 10 && dt < limit;
    let detail = results.iter().map(|r| r.1.clone()).collect::<Vec<_>>().join(", ");
    run.report(5, "factorization for certified free instances", ok, detail, dt, "60 s total");
}

fn random_rank3(rng: &mut ChaCha8Rng) -> Multiarrangement {
    loop {
        let n = rng.gen_range(3..=5);
        let forms: Vec<(Vec<i64>, u32)> =
            (0..n).map(|_| ((0..3).map(|_| rng.gen_range(-2..=2)).collect(), rng.gen_range(1..=3))).collect();
        if forms.iter().any(|(c, _)| c.iter().all(|&x| x == 0)) {
            continue;
        }
        let a = Multiarrangement::new(3, forms).unwrap();
        if a.multiplicities().iter().any(|&m| m > 3) {
            continue;
        }
        let l = build_lattice(&a);
        if l.flat(l.top()).rank == 3 {
            return a;
        }
    }
}

fn criterion_6(run: &mut Run) {
    const COUNT: usize = 20;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let instances: Vec<Multiarrangement> = (0..COUNT).map(|_| random_rank3(&mut rng)).collect();
    let limit = Duration::from_secs(600);
    let (outcome, dt) = timed(|| {
        let mut checks = 0;
        let mut failures = Vec::new();
        let mut lattices = Vec::new();
        for (i, a) in instances.iter().enumerate() {
            match local_data(a, Policy::default()) {
                Ok(data) => {
                    let lg = local_global_from(&data);
                    checks += lg.entries.len();
                    if !lg.all_pass {
                        failures.push(format!("#{} local-global", i));
                    }
                    for x in 0..data.lattice.len() {
                        checks += 1;
                        if !psi_flat_identity_from(&data, x).pass {
                            failures.push(format!("#{} flat {:?}", i, data.lattice.flat(x).hyperplanes));
                        }
                    }
                    lattices.push(data.lattice);
                }
                Err(e) => failures.push(format!("#{}: {}", i, e)),
            }
        }
        (checks, failures, lattices)
    });
    let (checks, failures, lattices) = outcome;
    for (i, a) in instances.iter().enumerate() {
        run.add(format!("random #{} {}", i, a.display_with(&multiarr::arrangement::default_vars(3))), a);
    }
    run.lattices = lattices;
    let ok = failures.is_empty() && dt < limit;
    let detail = format!("{} instances (seed {:#x}), {} checks, failures {:?}", COUNT, SEED, checks, failures);
    run.report(6, "local-global formula and psi identity", ok, detail, dt, "600 s total");
}

fn psi_factor() -> BiPoly {
    BiPoly::from_t_coeffs(vec![UniPoly::from_ints(&[-1]), UniPoly::from_ints(&[-1, 1])])
}

fn criterion_7(run: &mut Run) {
    let ((failures, widened), dt) = timed(|| {
        let mut failures = Vec::new();
        let mut widened = Vec::new();
        for inst in &run.instances {
            let ell = inst.a.dim();
            match psi(&inst.a, Policy::default()) {
                Ok(p) => {
                    let numerator = p.numerators.iter().enumerate().fold(BiPoly::zero(), |acc, (k, num)| {
                        acc.add(&BiPoly::from_q(UniPoly::from_ints(num)).mul(&psi_factor().pow(k as u32)))
                    });
                    let one_minus_q = BiPoly::from_q(UniPoly::from_ints(&[1, -1])).pow(ell as u32);
                    let integral = p.poly.terms().iter().all(|(_, _, c)| c.is_integer());
                    if p.poly.mul(&one_minus_q) != numerator || !integral {
                        failures.push(inst.label.clone());
                    }
                    if p.retries > 0 {
                        widened.push(inst.label.clone());
                    }
                }
                Err(e) => failures.push(format!("{}: {}", inst.label, e)),
            }
        }
        (failures, widened)
    });
    let ok = failures.is_empty();
    let detail = format!(
        "{} instances, inexact: {:?}, needed a widened horizon policy: {:?}",
        run.instances.len(),
        failures,
        widened
    );
    run.report(7, "exact division by (1 - q)^l", ok, detail, dt, "none");
}

fn criterion_8(run: &mut Run) {
    let (failures, dt) = timed(|| {
        let mut failures = Vec::new();
        for inst in &run.instances {
            let a = &inst.a;
            let ell = a.dim();
            let Ok(cp) = chi_pi(a, Policy::default()) else {
                failures.push(format!("{}: chi failed", inst.label));
                continue;
            };
            let l = build_lattice(a);
            let center = ell - l.flat(l.top()).rank;
            let monic = cp.chi.degree() == Some(ell) && cp.chi.leading() == int(1);
            let low = (0..center).all(|k| cp.chi.coeff(k).is_zero());
            let c2 = ell < 2 || lmp(a, 2, None).map(|r| r.value) == Ok(cp.c[2]);
            if !(monic && cp.c[0] == 1 && cp.c[1] == i64::from(a.total_multiplicity()) && c2 && low) {
                failures.push(inst.label.clone());
            }
        }
        failures
    });
    let ok = failures.is_empty();
    let detail = format!("{} instances, violations: {:?}", run.instances.len(), failures);
    run.report(8, "chi monic, C_0 = 1, C_1 = |m|, C_2 = LMP(2), t^dim(center) | chi", ok, detail, dt, "none");
}

fn dense_coeffs(f: &MultiPoly, d: u32) -> Vec<BigInt> {
    monomials(f.nvars(), d)
        .iter()
        .map(|e| {
            let c = f.coeff(e);
            assert!(c.is_integer());
            c.to_integer()
        })
        .collect()
}

fn residue_oracle(rng: &mut ChaCha8Rng) -> (usize, Vec<String>) {
    let mut cases = 0;
    let mut failures = Vec::new();
    for _ in 0..400 {
        let ell = rng.gen_range(1..=3);
        let d = rng.gen_range(0..=4u32);
        let m = rng.gen_range(1..=3u32);
        let alpha: Vec<i64> = loop {
            let v: Vec<i64> = (0..ell).map(|_| rng.gen_range(-3..=3)).collect();
            if v.iter().any(|&x| x != 0) {
                break v;
            }
        };
        let random_poly = |rng: &mut ChaCha8Rng, deg: u32| {
            MultiPoly::from_terms(ell, monomials(ell, deg).into_iter().map(|e| (e, int(rng.gen_range(-3..=3)))))
        };
        // half the cases are multiples of alpha^m by construction
        let f = if m <= d && rng.gen_bool(0.5) {
            MultiPoly::linear(&alpha).pow(m).mul(&random_poly(rng, d - m))
        } else {
            random_poly(rng, d)
        };
        let map = residue_map(&alpha, m, d).expect("nonzero form");
        let v = dense_coeffs(&f, d);
        let by_residue = map.rows.iter().all(|row| row.iter().map(|(c, x)| x * &v[*c]).sum::<BigInt>().is_zero());
        let by_division = f.div_rem_lex(&MultiPoly::linear(&alpha).pow(m)).1.is_zero();
        cases += 1;
        if by_residue != by_division {
            failures.push(format!("alpha {:?} m {} d {}", alpha, m, d));
        }
    }
    (cases, failures)
}

fn exhaustive_max(total: u32, ell: usize, k: usize) -> i64 {
    fn elem(k: usize, xs: &[i64]) -> i64 {
        let mut e = vec![0i64; k + 1];
        e[0] = 1;
        for &x in xs {
            for j in (1..=k).rev() {
                e[j] += e[j - 1] * x;
            }
        }
        e[k]
    }
    fn rec(left: u32, slots: usize, cur: &mut Vec<i64>, k: usize, best: &mut i64) {
        if slots == 1 {
            cur.push(left.into());
            *best = (*best).max(elem(k, cur));
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x.into());
            rec(left - x, slots - 1, cur, k, best);
            cur.pop();
        }
    }
    let mut best = i64::MIN;
    rec(total, ell, &mut Vec::new(), k, &mut best);
    best
}

fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn criterion_9(run: &mut Run) {
    let (detail_ok, dt) = timed(|| {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
        let (cases, residue_failures) = residue_oracle(&mut rng);

        let mut bound_failures = Vec::new();
        let mut bound_cases = 0;
        for ell in 1..=4 {
            for total in 0..=12 {
                for k in 1..=ell {
                    bound_cases += 1;
                    if balanced_bound(total, ell, k).ok() != Some(exhaustive_max(total, ell, k)) {
                        bound_failures.push((total, ell, k));
                    }
                }
            }
        }

        let mut top_failures = Vec::new();
        let mut top_cases = 0;
        for inst in &run.instances {
            let (a, ell) = (&inst.a, inst.a.dim());
            let total = a.total_multiplicity();
            for d in 0..=total + 2 {
                top_cases += 1;
                let closed =
                    if d >= total { binomial(i64::from(d - total) + ell as i64 - 1, ell as i64 - 1) } else { 0 };
                if graded_dimension(a, ell, d).map(|k| k as i64) != Ok(closed) {
                    top_failures.push(format!("{} d={}", inst.label, d));
                }
            }
        }

        let mut mobius_failures = 0;
        let mut mobius_cases = 0;
        for l in &run.lattices {
            for x in 0..l.len() {
                for y in l.below(x) {
                    mobius_cases += 1;
                    let sum: i64 =
                        l.below(x).into_iter().filter(|&z| l.leq(y, z)).map(|z| l.mobius(y, z).unwrap()).sum();
                    if sum != i64::from(y == x) {
                        mobius_failures += 1;
                    }
                }
            }
        }
        let ok =
            residue_failures.is_empty() && bound_failures.is_empty() && top_failures.is_empty() && mobius_failures == 0;
        let detail = format!(
            "residue vs division {} cases ({} mismatches); balanced bound {} cases ({} mismatches); top degree {} cases ({} mismatches); Moebius sums {} pairs over {} lattices ({} mismatches)",
            cases,
            residue_failures.len(),
            bound_cases,
            bound_failures.len(),
            top_cases,
            top_failures.len(),
            mobius_cases,
            run.lattices.len(),
            mobius_failures
        );
        (detail, ok && !run.lattices.is_empty())
    });
    let (detail, ok) = detail_ok;
    run.report(9, "oracle equivalences", ok, detail, dt, "none");
}

fn criterion_10(run: &mut Run) {
    let pairs = [
        (("x^3y^3(x-y)(x+y)", 2), ("x^2", 1)),
        (("x^3y^3(x-y)(x-2y)", 2), ("x", 1)),
        (("x^2y^2(x-y)^2", 2), ("x^3", 1)),
        (("xy(x-y)", 2), ("xy(x-y)", 2)),
        (("x^2y(x-y)", 2), ("xy", 2)),
    ];
    let limit = Duration::from_secs(60);
    let (results, dt) = timed(|| {
        pairs
            .iter()
            .map(|((p1, d1), (p2, d2))| {
                let (a, b) = (arr(p1, *d1), arr(p2, *d2));
                let prod = a.product(&b);
                let lhs = psi(&prod, Policy::default()).map(|p| p.poly);
                let rhs = psi(&a, Policy::default())
                    .and_then(|pa| psi(&b, Policy::default()).map(|pb| pa.poly.mul(&pb.poly)));
                (format!("{} x {}", p1, p2), lhs.is_ok() && lhs == rhs)
            })
            .collect::<Vec<_>>()
    });
    let ok = results.iter().all(|r| r.1) && dt < limit;
    let detail = results
        .iter()
        .map(|(l, p)| format!("{}: {}", l, if *p { "equal" } else { "DIFFERENT" }))
        .collect::<Vec<_>>()
        .join(", ");
    run.report(10, "psi of products", ok, detail, dt, "60 s");
}

fn main() {
    let mut run = Run::default();
    criterion_1(&mut run);
    criterion_2(&mut run);
    criterion_3(&mut run);
    criterion_4(&mut run);
    criterion_5(&mut run);
    criterion_6(&mut run);
    criterion_7(&mut run);
    criterion_8(&mut run);
    criterion_9(&mut run);
    criterion_10(&mut run);
    if run.failures > 0 {
        println!("{} criteria failed", run.failures);
        std::process::exit(1);
    }
    println!("all criteria passed");
}
