//! Acceptance suite. Each criterion prints one PASS/FAIL line with its
//! runtime; the process fails if any criterion fails or exceeds its limit.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wordmap::certify::{certify, engel, Classification, SearchConfig, Status};
use wordmap::freegroup::{parse, BasisMap, Generator, Word};
use wordmap::laurent::{analyze_roots, cyclotomic, divisors, least_prime_factor, LaurentPoly};
use wordmap::metabelian::{derived_class, fox_derivatives, p_affine, p_class, p_fox, p_poly};
use wordmap::sample::{random_nonderived_word, random_word_outside_f2};
use wordmap::selftest::{
    commutator_expansion_identities, conjugation_identities, derived_corpus, rewrite_identities,
    sweep_words, target_seed,
};
use wordmap::witness::{haar_random_su, witness, witness_nonderived, UnitaryMatrix};

type Outcome = Result<String, String>;

fn w(s: &str) -> Word {
    parse(s).expect("valid word")
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// `(1 − t)^k` from binomial coefficients.
fn one_minus_t_pow(k: u32) -> LaurentPoly {
    let mut binom = BigInt::from(1);
    let mut terms = Vec::new();
    for j in 0..=k {
        let sign = if j % 2 == 0 { 1 } else { -1 };
        terms.push((j as i64, &binom * sign));
        binom = binom * (k - j) / (j + 1);
    }
    LaurentPoly::from_terms(terms)
}

fn criterion_polynomials() -> Outcome {
    let id = BasisMap::identity();
    let cases = [
        ("[a,b]^2", id.clone(), LaurentPoly::from_coeffs(&[-2, 2])),
        ("a^2 b a^-1 b a^-1 b^-2", id.clone(), LaurentPoly::from_coeffs(&[-2, 1, 1])),
        (
            "[a,b][a,b^-1][a^-1,b][a^-1,b^-1]",
            // a = (ab)·b⁻¹ and b = b in the ordered basis (b, ab)
            BasisMap::new(w("b a^-1"), w("a")),
            LaurentPoly::from_terms([(2, 1), (1, -3), (0, 3), (-1, -1)]),
        ),
    ];
    for (word, basis, expect) in &cases {
        let got = p_poly(&w(word), basis).map_err(|e| e.to_string())?;
        ensure(&got == expect, || format!("{word}: got {got}, expected {expect}"))?;
    }
    for k in 1..=6 {
        let got = p_poly(&engel(k).unwrap(), &BasisMap::swap()).map_err(|e| e.to_string())?;
        let expect = one_minus_t_pow(k as u32);
        ensure(got == expect, || format!("e_{k}: got {got}, expected {expect}"))?;
    }
    Ok(format!("{} polynomials exact", cases.len() + 6))
}

fn criterion_identities() -> Outcome {
    let a = conjugation_identities(8)?;
    let b = rewrite_identities(8, 8)?;
    let c = commutator_expansion_identities(2024, 500)?;
    Ok(format!("{a} conjugation, {b} rewrite, {c} expansion identities"))
}

fn criterion_oracles() -> Outcome {
    let corpus = derived_corpus(7, 1200, 40);
    let mut in_f2 = 0;
    for word in &corpus {
        ensure(word.length() <= 40, || format!("{word} too long"))?;
        let id = BasisMap::identity();
        let class = p_class(word, &id).map_err(|e| e.to_string())?;
        let affine = p_affine(word, &id).map_err(|e| e.to_string())?;
        let fox = p_fox(word, &id).map_err(|e| e.to_string())?;
        ensure(class == affine && affine == fox, || {
            format!("{word}: class {class}, affine {affine}, fox {fox}")
        })?;
        let zero = derived_class(word).map_err(|e| e.to_string())?.is_zero();
        let (da, db) = fox_derivatives(word).map_err(|e| e.to_string())?;
        ensure(zero == (da.is_zero() && db.is_zero()), || {
            format!("{word}: class zero = {zero}, Fox zero = {}", da.is_zero() && db.is_zero())
        })?;
        in_f2 += usize::from(zero);
    }
    Ok(format!("{} words agree ({in_f2} in F'')", corpus.len()))
}

fn criterion_certify() -> Outcome {
    let config = SearchConfig::default();
    let mut named: Vec<Word> = [
        "[a,b]",
        "[a,b]^2",
        "a^2 b a^-1 b a^-1 b^-2",
        "[a,b][a,b^-1][a^-1,b][a^-1,b^-1]",
        "[a,b][a,b^-1]",
    ]
    .iter()
    .map(|s| w(s))
    .collect();
    named.extend((1..=4).map(|k| engel(k).unwrap()));
    for word in &named {
        let cert = certify(word, &config).map_err(|e| format!("{word}: {e}"))?;
        ensure(cert.status == Status::AllN, || format!("{word}: status {}", cert.status))?;
        cert.verify().map_err(|e| format!("{word}: {e}"))?;
    }
    let f2 = certify(&w("[[a,b],[a^2,b^2]]"), &config).map_err(|e| e.to_string())?;
    ensure(f2.status == Status::Inapplicable, || format!("F'' word: status {}", f2.status))?;

    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let (mut derived, mut bad_set) = (0, 0);
    for _ in 0..200 {
        let word = random_word_outside_f2(&mut rng, 20);
        let cert = certify(&word, &config).map_err(|e| format!("{word}: {e}"))?;
        match cert.classification {
            Classification::InF1NotF2 => {
                ensure(!cert.polynomial.is_zero(), || format!("{word}: p = 0"))?;
                derived += 1;
                bad_set += usize::from(cert.status == Status::BadSet);
            }
            Classification::NotInF1 => {
                ensure(cert.status == Status::AllN, || format!("{word}: status {}", cert.status))?;
            }
            Classification::InF2 => return Err(format!("{word}: sampler produced an F'' word")),
        }
        cert.verify().map_err(|e| format!("{word}: {e}"))?;
    }
    Ok(format!(
        "{} named words certified; 200 random words, {derived} derived with p != 0 ({bad_set} with bad moduli)",
        named.len()
    ))
}

/// `ω(u, v)` by plain letter-by-letter multiplication.
fn evaluate_letters(word: &Word, u: &DMatrix<Complex64>, v: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let n = u.nrows();
    let (ui, vi) = (u.adjoint(), v.adjoint());
    let mut acc = DMatrix::identity(n, n);
    for s in word.syllables() {
        let e = s.exponent.to_i64().unwrap();
        let m = match (s.generator, e > 0) {
            (Generator::A, true) => u,
            (Generator::A, false) => &ui,
            (Generator::B, true) => v,
            (Generator::B, false) => &vi,
        };
        for _ in 0..e.unsigned_abs() {
            acc = &acc * m;
        }
    }
    acc
}

fn independent_residual(word: &Word, u: &UnitaryMatrix, v: &UnitaryMatrix, g: &UnitaryMatrix) -> f64 {
    (evaluate_letters(word, u.matrix(), v.matrix()) - g.matrix()).norm()
}

const TOL: f64 = 1e-8;

fn criterion_witnesses() -> Outcome {
    let config = SearchConfig::default();
    let mut jobs: Vec<(Word, usize)> = Vec::new();
    for word in sweep_words() {
        jobs.extend((2..=8).map(|n| (word.clone(), n)));
    }
    jobs.extend((2..=16).map(|n| (w("[a,b]"), n)));
    let (mut cases, mut skipped, mut worst) = (0, 0, 0.0f64);
    for (i, (word, n)) in jobs.iter().enumerate() {
        let cert = certify(word, &config).map_err(|e| format!("{word}: {e}"))?;
        if !cert.certifies(*n as u64) {
            skipped += 1;
            continue;
        }
        for s in 0..10 {
            let g = haar_random_su(*n, target_seed(5, i, *n, s));
            let r = witness(&cert, *n, &g).map_err(|e| format!("{word}, n={n}: {e}"))?;
            let again = independent_residual(word, &r.u, &r.v, &g);
            ensure(r.residual <= TOL && again <= TOL, || {
                format!("{word}, n={n}, target {s}: residual {:.3e} (recomputed {again:.3e})", r.residual)
            })?;
            worst = worst.max(r.residual).max(again);
            cases += 1;
        }
    }
    ensure(skipped == 0, || format!("{skipped} (word, n) pairs not certified"))?;
    Ok(format!("{cases} witnesses, max residual {worst:.3e}"))
}

fn criterion_nonderived() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    let mut worst = 0.0f64;
    let mut cases = 0;
    for _ in 0..20 {
        let word = random_nonderived_word(&mut rng, 20);
        for n in 2..=8 {
            let g = haar_random_su(n, rng.random());
            let r = witness_nonderived(&word, n, &g).map_err(|e| format!("{word}, n={n}: {e}"))?;
            let again = independent_residual(&word, &r.u, &r.v, &g);
            ensure(r.residual <= TOL && again <= TOL, || {
                format!("{word}, n={n}: residual {:.3e} (recomputed {again:.3e})", r.residual)
            })?;
            worst = worst.max(r.residual).max(again);
            cases += 1;
        }
    }
    Ok(format!("{cases} witnesses, max residual {worst:.3e}"))
}

/// Dense ascending integer polynomials for the cyclotomic oracle.
type Dense = Vec<i128>;

fn mul(a: &Dense, b: &Dense) -> Dense {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Quotient by a monic divisor, or `None` if the division is not exact.
fn div_exact(a: &Dense, b: &Dense) -> Option<Dense> {
    let r = remainder(a, b);
    if r.iter().any(|&c| c != 0) {
        return None;
    }
    let mut rem = a.clone();
    let db = b.len() - 1;
    let mut q = vec![0; a.len().saturating_sub(db).max(1)];
    for i in (db..rem.len()).rev() {
        let c = rem[i];
        q[i - db] = c;
        for (j, y) in b.iter().enumerate() {
            rem[i - db + j] -= c * y;
        }
    }
    Some(q)
}

fn remainder(a: &Dense, b: &Dense) -> Dense {
    let mut rem = a.clone();
    let db = b.len() - 1;
    for i in (db..rem.len()).rev() {
        let c = rem[i];
        for (j, y) in b.iter().enumerate() {
            rem[i - db + j] -= c * y;
        }
    }
    rem.truncate(db.max(1));
    rem
}

fn mobius(mut m: u64) -> i32 {
    let mut sign = 1;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            m /= p;
            if m.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if m > 1 {
        sign = -sign;
    }
    sign
}

/// `Φ_d = ∏_{e | d} (t^e − 1)^{μ(d/e)}`.
fn phi(d: u64) -> Dense {
    let binomial = |e: u64| {
        let mut v = vec![0; e as usize + 1];
        v[0] = -1;
        v[e as usize] = 1;
        v
    };
    let mut num: Dense = vec![1];
    let mut den: Dense = vec![1];
    for e in (1..=d).filter(|e| d.is_multiple_of(*e)) {
        match mobius(d / e) {
            1 => num = mul(&num, &binomial(e)),
            -1 => den = mul(&den, &binomial(e)),
            _ => {}
        }
    }
    // den is ± monic; normalize to monic before dividing
    if *den.last().unwrap() < 0 {
        den.iter_mut().for_each(|c| *c = -*c);
        num.iter_mut().for_each(|c| *c = -*c);
    }
    div_exact(&num, &den).expect("cyclotomic quotient is exact")
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Panel of nonzero integer Laurent polynomials of span at most 10, half of
/// them built with deliberate cyclotomic factors.
fn panel() -> Vec<(Dense, i64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(123);
    let mut out = Vec::new();
    while out.len() < 50 {
        let mut p: Dense = vec![1];
        if out.len() % 2 == 0 {
            for _ in 0..rng.random_range(1..=3) {
                let f = phi(rng.random_range(1..=12));
                if p.len() + f.len() - 2 <= 10 {
                    p = mul(&p, &f);
                }
            }
        }
        let room = 10 - (p.len() - 1);
        let cofactor: Dense = (0..=rng.random_range(0..=room)).map(|_| rng.random_range(-3..=3)).collect();
        let p = mul(&p, &cofactor);
        if p.iter().any(|&c| c != 0) {
            out.push((p, rng.random_range(-5..=5)));
        }
    }
    out
}

fn to_laurent(p: &Dense, shift: i64) -> LaurentPoly {
    LaurentPoly::from_terms(p.iter().enumerate().map(|(i, &c)| (i as i64 + shift, BigInt::from(c))))
}

/// `p(ζₙˡ) ≠ 0` for all `1 ≤ l < n`, decided by reducing mod `Φ_{n/gcd(l,n)}`.
fn certified_by_evaluation(p: &Dense, n: u64) -> bool {
    (1..n).all(|l| {
        let d = n / gcd(l, n);
        remainder(p, &phi(d)).iter().any(|&c| c != 0)
    })
}

fn criterion_cyclotomic() -> Outcome {
    for m in 1..=60i64 {
        let prod = divisors(m as u64)
            .into_iter()
            .map(|d| cyclotomic(d as i64).unwrap())
            .fold(LaurentPoly::one(), |acc, f| &acc * &f);
        let expect = &LaurentPoly::monomial(1, m) - &LaurentPoly::one();
        ensure(prod == expect, || format!("m = {m}: product is {prod}"))?;
    }
    let panel = panel();
    let mut with_bad = 0;
    for (dense, shift) in &panel {
        let p = to_laurent(dense, *shift);
        let analysis = analyze_roots(&p).map_err(|e| e.to_string())?;
        with_bad += usize::from(!analysis.bad_set.is_empty());
        for n in 1..=30u64 {
            let expect = certified_by_evaluation(dense, n);
            ensure(analysis.certified_n(n) == expect, || {
                format!("p = {p}, n = {n}: certified_n {} but evaluation says {expect}", !expect)
            })?;
        }
        let span = p.span() as u64;
        for n in 2..=10_000u64 {
            if least_prime_factor(n) >= span + 2 {
                ensure(analysis.certified_n(n), || format!("p = {p}: lpf({n}) >= span + 2 but not certified"))?;
            }
        }
    }
    Ok(format!(
        "products exact for m <= 60; {} panel polynomials ({with_bad} with bad moduli) agree for n <= 30, lpf bound holds for n <= 10^4",
        panel.len()
    ))
}

struct Criterion {
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let criteria = [
        Criterion {
            name: "polynomial reproduction",
            limit: Duration::from_secs(1),
            run: criterion_polynomials,
        },
        Criterion {
            name: "symbolic identities",
            limit: Duration::from_secs(10),
            run: criterion_identities,
        },
        Criterion {
            name: "oracle equivalence",
            limit: Duration::from_secs(30),
            run: criterion_oracles,
        },
        Criterion {
            name: "certification pipeline",
            limit: Duration::from_secs(120),
            run: criterion_certify,
        },
        Criterion {
            name: "witness residuals",
            limit: Duration::from_secs(120),
            run: criterion_witnesses,
        },
        Criterion {
            name: "non-derived witnesses",
            limit: Duration::from_secs(30),
            run: criterion_nonderived,
        },
        Criterion {
            name: "cyclotomic analysis",
            limit: Duration::from_secs(60),
            run: criterion_cyclotomic,
        },
    ];
    let mut failures = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let (verdict, detail) = match (&outcome, elapsed <= c.limit) {
            (Ok(d), true) => ("PASS", d.clone()),
            (Ok(d), false) => ("FAIL", format!("{d}; over time limit")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if verdict == "FAIL" {
            failures += 1;
        }
        println!(
            "criterion {} ({}): {verdict} [{:.2}s / {}s] {detail}",
            i + 1,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    if failures > 0 {
        eprintln!("{failures} acceptance criteria failed");
        std::process::exit(1);
    }
}
