//! Built-in consistency checks: exact word identities, agreement of the
//! independent `p` routes, cyclotomic identities, and a witness sweep.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::certify::{certify, engel, SearchConfig};
use crate::freegroup::{
    c_equals_ab, commutator, conjugate, goto_rewrite_neg, goto_rewrite_pos, parse, substitute,
    BasisMap, Generator, Word,
};
use crate::laurent::{cyclotomic, divisors, LaurentPoly};
use crate::metabelian::{derived_class, fox_derivatives, p_affine, p_class, p_fox};
use crate::sample::{random_derived_word, random_word};
use crate::witness::{haar_random_su, witness};

/// Words used by the witness sweep, in canonical order.
pub const SWEEP_WORDS: [&str; 4] = [
    "[a,b]",
    "[a,b]^2",
    "a^2 b a^-1 b a^-1 b^-2",
    "[a,b][a,b^-1][a^-1,b][a^-1,b^-1]",
];

/// [`SWEEP_WORDS`] followed by `e₁ … e₄`.
pub fn sweep_words() -> Vec<Word> {
    let mut out: Vec<Word> = SWEEP_WORDS.iter().map(|s| parse(s).expect("valid word")).collect();
    out.extend((1..=4).map(|k| engel(k).expect("k >= 0")));
    out
}

fn c() -> Word {
    Word::a().multiply(&Word::b())
}

fn cp(e: i64) -> Word {
    c().pow(&e.into())
}

fn bp(e: i64) -> Word {
    Word::power_of(Generator::B, e)
}

fn product(parts: &[Word]) -> Word {
    parts.iter().fold(Word::identity(), |acc, w| acc.multiply(w))
}

fn check(ok: bool, describe: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(describe())
    }
}

/// The four conjugation identities for `ᵃ[cⁿ,bᵐ]`, `ᵃ⁻¹[cⁿ,bᵐ]`,
/// `ᵃ[bᵐ,cⁿ]`, `ᵃ⁻¹[bᵐ,cⁿ]` with `c = ab`, over `0 < |n|, |m| ≤ bound`.
pub fn conjugation_identities(bound: i64) -> Result<usize, String> {
    let a = Word::a();
    let ai = a.invert();
    let k = |x: &Word, y: &Word| commutator(x, y);
    let mut cases = 0;
    for n in (-bound..=bound).filter(|&n| n != 0) {
        for m in (-bound..=bound).filter(|&m| m != 0) {
            let cb = k(&cp(n), &bp(m));
            let bc = k(&bp(m), &cp(n));
            let identities = [
                (
                    "a·[c^n,b^m]",
                    conjugate(&a, &cb),
                    product(&[
                        k(&cp(1), &bp(-1)),
                        k(&bp(-1), &cp(n + 1)),
                        k(&cp(n + 1), &bp(m - 1)),
                        k(&bp(m - 1), &cp(1)),
                    ]),
                ),
                (
                    "a^-1·[c^n,b^m]",
                    conjugate(&ai, &cb),
                    product(&[
                        k(&bp(1), &cp(n - 1)),
                        k(&cp(n - 1), &bp(m + 1)),
                        k(&bp(m + 1), &cp(-1)),
                        k(&cp(-1), &bp(1)),
                    ]),
                ),
                (
                    "a·[b^m,c^n]",
                    conjugate(&a, &bc),
                    product(&[
                        k(&cp(1), &bp(m - 1)),
                        k(&bp(m - 1), &cp(n + 1)),
                        k(&cp(n + 1), &bp(-1)),
                        k(&bp(-1), &cp(1)),
                    ]),
                ),
                (
                    "a^-1·[b^m,c^n]",
                    conjugate(&ai, &bc),
                    product(&[
                        k(&bp(1), &cp(-1)),
                        k(&cp(-1), &bp(m + 1)),
                        k(&bp(m + 1), &cp(n - 1)),
                        k(&cp(n - 1), &bp(1)),
                    ]),
                ),
            ];
            for (name, lhs, rhs) in identities {
                check(lhs == rhs, || format!("{name} with n={n}, m={m}: {lhs} != {rhs}"))?;
                cases += 1;
            }
        }
    }
    Ok(cases)
}

/// `[aⁿ,bᵐ]` and `[a⁻ⁿ,bᵐ]` against their rewrites in the basis `{ab, b}`,
/// for `1 ≤ n ≤ max_n`, `|m| ≤ bound_m`.
pub fn rewrite_identities(max_n: i64, bound_m: i64) -> Result<usize, String> {
    let map = c_equals_ab();
    let mut cases = 0;
    for n in 1..=max_n {
        for m in -bound_m..=bound_m {
            let pos = substitute(&goto_rewrite_pos(n, m).map_err(|e| e.to_string())?, &map);
            let expect = commutator(&Word::power_of(Generator::A, n), &bp(m));
            check(pos == expect, || format!("[a^{n},b^{m}]: rewrite gives {pos}"))?;
            let neg = substitute(&goto_rewrite_neg(n, m).map_err(|e| e.to_string())?, &map);
            let expect = commutator(&Word::power_of(Generator::A, -n), &bp(m));
            check(neg == expect, || format!("[a^-{n},b^{m}]: rewrite gives {neg}"))?;
            cases += 2;
        }
    }
    Ok(cases)
}

/// `[x,yz] = [x,y]·ʸ[x,z]` and `[xy,z] = ˣ[y,z]·[x,z]` on random words of
/// length at most 12.
pub fn commutator_expansion_identities(seed: u64, count: usize) -> Result<usize, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..count {
        let x = random_word(&mut rng, 12);
        let y = random_word(&mut rng, 12);
        let z = random_word(&mut rng, 12);
        let lhs = commutator(&x, &y.multiply(&z));
        let rhs = commutator(&x, &y).multiply(&conjugate(&y, &commutator(&x, &z)));
        check(lhs == rhs, || format!("[x,yz] expansion fails for x={x}, y={y}, z={z}"))?;
        let lhs = commutator(&x.multiply(&y), &z);
        let rhs = conjugate(&x, &commutator(&y, &z)).multiply(&commutator(&x, &z));
        check(lhs == rhs, || format!("[xy,z] expansion fails for x={x}, y={y}, z={z}"))?;
    }
    Ok(2 * count)
}

/// A random base change built from a few Nielsen moves.
fn random_basis<R: Rng + ?Sized>(rng: &mut R) -> BasisMap {
    let moves = [
        crate::NielsenMove::SwapAB,
        crate::NielsenMove::InvertA,
        crate::NielsenMove::InvertB,
        crate::NielsenMove::RightMultA { q: 1 },
        crate::NielsenMove::RightMultA { q: -2 },
    ];
    let picked: Vec<_> = (0..rng.random_range(0..=3))
        .map(|_| moves[rng.random_range(0..moves.len())])
        .collect();
    crate::certify::back_substitution(&picked)
}

/// Seeded words of `F⁽¹⁾` of length at most `max_len`; every fifth one is a
/// commutator of two shorter derived words, hence in `F⁽²⁾`.
pub fn derived_corpus(seed: u64, count: usize, max_len: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            if i % 5 == 4 {
                let u = random_derived_word(&mut rng, max_len / 4);
                let v = random_derived_word(&mut rng, max_len / 4);
                commutator(&u, &v)
            } else {
                random_derived_word(&mut rng, max_len)
            }
        })
        .collect()
}

/// On a seeded corpus of derived words: the class, affine and Fox routes to
/// `p` agree (in the standard basis and a random one), and the class
/// vanishes exactly when both Fox derivatives do.
pub fn oracle_equivalence(seed: u64, count: usize, max_len: usize) -> Result<usize, String> {
    let corpus = derived_corpus(seed, count, max_len);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let bases: Vec<BasisMap> = (0..count).map(|_| random_basis(&mut rng)).collect();
    corpus
        .par_iter()
        .zip(bases.par_iter())
        .map(|(w, basis)| {
            for b in [&BasisMap::identity(), basis] {
                let class = p_class(w, b).map_err(|e| e.to_string())?;
                let affine = p_affine(w, b).map_err(|e| e.to_string())?;
                let fox = p_fox(w, b).map_err(|e| e.to_string())?;
                check(class == affine && affine == fox, || {
                    format!("routes disagree on {w}: class {class}, affine {affine}, fox {fox}")
                })?;
            }
            let zero_class = derived_class(w).map_err(|e| e.to_string())?.is_zero();
            let (da, db) = fox_derivatives(w).map_err(|e| e.to_string())?;
            check(zero_class == (da.is_zero() && db.is_zero()), || {
                format!("class/Fox membership disagree on {w}")
            })?;
            Ok(1)
        })
        .sum()
}

/// `∏_{d | m} Φ_d = t^m − 1` for `1 ≤ m ≤ max_m`.
pub fn cyclotomic_product(max_m: i64) -> Result<usize, String> {
    for m in 1..=max_m {
        let prod = divisors(m as u64)
            .into_iter()
            .map(|d| cyclotomic(d as i64).map_err(|e| e.to_string()))
            .try_fold(LaurentPoly::one(), |acc, phi| phi.map(|p| &acc * &p))?;
        let expect = &LaurentPoly::monomial(1, m) - &LaurentPoly::one();
        check(prod == expect, || format!("product of Φ_d over d | {m} is {prod}"))?;
    }
    Ok(max_m as usize)
}

/// Seed of the `index`-th target for `(word, n)` in the sweep.
pub fn target_seed(seed: u64, word: usize, n: usize, index: usize) -> u64 {
    seed ^ ((word as u64) << 40) ^ ((n as u64) << 20) ^ index as u64
}

#[derive(Clone, Debug, Default)]
pub struct SweepSummary {
    pub cases: usize,
    pub max_residual: f64,
    /// `(word, n)` pairs skipped because the certificate does not cover `n`.
    pub skipped: Vec<(String, usize)>,
}

/// Certifies each word, then checks `targets` Haar-random witnesses for
/// every covered `n` in `dims`.
pub fn witness_sweep(
    words: &[Word],
    dims: std::ops::RangeInclusive<usize>,
    targets: usize,
    seed: u64,
    tol: f64,
) -> Result<SweepSummary, String> {
    let config = SearchConfig::default();
    let certs = words
        .iter()
        .map(|w| certify(w, &config).map_err(|e| format!("certify {w}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    let mut summary = SweepSummary::default();
    let mut jobs = Vec::new();
    for (i, cert) in certs.iter().enumerate() {
        for n in dims.clone() {
            if cert.certifies(n as u64) {
                jobs.push((i, n));
            } else {
                summary.skipped.push((cert.word.to_string(), n));
            }
        }
    }
    let results: Vec<Result<f64, String>> = jobs
        .par_iter()
        .map(|&(i, n)| {
            let cert = &certs[i];
            let mut worst: f64 = 0.0;
            for s in 0..targets {
                let g = haar_random_su(n, target_seed(seed, i, n, s));
                let r = witness(cert, n, &g).map_err(|e| format!("{} at n={n}: {e}", cert.word))?;
                check(r.residual <= tol, || {
                    format!("{} at n={n}, target {s}: residual {:.3e}", cert.word, r.residual)
                })?;
                worst = worst.max(r.residual);
            }
            Ok(worst)
        })
        .collect();
    for r in results {
        summary.max_residual = summary.max_residual.max(r?);
        summary.cases += targets;
    }
    Ok(summary)
}

#[derive(Clone, Debug)]
pub struct SelftestOptions {
    pub quick: bool,
    pub seed: u64,
    pub tol: f64,
    /// Deliberately breaks one identity so the failure path can be tested.
    pub inject_fault: bool,
}

impl Default for SelftestOptions {
    fn default() -> Self {
        SelftestOptions {
            quick: false,
            seed: 0,
            tol: 1e-8,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub result: Result<String, String>,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.result {
            Ok(detail) => write!(f, "PASS {}: {}", self.name, detail),
            Err(detail) => write!(f, "FAIL {}: {}", self.name, detail),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SelftestReport {
    pub checks: Vec<CheckOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.result.is_ok())
    }

    pub fn first_failure(&self) -> Option<&CheckOutcome> {
        self.checks.iter().find(|c| c.result.is_err())
    }
}

fn cases(r: Result<usize, String>) -> Result<String, String> {
    r.map(|n| format!("{n} cases"))
}

pub fn run(opts: &SelftestOptions) -> SelftestReport {
    let mut checks = vec![
        CheckOutcome {
            name: "conjugation identities",
            result: cases(if opts.inject_fault {
                conjugation_identities(2).and_then(|_| {
                    let lhs = conjugate(&Word::a(), &commutator(&cp(1), &bp(1)));
                    let rhs = commutator(&cp(1), &bp(1));
                    check(lhs == rhs, || "injected fault: a·[c,b] == [c,b]".to_string())
                        .map(|_| 0)
                })
            } else {
                conjugation_identities(8)
            }),
        },
        CheckOutcome {
            name: "rewrite identities",
            result: cases(rewrite_identities(8, 8)),
        },
        CheckOutcome {
            name: "commutator expansions",
            result: cases(commutator_expansion_identities(opts.seed, 200)),
        },
    ];
    if !opts.quick {
        checks.push(CheckOutcome {
            name: "oracle equivalence",
            result: cases(oracle_equivalence(opts.seed, 1000, 40)),
        });
        checks.push(CheckOutcome {
            name: "cyclotomic product",
            result: cases(cyclotomic_product(60)),
        });
        checks.push(CheckOutcome {
            name: "witness sweep",
            result: witness_sweep(&sweep_words(), 2..=8, 10, opts.seed, opts.tol).map(|s| {
                format!(
                    "{} cases, max residual {:.3e}, {} uncovered (word, n) pairs",
                    s.cases,
                    s.max_residual,
                    s.skipped.len()
                )
            }),
        });
    }
    SelftestReport { checks }
}
