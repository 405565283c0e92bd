//! Surjectivity certificates: classification, the Nielsen base-change
//! search for a basis with `p_ω ≠ 0`, and the Engel family.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::freegroup::{self, commutator, parse_with_symbols, substitute, BasisMap, Word};
use crate::laurent::{analyze_roots, LaurentError, LaurentPoly, RootAnalysis};
use crate::metabelian::{
    affine_eval, basis_affine_images, derived_class, in_derived, p_affine_small, p_poly,
    MetabelianError,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Symbols used for the new basis in serialized back-substitutions.
pub const NEW_BASIS_SYMBOLS: [char; 2] = ['x', 'y'];

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("word {0} lies in the second derived subgroup; the method is inapplicable")]
    Inapplicable(String),
    #[error("word {0} is not in the commutator subgroup")]
    NotDerived(String),
    #[error("no basis with p != 0 found for q <= {hard_cap_q}")]
    ResourceCap { hard_cap_q: i64 },
    #[error("engel index must be >= {min}, got {got}")]
    BadEngelIndex { got: i64, min: i64 },
    #[error("invalid certificate: {0}")]
    Invalid(String),
    #[error(transparent)]
    Metabelian(#[from] MetabelianError),
    #[error(transparent)]
    Laurent(#[from] LaurentError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classification {
    NotInF1,
    InF1NotF2,
    InF2,
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Classification::NotInF1 => "NotInF1",
            Classification::InF1NotF2 => "InF1NotF2",
            Classification::InF2 => "InF2",
        })
    }
}

/// Elementary Nielsen transformation, acting on the current basis `(x, y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum NielsenMove {
    /// `(x, y) → (y, x)`
    SwapAB,
    /// `(x, y) → (x⁻¹, y)`
    InvertA,
    /// `(x, y) → (x, y⁻¹)`
    InvertB,
    /// `(x, y) → (x yᑫ, y)`, `q ≠ 0`
    RightMultA { q: i64 },
}

impl NielsenMove {
    /// The new basis elements as words in the current basis.
    pub fn forward(&self) -> BasisMap {
        let (x, y) = (Word::a(), Word::b());
        match *self {
            NielsenMove::SwapAB => BasisMap::new(y, x),
            NielsenMove::InvertA => BasisMap::new(x.invert(), y),
            NielsenMove::InvertB => BasisMap::new(x, y.invert()),
            NielsenMove::RightMultA { q } => {
                BasisMap::new(x.multiply(&y.pow(&BigInt::from(q))), y)
            }
        }
    }

    /// The current basis elements as words in the new basis.
    pub fn backward(&self) -> BasisMap {
        let (x, y) = (Word::a(), Word::b());
        match *self {
            NielsenMove::SwapAB => BasisMap::new(y, x),
            NielsenMove::InvertA => BasisMap::new(x.invert(), y),
            NielsenMove::InvertB => BasisMap::new(x, y.invert()),
            NielsenMove::RightMultA { q } => {
                BasisMap::new(x.multiply(&y.pow(&BigInt::from(-q))), y)
            }
        }
    }

    fn is_involution(&self) -> bool {
        !matches!(self, NielsenMove::RightMultA { .. })
    }
}

impl fmt::Display for NielsenMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NielsenMove::SwapAB => f.write_str("SwapAB"),
            NielsenMove::InvertA => f.write_str("InvertA"),
            NielsenMove::InvertB => f.write_str("InvertB"),
            NielsenMove::RightMultA { q } => write!(f, "RightMultA({q})"),
        }
    }
}

/// Which of the two new generators carries `t`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum OrderedBasis {
    FirstSecond,
    SecondFirst,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Status {
    /// Surjective for every `n`.
    AllN,
    /// Surjective for every `n` without a divisor in the bad set.
    BadSet,
    /// The word lies in `F⁽²⁾`.
    Inapplicable,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::AllN => "AllN",
            Status::BadSet => "BadSet",
            Status::Inapplicable => "Inapplicable",
        })
    }
}

/// Original generators `(a, b)` as words in the basis reached by `moves`.
pub fn back_substitution(moves: &[NielsenMove]) -> BasisMap {
    moves
        .iter()
        .fold(BasisMap::identity(), |acc, m| acc.then(&m.backward()))
}

/// Basis reached by `moves`, as words in the original `(a, b)`.
pub fn forward_basis(moves: &[NielsenMove]) -> BasisMap {
    moves
        .iter()
        .fold(BasisMap::identity(), |acc, m| m.forward().then(&acc))
}

/// The back-substitution relabelled so that the generator carrying `t` is
/// the first symbol, as [`p_poly`] expects.
pub fn ordered_map(back: &BasisMap, ordered: OrderedBasis) -> BasisMap {
    match ordered {
        OrderedBasis::FirstSecond => back.clone(),
        OrderedBasis::SecondFirst => back.then(&BasisMap::swap()),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub word: Word,
    pub classification: Classification,
    pub moves: Vec<NielsenMove>,
    pub ordered_basis: OrderedBasis,
    pub back_substitution: BasisMap,
    pub polynomial: LaurentPoly,
    pub analysis: RootAnalysis,
    pub status: Status,
    pub tool_version: String,
}

impl Certificate {
    /// Certificate for `word ∈ F⁽¹⁾ \ F⁽²⁾` in the basis given by `moves` and
    /// `ordered`, with `p` recomputed by both exact routes.
    pub fn from_basis(
        word: &Word,
        moves: Vec<NielsenMove>,
        ordered: OrderedBasis,
    ) -> Result<Self, CertifyError> {
        let back = back_substitution(&moves);
        let polynomial = p_poly(word, &ordered_map(&back, ordered))?;
        let analysis = analyze_roots(&polynomial)?;
        let status = if analysis.bad_set.is_empty() {
            Status::AllN
        } else {
            Status::BadSet
        };
        Ok(Certificate {
            word: word.clone(),
            classification: Classification::InF1NotF2,
            moves,
            ordered_basis: ordered,
            back_substitution: back,
            polynomial,
            analysis,
            status,
            tool_version: TOOL_VERSION.to_string(),
        })
    }

    fn without_polynomial(word: &Word, classification: Classification, status: Status) -> Self {
        Certificate {
            word: word.clone(),
            classification,
            moves: Vec::new(),
            ordered_basis: OrderedBasis::FirstSecond,
            back_substitution: BasisMap::identity(),
            polynomial: LaurentPoly::zero(),
            analysis: RootAnalysis::trivial(),
            status,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    /// Words outside `F⁽¹⁾` need no polynomial: every `n` is covered.
    pub fn not_derived(word: &Word) -> Self {
        Certificate::without_polynomial(word, Classification::NotInF1, Status::AllN)
    }

    pub fn inapplicable(word: &Word) -> Self {
        Certificate::without_polynomial(word, Classification::InF2, Status::Inapplicable)
    }

    /// Whether the certificate covers `SU(n)`.
    pub fn certifies(&self, n: u64) -> bool {
        match self.status {
            Status::Inapplicable => false,
            _ => self.analysis.certified_n(n),
        }
    }

    /// The word rewritten over the new basis (symbols `a`, `b` standing for
    /// the new `x`, `y`).
    pub fn rewritten_word(&self) -> Word {
        substitute(&self.word, &self.back_substitution)
    }

    /// Human description of the covered dimensions.
    pub fn describe_n(&self) -> String {
        match self.status {
            Status::Inapplicable => "no n (method inapplicable)".to_string(),
            Status::AllN => "all n >= 2".to_string(),
            Status::BadSet => {
                let bad: Vec<String> = self.analysis.bad_set.iter().map(u64::to_string).collect();
                format!("all n with no divisor in {{{}}}", bad.join(", "))
            }
        }
    }

    /// Recomputes every derived field and checks it against the stored one.
    pub fn verify(&self) -> Result<(), CertifyError> {
        let invalid = |msg: String| Err(CertifyError::Invalid(msg));
        let class = classify(&self.word);
        if class != self.classification {
            return invalid(format!(
                "classification {} recorded, {} recomputed",
                self.classification, class
            ));
        }
        let back = back_substitution(&self.moves);
        if back != self.back_substitution {
            return invalid("back-substitution does not match the moves".into());
        }
        if let Some(m) = self.moves.iter().find(|m| matches!(m, NielsenMove::RightMultA { q: 0 })) {
            return invalid(format!("degenerate move {m}"));
        }
        match class {
            Classification::NotInF1 | Classification::InF2 => {
                let expected = if class == Classification::InF2 {
                    Certificate::inapplicable(&self.word)
                } else {
                    Certificate::not_derived(&self.word)
                };
                if self.polynomial != expected.polynomial
                    || self.analysis != expected.analysis
                    || self.status != expected.status
                    || !self.moves.is_empty()
                {
                    return invalid(format!("inconsistent {class} certificate"));
                }
            }
            Classification::InF1NotF2 => {
                let fresh =
                    Certificate::from_basis(&self.word, self.moves.clone(), self.ordered_basis)?;
                if fresh.polynomial != self.polynomial {
                    return invalid(format!(
                        "polynomial {} recorded, {} recomputed",
                        self.polynomial, fresh.polynomial
                    ));
                }
                if fresh.analysis != self.analysis || fresh.status != self.status {
                    return invalid("root analysis does not match the polynomial".into());
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        let repr = CertificateJson {
            word: self.word.to_string(),
            classification: self.classification,
            moves: self.moves.clone(),
            ordered_basis: self.ordered_basis,
            back_substitution: [
                self.back_substitution.image_a.render_with(NEW_BASIS_SYMBOLS),
                self.back_substitution.image_b.render_with(NEW_BASIS_SYMBOLS),
            ],
            polynomial: self.polynomial.clone(),
            bad_set: self.analysis.bad_set.iter().copied().collect(),
            span: self.analysis.span,
            lpf_bound: self.analysis.lpf_bound,
            status: self.status,
            tool_version: self.tool_version.clone(),
        };
        let mut s = serde_json::to_string_pretty(&repr).expect("certificate serializes");
        s.push('\n');
        s
    }

    /// Parses the JSON form. Only the encoding is checked; call
    /// [`Certificate::verify`] to check the mathematics.
    pub fn from_json(text: &str) -> Result<Self, CertifyError> {
        let repr: CertificateJson = serde_json::from_str(text)?;
        let word = freegroup::parse(&repr.word)
            .map_err(|e| CertifyError::Invalid(format!("word: {e}")))?;
        let [sa, sb] = &repr.back_substitution;
        let parse_new = |s: &str| {
            parse_with_symbols(s, NEW_BASIS_SYMBOLS)
                .map_err(|e| CertifyError::Invalid(format!("back_substitution: {e}")))
        };
        let back = BasisMap::new(parse_new(sa)?, parse_new(sb)?);
        let bad_set: std::collections::BTreeSet<u64> = repr.bad_set.iter().copied().collect();
        if bad_set.len() != repr.bad_set.len() || repr.bad_set.windows(2).any(|w| w[0] > w[1]) {
            return Err(CertifyError::Invalid("bad_set must be sorted and distinct".into()));
        }
        Ok(Certificate {
            word,
            classification: repr.classification,
            moves: repr.moves,
            ordered_basis: repr.ordered_basis,
            back_substitution: back,
            analysis: RootAnalysis {
                bad_set,
                vanishes_at_one: repr.polynomial.eval_at_one().is_zero(),
                span: repr.span,
                lpf_bound: repr.lpf_bound,
            },
            polynomial: repr.polynomial,
            status: repr.status,
            tool_version: repr.tool_version,
        })
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CertificateJson {
    word: String,
    classification: Classification,
    moves: Vec<NielsenMove>,
    ordered_basis: OrderedBasis,
    back_substitution: [String; 2],
    polynomial: LaurentPoly,
    bad_set: Vec<u64>,
    span: u64,
    lpf_bound: u64,
    status: Status,
    tool_version: String,
}

pub fn classify(w: &Word) -> Classification {
    if !in_derived(w, 1) {
        Classification::NotInF1
    } else if in_derived(w, 2) {
        Classification::InF2
    } else {
        Classification::InF1NotF2
    }
}

/// Applies `InvertA` / `InvertB` so that the largest `|n|` in the class of
/// `w` is attained at a negative `n`, and the largest `m` paired with that
/// `n` is positive. Returns the rewritten word and the moves applied.
pub fn normalize_signs(w: &Word) -> Result<(Word, Vec<NielsenMove>), CertifyError> {
    if classify(w) != Classification::InF1NotF2 {
        return Err(match classify(w) {
            Classification::NotInF1 => CertifyError::NotDerived(w.to_string()),
            _ => CertifyError::Inapplicable(w.to_string()),
        });
    }
    let mut moves = Vec::new();
    let mut current = w.clone();
    let (n_max, has_negative) = {
        let cls = derived_class(&current)?;
        let n_max = cls.terms().map(|((n, _), _)| n.abs()).max().expect("nonzero class");
        let has_negative = cls.terms().any(|((n, _), _)| *n == -&n_max);
        (n_max, has_negative)
    };
    if !has_negative {
        moves.push(NielsenMove::InvertA);
        current = substitute(&current, &NielsenMove::InvertA.backward());
    }
    let cls = derived_class(&current)?;
    let neg = -&n_max;
    let m_top = cls
        .terms()
        .filter(|((n, _), _)| *n == neg)
        .map(|((_, m), _)| m.clone())
        .max()
        .expect("pivot row is nonempty");
    if m_top.is_negative() {
        moves.push(NielsenMove::InvertB);
        current = substitute(&current, &NielsenMove::InvertB.backward());
    }
    Ok((current, moves))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_q: i64,
    pub max_depth: usize,
    pub hard_cap_q: i64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_q: 16,
            max_depth: 3,
            hard_cap_q: 512,
        }
    }
}

/// A basis choice evaluated during the search.
struct Candidate {
    moves: Vec<NielsenMove>,
    ordered: OrderedBasis,
    analysis: RootAnalysis,
}

impl Candidate {
    /// Empty bad set first, then fewer bad moduli, then smaller span.
    fn rank(&self) -> (bool, usize, u64) {
        (
            !self.analysis.bad_set.is_empty(),
            self.analysis.bad_set.len(),
            self.analysis.span,
        )
    }
}

/// `p` for one basis choice via the affine route alone; used to score
/// search candidates before the winner is recomputed by both routes.
fn quick_p(w: &Word, moves: &[NielsenMove], ordered: OrderedBasis) -> Option<LaurentPoly> {
    let map = ordered_map(&back_substitution(moves), ordered);
    if let Some(p) = p_affine_small(w, &map) {
        return Some(p);
    }
    let [ia, ib] = basis_affine_images(&map).ok()?;
    let image = affine_eval(w, [&ia, &ib]).ok()?;
    Some(image.translation)
}

/// Shift and sign normal form of `p`; the root analysis depends only on it.
fn analysis_key(p: &LaurentPoly) -> LaurentPoly {
    let q = p.shift(-p.min_exponent().unwrap_or(0));
    if q.terms().next_back().is_some_and(|(_, c)| c.is_negative()) {
        -&q
    } else {
        q
    }
}

/// Scores every job; distinct polynomials are analyzed once.
fn evaluate_all(w: &Word, jobs: Vec<(Vec<NielsenMove>, OrderedBasis)>) -> Vec<Option<Candidate>> {
    let keys: Vec<Option<LaurentPoly>> = jobs
        .par_iter()
        .map(|(moves, o)| {
            quick_p(w, moves, *o)
                .filter(|p| !p.is_zero())
                .map(|p| analysis_key(&p))
        })
        .collect();
    let unique: HashSet<&LaurentPoly> = keys.iter().flatten().collect();
    let analyses: HashMap<&LaurentPoly, RootAnalysis> = unique
        .into_par_iter()
        .filter_map(|p| analyze_roots(p).ok().map(|a| (p, a)))
        .collect();
    jobs.into_iter()
        .zip(&keys)
        .map(|((moves, ordered), key)| {
            let analysis = analyses.get(key.as_ref()?)?.clone();
            Some(Candidate {
                moves,
                ordered,
                analysis,
            })
        })
        .collect()
}

/// Best candidate by rank; ties go to the earliest in enumeration order.
fn best_of(candidates: Vec<Option<Candidate>>) -> Option<Candidate> {
    candidates
        .into_iter()
        .flatten()
        .enumerate()
        .min_by_key(|(i, c)| (c.rank(), *i))
        .map(|(_, c)| c)
}

fn move_alphabet(max_q: i64) -> Vec<NielsenMove> {
    let mut out = vec![
        NielsenMove::SwapAB,
        NielsenMove::InvertA,
        NielsenMove::InvertB,
    ];
    for q in 1..=max_q {
        out.push(NielsenMove::RightMultA { q });
        out.push(NielsenMove::RightMultA { q: -q });
    }
    out
}

/// Skips sequences equivalent to shorter ones: repeated involutions,
/// adjacent right multiplications, and `InvertB` before `InvertA`.
fn redundant(prev: NielsenMove, next: NielsenMove) -> bool {
    (prev == next && prev.is_involution())
        || matches!(
            (prev, next),
            (NielsenMove::RightMultA { .. }, NielsenMove::RightMultA { .. })
                | (NielsenMove::InvertB, NielsenMove::InvertA)
        )
}

fn sequences_of_depth(alphabet: &[NielsenMove], depth: usize) -> Vec<Vec<NielsenMove>> {
    let mut level: Vec<Vec<NielsenMove>> = vec![Vec::new()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for seq in &level {
            for &m in alphabet {
                if seq.last().is_some_and(|&p| redundant(p, m)) {
                    continue;
                }
                let mut s = seq.clone();
                s.push(m);
                next.push(s);
            }
        }
        level = next;
    }
    level
}

const ORDERINGS: [OrderedBasis; 2] = [OrderedBasis::FirstSecond, OrderedBasis::SecondFirst];

/// Searches for a basis in which `p_w ≠ 0`, for `w ∈ F⁽¹⁾ \ F⁽²⁾`.
///
/// Stage 0 tries the identity basis and `InvertA`, each in both orders.
/// Stage 1 runs a breadth-first search over move sequences of length up to
/// `max_depth`, stopping at the first depth that yields an empty bad set.
/// The best candidate seen (ranked by [`Candidate::rank`]) wins. Stage 2
/// runs only if every candidate had `p = 0`: after [`normalize_signs`] it
/// takes `a ↦ a bᑫ` for `q = 1, 2, …` with the ordered basis `(b, a bᑫ)`
/// until the coefficient of `t^{qN+m}` is nonzero, where `(−N, m)` is the
/// pivot index from the normalization.
pub fn search_basis(w: &Word, config: &SearchConfig) -> Result<Certificate, CertifyError> {
    match classify(w) {
        Classification::InF2 => return Ok(Certificate::inapplicable(w)),
        Classification::NotInF1 => return Err(CertifyError::NotDerived(w.to_string())),
        Classification::InF1NotF2 => {}
    }

    let stage0 = [vec![], vec![NielsenMove::InvertA]]
        .into_iter()
        .flat_map(|moves| ORDERINGS.map(|o| (moves.clone(), o)))
        .collect();
    let mut best = best_of(evaluate_all(w, stage0));

    if best.as_ref().is_none_or(|c| !c.analysis.bad_set.is_empty()) {
        let alphabet = move_alphabet(config.max_q);
        for depth in 1..=config.max_depth {
            let jobs: Vec<(Vec<NielsenMove>, OrderedBasis)> = sequences_of_depth(&alphabet, depth)
                .into_iter()
                .flat_map(|s| ORDERINGS.map(|o| (s.clone(), o)))
                .collect();
            if let Some(c) = best_of(evaluate_all(w, jobs)) {
                if best.as_ref().is_none_or(|b| c.rank() < b.rank()) {
                    best = Some(c);
                }
            }
            if best.as_ref().is_some_and(|c| c.analysis.bad_set.is_empty()) {
                break;
            }
        }
    }

    match best {
        Some(c) => Certificate::from_basis(w, c.moves, c.ordered),
        None => stage2_fallback(w, config.hard_cap_q),
    }
}

/// The constructive fallback: sign normalization followed by `a ↦ a bᑫ`
/// for increasing `q`, in the ordered basis `(b, a bᑫ)`.
pub fn stage2_fallback(w: &Word, hard_cap_q: i64) -> Result<Certificate, CertifyError> {
    let (normalized, sign_moves) = normalize_signs(w)?;
    let cls = derived_class(&normalized)?;
    let n_max = cls
        .terms()
        .map(|((n, _), _)| n.abs())
        .max()
        .expect("nonzero class");
    let neg = -&n_max;
    let m_top = cls
        .terms()
        .filter(|((n, _), _)| *n == neg)
        .map(|((_, m), _)| m.clone())
        .max()
        .expect("pivot row is nonempty");
    let n_max = n_max.to_i64().ok_or(MetabelianError::ExponentOverflow(n_max))?;
    let m_top = m_top.to_i64().ok_or(MetabelianError::ExponentOverflow(m_top))?;
    for q in 1..=hard_cap_q {
        let mut moves = sign_moves.clone();
        moves.push(NielsenMove::RightMultA { q });
        let Some(p) = quick_p(w, &moves, OrderedBasis::SecondFirst) else {
            continue;
        };
        if !p.coeff(q * n_max + m_top).is_zero() {
            return Certificate::from_basis(w, moves, OrderedBasis::SecondFirst);
        }
    }
    Err(CertifyError::ResourceCap { hard_cap_q })
}

/// Full pipeline for any word.
pub fn certify(w: &Word, config: &SearchConfig) -> Result<Certificate, CertifyError> {
    match classify(w) {
        Classification::NotInF1 => Ok(Certificate::not_derived(w)),
        Classification::InF2 => Ok(Certificate::inapplicable(w)),
        Classification::InF1NotF2 => search_basis(w, config),
    }
}

/// `e₀ = a`, `e_k = [e_{k−1}, b]`.
pub fn engel(k: i64) -> Result<Word, CertifyError> {
    if k < 0 {
        return Err(CertifyError::BadEngelIndex { got: k, min: 0 });
    }
    let mut w = Word::a();
    for _ in 0..k {
        w = commutator(&w, &Word::b());
    }
    Ok(w)
}

/// `(1 − t)^k`
pub fn engel_closed_form(k: u32) -> LaurentPoly {
    let one_minus_t = LaurentPoly::from_coeffs(&[1, -1]);
    (0..k).fold(LaurentPoly::one(), |acc, _| &acc * &one_minus_t)
}

/// Certificate for `e_k` in the ordered basis `(b, a)`; the recomputed
/// polynomial must equal `(1 − t)^k`.
pub fn engel_certificate(k: i64) -> Result<Certificate, CertifyError> {
    if k < 1 {
        return Err(CertifyError::BadEngelIndex { got: k, min: 1 });
    }
    let w = engel(k)?;
    let cert = Certificate::from_basis(&w, Vec::new(), OrderedBasis::SecondFirst)?;
    let closed = engel_closed_form(k as u32);
    if cert.polynomial != closed {
        return Err(CertifyError::Invalid(format!(
            "engel word {k}: recomputed {} but closed form is {}",
            cert.polynomial, closed
        )));
    }
    Ok(cert)
}
