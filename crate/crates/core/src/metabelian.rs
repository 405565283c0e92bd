//! The free abelian group `F⁽¹⁾/F⁽²⁾` on the classes `ξ_{n,m}` of
//! `[aⁿ, bᵐ]`, abelianized Fox derivatives, and the polynomial `p_ω`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::freegroup::{substitute, BasisMap, Generator, Word};
use crate::laurent::LaurentPoly;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetabelianError {
    #[error("word {0} is not in the commutator subgroup")]
    NotInDerived(String),
    #[error("exponent {0} does not fit in a machine integer")]
    ExponentOverflow(BigInt),
    #[error("internal error: p computed via ξ-class ({class}) differs from affine evaluation ({affine})")]
    RouteMismatch { class: String, affine: String },
}

pub(crate) fn small(e: &BigInt) -> Result<i64, MetabelianError> {
    e.to_i64()
        .ok_or_else(|| MetabelianError::ExponentOverflow(e.clone()))
}

/// Class in `F⁽¹⁾/F⁽²⁾`, as integer coefficients on `ξ_{n,m}` (`nm ≠ 0`).
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct DerivedClass {
    coeffs: BTreeMap<(BigInt, BigInt), BigInt>,
}

impl DerivedClass {
    pub fn zero() -> Self {
        DerivedClass::default()
    }

    /// `c·ξ_{n,m}`; zero if `n = 0` or `m = 0`.
    pub fn basis(n: impl Into<BigInt>, m: impl Into<BigInt>) -> Self {
        let mut c = DerivedClass::zero();
        c.add_term(n.into(), m.into(), BigInt::one());
        c
    }

    pub fn add_term(&mut self, n: BigInt, m: BigInt, c: BigInt) {
        if n.is_zero() || m.is_zero() || c.is_zero() {
            return;
        }
        let key = (n, m);
        let entry = self.coeffs.entry(key.clone()).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, n: impl Into<BigInt>, m: impl Into<BigInt>) -> BigInt {
        self.coeffs
            .get(&(n.into(), m.into()))
            .cloned()
            .unwrap_or_default()
    }

    /// `((n, m), coefficient)` in ascending `(n, m)` order.
    pub fn terms(&self) -> impl Iterator<Item = (&(BigInt, BigInt), &BigInt)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Image under `ξ_{n,m} ↦ m(tⁿ − 1)`.
    pub fn to_poly(&self) -> Result<LaurentPoly, MetabelianError> {
        let mut p = LaurentPoly::zero();
        for ((n, m), c) in &self.coeffs {
            let n = small(n)?;
            let w = c * m;
            p.add_term(n, w.clone());
            p.add_term(0, -w);
        }
        Ok(p)
    }
}

impl Add for &DerivedClass {
    type Output = DerivedClass;
    fn add(self, rhs: &DerivedClass) -> DerivedClass {
        let mut out = self.clone();
        for ((n, m), c) in &rhs.coeffs {
            out.add_term(n.clone(), m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &DerivedClass {
    type Output = DerivedClass;
    fn neg(self) -> DerivedClass {
        DerivedClass {
            coeffs: self.coeffs.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Sub for &DerivedClass {
    type Output = DerivedClass;
    fn sub(self, rhs: &DerivedClass) -> DerivedClass {
        self + &(-rhs)
    }
}

impl fmt::Display for DerivedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, ((n, m), c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if !mag.is_one() {
                write!(f, "{mag}·")?;
            }
            write!(f, "ξ({n},{m})")?;
        }
        Ok(())
    }
}

/// The conjugation action of `g` (or `g⁻¹` when `inverse`) on a class:
///
/// * `a·ξ_{n,m} = ξ_{n+1,m} − ξ_{1,m}`, `a⁻¹·ξ_{n,m} = ξ_{n−1,m} − ξ_{−1,m}`
/// * `b·ξ_{n,m} = ξ_{n,m+1} − ξ_{n,1}`, `b⁻¹·ξ_{n,m} = ξ_{n,m−1} − ξ_{n,−1}`
pub fn act_generator(g: Generator, inverse: bool, cls: &DerivedClass) -> DerivedClass {
    let step = if inverse { -BigInt::one() } else { BigInt::one() };
    let mut out = DerivedClass::zero();
    for ((n, m), c) in &cls.coeffs {
        match g {
            Generator::A => {
                out.add_term(n + &step, m.clone(), c.clone());
                out.add_term(step.clone(), m.clone(), -c);
            }
            Generator::B => {
                out.add_term(n.clone(), m + &step, c.clone());
                out.add_term(n.clone(), step.clone(), -c);
            }
        }
    }
    out
}

/// Class of `w ∈ F⁽¹⁾` in `F⁽¹⁾/F⁽²⁾`.
///
/// Uses the Schreier transversal `{aⁱbʲ}`: the syllable `aᵉ` read at prefix
/// coset `(i, j)` contributes `ξ_{i,j} − ξ_{i+e,j}` (zero-index terms
/// vanish) and `b`-syllables contribute nothing.
pub fn derived_class(w: &Word) -> Result<DerivedClass, MetabelianError> {
    let (sa, sb) = w.exponent_sums();
    if !sa.is_zero() || !sb.is_zero() {
        return Err(MetabelianError::NotInDerived(w.to_string()));
    }
    let mut i = BigInt::zero();
    let mut j = BigInt::zero();
    let mut out = DerivedClass::zero();
    for s in w.syllables() {
        match s.generator {
            Generator::A => {
                let next = &i + &s.exponent;
                out.add_term(i.clone(), j.clone(), BigInt::one());
                out.add_term(next.clone(), j.clone(), -BigInt::one());
                i = next;
            }
            Generator::B => j += &s.exponent,
        }
    }
    Ok(out)
}

/// Laurent polynomial in `x, y` with integer coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BivariatePoly {
    coeffs: BTreeMap<(i64, i64), BigInt>,
}

impl BivariatePoly {
    pub fn zero() -> Self {
        BivariatePoly::default()
    }

    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = ((i64, i64), C)>) -> Self {
        let mut p = BivariatePoly::zero();
        for ((i, j), c) in terms {
            p.add_term(i, j, c.into());
        }
        p
    }

    pub fn add_term(&mut self, i: i64, j: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry((i, j)).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&(i, j));
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `(i, j) ↦ c` for `c·xⁱyʲ`.
    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &BigInt)> {
        self.coeffs.iter()
    }

    /// Specialize `y = 1`, renaming `x` to `t`.
    pub fn at_y_one(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (&(i, _), c) in &self.coeffs {
            p.add_term(i, c.clone());
        }
        p
    }
}

impl fmt::Display for BivariatePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (&(i, j), c)) in self.coeffs.iter().enumerate() {
            let mag = c.abs();
            match (k, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let power = |v: char, e: i64| match e {
                0 => String::new(),
                1 => v.to_string(),
                _ => format!("{v}^{e}"),
            };
            let monomial = format!("{}{}", power('x', i), power('y', j));
            if monomial.is_empty() || !mag.is_one() {
                write!(f, "{mag}")?;
            }
            f.write_str(&monomial)?;
        }
        Ok(())
    }
}

/// Abelianized left Fox derivatives `(D̄_a(w), D̄_b(w))` in `ℤ[x^±, y^±]`.
pub fn fox_derivatives(w: &Word) -> Result<(BivariatePoly, BivariatePoly), MetabelianError> {
    let mut da = BivariatePoly::zero();
    let mut db = BivariatePoly::zero();
    let mut i = 0i64;
    let mut j = 0i64;
    for s in w.syllables() {
        let e = small(&s.exponent)?;
        // D(g^e) = 1 + g + … + g^{e-1} for e > 0, −(g^{-1} + … + g^{e}) for e < 0
        let (lo, hi, sign) = if e > 0 { (0, e - 1, 1) } else { (e, -1, -1) };
        for k in lo..=hi {
            match s.generator {
                Generator::A => da.add_term(i + k, j, BigInt::from(sign)),
                Generator::B => db.add_term(i, j + k, BigInt::from(sign)),
            }
        }
        match s.generator {
            Generator::A => i += e,
            Generator::B => j += e,
        }
    }
    Ok((da, db))
}

/// Membership in the first (`level = 1`) or second (`level = 2`) derived
/// subgroup. Level 2 is decided by the vanishing of both Fox derivatives.
pub fn in_derived(w: &Word, level: u8) -> bool {
    assert!(level == 1 || level == 2, "level must be 1 or 2");
    let (sa, sb) = w.exponent_sums();
    if !sa.is_zero() || !sb.is_zero() {
        return false;
    }
    if level == 1 {
        return true;
    }
    match fox_derivatives(w) {
        Ok((da, db)) => da.is_zero() && db.is_zero(),
        Err(_) => derived_class(w).map(|c| c.is_zero()).unwrap_or(false),
    }
}

/// Element `f ↦ t^shift·f + translation` of the affine group over `ℤ[t^±]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    pub shift: i64,
    pub translation: LaurentPoly,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            shift: 0,
            translation: LaurentPoly::zero(),
        }
    }

    /// Image of the generator carrying `t`.
    pub fn first() -> Self {
        AffineMap {
            shift: 1,
            translation: LaurentPoly::zero(),
        }
    }

    /// Image of the other generator.
    pub fn second() -> Self {
        AffineMap {
            shift: 0,
            translation: LaurentPoly::one(),
        }
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        AffineMap {
            shift: self.shift + other.shift,
            translation: &self.translation + &other.translation.shift(self.shift),
        }
    }

    pub fn inverse(&self) -> AffineMap {
        AffineMap {
            shift: -self.shift,
            translation: -&self.translation.shift(-self.shift),
        }
    }

    pub fn pow(&self, e: i64) -> AffineMap {
        if e < 0 {
            return self.inverse().pow(-e);
        }
        if self.translation.is_zero() {
            return AffineMap {
                shift: self.shift * e,
                translation: LaurentPoly::zero(),
            };
        }
        let geometric = if self.shift == 0 {
            LaurentPoly::monomial(e, 0)
        } else {
            LaurentPoly::from_terms((0..e).map(|k| (k * self.shift, 1)))
        };
        AffineMap {
            shift: self.shift * e,
            translation: &self.translation * &geometric,
        }
    }
}

/// Evaluates `w` in the affine group with `a ↦ images[0]`, `b ↦ images[1]`.
pub fn affine_eval(w: &Word, images: [&AffineMap; 2]) -> Result<AffineMap, MetabelianError> {
    let mut acc = AffineMap::identity();
    for s in w.syllables() {
        let e = small(&s.exponent)?;
        let g = match s.generator {
            Generator::A => images[0],
            Generator::B => images[1],
        };
        acc = acc.compose(&g.pow(e));
    }
    Ok(acc)
}

/// Affine images of the basis words of `basis` under the standard
/// assignment (first generator carries `t`).
pub fn basis_affine_images(basis: &BasisMap) -> Result<[AffineMap; 2], MetabelianError> {
    let std = [AffineMap::first(), AffineMap::second()];
    let ia = affine_eval(&basis.image_a, [&std[0], &std[1]])?;
    let ib = affine_eval(&basis.image_b, [&std[0], &std[1]])?;
    Ok([ia, ib])
}

fn require_derived(w: &Word) -> Result<(), MetabelianError> {
    if in_derived(w, 1) {
        Ok(())
    } else {
        Err(MetabelianError::NotInDerived(w.to_string()))
    }
}

/// `p` via the affine representation: the translation part of the image of
/// `w` once `a, b` are replaced by the basis words of `basis`.
pub fn p_affine(w: &Word, basis: &BasisMap) -> Result<LaurentPoly, MetabelianError> {
    require_derived(w)?;
    let [ia, ib] = basis_affine_images(basis)?;
    let image = affine_eval(w, [&ia, &ib])?;
    debug_assert_eq!(image.shift, 0);
    Ok(image.translation)
}

/// `p` via the `ξ`-class of the rewritten word.
pub fn p_class(w: &Word, basis: &BasisMap) -> Result<LaurentPoly, MetabelianError> {
    require_derived(w)?;
    derived_class(&substitute(w, basis))?.to_poly()
}

/// `p` as `D̄_b` of the rewritten word, specialized at `y = 1`.
pub fn p_fox(w: &Word, basis: &BasisMap) -> Result<LaurentPoly, MetabelianError> {
    require_derived(w)?;
    let (_, db) = fox_derivatives(&substitute(w, basis))?;
    Ok(db.at_y_one())
}

/// The polynomial `p_w` in the ordered basis described by `basis`.
///
/// `basis` expresses the original generators `a, b` as words in the new
/// ordered basis `(first, second)`, written with the symbols `a` (first) and
/// `b` (second); the first element carries `t`, so `[firstⁿ, secondᵐ]` maps
/// to `m(tⁿ − 1)`. The ξ-class route and the affine route are both
/// computed; a disagreement is reported as an internal error.
pub fn p_poly(w: &Word, basis: &BasisMap) -> Result<LaurentPoly, MetabelianError> {
    let class = p_class(w, basis)?;
    let affine = p_affine(w, basis)?;
    if class != affine {
        return Err(MetabelianError::RouteMismatch {
            class: class.to_string(),
            affine: affine.to_string(),
        });
    }
    Ok(class)
}

/// [`AffineMap`] with machine-integer coefficients, for scoring many
/// candidate bases quickly. Every operation returns `None` on overflow or
/// when the translation would span more than `MAX_SMALL_SPAN` exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
struct SmallAffine {
    shift: i64,
    lo: i64,
    coeffs: Vec<i64>,
}

const MAX_SMALL_SPAN: i64 = 1 << 20;

impl SmallAffine {
    fn new(shift: i64, lo: i64, mut coeffs: Vec<i64>) -> Self {
        let start = coeffs.iter().position(|&c| c != 0).unwrap_or(coeffs.len());
        let end = coeffs.iter().rposition(|&c| c != 0).map_or(start, |i| i + 1);
        coeffs.truncate(end);
        coeffs.drain(..start);
        let lo = if coeffs.is_empty() { 0 } else { lo + start as i64 };
        SmallAffine { shift, lo, coeffs }
    }

    fn generator(first: bool) -> Self {
        if first {
            SmallAffine::new(1, 0, Vec::new())
        } else {
            SmallAffine::new(0, 0, vec![1])
        }
    }

    fn identity() -> Self {
        SmallAffine::new(0, 0, Vec::new())
    }

    /// `self ∘ other`
    fn compose(&self, other: &SmallAffine) -> Option<SmallAffine> {
        let shift = self.shift.checked_add(other.shift)?;
        if other.coeffs.is_empty() {
            return Some(SmallAffine { shift, ..self.clone() });
        }
        let olo = other.lo.checked_add(self.shift)?;
        if self.coeffs.is_empty() {
            return Some(SmallAffine::new(shift, olo, other.coeffs.clone()));
        }
        let hi = (self.lo + self.coeffs.len() as i64).max(olo.checked_add(other.coeffs.len() as i64)?);
        let lo = self.lo.min(olo);
        if hi - lo > MAX_SMALL_SPAN {
            return None;
        }
        let mut coeffs = vec![0i64; (hi - lo) as usize];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[(self.lo - lo) as usize + i] = c;
        }
        for (i, &c) in other.coeffs.iter().enumerate() {
            let slot = &mut coeffs[(olo - lo) as usize + i];
            *slot = slot.checked_add(c)?;
        }
        Some(SmallAffine::new(shift, lo, coeffs))
    }

    fn inverse(&self) -> Option<SmallAffine> {
        let coeffs = self.coeffs.iter().map(|c| c.checked_neg()).collect::<Option<Vec<_>>>()?;
        Some(SmallAffine::new(-self.shift, self.lo.checked_sub(self.shift)?, coeffs))
    }

    fn pow(&self, e: i64) -> Option<SmallAffine> {
        let mut base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = SmallAffine::identity();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.compose(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.compose(&base)?;
            }
        }
        Some(acc)
    }

    fn eval(w: &Word, images: [&SmallAffine; 2]) -> Option<SmallAffine> {
        let mut acc = SmallAffine::identity();
        for s in w.syllables() {
            let g = match s.generator {
                Generator::A => images[0],
                Generator::B => images[1],
            };
            acc = acc.compose(&g.pow(s.exponent.to_i64()?)?)?;
        }
        Some(acc)
    }
}

/// The affine route to `p` in machine integers. `None` means the word is
/// not in `F⁽¹⁾` or the computation left the machine-integer range; callers
/// fall back to [`p_affine`].
pub fn p_affine_small(w: &Word, basis: &BasisMap) -> Option<LaurentPoly> {
    if !in_derived(w, 1) {
        return None;
    }
    let std = [SmallAffine::generator(true), SmallAffine::generator(false)];
    let ia = SmallAffine::eval(&basis.image_a, [&std[0], &std[1]])?;
    let ib = SmallAffine::eval(&basis.image_b, [&std[0], &std[1]])?;
    let image = SmallAffine::eval(w, [&ia, &ib])?;
    Some(LaurentPoly::from_terms(
        image.coeffs.iter().enumerate().map(|(i, &c)| (image.lo + i as i64, c)),
    ))
}
