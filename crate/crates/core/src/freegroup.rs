//! Words in the free group on two generators.
//!
//! A [`Word`] is always stored freely reduced as a list of syllables
//! `g^e` with nonzero exponents and alternating generators. Exponents are
//! arbitrary-precision so repeated base changes never overflow.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    A,
    B,
}

impl Generator {
    pub fn other(self) -> Generator {
        match self {
            Generator::A => Generator::B,
            Generator::B => Generator::A,
        }
    }

    fn index(self) -> usize {
        match self {
            Generator::A => 0,
            Generator::B => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syllable {
    pub generator: Generator,
    pub exponent: BigInt,
}

/// Freely reduced word in `F = <a, b>`. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word {
    syllables: Vec<Syllable>,
}

/// Endomorphism of `F` given by the images of the two generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisMap {
    pub image_a: Word,
    pub image_b: Word,
}

impl BasisMap {
    pub fn new(image_a: Word, image_b: Word) -> Self {
        BasisMap { image_a, image_b }
    }

    pub fn identity() -> Self {
        BasisMap::new(Word::generator(Generator::A), Word::generator(Generator::B))
    }

    pub fn swap() -> Self {
        BasisMap::new(Word::generator(Generator::B), Word::generator(Generator::A))
    }

    pub fn image(&self, g: Generator) -> &Word {
        match g {
            Generator::A => &self.image_a,
            Generator::B => &self.image_b,
        }
    }

    /// `self.then(other)` is the map `w ↦ substitute(substitute(w, self), other)`.
    pub fn then(&self, other: &BasisMap) -> BasisMap {
        BasisMap::new(
            substitute(&self.image_a, other),
            substitute(&self.image_b, other),
        )
    }
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: Generator) -> Self {
        Word::power_of(g, 1)
    }

    pub fn a() -> Self {
        Word::generator(Generator::A)
    }

    pub fn b() -> Self {
        Word::generator(Generator::B)
    }

    /// `g^e`; the identity when `e = 0`.
    pub fn power_of(g: Generator, e: impl Into<BigInt>) -> Self {
        let mut w = Word::identity();
        w.push(g, e.into());
        w
    }

    /// Builds a reduced word from arbitrary (possibly unreduced) syllables.
    pub fn from_syllables<I, E>(syllables: I) -> Self
    where
        I: IntoIterator<Item = (Generator, E)>,
        E: Into<BigInt>,
    {
        let mut w = Word::identity();
        for (g, e) in syllables {
            w.push(g, e.into());
        }
        w
    }

    pub fn syllables(&self) -> &[Syllable] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Number of syllables.
    pub fn syllable_count(&self) -> usize {
        self.syllables.len()
    }

    /// Letter length `Σ |e|`, saturating at `usize::MAX`.
    pub fn length(&self) -> usize {
        self.syllables
            .iter()
            .map(|s| s.exponent.abs().to_usize().unwrap_or(usize::MAX))
            .fold(0usize, usize::saturating_add)
    }

    fn push(&mut self, g: Generator, e: BigInt) {
        if e.is_zero() {
            return;
        }
        if let Some(last) = self.syllables.last_mut() {
            if last.generator == g {
                last.exponent += e;
                if last.exponent.is_zero() {
                    self.syllables.pop();
                }
                return;
            }
        }
        self.syllables.push(Syllable {
            generator: g,
            exponent: e,
        });
    }

    fn append(&mut self, other: &Word) {
        for s in &other.syllables {
            self.push(s.generator, s.exponent.clone());
        }
    }

    pub fn multiply(&self, other: &Word) -> Word {
        let mut w = self.clone();
        w.append(other);
        w
    }

    pub fn invert(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|s| Syllable {
                    generator: s.generator,
                    exponent: -&s.exponent,
                })
                .collect(),
        }
    }

    /// `self^e`. Single syllables and conjugates of single syllables are
    /// powered in closed form; everything else by square-and-multiply.
    pub fn pow(&self, e: &BigInt) -> Word {
        if e.is_zero() || self.is_identity() {
            return Word::identity();
        }
        if e.is_negative() {
            return self.invert().pow(&-e);
        }
        // u s^k u^{-1} with a single middle syllable
        let len = self.syllables.len();
        if len % 2 == 1 {
            let mid = len / 2;
            let prefix = Word {
                syllables: self.syllables[..mid].to_vec(),
            };
            let suffix = Word {
                syllables: self.syllables[mid + 1..].to_vec(),
            };
            if prefix.invert() == suffix {
                let s = &self.syllables[mid];
                let core = Word::power_of(s.generator, &s.exponent * e);
                return prefix.multiply(&core).multiply(&suffix);
            }
        }
        let mut result = Word::identity();
        let mut base = self.clone();
        let mut k = e.clone();
        let two = BigInt::from(2);
        while !k.is_zero() {
            if (&k % &two).is_one() {
                result = result.multiply(&base);
            }
            k /= &two;
            if !k.is_zero() {
                base = base.multiply(&base);
            }
        }
        result
    }

    /// Total exponents of `a` and of `b`.
    pub fn exponent_sums(&self) -> (BigInt, BigInt) {
        let mut sums = [BigInt::zero(), BigInt::zero()];
        for s in &self.syllables {
            sums[s.generator.index()] += &s.exponent;
        }
        let [sa, sb] = sums;
        (sa, sb)
    }

    /// Renders with custom symbols for the two generators, e.g. `['x', 'y']`.
    pub fn render_with(&self, symbols: [char; 2]) -> String {
        if self.is_identity() {
            return "e".to_string();
        }
        let mut out = String::new();
        for (i, s) in self.syllables.iter().enumerate() {
            if i > 0 {
                out.push(' ');
            }
            out.push(symbols[s.generator.index()]);
            if !s.exponent.is_one() {
                out.push('^');
                out.push_str(&s.exponent.to_string());
            }
        }
        out
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render_with(['a', 'b']))
    }
}

impl std::str::FromStr for Word {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

pub fn multiply(u: &Word, v: &Word) -> Word {
    u.multiply(v)
}

pub fn invert(u: &Word) -> Word {
    u.invert()
}

/// `x u x⁻¹`.
pub fn conjugate(x: &Word, u: &Word) -> Word {
    x.multiply(u).multiply(&x.invert())
}

/// `x y x⁻¹ y⁻¹`.
pub fn commutator(x: &Word, y: &Word) -> Word {
    x.multiply(y).multiply(&x.invert()).multiply(&y.invert())
}

/// Homomorphic image of `w` under the endomorphism `m`.
pub fn substitute(w: &Word, m: &BasisMap) -> Word {
    let mut out = Word::identity();
    for s in &w.syllables {
        let image = m.image(s.generator);
        out.append(&image.pow(&s.exponent));
    }
    out
}

pub fn exponent_sums(w: &Word) -> (BigInt, BigInt) {
    w.exponent_sums()
}

fn c_pow(e: i64) -> Word {
    Word::power_of(Generator::A, e)
}

fn b_pow(e: i64) -> Word {
    Word::power_of(Generator::B, e)
}

/// Rewrites `[aⁿ, bᵐ]` (`n ≥ 1`) as a product of commutators in the basis
/// `{c, b}` with `c = ab`. The result is a word over `(c, b)`, with `c`
/// stored as generator `A`.
pub fn goto_rewrite_pos(n: i64, m: i64) -> Result<Word, RewriteError> {
    if n < 1 {
        return Err(RewriteError::NonPositive(n));
    }
    let mut w = Word::identity();
    for i in 1..n {
        w.append(&commutator(&c_pow(i), &b_pow(-i)));
        w.append(&commutator(&b_pow(-i), &c_pow(i + 1)));
    }
    for i in 1..=n {
        w.append(&commutator(&c_pow(n + 1 - i), &b_pow(m - n + i)));
        w.append(&commutator(&b_pow(m - n + i), &c_pow(n - i)));
    }
    Ok(w)
}

/// Rewrites `[a⁻ⁿ, bᵐ]` (`n ≥ 1`) in the basis `{c, b}`, `c = ab`, with the
/// same conventions as [`goto_rewrite_pos`].
pub fn goto_rewrite_neg(n: i64, m: i64) -> Result<Word, RewriteError> {
    if n < 1 {
        return Err(RewriteError::NonPositive(n));
    }
    let mut w = Word::identity();
    for i in 1..=n {
        w.append(&commutator(&c_pow(1 - i), &b_pow(i)));
        w.append(&commutator(&b_pow(i), &c_pow(-i)));
    }
    for i in 1..=n {
        w.append(&commutator(&c_pow(-(n + 1) + i), &b_pow(n + m + 1 - i)));
        w.append(&commutator(&b_pow(n + m + 1 - i), &c_pow(-n + i)));
    }
    Ok(w)
}

/// The substitution `c ↦ ab, b ↦ b` that interprets the output of the
/// rewrite functions in the original generators.
pub fn c_equals_ab() -> BasisMap {
    BasisMap::new(Word::a().multiply(&Word::b()), Word::b())
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RewriteError {
    #[error("rewrite requires n >= 1, got {0}")]
    NonPositive(i64),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected {found} at position {pos}, expected {expected}")]
    Unexpected {
        pos: usize,
        found: String,
        expected: &'static str,
    },
    #[error("zero exponent at position {pos}")]
    ZeroExponent { pos: usize },
    #[error("empty expression at position {pos}")]
    Empty { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Unexpected { pos, .. }
            | ParseError::ZeroExponent { pos }
            | ParseError::Empty { pos } => *pos,
        }
    }
}

/// Parses a word over the symbols `a`, `b`.
///
/// Grammar: `a`, `b`, inverses `A`, `B`, the identity `e`, powers `x^k`
/// (`k` a nonzero integer), juxtaposition, commutators `[x,y] = x y x⁻¹ y⁻¹`
/// and parentheses. Whitespace is ignored.
pub fn parse(text: &str) -> Result<Word, ParseError> {
    parse_with_symbols(text, ['a', 'b'])
}

/// Like [`parse`] but with custom lowercase generator symbols; the uppercase
/// forms denote inverses.
pub fn parse_with_symbols(text: &str, symbols: [char; 2]) -> Result<Word, ParseError> {
    let mut p = Parser {
        chars: text.char_indices().collect(),
        pos: 0,
        len: text.len(),
        symbols,
    };
    let w = p.expr()?;
    p.skip_ws();
    if let Some(&(at, c)) = p.chars.get(p.pos) {
        return Err(ParseError::Unexpected {
            pos: at,
            found: format!("'{c}'"),
            expected: "generator, '(', '[' or end of input",
        });
    }
    Ok(w)
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    len: usize,
    symbols: [char; 2],
}

impl Parser {
    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.len, |&(i, _)| i)
    }

    fn unexpected(&mut self, expected: &'static str) -> ParseError {
        self.skip_ws();
        let found = match self.chars.get(self.pos) {
            Some(&(_, c)) => format!("'{c}'"),
            None => "end of input".to_string(),
        };
        ParseError::Unexpected {
            pos: self.offset(),
            found,
            expected,
        }
    }

    fn expect(&mut self, c: char, expected: &'static str) -> Result<(), ParseError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(expected))
        }
    }

    fn starts_atom(&self, c: char) -> bool {
        c == '(' || c == '[' || c == 'e' || self.generator_of(c).is_some()
    }

    fn generator_of(&self, c: char) -> Option<(Generator, i64)> {
        let [s0, s1] = self.symbols;
        if c == s0 {
            Some((Generator::A, 1))
        } else if c == s1 {
            Some((Generator::B, 1))
        } else if c == s0.to_ascii_uppercase() {
            Some((Generator::A, -1))
        } else if c == s1.to_ascii_uppercase() {
            Some((Generator::B, -1))
        } else {
            None
        }
    }

    fn expr(&mut self) -> Result<Word, ParseError> {
        let start = self.offset();
        let mut w = Word::identity();
        let mut any = false;
        while let Some(c) = self.peek() {
            if !self.starts_atom(c) {
                break;
            }
            let t = self.term()?;
            w.append(&t);
            any = true;
        }
        if !any {
            return match self.peek() {
                None | Some(')') | Some(']') | Some(',') => Err(ParseError::Empty { pos: start }),
                Some(_) => Err(self.unexpected("generator, '(' or '['")),
            };
        }
        Ok(w)
    }

    fn term(&mut self) -> Result<Word, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some('^') {
            self.pos += 1;
            let at = self.offset();
            let e = self.integer()?;
            if e.is_zero() {
                return Err(ParseError::ZeroExponent { pos: at });
            }
            return Ok(base.pow(&e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Word, ParseError> {
        let c = self
            .peek()
            .ok_or_else(|| self.unexpected("generator, '(' or '['"))?;
        if let Some((g, e)) = self.generator_of(c) {
            self.pos += 1;
            return Ok(Word::power_of(g, e));
        }
        match c {
            'e' => {
                self.pos += 1;
                Ok(Word::identity())
            }
            '(' => {
                self.pos += 1;
                let w = self.expr()?;
                self.expect(')', "')'")?;
                Ok(w)
            }
            '[' => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(',', "','")?;
                let y = self.expr()?;
                self.expect(']', "']'")?;
                Ok(commutator(&x, &y))
            }
            _ => Err(self.unexpected("generator, '(' or '['")),
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        let mut negative = false;
        match self.peek() {
            Some('-') => {
                negative = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|(_, c)| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.unexpected("integer exponent"));
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        let v: BigInt = digits.parse().expect("ascii digits");
        Ok(if negative { -v } else { v })
    }
}
