//! Exact Laurent polynomials over ℤ and their root-of-unity analysis.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LaurentError {
    #[error("root analysis of the zero polynomial")]
    ZeroPolynomial,
    #[error("cyclotomic index must be >= 1, got {0}")]
    BadCyclotomicIndex(i64),
    #[error("polynomial span {0} too large for root analysis")]
    SpanTooLarge(i64),
}

/// Element of `ℤ[t, t⁻¹]`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(1, 0)
    }

    /// `c·t^e`.
    pub fn monomial(c: impl Into<BigInt>, e: i64) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(e, c.into());
        p
    }

    /// `t − 1`
    pub fn t_minus_one() -> Self {
        LaurentPoly::from_terms([(1, 1), (0, -1)])
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (e, c) in terms {
            p.add_term(e, c.into());
        }
        p
    }

    /// Ordinary polynomial from ascending coefficients `c₀ + c₁t + …`.
    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        LaurentPoly::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (i as i64, c)))
    }

    pub fn add_term(&mut self, e: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(e).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, e: i64) -> BigInt {
        self.coeffs.get(&e).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// `max S − min S` over the support `S`; zero for the zero polynomial.
    pub fn span(&self) -> i64 {
        match (self.min_exponent(), self.max_exponent()) {
            (Some(lo), Some(hi)) => hi - lo,
            _ => 0,
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    /// `p(t⁻¹)`
    pub fn reflect(&self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn l1_norm(&self) -> BigInt {
        self.coeffs.values().map(|c| c.abs()).sum()
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.coeffs.values().sum()
    }

    /// Floating evaluation at `e^{2πil/m}`, reducing exponents mod `m` first.
    pub fn eval_unit_circle(&self, m: u64, l: u64) -> Complex64 {
        assert!(m >= 1, "eval_unit_circle: m must be >= 1");
        let m = m as i128;
        let l = l as i128;
        self.coeffs
            .iter()
            .map(|(&e, c)| {
                let k = (l * e as i128).rem_euclid(m);
                let angle = 2.0 * std::f64::consts::PI * (k as f64) / (m as f64);
                Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
            })
            .sum()
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .map(|(&e, c)| c.to_f64().unwrap_or(f64::NAN) * z.powi(e as i32))
            .sum()
    }

    /// Dense ascending coefficients of `t^{-min S}·p`.
    fn dense(&self) -> Vec<BigInt> {
        let Some(lo) = self.min_exponent() else {
            return Vec::new();
        };
        let mut out = vec![BigInt::zero(); (self.span() + 1) as usize];
        for (&e, c) in &self.coeffs {
            out[(e - lo) as usize] = c.clone();
        }
        out
    }

    fn from_dense(coeffs: &[BigInt], offset: i64) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(offset + i as i64, c.clone());
        }
        p
    }

    /// Exact test whether the monic polynomial `divisor` divides `self` in
    /// `ℤ[t, t⁻¹]`.
    pub fn divisible_by_monic(&self, divisor: &LaurentPoly) -> bool {
        let dense = divisor.dense();
        assert!(
            dense.last().is_some_and(|c| c.is_one()),
            "divisor must be monic"
        );
        divides_dense(&self.dense(), &dense)
    }

    /// Quotient by a monic divisor, `None` if the division is not exact.
    pub fn exact_div_monic(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let dv = divisor.dense();
        assert!(dv.last().is_some_and(|c| c.is_one()), "divisor must be monic");
        let d = dv.len() - 1;
        let mut r = self.dense();
        if r.len() <= d {
            return r.iter().all(Zero::is_zero).then(LaurentPoly::zero);
        }
        let mut q = vec![BigInt::zero(); r.len() - d];
        for k in (0..q.len()).rev() {
            let lead = r[k + d].clone();
            if lead.is_zero() {
                continue;
            }
            for (i, c) in dv.iter().enumerate() {
                r[k + i] -= &lead * c;
            }
            q[k] = lead;
        }
        if !r.iter().all(Zero::is_zero) {
            return None;
        }
        let offset = self.min_exponent().unwrap() - divisor.min_exponent().unwrap();
        Some(LaurentPoly::from_dense(&q, offset))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (&e, c) in &rhs.coeffs {
            out.add_term(e, -c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (&e1, c1) in &self.coeffs {
            for (&e2, c2) in &rhs.coeffs {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    /// Descending exponents, e.g. `t^2 - 3t + 3 - t^-1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.coeffs.iter().rev().enumerate() {
            let mag = c.abs();
            if i == 0 {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c.is_negative() { " - " } else { " + " })?;
            }
            let show_mag = !mag.is_one() || e == 0;
            if show_mag {
                write!(f, "{mag}")?;
            }
            match e {
                0 => {}
                1 => f.write_str("t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for LaurentPoly {
    /// Map from exponent to coefficient, both as decimal strings, in
    /// ascending exponent order.
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            map.serialize_entry(&e.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut p = LaurentPoly::zero();
        for (e, c) in raw {
            let e: i64 = e
                .parse()
                .map_err(|_| D::Error::custom(format!("bad exponent '{e}'")))?;
            let c: BigInt = c
                .parse()
                .map_err(|_| D::Error::custom(format!("bad coefficient '{c}'")))?;
            if c.is_zero() {
                return Err(D::Error::custom("explicit zero coefficient"));
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

/// Euler's totient.
pub fn totient(mut m: u64) -> u64 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m.is_multiple_of(p) {
            while m.is_multiple_of(p) {
                m /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m;
    }
    result
}

/// Least prime factor; `lpf(1) = 1`.
pub fn least_prime_factor(n: u64) -> u64 {
    if n < 2 {
        return n;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            return p;
        }
        p += 1;
    }
    n
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Arc<LaurentPoly>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<LaurentPoly>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cyclotomic_shared(m: u64) -> Arc<LaurentPoly> {
    if let Some(p) = cyclotomic_cache().lock().unwrap().get(&m) {
        return p.clone();
    }
    let p = match cyclotomic_small(m) {
        Some(coeffs) => LaurentPoly::from_coeffs(&coeffs),
        None => cyclotomic_by_division(m),
    };
    let p = Arc::new(p);
    cyclotomic_cache().lock().unwrap().insert(m, p.clone());
    p
}

/// `Φ_m = ∏_{d | m} (1 − t^d)^{μ(m/d)}` for `m ≥ 2`, as a power series
/// truncated at degree `φ(m)`. `None` on `i64` overflow.
fn cyclotomic_small(m: u64) -> Option<Vec<i64>> {
    if m < 2 {
        return None;
    }
    let deg = totient(m) as usize;
    let mut primes = Vec::new();
    let mut rest = m;
    let mut q = 2;
    while q * q <= rest {
        if rest.is_multiple_of(q) {
            primes.push(q);
            while rest.is_multiple_of(q) {
                rest /= q;
            }
        }
        q += 1;
    }
    if rest > 1 {
        primes.push(rest);
    }
    let mut up = Vec::new();
    let mut down = Vec::new();
    for mask in 0u32..(1 << primes.len()) {
        let e: u64 = primes
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, &q)| q)
            .product();
        let d = (m / e) as usize;
        if mask.count_ones() % 2 == 0 {
            up.push(d);
        } else {
            down.push(d);
        }
    }
    let mut c = vec![0i64; deg + 1];
    c[0] = 1;
    for d in up {
        for i in (d..=deg).rev() {
            c[i] = c[i].checked_sub(c[i - d])?;
        }
    }
    for d in down {
        for i in d..=deg {
            c[i] = c[i].checked_add(c[i - d])?;
        }
    }
    Some(c)
}

fn cyclotomic_by_division(m: u64) -> LaurentPoly {
    let mut p = LaurentPoly::from_terms([(m as i64, 1), (0, -1)]);
    for d in divisors(m) {
        if d == m {
            continue;
        }
        let phi_d = cyclotomic_shared(d);
        p = p
            .exact_div_monic(&phi_d)
            .expect("t^m - 1 is divisible by every Φ_d with d | m");
    }
    p
}

/// The `m`-th cyclotomic polynomial `Φ_m`.
pub fn cyclotomic(m: i64) -> Result<LaurentPoly, LaurentError> {
    if m < 1 {
        return Err(LaurentError::BadCyclotomicIndex(m));
    }
    Ok((*cyclotomic_shared(m as u64)).clone())
}

/// Which roots of unity are roots of a nonzero `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootAnalysis {
    /// All `m ≥ 2` with `Φ_m | p`.
    pub bad_set: BTreeSet<u64>,
    pub vanishes_at_one: bool,
    pub span: u64,
    /// Every `n` with `lpf(n) ≥ lpf_bound` is certified.
    pub lpf_bound: u64,
}

impl RootAnalysis {
    /// Analysis attached to certificates that carry no polynomial.
    pub fn trivial() -> Self {
        RootAnalysis {
            bad_set: BTreeSet::new(),
            vanishes_at_one: true,
            span: 0,
            lpf_bound: 2,
        }
    }

    /// The primitive-root criterion: no divisor `m ≥ 2` of `n` is bad.
    pub fn certified_n(&self, n: u64) -> bool {
        self.bad_divisor(n).is_none()
    }

    /// Smallest bad divisor of `n`, if any.
    pub fn bad_divisor(&self, n: u64) -> Option<u64> {
        self.bad_set.iter().copied().find(|&m| m >= 2 && n.is_multiple_of(m))
    }
}

/// Largest span accepted by [`analyze_roots`].
pub const MAX_ANALYSIS_SPAN: i64 = 100_000;

/// Root analysis of a nonzero `p`.
///
/// The bad set is exact: every `m ≥ 2` with `φ(m) ≤ span` is tested, and
/// `m` is recorded iff `Φ_m` divides `p` over ℤ. A nonzero value of `p` at
/// a primitive `m`-th root of unity in a prime field `𝔽_P` (`P ≡ 1 mod m`)
/// rules `m` out; otherwise the integer division decides.
pub fn analyze_roots(p: &LaurentPoly) -> Result<RootAnalysis, LaurentError> {
    if p.is_zero() {
        return Err(LaurentError::ZeroPolynomial);
    }
    let k = p.span();
    if k > MAX_ANALYSIS_SPAN {
        return Err(LaurentError::SpanTooLarge(k));
    }
    let k = k as u64;
    let mut bad_set = BTreeSet::new();
    if k > 0 {
        let dense = p.dense();
        let terms = modular::Terms::new(p);
        for m in moduli_with_totient_at_most(k) {
            if m < 2 || !terms.may_vanish(m) {
                continue;
            }
            let cyc = cyclotomic_shared(m).dense();
            if divides_dense(&dense, &cyc) {
                bad_set.insert(m);
            }
        }
    }
    Ok(RootAnalysis {
        bad_set,
        vanishes_at_one: p.eval_at_one().is_zero(),
        span: k,
        lpf_bound: k + 2,
    })
}

/// All `m ≥ 1` with `φ(m) ≤ k`, ascending, built from prime powers
/// `pᵉ` with `pᵉ⁻¹(p − 1) ≤ k`.
pub fn moduli_with_totient_at_most(k: u64) -> Vec<u64> {
    fn extend(primes: &[u64], start: usize, m: u64, phi: u64, k: u64, out: &mut Vec<u64>) {
        for (i, &p) in primes.iter().enumerate().skip(start) {
            if phi * (p - 1) > k {
                break;
            }
            let mut pm = p;
            let mut ph = phi * (p - 1);
            loop {
                out.push(m * pm);
                extend(primes, i + 1, m * pm, ph, k, out);
                if ph * p > k {
                    break;
                }
                pm *= p;
                ph *= p;
            }
        }
    }
    let primes = primes_up_to(k + 1);
    let mut out = if k >= 1 { vec![1] } else { Vec::new() };
    extend(&primes, 0, 1, 1, k, &mut out);
    out.sort_unstable();
    out
}

fn primes_up_to(limit: u64) -> Vec<u64> {
    let limit = limit as usize;
    if limit < 2 {
        return Vec::new();
    }
    let mut composite = vec![false; limit + 1];
    let mut primes = Vec::new();
    for i in 2..=limit {
        if !composite[i] {
            primes.push(i as u64);
            let mut j = i * i;
            while j <= limit {
                composite[j] = true;
                j += i;
            }
        }
    }
    primes
}

/// Whether the monic dense `divisor` divides the dense polynomial `dense`.
fn divides_dense(dense: &[BigInt], divisor: &[BigInt]) -> bool {
    let d = divisor.len() - 1;
    if dense.len() <= d {
        return dense.iter().all(Zero::is_zero);
    }
    let mut r = dense.to_vec();
    while r.len() > d {
        let lead = r.pop().expect("nonempty");
        if lead.is_zero() {
            continue;
        }
        let base = r.len() - d;
        for (i, c) in divisor[..d].iter().enumerate() {
            if !c.is_zero() {
                r[base + i] -= &lead * c;
            }
        }
    }
    r.iter().all(Zero::is_zero)
}

/// Arithmetic in prime fields `𝔽_P` with `P ≡ 1 (mod m)`, used to rule out
/// cyclotomic divisors cheaply.
mod modular {
    use super::*;

    fn mul(a: u64, b: u64, p: u64) -> u64 {
        ((a as u128 * b as u128) % p as u128) as u64
    }

    fn pow(mut base: u64, mut e: u64, p: u64) -> u64 {
        let mut acc = 1 % p;
        base %= p;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(acc, base, p);
            }
            base = mul(base, base, p);
            e >>= 1;
        }
        acc
    }

    fn is_prime(n: u64) -> bool {
        const WITNESSES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
        if n < 2 {
            return false;
        }
        for &w in &WITNESSES {
            if n.is_multiple_of(w) {
                return n == w;
            }
        }
        let mut d = n - 1;
        let mut s = 0;
        while d.is_multiple_of(2) {
            d /= 2;
            s += 1;
        }
        'outer: for &a in &WITNESSES {
            let mut x = pow(a, d, n);
            if x == 1 || x == n - 1 {
                continue;
            }
            for _ in 1..s {
                x = mul(x, x, n);
                if x == n - 1 {
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    fn prime_factors(mut m: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut q = 2;
        while q * q <= m {
            if m.is_multiple_of(q) {
                out.push(q);
                while m.is_multiple_of(q) {
                    m /= q;
                }
            }
            q += 1;
        }
        if m > 1 {
            out.push(m);
        }
        out
    }

    /// `(P, ζ)` with `P ≡ 1 (mod m)` prime near `2⁶¹` and `ζ` of order `m`.
    fn field_for(m: u64) -> (u64, u64) {
        static CACHE: OnceLock<Mutex<HashMap<u64, (u64, u64)>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        if let Some(&f) = cache.lock().unwrap().get(&m) {
            return f;
        }
        let mut j = (1u64 << 61) / m;
        let p = loop {
            let candidate = 1 + j * m;
            if is_prime(candidate) {
                break candidate;
            }
            j += 1;
        };
        let factors = prime_factors(m);
        let zeta = (2..)
            .map(|g| pow(g, (p - 1) / m, p))
            .find(|&z| factors.iter().all(|&q| pow(z, m / q, p) != 1))
            .expect("the multiplicative group of a prime field is cyclic");
        cache.lock().unwrap().insert(m, (p, zeta));
        (p, zeta)
    }

    enum Coeff {
        Small(i64),
        Big(BigInt),
    }

    /// Terms of a polynomial prepared for repeated evaluation in prime fields.
    pub(super) struct Terms(Vec<(i64, Coeff)>);

    impl Terms {
        pub(super) fn new(poly: &LaurentPoly) -> Self {
            Terms(
                poly.terms()
                    .map(|(e, c)| match c.to_i64() {
                        Some(c) => (e, Coeff::Small(c)),
                        None => (e, Coeff::Big(c.clone())),
                    })
                    .collect(),
            )
        }

        /// `false` only if the polynomial does not vanish at a primitive
        /// `m`-th root of unity in `𝔽_P`, which rules out `Φ_m | poly` over ℤ.
        pub(super) fn may_vanish(&self, m: u64) -> bool {
            let (p, zeta) = field_for(m);
            let mut acc = 0u64;
            for (e, c) in &self.0 {
                let c = match c {
                    Coeff::Small(c) => (*c as i128).rem_euclid(p as i128) as u64,
                    Coeff::Big(c) => {
                        let big_p = BigInt::from(p);
                        (((c % &big_p) + &big_p) % &big_p).to_u64().expect("reduced mod P")
                    }
                };
                let z = pow(zeta, e.rem_euclid(m as i64) as u64, p);
                acc = (acc + mul(c, z, p)) % p;
            }
            acc == 0
        }
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn primality() {
            let small: Vec<u64> = (0..60).filter(|&n| is_prime(n)).collect();
            assert_eq!(
                small,
                vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59]
            );
            assert!(is_prime((1 << 61) - 1));
            assert!(!is_prime(3_215_031_751));
        }

        #[test]
        fn roots_have_exact_order() {
            for m in [2u64, 3, 12, 97, 360] {
                let (p, z) = field_for(m);
                assert_eq!((p - 1) % m, 0);
                assert_eq!(pow(z, m, p), 1);
                for d in divisors(m).into_iter().filter(|&d| d < m) {
                    assert_ne!(pow(z, d, p), 1);
                }
            }
        }

        #[test]
        fn cyclotomic_vanishes_at_its_roots() {
            for m in 2..50 {
                assert!(Terms::new(&cyclotomic_shared(m)).may_vanish(m));
            }
        }
    }
}

pub fn certified_n(analysis: &RootAnalysis, n: u64) -> bool {
    analysis.certified_n(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> LaurentPoly {
        LaurentPoly::from_coeffs(c)
    }

    #[test]
    fn ring_examples() {
        let t1 = LaurentPoly::t_minus_one();
        assert_eq!(&t1 + &t1, poly(&[-2, 2]));
        assert_eq!(&t1 * &poly(&[2, 1]), poly(&[-2, 1, 1]));
        let p = LaurentPoly::from_terms([(2, 1), (1, -3), (0, 3), (-1, -1)]);
        assert_eq!(p.shift(1), poly(&[-1, 3, -3, 1]));
        assert!((&p - &p).is_zero());
        assert_eq!(-&t1, poly(&[1, -1]));
    }

    #[test]
    fn display() {
        let p = LaurentPoly::from_terms([(2, 1), (1, -3), (0, 3), (-1, -1)]);
        assert_eq!(p.to_string(), "t^2 - 3t + 3 - t^-1");
        assert_eq!(poly(&[-2, 2]).to_string(), "2t - 2");
        assert_eq!(LaurentPoly::zero().to_string(), "0");
        assert_eq!(poly(&[1, -1]).to_string(), "-t + 1");
    }

    #[test]
    fn evaluation() {
        assert!(poly(&[-1, 3, -3, 1]).eval_at_one().is_zero());
        assert!(poly(&[-2, 1, 1]).eval_at_one().is_zero());
        let z = poly(&[-2, 2]).eval_unit_circle(2, 1);
        assert!((z - Complex64::new(-4.0, 0.0)).norm() < 1e-12);
        assert!((z.norm() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(cyclotomic(1).unwrap(), poly(&[-1, 1]));
        assert_eq!(cyclotomic(6).unwrap(), poly(&[1, -1, 1]));
        assert_eq!(cyclotomic(12).unwrap(), poly(&[1, 0, -1, 0, 1]));
        assert_eq!(cyclotomic(0), Err(LaurentError::BadCyclotomicIndex(0)));
        // first cyclotomic polynomial with a coefficient outside {-1,0,1}
        assert_eq!(cyclotomic(105).unwrap().coeff(7), BigInt::from(-2));
    }

    #[test]
    fn cyclotomic_product_formula_matches_division() {
        for m in 2..400u64 {
            let small = LaurentPoly::from_coeffs(&cyclotomic_small(m).unwrap());
            assert_eq!(small, cyclotomic_by_division(m), "m = {m}");
        }
    }

    #[test]
    fn cyclotomic_degree_is_totient() {
        for m in 1..80 {
            let c = cyclotomic(m).unwrap();
            assert_eq!(c.span() as u64, totient(m as u64), "m={m}");
            assert_eq!(c.min_exponent(), Some(0));
        }
    }

    #[test]
    fn analyze_examples() {
        let a = analyze_roots(&LaurentPoly::t_minus_one()).unwrap();
        assert!(a.bad_set.is_empty());
        assert!(a.vanishes_at_one);
        assert_eq!(a.span, 1);
        assert_eq!(a.lpf_bound, 3);

        let a = analyze_roots(&poly(&[-1, 3, -3, 1])).unwrap();
        assert!(a.bad_set.is_empty());

        let a = analyze_roots(&poly(&[-3, 0, 3])).unwrap();
        assert_eq!(a.bad_set.into_iter().collect::<Vec<_>>(), vec![2]);
        assert!(a.vanishes_at_one);

        assert_eq!(
            analyze_roots(&LaurentPoly::zero()),
            Err(LaurentError::ZeroPolynomial)
        );
        let a = analyze_roots(&LaurentPoly::monomial(5, -3)).unwrap();
        assert!(a.bad_set.is_empty());
        assert_eq!(a.span, 0);
    }

    #[test]
    fn analyze_shift_invariant() {
        // (t^6 - 1)(t - 2) has bad set {2, 3, 6}
        let p = &poly(&[-1, 0, 0, 0, 0, 0, 1]) * &poly(&[-2, 1]);
        let expected: Vec<u64> = vec![2, 3, 6];
        for s in [-5, 0, 4] {
            let a = analyze_roots(&p.shift(s)).unwrap();
            assert_eq!(a.bad_set.iter().copied().collect::<Vec<_>>(), expected);
        }
    }

    #[test]
    fn certified_examples() {
        let mut a = RootAnalysis::trivial();
        assert!(a.certified_n(7));
        a.bad_set.insert(2);
        assert!(!a.certified_n(6));
        assert!(a.certified_n(9));
        assert_eq!(a.bad_divisor(6), Some(2));
    }

    #[test]
    fn exact_division() {
        let p = &poly(&[-2, 1, 1]).shift(-3);
        let q = p.exact_div_monic(&poly(&[-1, 1])).unwrap();
        assert_eq!(q, poly(&[2, 1]).shift(-3));
        assert!(poly(&[1, 1, 1]).exact_div_monic(&poly(&[1, 1])).is_none());
    }

    #[test]
    fn number_theory_helpers() {
        assert_eq!(totient(1), 1);
        assert_eq!(totient(12), 4);
        assert_eq!(totient(97), 96);
        assert_eq!(least_prime_factor(91), 7);
        assert_eq!(least_prime_factor(97), 97);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
    }

    #[test]
    fn totient_enumeration_matches_brute_force() {
        // brute force over the bound m ≤ 2k², valid since φ(m) ≥ √(m/2)
        for k in 0..=30u64 {
            let brute: Vec<u64> = (1..=(2 * k * k).max(2))
                .filter(|&m| totient(m) <= k)
                .collect();
            assert_eq!(moduli_with_totient_at_most(k), brute, "k={k}");
        }
    }

    #[test]
    fn serde_round_trip() {
        let p = LaurentPoly::from_terms([(2, 1), (1, -3), (0, 3), (-1, -1)]);
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, r#"{"-1":"-1","0":"3","1":"-3","2":"1"}"#);
        let back: LaurentPoly = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<LaurentPoly>(r#"{"1":"0"}"#).is_err());
    }
}
