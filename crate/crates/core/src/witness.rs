//! Numerical witnesses: for a target `g ∈ SU(n)` build `(u, v)` with
//! `ω(u, v) ≈ g` and report the Frobenius residual.
//!
//! For `ω ∈ F⁽¹⁾ \ F⁽²⁾` the generator carrying `t` is sent to the n-cycle
//! `σ` and the other to a torus element `h = exp(h̄)`, where `h̄` solves
//! `p_ω(Ad σ) h̄ = ḡ` on the Cartan subalgebra. Words outside `F⁽¹⁾` are
//! handled by taking a root of `g` in one slot and the identity in the other.

use std::f64::consts::PI;
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use thiserror::Error;

use crate::certify::{Certificate, Classification, OrderedBasis};
use crate::freegroup::{Generator, Word};
use crate::laurent::LaurentPoly;

pub type CMatrix = DMatrix<Complex64>;

/// `‖U*U − I‖_F` allowed for inputs.
pub const UNITARITY_TOL: f64 = 1e-10;
/// `|det U − 1|` allowed for inputs.
pub const DET_TOL: f64 = 1e-10;
/// `|det d − 1|` and `||dᵢ| − 1|` allowed by [`torus_log`].
pub const TORUS_TOL: f64 = 1e-8;
/// Smallest `|p(ζ)|` that [`solve_cartan`] divides by.
pub const DENOMINATOR_FLOOR: f64 = 1e-12;
/// Relative residual required of [`solve_cartan`].
pub const SOLVE_REL_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum WitnessError {
    #[error("dimension must be >= {min}, got {got}")]
    DimensionTooSmall { got: usize, min: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unitary: |U*U - I| = {defect:.3e}")]
    NotUnitary { defect: f64 },
    #[error("determinant {det} is not 1")]
    Determinant { det: Complex64 },
    #[error("diagonal entry {index} has modulus {modulus}, expected 1")]
    NonUnitModulus { index: usize, modulus: f64 },
    #[error("n = {n} is not certified: divisible by bad modulus {divisor}")]
    NotCertified { n: usize, divisor: u64 },
    #[error("|p(zeta^{l})| = {value:.3e} is too small to divide by (n = {n})")]
    NearZeroDenominator { n: usize, l: usize, value: f64 },
    #[error("Cartan solve residual {residual:.3e} exceeds tolerance")]
    SolveResidual { residual: f64 },
    #[error("word lies in the second derived subgroup; no witness construction applies")]
    Inapplicable,
    #[error("word lies in the commutator subgroup; use the derived construction")]
    InDerived,
    #[error("word is not in the commutator subgroup; use the non-derived construction")]
    NotDerived,
    #[error("exponent {0} is too large to evaluate")]
    ExponentOverflow(String),
    #[error("Schur decomposition did not converge")]
    Diagonalization,
    #[error("line {line}: {message}")]
    MatrixFormat { line: usize, message: String },
}

/// Dense complex square matrix intended to lie in `SU(n)`. Inputs from
/// outside are checked by [`UnitaryMatrix::new`]; products computed here
/// are not rechecked.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    /// Validates squareness, unitarity and unit determinant.
    pub fn new(m: CMatrix) -> Result<Self, WitnessError> {
        if !m.is_square() {
            return Err(WitnessError::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let u = UnitaryMatrix(m);
        let defect = u.unitarity_defect();
        if !(defect <= UNITARITY_TOL) {
            return Err(WitnessError::NotUnitary { defect });
        }
        let det = u.determinant();
        if !((det - 1.0).norm() <= DET_TOL) {
            return Err(WitnessError::Determinant { det });
        }
        Ok(u)
    }

    pub fn identity(n: usize) -> Self {
        UnitaryMatrix(CMatrix::identity(n, n))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn mul(&self, other: &UnitaryMatrix) -> Self {
        UnitaryMatrix(&self.0 * &other.0)
    }

    pub fn determinant(&self) -> Complex64 {
        self.0.determinant()
    }

    pub fn unitarity_defect(&self) -> f64 {
        let n = self.dim();
        (self.0.adjoint() * &self.0 - CMatrix::identity(n, n)).norm()
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &UnitaryMatrix) -> f64 {
        (&self.0 - &other.0).norm()
    }

    /// `z · self · z*`
    pub fn conjugated_by(&self, z: &CMatrix) -> Self {
        UnitaryMatrix(z * &self.0 * z.adjoint())
    }
}

/// Element `diag(iθ₁, …, iθₙ)` of the Cartan subalgebra, stored as `θ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CartanVector {
    theta: Vec<f64>,
}

impl CartanVector {
    /// Projects onto the zero-sum subspace.
    pub fn new(mut theta: Vec<f64>) -> Self {
        if !theta.is_empty() {
            let mean = theta.iter().sum::<f64>() / theta.len() as f64;
            theta.iter_mut().for_each(|x| *x -= mean);
        }
        CartanVector { theta }
    }

    pub fn zeros(n: usize) -> Self {
        CartanVector {
            theta: vec![0.0; n],
        }
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    pub fn len(&self) -> usize {
        self.theta.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.theta.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn scaled(&self, c: f64) -> CartanVector {
        CartanVector {
            theta: self.theta.iter().map(|x| x * c).collect(),
        }
    }

    /// Coordinate action of `σ`: `σ diag(iθ) σ⁻¹ = diag(i·Pθ)` with
    /// `(Pθ)ᵢ = θ_{i−1}`.
    pub fn shifted(&self, k: i64) -> CartanVector {
        let n = self.theta.len() as i64;
        let theta = (0..n)
            .map(|i| self.theta[(i - k).rem_euclid(n) as usize])
            .collect();
        CartanVector { theta }
    }
}

#[derive(Clone, Debug)]
pub struct WitnessResult {
    pub u: UnitaryMatrix,
    pub v: UnitaryMatrix,
    /// `‖ω(u, v) − g‖_F`
    pub residual: f64,
}

impl WitnessResult {
    fn checked(w: &Word, u: UnitaryMatrix, v: UnitaryMatrix, g: &UnitaryMatrix) -> Result<Self, WitnessError> {
        let residual = residual(w, &u, &v, g)?;
        Ok(WitnessResult { u, v, residual })
    }
}

/// `‖ω(u, v) − g‖_F`
pub fn residual(
    w: &Word,
    u: &UnitaryMatrix,
    v: &UnitaryMatrix,
    g: &UnitaryMatrix,
) -> Result<f64, WitnessError> {
    Ok(evaluate_word(w, u, v)?.distance(g))
}

/// The n-cycle `eⱼ ↦ e_{j+1 mod n}`, scaled by `e^{iπ/n}` for even `n` so
/// that it lies in `SU(n)`.
pub fn build_sigma(n: usize) -> Result<UnitaryMatrix, WitnessError> {
    if n < 2 {
        return Err(WitnessError::DimensionTooSmall { got: n, min: 2 });
    }
    let scale = if n.is_multiple_of(2) {
        Complex64::from_polar(1.0, PI / n as f64)
    } else {
        Complex64::new(1.0, 0.0)
    };
    let mut m = CMatrix::zeros(n, n);
    for j in 0..n {
        m[((j + 1) % n, j)] = scale;
    }
    Ok(UnitaryMatrix(m))
}

/// `diag(e^{iθ₁}, …, e^{iθₙ})`
pub fn exp_diag(h: &CartanVector) -> UnitaryMatrix {
    let d: Vec<Complex64> = h.theta.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    UnitaryMatrix(CMatrix::from_diagonal(&nalgebra::DVector::from_vec(d)))
}

/// Logarithm of a diagonal `d ∈ SU(n)` in the Cartan subalgebra.
///
/// Takes principal arguments in `(−π, π]`, whose sum is `2πk`; then
/// subtracts `2π·sign(k)` from the `|k|` coordinates with the largest
/// `θᵢ·sign(k)` (lowest index first on ties).
pub fn torus_log(d: &[Complex64]) -> Result<CartanVector, WitnessError> {
    for (index, z) in d.iter().enumerate() {
        let modulus = z.norm();
        if !((modulus - 1.0).abs() <= TORUS_TOL) {
            return Err(WitnessError::NonUnitModulus { index, modulus });
        }
    }
    let det: Complex64 = d.iter().product();
    if !((det - 1.0).norm() <= TORUS_TOL) {
        return Err(WitnessError::Determinant { det });
    }
    let mut theta: Vec<f64> = d
        .iter()
        .map(|z| {
            let a = z.arg();
            if a <= -PI {
                PI
            } else {
                a
            }
        })
        .collect();
    let k = (theta.iter().sum::<f64>() / (2.0 * PI)).round() as i64;
    if k != 0 {
        let s = k.signum() as f64;
        let mut order: Vec<usize> = (0..theta.len()).collect();
        order.sort_by(|&i, &j| (theta[j] * s).total_cmp(&(theta[i] * s)).then(i.cmp(&j)));
        for &i in order.iter().take(k.unsigned_abs() as usize) {
            theta[i] -= 2.0 * PI * s;
        }
    }
    Ok(CartanVector::new(theta))
}

/// `Σⱼ aⱼ Pʲ h` for `p = Σⱼ aⱼ tʲ`.
pub fn apply_poly(p: &LaurentPoly, h: &CartanVector) -> Vec<f64> {
    let n = h.len();
    let mut out = vec![0.0; n];
    for (e, c) in p.terms() {
        let c = c.to_f64().unwrap_or(f64::NAN);
        let shifted = h.shifted(e);
        for (o, x) in out.iter_mut().zip(shifted.theta()) {
            *o += c * x;
        }
    }
    out
}

/// Solves `p(P) h̄ = ḡ` on the zero-sum subspace through the discrete
/// Fourier basis, in which `P` acts on mode `l` by `ζₙ^{−l}`.
pub fn solve_cartan(p: &LaurentPoly, gbar: &CartanVector) -> Result<CartanVector, WitnessError> {
    let n = gbar.len();
    if n <= 1 {
        return Ok(CartanVector::zeros(n));
    }
    let root = |k: usize| Complex64::from_polar(1.0, 2.0 * PI * (k % n) as f64 / n as f64);
    let mut hhat = vec![Complex64::zero(); n];
    for (l, slot) in hhat.iter_mut().enumerate().skip(1) {
        let ghat: Complex64 = gbar
            .theta
            .iter()
            .enumerate()
            .map(|(i, &g)| g * root((n - (i * l) % n) % n))
            .sum();
        let denom = p.eval_unit_circle(n as u64, ((n - l) % n) as u64);
        if !(denom.norm() >= DENOMINATOR_FLOOR) {
            return Err(WitnessError::NearZeroDenominator {
                n,
                l,
                value: denom.norm(),
            });
        }
        *slot = ghat / denom;
    }
    let theta: Vec<f64> = (0..n)
        .map(|i| {
            hhat.iter()
                .enumerate()
                .map(|(l, h)| h * root(i * l % n))
                .sum::<Complex64>()
                .re
                / n as f64
        })
        .collect();
    let h = CartanVector::new(theta);
    let image = apply_poly(p, &h);
    let residual = image
        .iter()
        .zip(&gbar.theta)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if !(residual <= SOLVE_REL_TOL * gbar.norm()) {
        return Err(WitnessError::SolveResidual { residual });
    }
    Ok(h)
}

fn matrix_power(base: &CMatrix, e: i64) -> CMatrix {
    let n = base.nrows();
    let mut b = if e < 0 { base.adjoint() } else { base.clone() };
    let mut k = e.unsigned_abs();
    let mut acc = CMatrix::identity(n, n);
    while k > 0 {
        if k & 1 == 1 {
            acc = &acc * &b;
        }
        k >>= 1;
        if k > 0 {
            b = &b * &b;
        }
    }
    acc
}

/// `ω(u, v)`: left-to-right product of syllable powers, with inverses
/// taken as conjugate transposes.
pub fn evaluate_word(
    w: &Word,
    u: &UnitaryMatrix,
    v: &UnitaryMatrix,
) -> Result<UnitaryMatrix, WitnessError> {
    let n = u.dim();
    if v.dim() != n {
        return Err(WitnessError::DimensionMismatch {
            expected: n,
            got: v.dim(),
        });
    }
    let mut acc = CMatrix::identity(n, n);
    for s in w.syllables() {
        let e = s
            .exponent
            .to_i64()
            .ok_or_else(|| WitnessError::ExponentOverflow(s.exponent.to_string()))?;
        let base = match s.generator {
            Generator::A => &u.0,
            Generator::B => &v.0,
        };
        acc = &acc * matrix_power(base, e);
    }
    Ok(UnitaryMatrix(acc))
}

/// `g = z · diag(d) · z*` with eigenvalues in descending principal argument.
#[derive(Clone, Debug)]
pub struct Diagonalization {
    pub z: CMatrix,
    pub d: Vec<Complex64>,
}

/// Unitary diagonalization of a normal matrix via complex Schur form.
/// Each eigenvector column is rotated so that its first entry of modulus
/// above `1e-6` is real and positive.
pub fn diagonalize(g: &UnitaryMatrix) -> Result<Diagonalization, WitnessError> {
    let n = g.dim();
    let schur = nalgebra::linalg::Schur::try_new(g.0.clone(), f64::EPSILON, 100_000)
        .ok_or(WitnessError::Diagonalization)?;
    let (q, t) = schur.unpack();
    let mut order: Vec<usize> = (0..n).collect();
    let args: Vec<f64> = (0..n).map(|i| t[(i, i)].arg()).collect();
    order.sort_by(|&i, &j| args[j].total_cmp(&args[i]));
    let mut z = CMatrix::zeros(n, n);
    let mut d = Vec::with_capacity(n);
    for (col, &i) in order.iter().enumerate() {
        let mut v = q.column(i).into_owned();
        if let Some(pivot) = v.iter().find(|c| c.norm() > 1e-6) {
            let phase = pivot.conj() / pivot.norm();
            v *= phase;
        }
        z.set_column(col, &v);
        d.push(t[(i, i)]);
    }
    Ok(Diagonalization { z, d })
}

/// Witness for `ω ∈ F⁽¹⁾ \ F⁽²⁾` covered by `cert`.
pub fn witness_derived(
    cert: &Certificate,
    n: usize,
    g: &UnitaryMatrix,
) -> Result<WitnessResult, WitnessError> {
    match cert.classification {
        Classification::InF2 => return Err(WitnessError::Inapplicable),
        Classification::NotInF1 => return Err(WitnessError::NotDerived),
        Classification::InF1NotF2 => {}
    }
    check_dim(n, g)?;
    if n == 1 {
        return trivial(&cert.word, g);
    }
    if let Some(divisor) = cert.analysis.bad_divisor(n as u64) {
        return Err(WitnessError::NotCertified { n, divisor });
    }
    let diag = diagonalize(g)?;
    witness_from_diagonal(cert, &diag, g)
}

/// The derived construction for a given diagonalization of `g`.
pub fn witness_from_diagonal(
    cert: &Certificate,
    diag: &Diagonalization,
    g: &UnitaryMatrix,
) -> Result<WitnessResult, WitnessError> {
    let n = diag.d.len();
    let gbar = torus_log(&diag.d)?;
    let hbar = solve_cartan(&cert.polynomial, &gbar)?;
    let h = exp_diag(&hbar);
    let sigma = build_sigma(n)?;
    let (x, y) = match cert.ordered_basis {
        OrderedBasis::FirstSecond => (sigma, h),
        OrderedBasis::SecondFirst => (h, sigma),
    };
    let u0 = evaluate_word(&cert.back_substitution.image_a, &x, &y)?;
    let v0 = evaluate_word(&cert.back_substitution.image_b, &x, &y)?;
    WitnessResult::checked(
        &cert.word,
        u0.conjugated_by(&diag.z),
        v0.conjugated_by(&diag.z),
        g,
    )
}

/// Witness for `ω ∉ F⁽¹⁾`: with `k` the nonzero exponent sum of one slot
/// (`a` preferred), put a `k`-th root of `g` there and `I` in the other.
pub fn witness_nonderived(w: &Word, n: usize, g: &UnitaryMatrix) -> Result<WitnessResult, WitnessError> {
    check_dim(n, g)?;
    let (ka, kb) = w.exponent_sums();
    let (slot, k) = if !ka.is_zero() {
        (Generator::A, ka)
    } else if !kb.is_zero() {
        (Generator::B, kb)
    } else {
        return Err(WitnessError::InDerived);
    };
    if n == 1 {
        return trivial(w, g);
    }
    let k = k.to_f64().ok_or_else(|| WitnessError::ExponentOverflow(k.to_string()))?;
    let diag = diagonalize(g)?;
    let hbar = torus_log(&diag.d)?.scaled(1.0 / k);
    let h = exp_diag(&hbar).conjugated_by(&diag.z);
    let id = UnitaryMatrix::identity(n);
    let (u, v) = match slot {
        Generator::A => (h, id),
        Generator::B => (id, h),
    };
    WitnessResult::checked(w, u, v, g)
}

/// Dispatches on the certificate's classification.
pub fn witness(cert: &Certificate, n: usize, g: &UnitaryMatrix) -> Result<WitnessResult, WitnessError> {
    match cert.classification {
        Classification::NotInF1 => witness_nonderived(&cert.word, n, g),
        _ => witness_derived(cert, n, g),
    }
}

fn check_dim(n: usize, g: &UnitaryMatrix) -> Result<(), WitnessError> {
    if n < 1 {
        return Err(WitnessError::DimensionTooSmall { got: n, min: 1 });
    }
    if g.dim() != n {
        return Err(WitnessError::DimensionMismatch {
            expected: n,
            got: g.dim(),
        });
    }
    Ok(())
}

fn trivial(w: &Word, g: &UnitaryMatrix) -> Result<WitnessResult, WitnessError> {
    WitnessResult::checked(w, UnitaryMatrix::identity(1), UnitaryMatrix::identity(1), g)
}

/// Haar-random element of `SU(n)`, deterministic in `seed`.
pub fn haar_random_su(n: usize, seed: u64) -> UnitaryMatrix {
    haar_random_su_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// QR of a complex Gaussian matrix with the phases of `R`'s diagonal moved
/// into `Q`, then divided by an n-th root of its determinant.
pub fn haar_random_su_with<R: Rng + ?Sized>(n: usize, rng: &mut R) -> UnitaryMatrix {
    assert!(n >= 1, "haar_random_su: n must be >= 1");
    if n == 1 {
        return UnitaryMatrix::identity(1);
    }
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let gauss = CMatrix::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re * scale, im * scale)
    });
    let qr = gauss.qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let rjj = r[(j, j)];
        if rjj.norm() > 0.0 {
            let phase = rjj / rjj.norm();
            for i in 0..n {
                q[(i, j)] *= phase;
            }
        }
    }
    let det = q.determinant();
    let root = Complex64::from_polar(1.0, det.arg() / n as f64);
    UnitaryMatrix(q.map(|c| c / root))
}

fn format_entry(c: Complex64) -> String {
    let sign = if c.im.is_sign_negative() { '-' } else { '+' };
    format!("{:.16e}{}{:.16e}j", c.re, sign, c.im.abs())
}

/// Text form: a line with `n`, then `n` rows of `RE±IMj` entries.
pub fn write_matrix(u: &UnitaryMatrix) -> String {
    let n = u.dim();
    let mut out = format!("{n}\n");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format_entry(u.0[(i, j)])).collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}

fn parse_entry(token: &str) -> Option<Complex64> {
    let body = token.strip_suffix('j')?;
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'))?;
    let re: f64 = body[..split].parse().ok()?;
    let im: f64 = body[split..].parse().ok()?;
    Some(Complex64::new(re, im))
}

/// Parses [`write_matrix`] output and validates membership in `SU(n)`.
pub fn parse_matrix(text: &str) -> Result<UnitaryMatrix, WitnessError> {
    let bad = |line: usize, message: String| WitnessError::MatrixFormat { line, message };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (first, header) = lines.next().ok_or_else(|| bad(1, "empty matrix file".into()))?;
    let n: usize = header
        .parse()
        .map_err(|_| bad(first, format!("expected dimension, found {header:?}")))?;
    if n == 0 {
        return Err(bad(first, "dimension must be >= 1".into()));
    }
    let mut m = CMatrix::zeros(n, n);
    for i in 0..n {
        let (line, row) = lines
            .next()
            .ok_or_else(|| bad(first + i + 1, format!("expected {n} rows, found {i}")))?;
        let tokens: Vec<&str> = row.split_whitespace().collect();
        if tokens.len() != n {
            return Err(bad(line, format!("expected {n} entries, found {}", tokens.len())));
        }
        for (j, tok) in tokens.iter().enumerate() {
            m[(i, j)] = parse_entry(tok)
                .ok_or_else(|| bad(line, format!("malformed complex entry {tok:?}")))?;
        }
    }
    if let Some((line, _)) = lines.next() {
        return Err(bad(line, "trailing content after matrix".into()));
    }
    UnitaryMatrix::new(m)
}
