//! Surjectivity certificates for word maps `SU(n) × SU(n) → SU(n)`.
//!
//! The pipeline classifies a word `ω` in the free group `F = <a, b>`,
//! searches Nielsen base changes for one in which the Laurent polynomial
//! `p_ω` is nonzero, reads off from its cyclotomic divisors the dimensions
//! `n` for which the word map is certified surjective, and finally builds
//! explicit numerical witnesses `(u, v)` with `ω(u, v) = g`.

pub mod certify;
pub mod cli;
pub mod freegroup;
pub mod laurent;
pub mod metabelian;
pub mod sample;
pub mod selftest;
pub mod witness;

pub use certify::{Certificate, Classification, NielsenMove, OrderedBasis, SearchConfig, Status};
pub use freegroup::{BasisMap, Generator, Word};
pub use laurent::{LaurentPoly, RootAnalysis};
pub use metabelian::DerivedClass;
