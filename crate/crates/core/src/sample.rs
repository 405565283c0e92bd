//! Seeded random words for sweeps and property checks.

use num_traits::Zero;
use rand::Rng;

use crate::freegroup::{Generator, Word};
use crate::metabelian::in_derived;

fn random_letters<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Word {
    Word::from_syllables((0..len).map(|_| {
        let g = if rng.random_bool(0.5) {
            Generator::A
        } else {
            Generator::B
        };
        let e: i64 = if rng.random_bool(0.5) { 1 } else { -1 };
        (g, e)
    }))
}

/// Reduced word of letter length at most `max_len`.
pub fn random_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    let len = rng.random_range(0..=max_len);
    random_letters(rng, len)
}

/// Nontrivial word in `F⁽¹⁾` of letter length at most `max_len`: a random
/// word followed by the correction `a^{-Σa} b^{-Σb}`.
pub fn random_derived_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    assert!(max_len >= 4, "no nontrivial commutator has length < 4");
    loop {
        let len = rng.random_range(1..=max_len);
        let u = random_letters(rng, len);
        let (sa, sb) = u.exponent_sums();
        let w = u
            .multiply(&Word::power_of(Generator::A, -sa))
            .multiply(&Word::power_of(Generator::B, -sb));
        if !w.is_identity() && w.length() <= max_len {
            return w;
        }
    }
}

/// Word in `F⁽¹⁾ \ F⁽²⁾` of letter length at most `max_len`.
pub fn random_metabelian_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    loop {
        let w = random_derived_word(rng, max_len);
        if !in_derived(&w, 2) {
            return w;
        }
    }
}

/// Word outside `F⁽¹⁾` of letter length at most `max_len`.
pub fn random_nonderived_word<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    assert!(max_len >= 1);
    loop {
        let w = random_word(rng, max_len);
        let (sa, sb) = w.exponent_sums();
        if !(sa.is_zero() && sb.is_zero()) {
            return w;
        }
    }
}

/// Word outside `F⁽²⁾` (either not in `F⁽¹⁾` or in `F⁽¹⁾ \ F⁽²⁾`), of letter
/// length at most `max_len`, drawn half from each side.
pub fn random_word_outside_f2<R: Rng + ?Sized>(rng: &mut R, max_len: usize) -> Word {
    if rng.random_bool(0.5) {
        random_metabelian_word(rng, max_len)
    } else {
        random_nonderived_word(rng, max_len)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_respect_contracts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let w = random_derived_word(&mut rng, 20);
            assert!(w.length() <= 20 && in_derived(&w, 1) && !w.is_identity());
            let w = random_metabelian_word(&mut rng, 20);
            assert!(in_derived(&w, 1) && !in_derived(&w, 2));
            let w = random_nonderived_word(&mut rng, 20);
            assert!(!in_derived(&w, 1) && w.length() <= 20);
        }
    }
}
