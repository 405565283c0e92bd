use num_bigint::BigInt;
use proptest::prelude::*;

use wordmap::certify::{classify, Certificate, NielsenMove, OrderedBasis};
use wordmap::freegroup::{commutator, multiply, substitute, BasisMap, Generator, Word};
use wordmap::laurent::LaurentPoly;
use wordmap::metabelian::{derived_class, p_affine, p_class, p_fox, p_poly};

fn word_strategy(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((any::<bool>(), -3i64..=3), 0..=max_len).prop_map(|syl| {
        Word::from_syllables(syl.into_iter().filter(|&(_, e)| e != 0).map(|(is_a, e)| {
            let g = if is_a { Generator::A } else { Generator::B };
            (g, e)
        }))
    })
}

fn derived_strategy() -> impl Strategy<Value = Word> {
    (word_strategy(4), word_strategy(4), word_strategy(3), word_strategy(3)).prop_map(
        |(u, v, x, y)| multiply(&commutator(&u, &v), &commutator(&x, &y)),
    )
}

fn move_strategy() -> impl Strategy<Value = NielsenMove> {
    prop_oneof![
        Just(NielsenMove::SwapAB),
        Just(NielsenMove::InvertA),
        Just(NielsenMove::InvertB),
        (1i64..=3, any::<bool>())
            .prop_map(|(q, neg)| NielsenMove::RightMultA { q: if neg { -q } else { q } }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn commutator_with_b_recursion(w in derived_strategy()) {
        let basis = BasisMap::swap();
        let p = p_poly(&w, &basis).unwrap();
        let lifted = p_poly(&commutator(&w, &Word::b()), &basis).unwrap();
        let one_minus_t = LaurentPoly::from_coeffs(&[1, -1]);
        let t = LaurentPoly::from_coeffs(&[0, 1]);
        let expected = &(&one_minus_t * &p) + &t.scale(&p.eval_at_one());
        prop_assert_eq!(lifted, expected);
    }

    #[test]
    fn classification_invariant_under_moves(w in word_strategy(8), m in move_strategy()) {
        prop_assert_eq!(classify(&substitute(&w, &m.forward())), classify(&w));
        prop_assert_eq!(classify(&substitute(&w, &m.backward())), classify(&w));
    }

    #[test]
    fn moves_are_invertible(w in word_strategy(8), m in move_strategy()) {
        let there = substitute(&w, &m.forward());
        prop_assert_eq!(substitute(&there, &m.backward()), w);
    }

    #[test]
    fn derived_class_is_additive(u in derived_strategy(), v in derived_strategy()) {
        let sum = &derived_class(&u).unwrap() + &derived_class(&v).unwrap();
        prop_assert_eq!(derived_class(&multiply(&u, &v)).unwrap(), sum);
        prop_assert!(derived_class(&multiply(&u, &u.invert())).unwrap().is_zero());
    }

    #[test]
    fn exponent_sums_are_additive(u in word_strategy(8), v in word_strategy(8)) {
        let (ua, ub) = u.exponent_sums();
        let (va, vb) = v.exponent_sums();
        let (sa, sb) = multiply(&u, &v).exponent_sums();
        prop_assert_eq!(sa, ua + va);
        prop_assert_eq!(sb, ub + vb);
        prop_assert!(multiply(&u, &u.invert()).is_identity());
    }

    #[test]
    fn substitution_is_a_homomorphism(
        u in word_strategy(6),
        v in word_strategy(6),
        x in word_strategy(3),
        y in word_strategy(3),
    ) {
        let basis = BasisMap::new(x, y);
        prop_assert_eq!(
            substitute(&multiply(&u, &v), &basis),
            multiply(&substitute(&u, &basis), &substitute(&v, &basis))
        );
        prop_assert_eq!(substitute(&u.invert(), &basis), substitute(&u, &basis).invert());
    }

    #[test]
    fn polynomial_routes_agree(w in derived_strategy(), moves in prop::collection::vec(move_strategy(), 0..3)) {
        let basis = wordmap::certify::back_substitution(&moves);
        let by_class = p_class(&w, &basis).unwrap();
        prop_assert_eq!(&by_class, &p_affine(&w, &basis).unwrap());
        prop_assert_eq!(&by_class, &p_fox(&w, &basis).unwrap());
        prop_assert!(by_class.eval_at_one() == BigInt::from(0));
    }

    #[test]
    fn certificate_json_round_trip(
        w in derived_strategy(),
        moves in prop::collection::vec(move_strategy(), 0..3),
        second_first in any::<bool>(),
    ) {
        let ordered = if second_first { OrderedBasis::SecondFirst } else { OrderedBasis::FirstSecond };
        let cert = match Certificate::from_basis(&w, moves, ordered) {
            Ok(c) => c,
            Err(_) => return Ok(()),
        };
        let text = cert.to_json();
        let back = Certificate::from_json(&text).unwrap();
        prop_assert_eq!(&back, &cert);
        prop_assert_eq!(back.to_json(), text);
        prop_assert!(back.verify().is_ok());
    }
}
