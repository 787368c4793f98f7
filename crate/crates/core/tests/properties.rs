use std::sync::Arc;

use affkl::antispherical::ParabolicModule;
use affkl::hecke::{HeckeAlgebra, HeckeElt};
use affkl::{AffineElt, AffineWeyl, LaurentPoly, Weight};
use num_bigint::BigInt;
use proptest::prelude::*;

fn group(label: &str) -> Arc<AffineWeyl> {
    Arc::new(AffineWeyl::from_label(label).unwrap())
}

fn element(g: &AffineWeyl, omega: usize, word: &[usize]) -> AffineElt {
    let om = &g.omega()[omega % g.omega().len()];
    om.mul(&g.from_word(&word.iter().map(|i| i % g.num_gens()).collect::<Vec<_>>()).unwrap())
}

fn arb_word(max: usize) -> impl Strategy<Value = (usize, Vec<usize>)> {
    (0usize..8, prop::collection::vec(0usize..8, 0..=max))
}

fn arb_poly() -> impl Strategy<Value = LaurentPoly> {
    prop::collection::vec((-3i32..=3, -4i64..=4), 0..4)
        .prop_map(|t| LaurentPoly::from_terms(t.into_iter().map(|(e, c)| (e, BigInt::from(c)))))
}

fn arb_elt(g: Arc<AffineWeyl>, len: usize) -> impl Strategy<Value = HeckeElt> {
    prop::collection::vec((arb_word(len), arb_poly()), 1..4).prop_map(move |terms| {
        HeckeElt::from_terms(terms.into_iter().map(|((o, w), c)| (element(&g, o, &w), c)))
    })
}

fn algebra(label: &str) -> HeckeAlgebra {
    HeckeAlgebra::new(group(label))
}

fn dominant(theta: &[i64]) -> Weight {
    Weight::new(theta.iter().copied())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn bar_is_an_involution(a in arb_elt(group("A2"), 5)) {
        let alg = algebra("A2");
        prop_assert_eq!(alg.bar(&alg.bar(&a).unwrap()).unwrap(), a);
    }

    #[test]
    fn bar_is_multiplicative(a in arb_elt(group("B2"), 3), b in arb_elt(group("B2"), 3)) {
        let alg = algebra("B2");
        let lhs = alg.bar(&alg.mul(&a, &b).unwrap()).unwrap();
        let rhs = alg.mul(&alg.bar(&a).unwrap(), &alg.bar(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn multiplication_is_associative(a in arb_elt(group("A2"), 3), b in arb_elt(group("A2"), 3), c in arb_elt(group("A2"), 3)) {
        let alg = algebra("A2");
        let l = alg.mul(&alg.mul(&a, &b).unwrap(), &c).unwrap();
        let r = alg.mul(&a, &alg.mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn bernstein_elements_multiply_like_the_lattice(t in prop::collection::vec(-2i64..=2, 2), u in prop::collection::vec(-2i64..=2, 2)) {
        let alg = algebra("A2");
        let (t, u) = (dominant(&t), dominant(&u));
        let prod = alg.mul(&alg.x_theta(&t).unwrap(), &alg.x_theta(&u).unwrap()).unwrap();
        prop_assert_eq!(&prod, &alg.x_theta(&t.add(&u)).unwrap());
        let swapped = alg.mul(&alg.x_theta(&u).unwrap(), &alg.x_theta(&t).unwrap()).unwrap();
        prop_assert_eq!(prod, swapped);
    }

    #[test]
    fn dot_action_is_a_group_action((o1, w1) in arb_word(6), (o2, w2) in arb_word(6), mu in prop::collection::vec(-6i64..=6, 2), p in 3i64..12) {
        let g = group("B2");
        let (x, y) = (element(&g, o1, &w1), element(&g, o2, &w2));
        let mu = Weight::new(mu);
        let lhs = g.dot_action(&x.mul(&y), &mu, p).unwrap();
        let rhs = g.dot_action(&x, &g.dot_action(&y, &mu, p).unwrap(), p).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn length_is_subadditive((o1, w1) in arb_word(7), (o2, w2) in arb_word(7)) {
        let g = group("A2");
        let (x, y) = (element(&g, o1, &w1), element(&g, o2, &w2));
        prop_assert!(g.length(&x.mul(&y)) <= g.length(&x) + g.length(&y));
        prop_assert_eq!(g.length(&x), g.length(&x.inverse()));
        prop_assert_eq!(g.parse(&g.encode(&x)).unwrap(), x);
    }

    #[test]
    fn descents_agree_with_lengths((o, w) in arb_word(9), label in prop::sample::select(vec!["A2", "B2", "G2", "A1xA1"])) {
        let g = group(label);
        let x = element(&g, o, &w);
        for i in g.gen_indices() {
            let s = g.gen(i).unwrap();
            prop_assert_eq!(g.is_right_descent(&x, i), g.length(&x.mul(s)) < g.length(&x));
            prop_assert_eq!(g.is_left_descent(&x, i), g.length(&s.mul(&x)) < g.length(&x));
        }
    }

    #[test]
    fn bar_agrees_termwise(a in arb_elt(group("G2"), 5)) {
        let alg = algebra("G2");
        let mut expected = HeckeElt::zero();
        for (x, c) in a.iter() {
            expected.add_scaled(&alg.bar_standard(x).unwrap(), &c.bar());
        }
        prop_assert_eq!(alg.bar(&a).unwrap(), expected);
    }

    #[test]
    fn module_action_is_associative(a in arb_elt(group("A2"), 3), b in arb_elt(group("A2"), 3), (o, w) in arb_word(4)) {
        let g = group("A2");
        let m = ParabolicModule::<BigInt>::new(Arc::new(HeckeAlgebra::new(g.clone())), &[1]).unwrap();
        let x = g.coset_extrema(&element(&g, o, &w), &[1]).1;
        let std = m.standard(&x).unwrap();
        let alg = m.algebra();
        let lhs = m.act(&alg.mul(&a, &b).unwrap(), &std).unwrap();
        let rhs = m.act(&a, &m.act(&b, &std).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn weyl_dimension_matches_closed_forms(a in 0i64..12, b in 0i64..12) {
        let a2 = group("A2");
        let (x, y) = (a + 1, b + 1);
        prop_assert_eq!(a2.datum().weyl_dim(&Weight::new([a, b])).unwrap(), BigInt::from(x * y * (x + y) / 2));
        let b2 = group("B2");
        let c = b2.datum().cartan();
        let (l, s) = if c[0][1] == -1 { (x, y) } else { (y, x) };
        let expected = l * s * (l + s) * (2 * l + s) / 6;
        let mu = Weight::new([a, b]);
        prop_assert_eq!(b2.datum().weyl_dim(&mu).unwrap(), BigInt::from(expected));
    }
}
