use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use ggt_core::cayley::CayleyBall;
use ggt_core::coned::{ConedGraph, SubgroupSpec};
use ggt_core::fpgroup::AmalgamSplitting;
use ggt_core::freesub::SubgroupAutomaton;
use ggt_core::ggh::{cocycle_check, delta_commute_check, invariance_check, linearity_check, random_model, RegionId};
use ggt_core::quasi::{brooks_eval, homogenize, int, Cochain, Complex, Quasimorphism};
use ggt_core::retract::{surface_inclusion, verify_homomorphism, verify_retraction, HomSpec};
use ggt_core::{Budget, Letter, Presentation, Word};

fn word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank as u8, 0..=max_len)
        .prop_map(|codes| Word::reduce(&codes.into_iter().map(Letter::from_code).collect::<Vec<_>>()))
}

fn nonempty(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    word(rank, max_len).prop_filter("nonempty", |w| !w.is_identity())
}

fn n3() -> &'static Presentation {
    static P: OnceLock<Presentation> = OnceLock::new();
    P.get_or_init(|| Presentation::surface(3, false).unwrap())
}

fn n3_ball() -> &'static CayleyBall {
    static B: OnceLock<CayleyBall> = OnceLock::new();
    B.get_or_init(|| CayleyBall::build(n3(), 5, &Budget::default()).unwrap())
}

fn f2() -> Presentation {
    Presentation::free(2)
}

fn endomorphism(images: [Word; 2]) -> HomSpec {
    HomSpec::new(f2(), f2(), images.to_vec()).unwrap()
}

fn invariant_cochain(pattern: Word) -> Cochain {
    Cochain::function(Complex::Homogeneous, 1, "brooks of g0^-1 g1", None, move |t| {
        int(brooks_eval(&pattern, &t[0].invert().concat(&t[1])).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn words_form_a_group(u in word(3, 10), v in word(3, 10), x in word(3, 10)) {
        prop_assert_eq!(u.concat(&v).concat(&x), u.concat(&v.concat(&x)));
        prop_assert!(u.concat(&u.invert()).is_identity());
        prop_assert_eq!(u.concat(&v).invert(), v.invert().concat(&u.invert()));
        prop_assert_eq!(u.invert().invert(), u.clone());
        prop_assert_eq!(Word::reduce(u.letters()), u.clone());
    }

    #[test]
    fn text_form_round_trips(u in word(26, 20)) {
        prop_assert_eq!(u.to_string().parse::<Word>().unwrap(), u);
    }

    #[test]
    fn cyclic_reduce_reconstructs(u in word(3, 12)) {
        let (core, conj) = u.cyclic_reduce();
        prop_assert!(core.is_cyclically_reduced());
        prop_assert_eq!(conj.conjugate(&core), u);
    }

    #[test]
    fn exponent_vector_is_additive(u in word(3, 10), v in word(3, 10)) {
        let sum: Vec<i64> = u.exponent_vector(3).iter().zip(v.exponent_vector(3)).map(|(a, b)| a + b).collect();
        prop_assert_eq!(u.concat(&v).exponent_vector(3), sum);
    }

    #[test]
    fn substitution_is_a_homomorphism(u in word(2, 8), v in word(2, 8), x in word(3, 4), y in word(3, 4)) {
        let images = [x, y];
        prop_assert_eq!(u.concat(&v).substitute(&images), u.substitute(&images).concat(&v.substitute(&images)));
    }

    #[test]
    fn oracle_matches_normal_form(u in word(3, 7), v in word(3, 7)) {
        let p = n3();
        let s = AmalgamSplitting::find(p).unwrap();
        let truth = s.equal(&u, &v);
        let verdict = p.equality_oracle(&u, &v, &Budget::default()).unwrap();
        prop_assert!(verdict.as_bool().is_none_or(|b| b == truth), "{u} vs {v}: {verdict:?}");
        prop_assert_eq!(s.canonical_word(&s.canonical_word(&u)), s.canonical_word(&u));
    }

    #[test]
    fn relator_conjugates_are_trivial(u in word(3, 6), k in 0usize..6) {
        let p = n3();
        let r = p.relators()[0].rotate(k);
        let w = u.conjugate(&r);
        prop_assert!(AmalgamSplitting::find(p).unwrap().equal(&w, &Word::identity()));
        let verdict = p.equality_oracle(&w, &Word::identity(), &Budget::default()).unwrap();
        prop_assert!(!verdict.is_distinct(), "{w}: {verdict:?}");
    }

    #[test]
    fn ball_metric(u in word(3, 5), v in word(3, 5), x in word(3, 5)) {
        let ball = n3_ball();
        let (duv, dvx, dux) = (ball.distance(&u, &v), ball.distance(&v, &x), ball.distance(&u, &x));
        if let (Ok(duv), Ok(dvx), Ok(dux)) = (duv, dvx, dux) {
            prop_assert!(dux <= duv + dvx);
            prop_assert_eq!(Some(duv), ball.distance(&v, &u).ok());
        }
        if let Some(i) = ball.lookup(&u) {
            prop_assert_eq!(ball.rep(i).len(), ball.depth(i));
            prop_assert!(ball.depth(i) <= u.len());
            prop_assert_eq!(ball.lookup(&ball.rep(i)), Some(i));
        }
    }

    #[test]
    fn stallings_membership_is_a_subgroup(
        gens in prop::collection::vec(nonempty(2, 4), 1..4),
        picks in prop::collection::vec((0usize..4, any::<bool>()), 0..6),
        u in word(2, 8),
    ) {
        let h = SubgroupAutomaton::fold(&gens, 2).unwrap();
        let mut product = Word::identity();
        for (i, inv) in picks {
            let g = &gens[i % gens.len()];
            product = product.concat(&if inv { g.invert() } else { g.clone() });
        }
        prop_assert!(h.contains(&product));
        prop_assert_eq!(h.contains(&u), h.contains(&u.invert()));
        for e in h.elements_up_to(4) {
            prop_assert!(h.contains(&e));
        }
    }

    #[test]
    fn brooks_is_antisymmetric_with_bounded_defect(p in nonempty(2, 3), g in word(2, 12), h in word(2, 12)) {
        prop_assert_eq!(brooks_eval(&p, &g.invert()).unwrap(), -brooks_eval(&p, &g).unwrap());
        let f = Quasimorphism::brooks(p.clone()).unwrap();
        let bound = int(6 * p.len() as i64);
        let d = f.defect_at(&g, &h);
        prop_assert!(d <= bound && -d <= bound);
    }

    #[test]
    fn homogenization_scales_with_powers(p in nonempty(2, 3), g in nonempty(2, 5), n in 1usize..6) {
        let f = Quasimorphism::brooks(p).unwrap();
        prop_assert_eq!(homogenize(&f, &g.pow(2), n).unwrap(), int(2) * homogenize(&f, &g, 2 * n).unwrap());
    }

    #[test]
    fn coboundary_squares_to_zero(p in nonempty(2, 3), t in prop::collection::vec(word(2, 5), 3..=4)) {
        let f = Quasimorphism::brooks(p).unwrap();
        let inhom = Cochain::quasimorphism(f.clone());
        let dd = inhom.coboundary().coboundary();
        prop_assert_eq!(dd.eval(&t[..dd.tuple_len()]).unwrap(), int(0));
        let hom = Cochain::quasimorphism_difference(f);
        let dd = hom.coboundary().coboundary();
        if t.len() >= dd.tuple_len() {
            prop_assert_eq!(dd.eval(&t[..dd.tuple_len()]).unwrap(), int(0));
        }
    }

    #[test]
    fn transfer_checks_hold_for_random_models(
        seed in any::<u64>(),
        w1 in word(2, 5),
        w2 in word(2, 5),
        h in word(2, 4),
        t in prop::collection::vec(word(2, 4), 3),
    ) {
        let model = random_model(&mut ChaCha8Rng::seed_from_u64(seed), 3);
        for id in RegionId::ALL {
            prop_assert!(cocycle_check(&model, &w1, &w2, id).unwrap());
        }
        let c = invariant_cochain("ab".parse().unwrap());
        let d = invariant_cochain("aab".parse().unwrap());
        prop_assert!(delta_commute_check(&model, &c, &t).unwrap().holds);
        prop_assert!(invariance_check(&model, &c, &t[..2], &h).unwrap().holds);
        prop_assert!(linearity_check(&model, (int(2), &c), (int(-3), &d), &t[..2]).unwrap().holds);
    }

    #[test]
    fn composition_of_verified_homomorphisms(x in word(2, 4), y in word(2, 4), z in word(2, 4), v in word(2, 4), u in word(2, 6)) {
        let e1 = endomorphism([x, y]);
        let e2 = endomorphism([z, v]);
        let composite = e1.then(&e2).unwrap();
        prop_assert_eq!(composite.apply(&u), e2.apply(&e1.apply(&u)));
        let i = surface_inclusion(5).unwrap();
        let r = HomSpec::new(
            Presentation::surface(5, false).unwrap(),
            f2(),
            ["a", "b", "ba", "ABa", "A"].iter().map(|s| s.parse().unwrap()).collect(),
        )
        .unwrap();
        let through = r.then(&e2).unwrap();
        prop_assert!(verify_homomorphism(&r, &Budget::default()).unwrap().is_verified());
        prop_assert!(verify_homomorphism(&through, &Budget::default()).unwrap().is_verified());
        prop_assert!(verify_retraction(&r, &i, &Budget::default()).unwrap().is_verified());
    }
}

#[test]
fn dhat_balls_are_nested() {
    let ball = n3_ball();
    let coned = ConedGraph::build(ball, &SubgroupSpec::surface(3))
        .unwrap()
        .with_horizon(4);
    let mut previous = 0;
    for r in 0..=4 {
        let b = coned.dhat_ball(r);
        assert!(b.len() >= previous);
        assert!(b.contains(&Word::identity()));
        previous = b.len();
    }
}
