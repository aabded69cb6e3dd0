mod common;

use std::collections::BTreeSet;

use gkat::analysis::{dead_mask, is_normal, normalize};
use gkat::automaton::{from_json, thompson, to_json, Step};
use gkat::boolalg::{atoms_of, ba_equiv, BExp, TestContext};
use gkat::derivatives::{d_of, e_of};
use gkat::equivalence::{decide_equiv, hoare_valid, Verdict};
use gkat::gen::{random_context, GenConfig};
use gkat::guarded_lang::{bounded_den, lang_equal_bounded, oracle_bound};
use gkat::interp::{rel_den, RelInterp};
use gkat::solver::{roundtrip, solve_trace, verify_solution};
use gkat::syntax::{parse_bexp_with, parse_exp_with, pretty, pretty_bexp, Exp, ProgramHeader};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::{arb_bexp, arb_exp, den, from_guarded, Word};

fn header() -> ProgramHeader {
    GenConfig::new(2, 3, 0).header()
}

fn ctx() -> TestContext {
    header().tests().clone()
}

fn lib_words(e: &Exp, k: usize) -> BTreeSet<Word> {
    bounded_den(&ctx(), e, k)
        .unwrap()
        .strings()
        .iter()
        .map(from_guarded)
        .collect()
}

fn equiv(e: &Exp, f: &Exp) -> bool {
    decide_equiv(&ctx(), e, f).unwrap().is_equivalent()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn atoms_of_is_a_homomorphism(b in arb_bexp(2), c in arb_bexp(2)) {
        let ctx = ctx();
        let (sb, sc) = (atoms_of(&ctx, &b).unwrap(), atoms_of(&ctx, &c).unwrap());
        prop_assert_eq!(atoms_of(&ctx, &BExp::and(b.clone(), c.clone())).unwrap(), sb.intersection(&sc));
        prop_assert_eq!(atoms_of(&ctx, &BExp::or(b.clone(), c.clone())).unwrap(), sb.union(&sc));
        prop_assert_eq!(atoms_of(&ctx, &BExp::not(b.clone())).unwrap(), sb.complement());
        for alpha in ctx.atoms() {
            prop_assert_eq!(sb.contains(alpha), common::holds(&b, alpha.0));
        }
    }

    #[test]
    fn ba_equiv_is_a_congruence(b in arb_bexp(2), c in arb_bexp(2), d in arb_bexp(2)) {
        let ctx = ctx();
        prop_assert!(ba_equiv(&ctx, &b, &b).unwrap());
        prop_assert_eq!(ba_equiv(&ctx, &b, &c).unwrap(), ba_equiv(&ctx, &c, &b).unwrap());
        if ba_equiv(&ctx, &b, &c).unwrap() {
            prop_assert!(ba_equiv(&ctx, &BExp::not(b.clone()), &BExp::not(c.clone())).unwrap());
            prop_assert!(ba_equiv(&ctx, &BExp::and(b.clone(), d.clone()), &BExp::and(c.clone(), d.clone())).unwrap());
            prop_assert!(ba_equiv(&ctx, &BExp::or(d.clone(), b.clone()), &BExp::or(d.clone(), c.clone())).unwrap());
            if ba_equiv(&ctx, &c, &d).unwrap() {
                prop_assert!(ba_equiv(&ctx, &b, &d).unwrap());
            }
        }
    }

    #[test]
    fn parse_inverts_pretty(e in arb_exp(2, 3, 5), b in arb_bexp(2)) {
        let h = header();
        prop_assert_eq!(parse_exp_with(&h, &pretty(&h, &e)).unwrap(), e);
        prop_assert_eq!(parse_bexp_with(&h, &pretty_bexp(h.tests(), &b)).unwrap(), b);
    }

    #[test]
    fn bounded_semantics_matches_explicit_sets(e in arb_exp(2, 2, 4), k in 0usize..4) {
        prop_assert_eq!(lib_words(&e, k), den(2, &e, k));
    }

    #[test]
    fn languages_are_deterministic(e in arb_exp(2, 3, 4)) {
        let words: Vec<Word> = lib_words(&e, 3).into_iter().collect();
        for (xa, xp) in &words {
            for (ya, yp) in &words {
                let n = xp.len().min(yp.len());
                if xa[..=n] == ya[..=n] {
                    prop_assert_eq!(&xp[..n], &yp[..n]);
                }
            }
        }
    }

    #[test]
    fn automata_recognize_the_semantics(e in arb_exp(2, 2, 4)) {
        let ctx = ctx();
        let aut = thompson(&ctx, &e).unwrap().sealed();
        let iota = aut.initial().unwrap();
        let oracle = den(2, &e, 3);
        let accepted: BTreeSet<Word> =
            aut.accepted_bounded(iota, 3).unwrap().strings().iter().map(from_guarded).collect();
        prop_assert_eq!(&accepted, &oracle);
        for w in &oracle {
            prop_assert!(aut.accepts(iota, &common::to_guarded(w)).unwrap());
        }
    }

    #[test]
    fn decisions_agree_with_explicit_sets(e in arb_exp(1, 2, 3), f in arb_exp(1, 2, 3)) {
        let ctx = TestContext::new(&["t1"]).unwrap();
        match decide_equiv(&ctx, &e, &f).unwrap() {
            Verdict::Equivalent => prop_assert_eq!(den(1, &e, 3), den(1, &f, 3)),
            Verdict::Inequivalent { witness, in_left } => {
                let k = witness.action_len();
                let w = from_guarded(&witness);
                prop_assert!(den(1, &e, k).contains(&w) == in_left);
                prop_assert!(den(1, &f, k).contains(&w) != in_left);
            }
        }
        let k = oracle_bound(&e, &f);
        prop_assert_eq!(
            decide_equiv(&ctx, &e, &f).unwrap().is_equivalent(),
            lang_equal_bounded(&ctx, &e, &f, k).unwrap().equal
        );
    }

    #[test]
    fn decide_equiv_is_a_congruence(e in arb_exp(2, 3, 3), seed in any::<u64>(), depth in 1usize..4) {
        let cfg = GenConfig::new(2, 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let f = gkat::gen::rewrite(&mut rng, &cfg, &e, 3);
        prop_assert!(equiv(&e, &f));
        prop_assert!(equiv(&f, &e));
        let c = random_context(&mut rng, &cfg, depth);
        prop_assert!(equiv(&c.plug(e), &c.plug(f)));
    }

    #[test]
    fn normalization_keeps_languages(e in arb_exp(2, 3, 4)) {
        let aut = thompson(&ctx(), &e).unwrap().sealed();
        let norm = normalize(&aut);
        prop_assert!(is_normal(&norm));
        prop_assert_eq!(normalize(&norm), norm.clone());
        let dead = dead_mask(&norm);
        for s in 0..aut.n_states() {
            prop_assert_eq!(aut.accepted_bounded(s, 3).unwrap(), norm.accepted_bounded(s, 3).unwrap());
            for st in norm.row(s) {
                if let Step::Move(_, t) = st {
                    prop_assert!(!dead[*t]);
                }
            }
        }
    }

    #[test]
    fn automaton_json_roundtrips(e in arb_exp(2, 3, 4)) {
        let h = header();
        let aut = thompson(h.tests(), &e).unwrap().sealed();
        let (h2, back) = from_json(&to_json(&h, &aut)).unwrap();
        prop_assert_eq!(h2, h);
        prop_assert_eq!(back, aut);
    }

    #[test]
    fn fundamental_decomposition_matches_explicit_sets(e in arb_exp(2, 2, 4)) {
        let ctx = ctx();
        let fd = Exp::if_(e_of(&e), Exp::skip(), d_of(&ctx, &e).unwrap());
        prop_assert_eq!(den(2, &fd, 3), den(2, &e, 3));
    }

    #[test]
    fn solutions_match_explicit_sets(e in arb_exp(2, 2, 4)) {
        let ctx = ctx();
        let (aut, trace) = thompson(&ctx, &e).unwrap().sealed_with_trace();
        let sol = solve_trace(&ctx, &aut, &trace).unwrap();
        prop_assert!(verify_solution(&ctx, &aut, &sol).unwrap());
        prop_assert_eq!(den(2, &roundtrip(&ctx, &e).unwrap(), 3), den(2, &e, 3));
    }

    #[test]
    fn relational_soundness_and_refinement(
        e in arb_exp(2, 3, 3),
        g in arb_exp(2, 3, 3),
        b in arb_bexp(2),
        seed in any::<u64>(),
        m in 1usize..=5,
    ) {
        let h = header();
        let cfg = GenConfig::new(2, 3, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = RelInterp::random(&h, m, 0.3, &mut rng);
        let f = gkat::gen::rewrite(&mut rng, &cfg, &e, 3);
        prop_assert_eq!(rel_den(&h, &i, &e).unwrap(), rel_den(&h, &i, &f).unwrap());

        // b·e refines e; so does anything whose bounded language is included
        for (small, big) in [(Exp::seq(Exp::assert(b.clone()), e.clone()), e.clone()), (g.clone(), e.clone())] {
            let k = oracle_bound(&small, &big);
            let (ls, lb) = (bounded_den(h.tests(), &small, k).unwrap(), bounded_den(h.tests(), &big, k).unwrap());
            if ls.is_subset(&lb) {
                prop_assert!(rel_den(&h, &i, &small).unwrap().is_subset(&rel_den(&h, &i, &big).unwrap()));
            }
        }
    }

    #[test]
    fn hoare_matches_explicit_sets(b in arb_bexp(2), e in arb_exp(2, 2, 3), c in arb_bexp(2)) {
        let ctx = ctx();
        let be = Exp::seq(Exp::assert(b.clone()), e.clone());
        let bec = Exp::seq(be.clone(), Exp::assert(c.clone()));
        let valid = hoare_valid(&ctx, &b, &e, &c).unwrap();
        if valid {
            prop_assert_eq!(den(2, &bec, 3), den(2, &be, 3));
        }
        prop_assert_eq!(valid, lang_equal_bounded(&ctx, &bec, &be, oracle_bound(&bec, &be)).unwrap().equal);
    }
}
