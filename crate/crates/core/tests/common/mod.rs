//! Test-only reference semantics: guarded-string languages as explicit sets,
//! computed straight from the definitions with no sharing or memoization.

#![allow(dead_code)]

use std::collections::BTreeSet;

use gkat::boolalg::{Atom, BExp, TestId};
use gkat::guarded_lang::GuardedString;
use gkat::syntax::{ActionId, Exp};
use proptest::prelude::*;

pub type Word = (Vec<u32>, Vec<u32>);

pub fn holds(b: &BExp, alpha: u32) -> bool {
    match b {
        BExp::Zero => false,
        BExp::One => true,
        BExp::Test(t) => alpha >> t.0 & 1 == 1,
        BExp::And(l, r) => holds(l, alpha) && holds(r, alpha),
        BExp::Or(l, r) => holds(l, alpha) || holds(r, alpha),
        BExp::Not(b) => !holds(b, alpha),
    }
}

fn fuse_sets(x: &BTreeSet<Word>, y: &BTreeSet<Word>, k: usize) -> BTreeSet<Word> {
    let mut out = BTreeSet::new();
    for (xa, xp) in x {
        for (ya, yp) in y {
            if xa.last() == ya.first() && xp.len() + yp.len() <= k {
                let mut atoms = xa.clone();
                atoms.extend_from_slice(&ya[1..]);
                let mut acts = xp.clone();
                acts.extend_from_slice(yp);
                out.insert((atoms, acts));
            }
        }
    }
    out
}

fn restrict(x: &BTreeSet<Word>, b: &BExp, positive: bool) -> BTreeSet<Word> {
    x.iter()
        .filter(|(a, _)| holds(b, a[0]) == positive)
        .cloned()
        .collect()
}

/// Every guarded string of `e` with at most `k` actions.
pub fn den(n_tests: usize, e: &Exp, k: usize) -> BTreeSet<Word> {
    let n_atoms = 1u32 << n_tests;
    match e {
        Exp::Assert(b) => (0..n_atoms)
            .filter(|&a| holds(b, a))
            .map(|a| (vec![a], vec![]))
            .collect(),
        Exp::Act(p) => {
            let mut out = BTreeSet::new();
            if k >= 1 {
                for a in 0..n_atoms {
                    for c in 0..n_atoms {
                        out.insert((vec![a, c], vec![p.0]));
                    }
                }
            }
            out
        }
        Exp::Seq(e, f) => fuse_sets(&den(n_tests, e, k), &den(n_tests, f, k), k),
        Exp::If(b, e, f) => {
            let mut out = restrict(&den(n_tests, e, k), b, true);
            out.extend(restrict(&den(n_tests, f, k), b, false));
            out
        }
        Exp::While(b, body) => {
            let exit = den(n_tests, &Exp::assert(BExp::not(b.clone())), k);
            let step = restrict(&den(n_tests, body, k), b, true);
            let mut x = BTreeSet::new();
            loop {
                let mut next = exit.clone();
                next.extend(fuse_sets(&step, &x, k));
                if next == x {
                    return x;
                }
                x = next;
            }
        }
    }
}

pub fn to_guarded(w: &Word) -> GuardedString {
    GuardedString::new(
        w.0.iter().map(|a| Atom(*a)).collect(),
        w.1.iter().map(|p| ActionId(*p)).collect(),
    )
}

pub fn from_guarded(w: &GuardedString) -> Word {
    (
        w.atoms.iter().map(|a| a.0).collect(),
        w.actions.iter().map(|p| p.0).collect(),
    )
}

pub fn arb_bexp(n_tests: usize) -> impl Strategy<Value = BExp> {
    let leaf = prop_oneof![
        3 => (0..n_tests as u32).prop_map(|t| BExp::Test(TestId(t))),
        1 => Just(BExp::Zero),
        1 => Just(BExp::One),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(BExp::not),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| BExp::and(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| BExp::or(l, r)),
        ]
    })
}

pub fn arb_exp(n_tests: usize, n_actions: usize, depth: u32) -> impl Strategy<Value = Exp> {
    let leaf = prop_oneof![
        2 => (0..n_actions as u32).prop_map(|p| Exp::Act(ActionId(p))),
        1 => arb_bexp(n_tests).prop_map(Exp::assert),
    ];
    leaf.prop_recursive(depth, 24, 2, move |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(e, f)| Exp::seq(e, f)),
            (arb_bexp(n_tests), inner.clone(), inner.clone())
                .prop_map(|(b, e, f)| Exp::if_(b, e, f)),
            (arb_bexp(n_tests), inner).prop_map(|(b, e)| Exp::while_(b, e)),
        ]
    })
}
