//! The ten acceptance criteria. Runs without the libtest harness so that each
//! criterion prints exactly one PASS/FAIL line; exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use gkat::analysis::{dead_mask, is_normal, normalize};
use gkat::automaton::{thompson, Step};
use gkat::bench::{measure, on_big_stack, Family};
use gkat::boolalg::{BExp, TestContext};
use gkat::derivatives::{d_of, e_of};
use gkat::equivalence::{decide_equiv, hoare_valid};
use gkat::gen::{random_bexp, random_exp, rewrite, GenConfig, Law};
use gkat::guarded_lang::{bounded_den, lang_equal_bounded, oracle_bound};
use gkat::interp::{rel_equiv, RelInterp};
use gkat::solver::{roundtrip, solve_trace_checked, verify_solution};
use gkat::syntax::{action_count, pretty, Exp, ProgramHeader};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn equiv(ctx: &TestContext, e: &Exp, f: &Exp) -> bool {
    decide_equiv(ctx, e, f).unwrap().is_equivalent()
}

fn fail<T>(h: &ProgramHeader, what: &str, exps: &[&Exp]) -> Result<T, String> {
    let shown: Vec<String> = exps.iter().map(|e| pretty(h, e)).collect();
    Err(format!("{what}: {}", shown.join("  |  ")))
}

fn linear_size() -> Outcome {
    let mut r = rng(1);
    let cfg = GenConfig::new(2, 4, 8);
    let h = cfg.header();
    let mut max_states = 0;
    for _ in 0..1000 {
        let e = random_exp(&mut r, &cfg);
        let n = thompson(h.tests(), &e).unwrap().sealed().n_states();
        if n != action_count(&e) + 1 {
            return fail(
                &h,
                &format!("{n} states for {} actions", action_count(&e)),
                &[&e],
            );
        }
        max_states = max_states.max(n);
    }
    Ok(format!("1000 expressions, up to {max_states} states"))
}

fn automaton_correctness() -> Outcome {
    let mut r = rng(2);
    for i in 0..500 {
        let cfg = GenConfig::new(1 + i % 2, 1 + i % 3, 5);
        let h = cfg.header();
        let e = random_exp(&mut r, &cfg);
        let aut = thompson(h.tests(), &e).unwrap().sealed();
        let iota = aut.initial().unwrap();
        for k in 0..=6 {
            if aut.accepted_bounded(iota, k).unwrap() != bounded_den(h.tests(), &e, k).unwrap() {
                return fail(&h, &format!("languages differ at k = {k}"), &[&e]);
            }
        }
    }
    Ok("500 expressions, k = 0..6".into())
}

fn decision_vs_oracle() -> Outcome {
    let mut r = rng(3);
    let mut n_equal = 0;
    let mut max_k = 0;
    for i in 0..700 {
        let cfg = GenConfig::new(1 + i % 2, 1 + i % 3, 2 + i % 5);
        let h = cfg.header();
        let e = random_exp(&mut r, &cfg);
        let f = if i < 500 {
            random_exp(&mut r, &cfg)
        } else {
            rewrite(&mut r, &cfg, &e, 3)
        };
        let k = oracle_bound(&e, &f);
        max_k = max_k.max(k);
        let decided = equiv(h.tests(), &e, &f);
        let oracle = lang_equal_bounded(h.tests(), &e, &f, k).unwrap().equal;
        if decided != oracle {
            return fail(
                &h,
                &format!("decide = {decided}, oracle = {oracle} at k = {k}"),
                &[&e, &f],
            );
        }
        n_equal += decided as usize;
    }
    Ok(format!(
        "700 pairs ({n_equal} equivalent), bounds up to {max_k}"
    ))
}

fn scaling() -> Outcome {
    let sizes = [1000usize, 2000, 4000, 8000];
    let times: Vec<u128> = on_big_stack(move || {
        sizes
            .iter()
            .map(|&n| measure(Family::Seq, n, 7).unwrap().total_ns())
            .collect()
    });
    let ratios: Vec<f64> = times
        .windows(2)
        .map(|w| w[1] as f64 / w[0] as f64)
        .collect();
    let shown: Vec<String> = ratios.iter().map(|x| format!("{x:.2}")).collect();
    let detail = format!(
        "times {:?} us, doubling ratios [{}]",
        times.iter().map(|t| t / 1000).collect::<Vec<_>>(),
        shown.join(", ")
    );
    if ratios.iter().all(|&x| x <= 3.0) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn axiom_soundness() -> Outcome {
    let mut r = rng(5);
    let cfg = GenConfig::new(2, 3, 3);
    let h = cfg.header();
    for law in Law::AXIOMS.into_iter().chain(Law::FACTS) {
        for _ in 0..100 {
            let (l, rhs) = law.instantiate(&mut r, h.tests(), &cfg).unwrap();
            if !equiv(h.tests(), &l, &rhs) {
                return fail(&h, law.label(), &[&l, &rhs]);
            }
        }
    }
    Ok(format!(
        "{} axioms and {} derivable facts, 100 instances each",
        Law::AXIOMS.len(),
        Law::FACTS.len()
    ))
}

fn fundamental_theorem() -> Outcome {
    let mut r = rng(6);
    let cfg = GenConfig::new(2, 3, 5);
    let h = cfg.header();
    let ctx = h.tests();
    for _ in 0..200 {
        let e = random_exp(&mut r, &cfg);
        let b = random_bexp(&mut r, 2, 2);
        let (ee, de) = (e_of(&e), d_of(ctx, &e).unwrap());
        let not_ee = Exp::assert(BExp::not(ee.clone()));
        let checks = [
            (
                "fundamental theorem",
                e.clone(),
                Exp::if_(ee.clone(), Exp::skip(), de.clone()),
            ),
            ("E(D(e)) = 0", Exp::assert(e_of(&de)), Exp::fail()),
            (
                "not E(e) D(e) = D(e)",
                Exp::seq(not_ee.clone(), de.clone()),
                de.clone(),
            ),
            ("not E(e) e = D(e)", Exp::seq(not_ee, e.clone()), de.clone()),
            (
                "productive loop",
                Exp::while_(b.clone(), e.clone()),
                Exp::while_(b, de),
            ),
        ];
        for (name, l, rhs) in &checks {
            if !equiv(ctx, l, rhs) {
                return fail(&h, name, &[&e, l, rhs]);
            }
        }
    }
    Ok("200 expressions, 5 identities each".into())
}

fn kleene_roundtrip() -> Outcome {
    let mut r = rng(7);
    let cfg = GenConfig::new(2, 3, 6).with_max_actions(12);
    let h = cfg.header();
    let ctx = h.tests();
    let mut max_size = 0;
    for _ in 0..300 {
        let e = random_exp(&mut r, &cfg);
        let (aut, trace) = thompson(ctx, &e).unwrap().sealed_with_trace();
        let (sol, steps_ok) = solve_trace_checked(ctx, &aut, &trace).unwrap();
        if !steps_ok {
            return fail(&h, "an intermediate solution fails", &[&e]);
        }
        if !verify_solution(ctx, &aut, &sol).unwrap() {
            return fail(&h, "the final solution fails", &[&e]);
        }
        let back = roundtrip(ctx, &e).unwrap();
        max_size = max_size.max(back.size());
        if !equiv(ctx, &e, &back) {
            return fail(&h, "round trip changed the meaning", &[&e, &back]);
        }
    }
    Ok(format!(
        "300 expressions, largest result has {max_size} nodes"
    ))
}

fn normalization() -> Outcome {
    let mut r = rng(8);
    let cfg = GenConfig::new(2, 3, 5);
    let h = cfg.header();
    let mut n_dead = 0;
    for _ in 0..300 {
        let e = random_exp(&mut r, &cfg);
        let aut = thompson(h.tests(), &e).unwrap().sealed();
        let norm = normalize(&aut);
        let dead = dead_mask(&norm);
        n_dead += dead.iter().filter(|d| **d).count();
        if !is_normal(&norm) {
            return fail(&h, "normalized automaton is not normal", &[&e]);
        }
        for s in 0..aut.n_states() {
            if aut.accepted_bounded(s, 6).unwrap() != norm.accepted_bounded(s, 6).unwrap() {
                return fail(&h, &format!("state {s} changed language"), &[&e]);
            }
            if norm
                .row(s)
                .iter()
                .any(|st| matches!(st, Step::Move(_, t) if dead[*t]))
            {
                return fail(&h, &format!("state {s} moves into a dead state"), &[&e]);
            }
        }
    }
    Ok(format!("300 automata, {n_dead} dead states in total"))
}

fn relational_soundness() -> Outcome {
    let mut r = rng(9);
    let cfg = GenConfig::new(2, 3, 4);
    let h = cfg.header();
    for _ in 0..200 {
        let e = random_exp(&mut r, &cfg);
        let f = rewrite(&mut r, &cfg, &e, 4);
        if !equiv(h.tests(), &e, &f) {
            return fail(&h, "rewriting changed the meaning", &[&e, &f]);
        }
        let m = r.gen_range(1..=5);
        let i = RelInterp::random(&h, m, 0.3, &mut r);
        if !rel_equiv(&h, &i, &e, &f).unwrap() {
            return Err(format!(
                "relations differ under {}: {}  |  {}",
                i.to_json(&h),
                pretty(&h, &e),
                pretty(&h, &f)
            ));
        }
    }
    Ok("200 (e, f, model) triples".into())
}

fn hoare_checks() -> Outcome {
    let mut r = rng(10);
    let cfg = GenConfig::new(2, 3, 4);
    let h = cfg.header();
    let ctx = h.tests();
    let (mut n_valid, mut n_empty) = (0, 0);
    for _ in 0..200 {
        let b = random_bexp(&mut r, 2, 2);
        let c = random_bexp(&mut r, 2, 2);
        let e = random_exp(&mut r, &cfg);
        let be = Exp::seq(Exp::assert(b.clone()), e.clone());
        let bec = Exp::seq(be.clone(), Exp::assert(c.clone()));
        let valid = hoare_valid(ctx, &b, &e, &c).unwrap();
        let oracle = lang_equal_bounded(ctx, &bec, &be, oracle_bound(&bec, &be))
            .unwrap()
            .equal;
        if valid != oracle {
            return fail(
                &h,
                &format!("hoare = {valid}, oracle = {oracle}"),
                &[&be, &bec],
            );
        }
        n_valid += valid as usize;
        for x in [&e, &be, &bec] {
            let k = oracle_bound(x, &Exp::fail());
            if bounded_den(ctx, x, k).unwrap().is_empty() {
                n_empty += 1;
                if !equiv(ctx, x, &Exp::fail()) {
                    return fail(&h, "empty up to the bound but not equivalent to 0", &[x]);
                }
            }
        }
    }
    Ok(format!(
        "200 triples ({n_valid} valid), {n_empty} empty programs"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("linear automaton size", linear_size),
        ("automata recognize the semantics", automaton_correctness),
        (
            "decision procedure agrees with the oracle",
            decision_vs_oracle,
        ),
        ("near-linear scaling", scaling),
        ("axiom and derivable-fact soundness", axiom_soundness),
        (
            "fundamental theorem and productive loops",
            fundamental_theorem,
        ),
        ("Kleene round trip", kleene_roundtrip),
        ("normalization", normalization),
        ("relational soundness", relational_soundness),
        ("Hoare checks", hoare_checks),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>())));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({detail}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
