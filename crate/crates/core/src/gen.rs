//! Seeded random programs and axiom instances for testing, plus the benchmark
//! families.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::boolalg::{BExp, TestContext, TestId};
use crate::derivatives::d_of;
use crate::error::Result;
use crate::syntax::{action_count, ActionId, Exp, ProgramHeader};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenConfig {
    pub n_tests: usize,
    pub n_actions: usize,
    pub depth: usize,
    /// Samples with more actions than this are redrawn.
    pub max_actions: usize,
}

impl GenConfig {
    pub fn new(n_tests: usize, n_actions: usize, depth: usize) -> Self {
        GenConfig {
            n_tests,
            n_actions,
            depth,
            max_actions: usize::MAX,
        }
    }

    pub fn with_max_actions(mut self, cap: usize) -> Self {
        self.max_actions = cap;
        self
    }

    /// Tests `t1..` and actions `p1..`.
    pub fn header(&self) -> ProgramHeader {
        let tests: Vec<String> = (1..=self.n_tests).map(|i| format!("t{i}")).collect();
        let actions: Vec<String> = (1..=self.n_actions).map(|i| format!("p{i}")).collect();
        ProgramHeader::new(
            TestContext::new(&tests).expect("generated test names"),
            actions,
        )
        .expect("generated names are distinct")
    }
}

pub fn random_bexp<R: Rng>(rng: &mut R, n_tests: usize, depth: usize) -> BExp {
    if depth == 0 || rng.gen_bool(0.3) {
        return if n_tests > 0 && rng.gen_bool(0.75) {
            BExp::Test(TestId(rng.gen_range(0..n_tests) as u32))
        } else if rng.gen_bool(0.5) {
            BExp::One
        } else {
            BExp::Zero
        };
    }
    match rng.gen_range(0..3) {
        0 => BExp::not(random_bexp(rng, n_tests, depth - 1)),
        1 => BExp::and(
            random_bexp(rng, n_tests, depth - 1),
            random_bexp(rng, n_tests, depth - 1),
        ),
        _ => BExp::or(
            random_bexp(rng, n_tests, depth - 1),
            random_bexp(rng, n_tests, depth - 1),
        ),
    }
}

fn random_exp_raw<R: Rng>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Exp {
    if depth == 0 || rng.gen_bool(0.2) {
        return if cfg.n_actions > 0 && rng.gen_bool(0.65) {
            Exp::Act(ActionId(rng.gen_range(0..cfg.n_actions) as u32))
        } else {
            Exp::assert(random_bexp(rng, cfg.n_tests, 2))
        };
    }
    match rng.gen_range(0..10) {
        0..=3 => Exp::seq(
            random_exp_raw(rng, cfg, depth - 1),
            random_exp_raw(rng, cfg, depth - 1),
        ),
        4..=6 => Exp::if_(
            random_bexp(rng, cfg.n_tests, 2),
            random_exp_raw(rng, cfg, depth - 1),
            random_exp_raw(rng, cfg, depth - 1),
        ),
        _ => Exp::while_(
            random_bexp(rng, cfg.n_tests, 2),
            random_exp_raw(rng, cfg, depth - 1),
        ),
    }
}

/// A random expression of depth at most `cfg.depth` with at most `cfg.max_actions` actions.
pub fn random_exp<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Exp {
    loop {
        let e = random_exp_raw(rng, cfg, cfg.depth);
        if action_count(&e) <= cfg.max_actions {
            return e;
        }
    }
}

/// Axiom schemas and derivable facts, each instantiated as a pair of sides.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Law {
    U1,
    U2,
    U3,
    U4,
    U5,
    S1,
    S2,
    S3,
    S4,
    S5,
    W1,
    W2,
    /// Conclusion of the fixpoint rule for a productive body.
    W3,
    U3Dual,
    U4Dual,
    U5Dual,
    U6,
    U7,
    U8,
    W4,
    W4Dual,
    W5,
    W6,
    W6Bool,
    W7,
}

impl Law {
    pub const AXIOMS: [Law; 13] = [
        Law::U1,
        Law::U2,
        Law::U3,
        Law::U4,
        Law::U5,
        Law::S1,
        Law::S2,
        Law::S3,
        Law::S4,
        Law::S5,
        Law::W1,
        Law::W2,
        Law::W3,
    ];

    pub const FACTS: [Law; 12] = [
        Law::U3Dual,
        Law::U4Dual,
        Law::U5Dual,
        Law::U6,
        Law::U7,
        Law::U8,
        Law::W4,
        Law::W4Dual,
        Law::W5,
        Law::W6,
        Law::W6Bool,
        Law::W7,
    ];

    pub fn label(self) -> &'static str {
        match self {
            Law::U1 => "U1",
            Law::U2 => "U2",
            Law::U3 => "U3",
            Law::U4 => "U4",
            Law::U5 => "U5",
            Law::S1 => "S1",
            Law::S2 => "S2",
            Law::S3 => "S3",
            Law::S4 => "S4",
            Law::S5 => "S5",
            Law::W1 => "W1",
            Law::W2 => "W2",
            Law::W3 => "W3",
            Law::U3Dual => "U3'",
            Law::U4Dual => "U4'",
            Law::U5Dual => "U5'",
            Law::U6 => "U6",
            Law::U7 => "U7",
            Law::U8 => "U8",
            Law::W4 => "W4",
            Law::W4Dual => "W4'",
            Law::W5 => "W5",
            Law::W6 => "W6",
            Law::W6Bool => "W6'",
            Law::W7 => "W7",
        }
    }

    /// Both sides of a random instance. Subterms are drawn from `cfg`.
    pub fn instantiate<R: Rng>(
        self,
        rng: &mut R,
        ctx: &TestContext,
        cfg: &GenConfig,
    ) -> Result<(Exp, Exp)> {
        let sub = GenConfig {
            depth: cfg.depth.saturating_sub(1).max(1),
            ..*cfg
        };
        let mut e = || random_exp(rng, &sub);
        let (e1, f1, g1) = (e(), e(), e());
        let b = random_bexp(rng, cfg.n_tests, 2);
        let c = random_bexp(rng, cfg.n_tests, 2);
        let a = Exp::assert;
        let (seq, if_, wh, not, and, or) = (
            Exp::seq,
            Exp::if_,
            Exp::while_,
            BExp::not,
            BExp::and,
            BExp::or,
        );
        Ok(match self {
            Law::U1 => (if_(b, e1.clone(), e1.clone()), e1),
            Law::U2 => (if_(b.clone(), e1.clone(), f1.clone()), if_(not(b), f1, e1)),
            Law::U3 => (
                if_(
                    c.clone(),
                    if_(b.clone(), e1.clone(), f1.clone()),
                    g1.clone(),
                ),
                if_(and(b, c.clone()), e1, if_(c, f1, g1)),
            ),
            Law::U4 => (
                if_(b.clone(), e1.clone(), f1.clone()),
                if_(b.clone(), seq(a(b), e1), f1),
            ),
            Law::U5 => (
                if_(
                    b.clone(),
                    seq(e1.clone(), g1.clone()),
                    seq(f1.clone(), g1.clone()),
                ),
                seq(if_(b, e1, f1), g1),
            ),
            Law::S1 => (
                seq(seq(e1.clone(), f1.clone()), g1.clone()),
                seq(e1, seq(f1, g1)),
            ),
            Law::S2 => (seq(Exp::fail(), e1), Exp::fail()),
            Law::S3 => (seq(e1, Exp::fail()), Exp::fail()),
            Law::S4 => (seq(Exp::skip(), e1.clone()), e1),
            Law::S5 => (seq(e1.clone(), Exp::skip()), e1),
            Law::W1 => (
                wh(b.clone(), e1.clone()),
                if_(b.clone(), seq(e1.clone(), wh(b, e1)), Exp::skip()),
            ),
            Law::W2 => (
                wh(b.clone(), if_(c.clone(), e1.clone(), Exp::skip())),
                wh(b, seq(a(c), e1)),
            ),
            Law::W3 => {
                // D(e) is productive, so the side condition E(D(e)) ≡ 0 holds
                let body = d_of(ctx, &e1)?;
                (
                    seq(wh(b.clone(), body.clone()), f1.clone()),
                    if_(
                        b.clone(),
                        seq(body.clone(), seq(wh(b, body), f1.clone())),
                        f1,
                    ),
                )
            }
            Law::U3Dual => (
                if_(
                    b.clone(),
                    e1.clone(),
                    if_(c.clone(), f1.clone(), g1.clone()),
                ),
                if_(or(b.clone(), c), if_(b, e1, f1), g1),
            ),
            Law::U4Dual => (
                if_(b.clone(), e1.clone(), f1.clone()),
                if_(b.clone(), e1, seq(a(not(b)), f1)),
            ),
            Law::U5Dual => (
                seq(a(b.clone()), if_(c.clone(), e1.clone(), f1.clone())),
                if_(c, seq(a(b.clone()), e1), seq(a(b), f1)),
            ),
            Law::U6 => (if_(b.clone(), e1.clone(), Exp::fail()), seq(a(b), e1)),
            Law::U7 => (if_(BExp::Zero, e1, f1.clone()), f1),
            Law::U8 => (
                seq(a(b.clone()), if_(b.clone(), e1.clone(), f1)),
                seq(a(b), e1),
            ),
            Law::W4 => (wh(b.clone(), e1.clone()), seq(wh(b.clone(), e1), a(not(b)))),
            Law::W4Dual => (wh(b.clone(), e1.clone()), wh(b.clone(), seq(a(b), e1))),
            Law::W5 => (wh(BExp::Zero, e1), Exp::skip()),
            Law::W6 => (wh(BExp::One, e1), Exp::fail()),
            Law::W6Bool => (wh(c.clone(), a(b)), a(not(c))),
            Law::W7 => (
                wh(c.clone(), e1.clone()),
                seq(wh(and(b, c.clone()), e1.clone()), wh(c, e1)),
            ),
        })
    }
}

fn node_count(e: &Exp) -> usize {
    match e {
        Exp::Act(_) | Exp::Assert(_) => 1,
        Exp::Seq(e, f) | Exp::If(_, e, f) => 1 + node_count(e) + node_count(f),
        Exp::While(_, e) => 1 + node_count(e),
    }
}

// Equivalent variants of a guard, by double negation and De Morgan.
fn rewrite_guard<R: Rng>(rng: &mut R, b: &BExp) -> BExp {
    match b {
        BExp::Not(inner) if matches!(**inner, BExp::Not(_)) && rng.gen_bool(0.5) => {
            match &**inner {
                BExp::Not(x) => (**x).clone(),
                _ => unreachable!(),
            }
        }
        BExp::And(l, r) if rng.gen_bool(0.5) => {
            BExp::not(BExp::or(BExp::not((**l).clone()), BExp::not((**r).clone())))
        }
        BExp::Or(l, r) if rng.gen_bool(0.5) => BExp::not(BExp::and(
            BExp::not((**l).clone()),
            BExp::not((**r).clone()),
        )),
        _ => BExp::not(BExp::not(b.clone())),
    }
}

// Every sound single-step rewrite at the root of `e`, in both directions where a
// pattern matches. Rules that introduce subterms draw them from `cfg`.
fn root_rewrites<R: Rng>(rng: &mut R, cfg: &GenConfig, e: &Exp) -> Vec<Exp> {
    let small = GenConfig { depth: 1, ..*cfg };
    let mut out = vec![
        // S4, S5, U1 introductions
        Exp::seq(Exp::skip(), e.clone()),
        Exp::seq(e.clone(), Exp::skip()),
        Exp::if_(random_bexp(rng, cfg.n_tests, 1), e.clone(), e.clone()),
    ];
    match e {
        Exp::Assert(b) => {
            out.push(Exp::assert(rewrite_guard(rng, b)));
            if *b == BExp::Zero {
                out.push(Exp::seq(Exp::fail(), random_exp(rng, &small)));
                out.push(Exp::seq(random_exp(rng, &small), Exp::fail()));
            }
        }
        Exp::Act(_) => {}
        Exp::Seq(l, r) => {
            if let Exp::Seq(a, b) = &**l {
                out.push(Exp::seq(
                    (**a).clone(),
                    Exp::seq((**b).clone(), (**r).clone()),
                ));
            }
            if let Exp::Seq(a, b) = &**r {
                out.push(Exp::seq(
                    Exp::seq((**l).clone(), (**a).clone()),
                    (**b).clone(),
                ));
            }
            if **l == Exp::skip() {
                out.push((**r).clone());
            }
            if **r == Exp::skip() {
                out.push((**l).clone());
            }
            if **l == Exp::fail() || **r == Exp::fail() {
                out.push(Exp::fail());
            }
            if let Exp::If(b, x, y) = &**l {
                out.push(Exp::if_(
                    b.clone(),
                    Exp::seq((**x).clone(), (**r).clone()),
                    Exp::seq((**y).clone(), (**r).clone()),
                ));
            }
        }
        Exp::If(b, x, y) => {
            out.push(Exp::if_(BExp::not(b.clone()), (**y).clone(), (**x).clone()));
            out.push(Exp::if_(
                rewrite_guard(rng, b),
                (**x).clone(),
                (**y).clone(),
            ));
            out.push(Exp::if_(
                b.clone(),
                Exp::seq(Exp::assert(b.clone()), (**x).clone()),
                (**y).clone(),
            ));
            if x == y {
                out.push((**x).clone());
            }
            if let (Exp::Seq(x1, x2), Exp::Seq(y1, y2)) = (&**x, &**y) {
                if x2 == y2 {
                    out.push(Exp::seq(
                        Exp::if_(b.clone(), (**x1).clone(), (**y1).clone()),
                        (**x2).clone(),
                    ));
                }
            }
            if let Exp::Seq(g, x1) = &**x {
                if **g == Exp::assert(b.clone()) {
                    out.push(Exp::if_(b.clone(), (**x1).clone(), (**y).clone()));
                }
            }
            if let Exp::If(c, x1, x2) = &**x {
                // (e +_c f) +_b g  →  e +_{cb} (f +_b g)
                out.push(Exp::if_(
                    BExp::and(c.clone(), b.clone()),
                    (**x1).clone(),
                    Exp::if_(b.clone(), (**x2).clone(), (**y).clone()),
                ));
            }
            if let (BExp::And(c, b2), Exp::If(b3, y1, y2)) = (b, &**y) {
                if **b2 == *b3 {
                    out.push(Exp::if_(
                        (**b2).clone(),
                        Exp::if_((**c).clone(), (**x).clone(), (**y1).clone()),
                        (**y2).clone(),
                    ));
                }
            }
        }
        Exp::While(b, body) => {
            out.push(Exp::if_(
                b.clone(),
                Exp::seq((**body).clone(), e.clone()),
                Exp::skip(),
            ));
            out.push(Exp::while_(rewrite_guard(rng, b), (**body).clone()));
            if let Exp::If(c, x, y) = &**body {
                if **y == Exp::skip() {
                    out.push(Exp::while_(
                        b.clone(),
                        Exp::seq(Exp::assert(c.clone()), (**x).clone()),
                    ));
                }
            }
            if let Exp::Seq(g, x) = &**body {
                if let Exp::Assert(c) = &**g {
                    out.push(Exp::while_(
                        b.clone(),
                        Exp::if_(c.clone(), (**x).clone(), Exp::skip()),
                    ));
                }
            }
        }
    }
    out
}

fn rewrite_at<R: Rng>(rng: &mut R, cfg: &GenConfig, e: &Exp, mut pos: usize) -> Exp {
    if pos == 0 {
        let options = root_rewrites(rng, cfg, e);
        return options
            .choose(rng)
            .expect("introductions always apply")
            .clone();
    }
    pos -= 1;
    match e {
        Exp::Act(_) | Exp::Assert(_) => unreachable!("position past a leaf"),
        Exp::Seq(l, r) => {
            let n = node_count(l);
            if pos < n {
                Exp::seq(rewrite_at(rng, cfg, l, pos), (**r).clone())
            } else {
                Exp::seq((**l).clone(), rewrite_at(rng, cfg, r, pos - n))
            }
        }
        Exp::If(b, l, r) => {
            let n = node_count(l);
            if pos < n {
                Exp::if_(b.clone(), rewrite_at(rng, cfg, l, pos), (**r).clone())
            } else {
                Exp::if_(b.clone(), (**l).clone(), rewrite_at(rng, cfg, r, pos - n))
            }
        }
        Exp::While(b, body) => Exp::while_(b.clone(), rewrite_at(rng, cfg, body, pos)),
    }
}

/// Applies `steps` random axiom rewrites, each at a uniformly chosen subterm.
pub fn rewrite<R: Rng>(rng: &mut R, cfg: &GenConfig, e: &Exp, steps: usize) -> Exp {
    let mut cur = e.clone();
    for _ in 0..steps {
        let pos = rng.gen_range(0..node_count(&cur));
        cur = rewrite_at(rng, cfg, &cur, pos);
    }
    cur
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Frame {
    SeqLeft(Exp),
    SeqRight(Exp),
    IfLeft(BExp, Exp),
    IfRight(BExp, Exp),
    While(BExp),
}

/// An expression with one hole; frames run from the hole outward.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Context {
    frames: Vec<Frame>,
}

impl Context {
    pub fn hole() -> Self {
        Context::default()
    }

    pub fn depth(&self) -> usize {
        self.frames.len()
    }

    pub fn plug(&self, e: Exp) -> Exp {
        self.frames.iter().fold(e, |acc, fr| match fr {
            Frame::SeqLeft(f) => Exp::seq(acc, f.clone()),
            Frame::SeqRight(f) => Exp::seq(f.clone(), acc),
            Frame::IfLeft(b, f) => Exp::if_(b.clone(), acc, f.clone()),
            Frame::IfRight(b, f) => Exp::if_(b.clone(), f.clone(), acc),
            Frame::While(b) => Exp::while_(b.clone(), acc),
        })
    }
}

pub fn random_context<R: Rng>(rng: &mut R, cfg: &GenConfig, depth: usize) -> Context {
    let sub = GenConfig { depth: 2, ..*cfg };
    let frames = (0..depth)
        .map(|_| match rng.gen_range(0..5) {
            0 => Frame::SeqLeft(random_exp(rng, &sub)),
            1 => Frame::SeqRight(random_exp(rng, &sub)),
            2 => Frame::IfLeft(random_bexp(rng, cfg.n_tests, 2), random_exp(rng, &sub)),
            3 => Frame::IfRight(random_bexp(rng, cfg.n_tests, 2), random_exp(rng, &sub)),
            _ => Frame::While(random_bexp(rng, cfg.n_tests, 2)),
        })
        .collect();
    Context { frames }
}

/// `p1; (p2; (…; pn))` against `((p1; p2); …); pn`, over two tests.
pub fn seq_family(n: usize) -> (ProgramHeader, Exp, Exp) {
    let header = GenConfig::new(2, n, 0).header();
    let act = |i: usize| Exp::Act(ActionId(i as u32));
    let mut right = act(n - 1);
    for i in (0..n - 1).rev() {
        right = Exp::seq(act(i), right);
    }
    let mut left = act(0);
    for i in 1..n {
        left = Exp::seq(left, act(i));
    }
    (header, right, left)
}

/// `e_n = (p_n; e_{n-1}) +_{t1} q_n` with `e_0 = 1`, against the same program with
/// every branch swapped by skew commutativity. Both sides have `2n` actions.
pub fn nested_family(n: usize) -> (ProgramHeader, Exp, Exp) {
    let header = GenConfig::new(2, 2 * n, 0).header();
    let t = BExp::Test(TestId(0));
    let (mut e, mut f) = (Exp::skip(), Exp::skip());
    for i in 0..n {
        let p = Exp::Act(ActionId(2 * i as u32));
        let q = Exp::Act(ActionId(2 * i as u32 + 1));
        e = Exp::if_(t.clone(), Exp::seq(p.clone(), e), q.clone());
        f = Exp::if_(BExp::not(t.clone()), q, Exp::seq(p, f));
    }
    (header, e, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::decide_equiv;
    use crate::syntax::pretty;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> GenConfig {
        GenConfig::new(2, 3, 4)
    }

    #[test]
    fn generation_is_seeded_and_capped() {
        let c = cfg().with_max_actions(4);
        let a: Vec<Exp> = {
            let mut rng = ChaCha8Rng::seed_from_u64(7);
            (0..20).map(|_| random_exp(&mut rng, &c)).collect()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for e in &a {
            assert_eq!(e, &random_exp(&mut rng, &c));
            assert!(action_count(e) <= 4);
            assert!(e.depth() <= 5);
        }
    }

    #[test]
    fn every_law_instance_holds() {
        let c = cfg();
        let h = c.header();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for law in Law::AXIOMS.into_iter().chain(Law::FACTS) {
            for _ in 0..5 {
                let (l, r) = law.instantiate(&mut rng, h.tests(), &c).unwrap();
                assert!(
                    decide_equiv(h.tests(), &l, &r).unwrap().is_equivalent(),
                    "{}: {} vs {}",
                    law.label(),
                    pretty(&h, &l),
                    pretty(&h, &r)
                );
            }
        }
    }

    #[test]
    fn rewriting_preserves_meaning() {
        let c = cfg();
        let h = c.header();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..40 {
            let e = random_exp(&mut rng, &c);
            let f = rewrite(&mut rng, &c, &e, 4);
            assert!(decide_equiv(h.tests(), &e, &f).unwrap().is_equivalent());
        }
    }

    #[test]
    fn contexts_plug() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ctx = random_context(&mut rng, &cfg(), 3);
        assert_eq!(ctx.depth(), 3);
        assert_eq!(Context::hole().plug(Exp::skip()), Exp::skip());
        assert!(ctx.plug(Exp::skip()).depth() >= 3);
    }

    #[test]
    fn families() {
        let (h, e, f) = seq_family(5);
        assert_eq!((action_count(&e), action_count(&f)), (5, 5));
        assert!(decide_equiv(h.tests(), &e, &f).unwrap().is_equivalent());
        let (h, e, f) = nested_family(4);
        assert_eq!(action_count(&e), 8);
        assert!(decide_equiv(h.tests(), &e, &f).unwrap().is_equivalent());
    }
}
