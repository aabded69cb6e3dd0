//! Bisimilarity via union-find, the equivalence decision procedure, and Hoare triples.

use std::collections::VecDeque;

use crate::analysis::{is_normal, normalize};
use crate::automaton::{thompson_automaton, GAutomaton, Step};
use crate::boolalg::{Atom, BExp, TestContext};
use crate::error::Result;
use crate::guarded_lang::GuardedString;
use crate::syntax::{ActionId, Exp};

/// Disjoint-set forest with union by rank and path compression.
#[derive(Debug, Clone)]
pub struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    /// Merges the classes of `a` and `b`; returns the new root.
    pub fn union(&mut self, a: usize, b: usize) -> usize {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return ra;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => {
                self.parent[ra] = rb;
                rb
            }
            std::cmp::Ordering::Greater => {
                self.parent[rb] = ra;
                ra
            }
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
                ra
            }
        }
    }
}

/// Outcome of an equivalence check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Equivalent,
    /// `witness` is accepted by exactly one side; `in_left` says which.
    Inequivalent {
        witness: GuardedString,
        in_left: bool,
    },
}

impl Verdict {
    pub fn is_equivalent(&self) -> bool {
        matches!(self, Verdict::Equivalent)
    }

    pub fn witness(&self) -> Option<&GuardedString> {
        match self {
            Verdict::Equivalent => None,
            Verdict::Inequivalent { witness, .. } => Some(witness),
        }
    }
}

struct Pair {
    x: usize,
    y: usize,
    // index of the pair that pushed this one and the edge taken
    parent: Option<(usize, Atom, ActionId)>,
}

/// Bisimilarity of the initial states of two normal automata, by Hopcroft–Karp
/// with a FIFO work queue. On failure, a distinguishing string is rebuilt from
/// the chain of pairs that led to the mismatch.
pub fn bisim_check(x: &GAutomaton, y: &GAutomaton) -> Verdict {
    debug_assert!(
        is_normal(x) && is_normal(y),
        "bisim_check expects normal automata"
    );
    assert_eq!(
        x.n_atoms(),
        y.n_atoms(),
        "automata over different atom sets"
    );
    let (ix, iy) = (
        x.initial().expect("left automaton has an initial state"),
        y.initial().expect("right automaton has an initial state"),
    );
    let n_atoms = x.n_atoms();
    let offset = x.n_states();
    let mut forest = UnionFind::new(x.n_states() + y.n_states());
    let mut pairs = vec![Pair {
        x: ix,
        y: iy,
        parent: None,
    }];
    let mut todo = VecDeque::from([0usize]);
    while let Some(k) = todo.pop_front() {
        let (px, py) = (pairs[k].x, pairs[k].y);
        let (rx, ry) = (forest.find(px), forest.find(py + offset));
        if rx == ry {
            continue;
        }
        for a in 0..n_atoms {
            let alpha = Atom(a as u32);
            match (x.step(px, alpha), y.step(py, alpha)) {
                (Step::Accept, Step::Accept) | (Step::Reject, Step::Reject) => {}
                (Step::Move(p, xn), Step::Move(q, yn)) if p == q => {
                    pairs.push(Pair {
                        x: xn,
                        y: yn,
                        parent: Some((k, alpha, p)),
                    });
                    todo.push_back(pairs.len() - 1);
                }
                (sx, sy) => {
                    let (witness, in_left) = witness(x, y, &pairs, k, alpha, sx, sy);
                    return Verdict::Inequivalent { witness, in_left };
                }
            }
        }
        forest.union(rx, ry);
    }
    Verdict::Equivalent
}

fn witness(
    x: &GAutomaton,
    y: &GAutomaton,
    pairs: &[Pair],
    k: usize,
    alpha: Atom,
    sx: Step,
    sy: Step,
) -> (GuardedString, bool) {
    let mut atoms = Vec::new();
    let mut actions = Vec::new();
    let mut cur = k;
    while let Some((parent, a, p)) = pairs[cur].parent {
        atoms.push(a);
        actions.push(p);
        cur = parent;
    }
    atoms.reverse();
    actions.reverse();
    atoms.push(alpha);
    // extend with a shortest accepted continuation on the side that can go on
    let (tail, in_left) = match (sx, sy) {
        (Step::Accept, _) => (None, true),
        (_, Step::Accept) => (None, false),
        (Step::Move(p, t), _) => (Some((p, shortest_from(x, t))), true),
        (_, Step::Move(q, t)) => (Some((q, shortest_from(y, t))), false),
        _ => unreachable!("equal halting steps are not a mismatch"),
    };
    if let Some((p, (rest_atoms, rest_actions))) = tail {
        actions.push(p);
        atoms.extend(rest_atoms);
        actions.extend(rest_actions);
    }
    (GuardedString::new(atoms, actions), in_left)
}

// Shortest accepted string from a live state, by breadth-first search.
fn shortest_from(aut: &GAutomaton, s: usize) -> (Vec<Atom>, Vec<ActionId>) {
    let n = aut.n_states();
    let mut prev: Vec<Option<(usize, Atom, ActionId)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[s] = true;
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        if let Some(i) = aut.row(u).iter().position(|st| *st == Step::Accept) {
            let mut atoms = vec![Atom(i as u32)];
            let mut actions = Vec::new();
            let mut cur = u;
            while let Some((from, a, p)) = prev[cur] {
                atoms.push(a);
                actions.push(p);
                cur = from;
            }
            atoms.reverse();
            actions.reverse();
            return (atoms, actions);
        }
        for (i, st) in aut.row(u).iter().enumerate() {
            if let Step::Move(p, t) = *st {
                if !seen[t] {
                    seen[t] = true;
                    prev[t] = Some((u, Atom(i as u32), p));
                    queue.push_back(t);
                }
            }
        }
    }
    panic!("state {s} is dead; automata passed to bisim_check must be normal");
}

/// Builds, normalizes, and compares the Thompson automata of `e` and `f`.
pub fn decide_equiv(ctx: &TestContext, e: &Exp, f: &Exp) -> Result<Verdict> {
    let x = normalize(&thompson_automaton(ctx, e)?);
    let y = normalize(&thompson_automaton(ctx, f)?);
    Ok(bisim_check(&x, &y))
}

/// Validity of `{b} e {c}`, i.e. `b·e·c ≡ b·e`.
pub fn hoare_valid(ctx: &TestContext, b: &BExp, e: &Exp, c: &BExp) -> Result<bool> {
    let lhs = Exp::seq(
        Exp::assert(b.clone()),
        Exp::seq(e.clone(), Exp::assert(c.clone())),
    );
    let rhs = Exp::seq(Exp::assert(b.clone()), e.clone());
    Ok(decide_equiv(ctx, &lhs, &rhs)?.is_equivalent())
}
