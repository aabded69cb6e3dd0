//! From automata back to expressions: solutions of well-nested coalgebras and
//! left-affine systems.

use std::fmt::Write as _;

use crate::automaton::{thompson, BuildTrace, GAutomaton, Pseudostate, Step, TraceNode};
use crate::boolalg::{atoms_of, ba_equiv, Atom, AtomSet, BExp, TestContext};
use crate::derivatives::{dsum, e_of, grouped_sum};
use crate::equivalence::decide_equiv;
use crate::error::{Error, Result};
use crate::syntax::{pretty, pretty_bexp, Exp, ProgramHeader};

/// An expression for every state, indexed by state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub assignment: Vec<Exp>,
}

impl Solution {
    pub fn get(&self, s: usize) -> &Exp {
        &self.assignment[s]
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }
}

/// `⌊0⌋ = 0`, `⌊1⌋ = 1`, `⌊(p, x)⌋ = p · s(x)`.
pub fn floor(step: Step, s: &[Exp]) -> Exp {
    match step {
        Step::Reject => Exp::fail(),
        Step::Accept => Exp::skip(),
        Step::Move(p, x) => Exp::seq(Exp::Act(p), s[x].clone()),
    }
}

// ⊕ over the atoms of `set`, with atoms sharing a step merged into one branch.
fn grouped_floor_sum(ctx: &TestContext, h: &Pseudostate, set: &AtomSet, s: &[Exp]) -> Exp {
    let mut groups: Vec<(Step, AtomSet)> = Vec::new();
    for alpha in set.iter() {
        let st = h.get(alpha);
        if st == Step::Reject {
            continue;
        }
        match groups.iter_mut().find(|(g, _)| *g == st) {
            Some((_, atoms)) => atoms.insert(alpha),
            None => groups.push((st, AtomSet::from_atoms(set.universe(), [alpha]))),
        }
    }
    grouped_sum(
        ctx,
        groups
            .into_iter()
            .map(|(st, atoms)| (atoms, floor(st, s)))
            .collect(),
    )
}

/// Builds a solution by induction on the well-nestedness derivation `trace`.
/// The derivation is replayed first and must reproduce the transitions of `aut`.
pub fn solve_trace(ctx: &TestContext, aut: &GAutomaton, trace: &BuildTrace) -> Result<Solution> {
    Ok(solve_impl(ctx, aut, trace, false)?.0)
}

/// Like [`solve_trace`], and also checks after every derivation step that the
/// partial solution solves the sub-coalgebra built so far. The flag is true when
/// every such check passed.
pub fn solve_trace_checked(
    ctx: &TestContext,
    aut: &GAutomaton,
    trace: &BuildTrace,
) -> Result<(Solution, bool)> {
    solve_impl(ctx, aut, trace, true)
}

fn solve_impl(
    ctx: &TestContext,
    aut: &GAutomaton,
    trace: &BuildTrace,
    check_steps: bool,
) -> Result<(Solution, bool)> {
    let n_atoms = ctx.atom_count();
    if aut.n_atoms() != n_atoms {
        return Err(Error::ContextMismatch(format!(
            "automaton has {} atoms, context has {n_atoms}",
            aut.n_atoms()
        )));
    }
    let replayed = trace.replay(n_atoms, aut.n_states())?;
    for s in 0..aut.n_states() {
        if replayed.row(s) != aut.row(s) {
            return Err(Error::TraceMismatch(format!(
                "state {s} differs from the row the derivation produces"
            )));
        }
    }

    let mut sol: Vec<Exp> = vec![Exp::fail(); aut.n_states()];
    // transitions of the sub-coalgebra at the current node
    let mut rows: Vec<Vec<Step>> = vec![Vec::new(); aut.n_states()];
    let mut all_ok = true;
    for (r, node) in trace.nodes().iter().enumerate() {
        match node {
            TraceNode::NoTransitions { states, accept } => {
                for (&x, acc) in states.iter().zip(accept) {
                    sol[x] = Exp::assert(ctx.atom_sum(acc.iter()));
                    rows[x] = ctx
                        .atoms()
                        .map(|a| {
                            if acc.contains(a) {
                                Step::Accept
                            } else {
                                Step::Reject
                            }
                        })
                        .collect();
                }
            }
            TraceNode::Continue { left, right: _, h } => {
                let left_states = trace.states(*left);
                let mut in_left = vec![false; aut.n_states()];
                for &y in &left_states {
                    in_left[y] = true;
                }
                let b = AtomSet::from_atoms(
                    n_atoms,
                    ctx.atoms()
                        .filter(|a| matches!(h.get(*a), Step::Move(_, t) if in_left[t])),
                );
                let b_exp = b.to_bexp(ctx);
                // every state still carries its solution from the child derivation here
                let body = grouped_floor_sum(ctx, h, &b, &sol);
                let exit = grouped_floor_sum(ctx, h, &b.complement(), &sol);
                let ell = Exp::seq(Exp::while_(b_exp, body), exit);
                for y in left_states {
                    let prev = std::mem::replace(&mut sol[y], Exp::fail());
                    sol[y] = Exp::seq(prev, ell.clone());
                    for a in ctx.atoms() {
                        if rows[y][a.index()] == Step::Accept {
                            rows[y][a.index()] = h.get(a);
                        }
                    }
                }
            }
        }
        if check_steps && all_ok {
            for x in trace.states(r) {
                let expansion = dsum(
                    ctx,
                    ctx.atoms()
                        .map(|a| (a, floor(rows[x][a.index()], &sol)))
                        .collect(),
                )?;
                if !decide_equiv(ctx, &sol[x], &expansion)?.is_equivalent() {
                    all_ok = false;
                    break;
                }
            }
        }
    }
    Ok((Solution { assignment: sol }, all_ok))
}

/// Checks `s(x) ≡ ⊕_{α ≤ 1} ⌊δ(x)(α)⌋_s` for every state with the decision procedure.
pub fn verify_solution(ctx: &TestContext, aut: &GAutomaton, sol: &Solution) -> Result<bool> {
    if sol.len() != aut.n_states() {
        return Err(Error::ContextMismatch(format!(
            "solution covers {} states, automaton has {}",
            sol.len(),
            aut.n_states()
        )));
    }
    for x in 0..aut.n_states() {
        let expansion = dsum(
            ctx,
            ctx.atoms()
                .map(|a| (a, floor(aut.step(x, a), &sol.assignment)))
                .collect(),
        )?;
        if !decide_equiv(ctx, sol.get(x), &expansion)?.is_equivalent() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `s(ι)` for the sealed Thompson automaton of `e`; equivalent to `e`.
pub fn roundtrip(ctx: &TestContext, e: &Exp) -> Result<Exp> {
    let (aut, trace) = thompson(ctx, e)?.sealed_with_trace();
    let sol = solve_trace(ctx, &aut, &trace)?;
    let iota = aut
        .initial()
        .expect("sealed automata have an initial state");
    Ok(sol
        .assignment
        .into_iter()
        .nth(iota)
        .expect("ι has a solution"))
}

/// One summand `e_ij · x_j` guarded by `b_ij`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemTerm {
    pub target: usize,
    pub guard: BExp,
    pub coeff: Exp,
}

/// Row `x_i = e_i1 x_1 +_{b_i1} … +_{b_in} d_i`; terms with `b_ij ≡ 0` are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemRow {
    pub terms: Vec<SystemTerm>,
    pub constant: BExp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeftAffineSystem {
    pub rows: Vec<SystemRow>,
}

impl LeftAffineSystem {
    /// `b_ij`, which is `0` when no atom moves from `x_i` to `x_j`.
    pub fn guard(&self, i: usize, j: usize) -> BExp {
        self.rows[i]
            .terms
            .iter()
            .find(|t| t.target == j)
            .map_or(BExp::Zero, |t| t.guard.clone())
    }

    /// `e_ij`, which is the empty sum `0` when absent.
    pub fn coeff(&self, i: usize, j: usize) -> Exp {
        self.rows[i]
            .terms
            .iter()
            .find(|t| t.target == j)
            .map_or(Exp::fail(), |t| t.coeff.clone())
    }

    /// Every coefficient satisfies `E(e_ij) ≡ 0`.
    pub fn is_salomaa(&self, ctx: &TestContext) -> Result<bool> {
        for row in &self.rows {
            for t in &row.terms {
                if !ba_equiv(ctx, &e_of(&t.coeff), &BExp::Zero)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Row-wise disjointness of the guards and the constant.
    pub fn is_disjoint(&self, ctx: &TestContext) -> Result<bool> {
        for row in &self.rows {
            let mut seen = atoms_of(ctx, &row.constant)?;
            for t in &row.terms {
                let g = atoms_of(ctx, &t.guard)?;
                if !g.intersection(&seen).is_empty() {
                    return Ok(false);
                }
                seen = seen.union(&g);
            }
        }
        Ok(true)
    }

    /// Text layout `x0 = e x1 +[b] … +[c] d`, one row per line, guards compacted.
    pub fn show(&self, header: &ProgramHeader) -> Result<String> {
        let ctx = header.tests();
        let mut out = String::new();
        for (i, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "x{i} =");
            for t in &row.terms {
                let g = atoms_of(ctx, &t.guard)?.to_bexp(ctx);
                let _ = write!(
                    out,
                    " ({}) x{} +[{}]",
                    pretty(header, &t.coeff),
                    t.target,
                    pretty_bexp(ctx, &g)
                );
            }
            let d = atoms_of(ctx, &row.constant)?.to_bexp(ctx);
            let _ = writeln!(out, " {}", pretty_bexp(ctx, &d));
        }
        Ok(out)
    }
}

/// Reads off `b_ij = Σ{α : δ(x_i)(α) ∈ Σ×{x_j}}`, `d_i = Σ{α : δ(x_i)(α) = 1}` and
/// `e_ij = ⊕ p_α` over those atoms. Also reports whether the system is Salomaa.
pub fn extract_system(ctx: &TestContext, aut: &GAutomaton) -> Result<(LeftAffineSystem, bool)> {
    if aut.n_atoms() != ctx.atom_count() {
        return Err(Error::ContextMismatch(format!(
            "automaton has {} atoms, context has {}",
            aut.n_atoms(),
            ctx.atom_count()
        )));
    }
    let mut rows = Vec::with_capacity(aut.n_states());
    for i in 0..aut.n_states() {
        let mut targets: Vec<usize> = aut
            .row(i)
            .iter()
            .filter_map(|st| match st {
                Step::Move(_, t) => Some(*t),
                _ => None,
            })
            .collect();
        targets.sort_unstable();
        targets.dedup();
        let mut terms = Vec::with_capacity(targets.len());
        for j in targets {
            let atoms: Vec<Atom> = ctx
                .atoms()
                .filter(|a| matches!(aut.step(i, *a), Step::Move(_, t) if t == j))
                .collect();
            let coeff = dsum(
                ctx,
                atoms
                    .iter()
                    .map(|a| match aut.step(i, *a) {
                        Step::Move(p, _) => (*a, Exp::Act(p)),
                        _ => unreachable!(),
                    })
                    .collect(),
            )?;
            terms.push(SystemTerm {
                target: j,
                guard: ctx.atom_sum(atoms),
                coeff,
            });
        }
        let constant = ctx.atom_sum(ctx.atoms().filter(|a| aut.step(i, *a) == Step::Accept));
        rows.push(SystemRow { terms, constant });
    }
    let system = LeftAffineSystem { rows };
    let salomaa = system.is_salomaa(ctx)?;
    debug_assert!(salomaa, "systems read off automata are always Salomaa");
    Ok((system, salomaa))
}
