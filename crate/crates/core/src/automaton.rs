//! G-automata, their combinators, and the linear-size Thompson construction.
//!
//! Transition tables are dense: one [`Step`] per state and atom. A coalgebra is a
//! [`GAutomaton`] without an initial state; sealing appends the initial
//! pseudostate as a proper state with the highest index.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::boolalg::{atoms_of, Atom, AtomSet, TestContext};
use crate::error::{Error, Result};
use crate::guarded_lang::{BoundedLang, Cell, GuardedString, LangArena, LangId};
use crate::syntax::{pretty_bexp, ActionId, Exp, ProgramHeader};

/// One transition-table entry: reject (`0`), accept (`1`), or act and move.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Step {
    Reject,
    Accept,
    Move(ActionId, usize),
}

/// A row `h ∈ GX`, indexed by atom.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pseudostate(pub Vec<Step>);

impl Pseudostate {
    /// The pseudostate `1` that accepts on every atom.
    pub fn all_accept(n_atoms: usize) -> Self {
        Pseudostate(vec![Step::Accept; n_atoms])
    }

    pub fn all_reject(n_atoms: usize) -> Self {
        Pseudostate(vec![Step::Reject; n_atoms])
    }

    pub fn get(&self, alpha: Atom) -> Step {
        self.0[alpha.index()]
    }

    pub fn n_atoms(&self) -> usize {
        self.0.len()
    }

    /// Atoms mapped to `Accept`.
    pub fn accepting(&self) -> AtomSet {
        AtomSet::from_atoms(
            self.0.len(),
            self.0
                .iter()
                .enumerate()
                .filter(|(_, s)| **s == Step::Accept)
                .map(|(i, _)| Atom(i as u32)),
        )
    }
}

/// A finite G-coalgebra with an optional designated initial state.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GAutomaton {
    n_atoms: usize,
    n_states: usize,
    delta: Vec<Step>,
    initial: Option<usize>,
}

impl GAutomaton {
    /// The coalgebra with no states.
    pub fn empty(n_atoms: usize) -> Self {
        GAutomaton {
            n_atoms,
            n_states: 0,
            delta: Vec::new(),
            initial: None,
        }
    }

    /// Builds an automaton from rows, checking row lengths and move targets.
    pub fn from_rows(n_atoms: usize, rows: Vec<Vec<Step>>, initial: Option<usize>) -> Result<Self> {
        let n_states = rows.len();
        let mut delta = Vec::with_capacity(n_states * n_atoms);
        for (s, row) in rows.into_iter().enumerate() {
            if row.len() != n_atoms {
                return Err(Error::InvalidAutomaton(format!(
                    "state {s} has {} entries, expected {n_atoms}",
                    row.len()
                )));
            }
            delta.extend(row);
        }
        let aut = GAutomaton {
            n_atoms,
            n_states,
            delta,
            initial,
        };
        aut.validate()?;
        Ok(aut)
    }

    fn validate(&self) -> Result<()> {
        if let Some(i) = self.initial {
            if i >= self.n_states {
                return Err(Error::StateOutOfRange {
                    index: i,
                    n_states: self.n_states,
                });
            }
        }
        for step in &self.delta {
            if let Step::Move(_, t) = step {
                if *t >= self.n_states {
                    return Err(Error::StateOutOfRange {
                        index: *t,
                        n_states: self.n_states,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n_states(&self) -> usize {
        self.n_states
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn initial(&self) -> Option<usize> {
        self.initial
    }

    /// The same transition structure with a different (or no) initial state.
    pub fn with_initial(mut self, initial: Option<usize>) -> Result<Self> {
        self.initial = initial;
        self.validate()?;
        Ok(self)
    }

    pub fn step(&self, s: usize, alpha: Atom) -> Step {
        self.delta[s * self.n_atoms + alpha.index()]
    }

    pub fn row(&self, s: usize) -> &[Step] {
        &self.delta[s * self.n_atoms..(s + 1) * self.n_atoms]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Step]> {
        (0..self.n_states).map(move |s| self.row(s))
    }

    /// Overwrites one entry; the target of a move must already exist.
    pub fn set_step(&mut self, s: usize, alpha: Atom, step: Step) -> Result<()> {
        self.check_state(s)?;
        if let Step::Move(_, t) = step {
            self.check_state(t)?;
        }
        self.delta[s * self.n_atoms + alpha.index()] = step;
        Ok(())
    }

    /// Appends a state; its moves may target itself.
    pub fn push_state(&mut self, row: &[Step]) -> Result<usize> {
        assert_eq!(
            row.len(),
            self.n_atoms,
            "row length must equal the atom count"
        );
        let s = self.n_states;
        for step in row {
            if let Step::Move(_, t) = step {
                if *t > s {
                    return Err(Error::StateOutOfRange {
                        index: *t,
                        n_states: s + 1,
                    });
                }
            }
        }
        self.delta.extend_from_slice(row);
        self.n_states += 1;
        Ok(s)
    }

    pub fn check_state(&self, s: usize) -> Result<()> {
        if s < self.n_states {
            Ok(())
        } else {
            Err(Error::StateOutOfRange {
                index: s,
                n_states: self.n_states,
            })
        }
    }

    /// A state is accepting when some atom maps to `Accept`.
    pub fn is_accepting(&self, s: usize) -> bool {
        self.row(s).contains(&Step::Accept)
    }

    /// Inductive acceptance of `w` from state `s`.
    pub fn accepts(&self, s: usize, w: &GuardedString) -> Result<bool> {
        self.check_state(s)?;
        let mut cur = s;
        for (i, alpha) in w.atoms.iter().enumerate() {
            if alpha.index() >= self.n_atoms {
                return Ok(false);
            }
            match self.step(cur, *alpha) {
                Step::Accept => return Ok(i == w.actions.len()),
                Step::Reject => return Ok(false),
                Step::Move(p, t) => {
                    if i == w.actions.len() || w.actions[i] != p {
                        return Ok(false);
                    }
                    cur = t;
                }
            }
        }
        Ok(false)
    }

    /// Strings with at most `k` actions accepted from `s`.
    pub fn accepted_bounded(&self, s: usize, k: usize) -> Result<BoundedLang> {
        self.check_state(s)?;
        let mut arena = LangArena::new(self.n_atoms);
        let root = self.accepted_into(&mut arena, s, k);
        Ok(BoundedLang::from_parts(arena, root, k))
    }

    /// [`accepted_bounded`](Self::accepted_bounded) for every state at once.
    pub fn accepted_bounded_all(&self, k: usize) -> (LangArena, Vec<LangId>) {
        let mut arena = LangArena::new(self.n_atoms);
        // budget layer by layer: layer j holds every state's language at budget j
        let mut layer: Vec<LangId> = Vec::new();
        for j in 0..=k {
            let next: Vec<LangId> = (0..self.n_states)
                .map(|s| {
                    let row = self
                        .row(s)
                        .iter()
                        .map(|st| match *st {
                            Step::Reject => Cell::Reject,
                            Step::Accept => Cell::Accept,
                            Step::Move(_, _) if j == 0 => Cell::Reject,
                            Step::Move(p, t) => Cell::Move(p, layer[t]),
                        })
                        .collect();
                    arena.node(row)
                })
                .collect();
            layer = next;
        }
        (arena, layer)
    }

    fn accepted_into(&self, arena: &mut LangArena, s: usize, k: usize) -> LangId {
        let mut memo: HashMap<(usize, usize), LangId> = HashMap::new();
        fn go(
            a: &GAutomaton,
            arena: &mut LangArena,
            s: usize,
            k: usize,
            memo: &mut HashMap<(usize, usize), LangId>,
        ) -> LangId {
            if let Some(&id) = memo.get(&(s, k)) {
                return id;
            }
            let row: Vec<Step> = a.row(s).to_vec();
            let cells = row
                .into_iter()
                .map(|st| match st {
                    Step::Reject => Cell::Reject,
                    Step::Accept => Cell::Accept,
                    Step::Move(_, _) if k == 0 => Cell::Reject,
                    Step::Move(p, t) => Cell::Move(p, go(a, arena, t, k - 1, memo)),
                })
                .collect();
            let id = arena.node(cells);
            memo.insert((s, k), id);
            id
        }
        go(self, arena, s, k, &mut memo)
    }
}

/// Index translation produced by [`coproduct`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Injections {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
}

/// Disjoint union: `x` keeps its indices, `y` is shifted by `x.n_states()`.
/// Initial states are dropped.
pub fn coproduct(x: &GAutomaton, y: &GAutomaton) -> (GAutomaton, Injections) {
    assert_eq!(x.n_atoms, y.n_atoms, "coalgebras over different atom sets");
    let shift = x.n_states;
    let mut delta = x.delta.clone();
    delta.extend(y.delta.iter().map(|st| match *st {
        Step::Move(p, t) => Step::Move(p, t + shift),
        other => other,
    }));
    let aut = GAutomaton {
        n_atoms: x.n_atoms,
        n_states: x.n_states + y.n_states,
        delta,
        initial: None,
    };
    let inj = Injections {
        left: (0..x.n_states).collect(),
        right: (shift..shift + y.n_states).collect(),
    };
    (aut, inj)
}

/// `X[Y, h]`: every `Accept` entry of a state in `y_set` is replaced by `h` at that atom.
pub fn uniform_continuation(
    x: &GAutomaton,
    y_set: &[usize],
    h: &Pseudostate,
) -> Result<GAutomaton> {
    if h.n_atoms() != x.n_atoms {
        return Err(Error::InvalidAutomaton(format!(
            "pseudostate has {} entries, expected {}",
            h.n_atoms(),
            x.n_atoms
        )));
    }
    for &s in y_set {
        x.check_state(s)?;
    }
    for st in &h.0 {
        if let Step::Move(_, t) = st {
            x.check_state(*t)?;
        }
    }
    let mut out = x.clone();
    for &s in y_set {
        for (i, st) in h.0.iter().enumerate() {
            let idx = s * x.n_atoms + i;
            if out.delta[idx] == Step::Accept {
                out.delta[idx] = *st;
            }
        }
    }
    Ok(out)
}

/// Adds the initial pseudostate as a new state with the highest index.
pub fn seal_initial(coalgebra: &GAutomaton, iota: &Pseudostate) -> Result<GAutomaton> {
    let mut aut = coalgebra.clone();
    aut.initial = None;
    let s = aut.push_state(&iota.0)?;
    aut.initial = Some(s);
    Ok(aut)
}

/// Index of a node in a [`BuildTrace`].
pub type TraceRef = usize;

/// One rule application in a well-nestedness derivation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceNode {
    /// A coalgebra without transitions; `accept[i]` is the accepting set of `states[i]`.
    NoTransitions {
        states: Vec<usize>,
        accept: Vec<AtomSet>,
    },
    /// `(left + right)[left, h]`.
    Continue {
        left: TraceRef,
        right: TraceRef,
        h: Pseudostate,
    },
}

/// A well-nestedness derivation over global state indices. Children precede parents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuildTrace {
    nodes: Vec<TraceNode>,
    root: TraceRef,
}

impl BuildTrace {
    pub fn new(nodes: Vec<TraceNode>, root: TraceRef) -> Result<Self> {
        for (i, n) in nodes.iter().enumerate() {
            if let TraceNode::Continue { left, right, .. } = n {
                if *left >= i || *right >= i {
                    return Err(Error::TraceMismatch(format!(
                        "node {i} refers to a node that does not precede it"
                    )));
                }
            }
        }
        if root >= nodes.len() {
            return Err(Error::TraceMismatch("root out of range".into()));
        }
        Ok(BuildTrace { nodes, root })
    }

    pub fn nodes(&self) -> &[TraceNode] {
        &self.nodes
    }

    pub fn root(&self) -> TraceRef {
        self.root
    }

    pub fn node(&self, r: TraceRef) -> &TraceNode {
        &self.nodes[r]
    }

    /// States covered by node `r`, in left-to-right order.
    pub fn states(&self, r: TraceRef) -> Vec<usize> {
        let mut out = Vec::new();
        let mut stack = vec![r];
        while let Some(n) = stack.pop() {
            match &self.nodes[n] {
                TraceNode::NoTransitions { states, .. } => out.extend(states),
                TraceNode::Continue { left, right, .. } => {
                    stack.push(*right);
                    stack.push(*left);
                }
            }
        }
        out
    }

    /// Recomputes the transition table that the derivation describes.
    pub fn replay(&self, n_atoms: usize, n_states: usize) -> Result<GAutomaton> {
        let mut rows: Vec<Option<Vec<Step>>> = vec![None; n_states];
        for (i, node) in self.nodes.iter().enumerate() {
            match node {
                TraceNode::NoTransitions { states, accept } => {
                    if states.len() != accept.len() {
                        return Err(Error::TraceMismatch(format!(
                            "node {i}: {} states but {} rows",
                            states.len(),
                            accept.len()
                        )));
                    }
                    for (&s, acc) in states.iter().zip(accept) {
                        if s >= n_states {
                            return Err(Error::TraceMismatch(format!(
                                "node {i}: state {s} out of range"
                            )));
                        }
                        if rows[s].is_some() {
                            return Err(Error::TraceMismatch(format!(
                                "state {s} introduced twice"
                            )));
                        }
                        if acc.universe() != n_atoms {
                            return Err(Error::TraceMismatch(format!(
                                "node {i}: row over wrong atom set"
                            )));
                        }
                        rows[s] = Some(
                            (0..n_atoms)
                                .map(|a| {
                                    if acc.contains(Atom(a as u32)) {
                                        Step::Accept
                                    } else {
                                        Step::Reject
                                    }
                                })
                                .collect(),
                        );
                    }
                }
                TraceNode::Continue { left, h, right } => {
                    if h.n_atoms() != n_atoms {
                        return Err(Error::TraceMismatch(format!(
                            "node {i}: pseudostate over wrong atom set"
                        )));
                    }
                    let scope: std::collections::HashSet<usize> = self
                        .states(*left)
                        .into_iter()
                        .chain(self.states(*right))
                        .collect();
                    for st in &h.0 {
                        if let Step::Move(_, t) = st {
                            if !scope.contains(t) {
                                return Err(Error::TraceMismatch(format!(
                                    "node {i}: pseudostate moves to state {t} outside its scope"
                                )));
                            }
                        }
                    }
                    for s in self.states(*left) {
                        let row = rows[s].as_mut().expect("children are replayed first");
                        for (cell, hs) in row.iter_mut().zip(&h.0) {
                            if *cell == Step::Accept {
                                *cell = *hs;
                            }
                        }
                    }
                }
            }
        }
        let covered = self.states(self.root);
        if covered.len() != n_states {
            return Err(Error::TraceMismatch(format!(
                "derivation covers {} states, coalgebra has {n_states}",
                covered.len()
            )));
        }
        let rows = rows
            .into_iter()
            .enumerate()
            .map(|(s, r)| {
                r.ok_or_else(|| Error::TraceMismatch(format!("state {s} never introduced")))
            })
            .collect::<Result<Vec<_>>>()?;
        GAutomaton::from_rows(n_atoms, rows, None)
    }
}

/// Output of the Thompson construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Thompson {
    pub coalgebra: GAutomaton,
    pub iota: Pseudostate,
    pub trace: BuildTrace,
}

impl Thompson {
    /// The automaton with `ι` as its last state.
    pub fn sealed(&self) -> GAutomaton {
        seal_initial(&self.coalgebra, &self.iota).expect("ι only targets existing states")
    }

    /// The automaton together with the derivation `(I + X_e)[{ι}, ι_e]`.
    pub fn sealed_with_trace(&self) -> (GAutomaton, BuildTrace) {
        let aut = self.sealed();
        let n_atoms = aut.n_atoms();
        let iota_state = aut.n_states() - 1;
        let mut nodes = self.trace.nodes.clone();
        nodes.push(TraceNode::NoTransitions {
            states: vec![iota_state],
            accept: vec![AtomSet::full(n_atoms)],
        });
        let left = nodes.len() - 1;
        nodes.push(TraceNode::Continue {
            left,
            right: self.trace.root,
            h: self.iota.clone(),
        });
        let root = nodes.len() - 1;
        (aut, BuildTrace { nodes, root })
    }
}

struct Fragment {
    iota: Vec<Step>,
    // accepting entries (state, atom) of the fragment's own states
    exits: Vec<(usize, u32)>,
    trace: TraceRef,
}

struct Builder<'c> {
    ctx: &'c TestContext,
    n_atoms: usize,
    delta: Vec<Step>,
    n_states: usize,
    nodes: Vec<TraceNode>,
}

impl Builder<'_> {
    fn leaf(&mut self, states: Vec<usize>, accept: Vec<AtomSet>) -> TraceRef {
        self.nodes.push(TraceNode::NoTransitions { states, accept });
        self.nodes.len() - 1
    }

    fn cont(&mut self, left: TraceRef, right: TraceRef, h: Vec<Step>) -> TraceRef {
        self.nodes.push(TraceNode::Continue {
            left,
            right,
            h: Pseudostate(h),
        });
        self.nodes.len() - 1
    }

    fn continue_exits(
        &mut self,
        exits: Vec<(usize, u32)>,
        h: &[Step],
        keep: &mut Vec<(usize, u32)>,
    ) {
        for (s, a) in exits {
            let st = h[a as usize];
            self.delta[s * self.n_atoms + a as usize] = st;
            if st == Step::Accept {
                keep.push((s, a));
            }
        }
    }

    fn build(&mut self, e: &Exp) -> Result<Fragment> {
        match e {
            Exp::Assert(b) => {
                let set = atoms_of(self.ctx, b)?;
                let iota = (0..self.n_atoms)
                    .map(|a| {
                        if set.contains(Atom(a as u32)) {
                            Step::Accept
                        } else {
                            Step::Reject
                        }
                    })
                    .collect();
                let trace = self.leaf(Vec::new(), Vec::new());
                Ok(Fragment {
                    iota,
                    exits: Vec::new(),
                    trace,
                })
            }
            Exp::Act(p) => {
                let s = self.n_states;
                self.n_states += 1;
                self.delta
                    .extend(std::iter::repeat_n(Step::Accept, self.n_atoms));
                let trace = self.leaf(vec![s], vec![AtomSet::full(self.n_atoms)]);
                Ok(Fragment {
                    iota: vec![Step::Move(*p, s); self.n_atoms],
                    exits: (0..self.n_atoms as u32).map(|a| (s, a)).collect(),
                    trace,
                })
            }
            Exp::If(b, f, g) => {
                let set = atoms_of(self.ctx, b)?;
                let ff = self.build(f)?;
                let fg = self.build(g)?;
                let iota = (0..self.n_atoms)
                    .map(|a| {
                        if set.contains(Atom(a as u32)) {
                            ff.iota[a]
                        } else {
                            fg.iota[a]
                        }
                    })
                    .collect();
                let trace = self.cont(ff.trace, fg.trace, vec![Step::Accept; self.n_atoms]);
                let (mut big, small) = if ff.exits.len() >= fg.exits.len() {
                    (ff.exits, fg.exits)
                } else {
                    (fg.exits, ff.exits)
                };
                big.extend(small);
                Ok(Fragment {
                    iota,
                    exits: big,
                    trace,
                })
            }
            Exp::Seq(f, g) => {
                let ff = self.build(f)?;
                let fg = self.build(g)?;
                let mut exits = fg.exits;
                self.continue_exits(ff.exits, &fg.iota, &mut exits);
                let iota = ff
                    .iota
                    .iter()
                    .zip(&fg.iota)
                    .map(|(a, b)| if *a == Step::Accept { *b } else { *a })
                    .collect();
                let trace = self.cont(ff.trace, fg.trace, fg.iota);
                Ok(Fragment { iota, exits, trace })
            }
            Exp::While(b, f) => {
                let set = atoms_of(self.ctx, b)?;
                let ff = self.build(f)?;
                let iota: Vec<Step> = (0..self.n_atoms)
                    .map(|a| {
                        if !set.contains(Atom(a as u32)) {
                            Step::Accept
                        } else if ff.iota[a] == Step::Accept {
                            Step::Reject
                        } else {
                            ff.iota[a]
                        }
                    })
                    .collect();
                let mut exits = Vec::new();
                self.continue_exits(ff.exits, &iota, &mut exits);
                let empty = self.leaf(Vec::new(), Vec::new());
                let trace = self.cont(ff.trace, empty, iota.clone());
                Ok(Fragment { iota, exits, trace })
            }
        }
    }
}

/// The Thompson coalgebra `X_e`, its initial pseudostate `ι_e`, and the derivation
/// showing it is well-nested. States are numbered by action occurrence, left to right.
pub fn thompson(ctx: &TestContext, e: &Exp) -> Result<Thompson> {
    let mut b = Builder {
        ctx,
        n_atoms: ctx.atom_count(),
        delta: Vec::new(),
        n_states: 0,
        nodes: Vec::new(),
    };
    let frag = b.build(e)?;
    let coalgebra = GAutomaton {
        n_atoms: b.n_atoms,
        n_states: b.n_states,
        delta: b.delta,
        initial: None,
    };
    Ok(Thompson {
        coalgebra,
        iota: Pseudostate(frag.iota),
        trace: BuildTrace {
            nodes: b.nodes,
            root: frag.trace,
        },
    })
}

/// The sealed Thompson automaton of `e`.
pub fn thompson_automaton(ctx: &TestContext, e: &Exp) -> Result<GAutomaton> {
    Ok(thompson(ctx, e)?.sealed())
}

/// Graphviz rendering. Edges with the same step are merged under one guard.
pub fn to_dot(header: &ProgramHeader, aut: &GAutomaton) -> String {
    let ctx = header.tests();
    let mut out = String::from("digraph gkat {\n");
    if aut.n_states == 0 {
        out.push('}');
        out.push('\n');
        return out;
    }
    out.push_str("  rankdir=LR;\n  node [shape=circle];\n");
    for s in 0..aut.n_states {
        let label = if aut.initial == Some(s) {
            "ι".to_string()
        } else {
            s.to_string()
        };
        let _ = writeln!(out, "  s{s} [label=\"{label}\"];");
    }
    for s in 0..aut.n_states {
        for (step, atoms) in group_row(aut.row(s)) {
            let guard = pretty_bexp(ctx, &atoms.to_bexp(ctx));
            match step {
                Step::Reject => {}
                Step::Accept => {
                    let _ = writeln!(out, "  out{s} [shape=point, style=invis];");
                    let _ = writeln!(out, "  s{s} -> out{s} [label=\"{guard}\"];");
                }
                Step::Move(p, t) => {
                    let _ = writeln!(
                        out,
                        "  s{s} -> s{t} [label=\"{guard} / {}\"];",
                        header.action_name(p)
                    );
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

/// Groups a row's atoms by step, ordered by least atom.
pub fn group_row(row: &[Step]) -> Vec<(Step, AtomSet)> {
    let mut groups: Vec<(Step, AtomSet)> = Vec::new();
    for (i, st) in row.iter().enumerate() {
        match groups.iter_mut().find(|(g, _)| g == st) {
            Some((_, set)) => set.insert(Atom(i as u32)),
            None => {
                let mut set = AtomSet::empty(row.len());
                set.insert(Atom(i as u32));
                groups.push((*st, set));
            }
        }
    }
    groups
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum StepJson {
    Halt(String),
    Move(String, usize),
}

#[derive(Debug, Serialize, Deserialize)]
struct AutomatonJson {
    tests: Vec<String>,
    actions: Vec<String>,
    n_states: usize,
    initial: Option<usize>,
    delta: Vec<Vec<StepJson>>,
}

/// JSON form `{tests, actions, n_states, initial, delta}`; steps are `"0"`, `"1"`,
/// or `["p", target]`.
pub fn to_json(header: &ProgramHeader, aut: &GAutomaton) -> String {
    let doc = AutomatonJson {
        tests: header.tests().names().to_vec(),
        actions: header.actions().to_vec(),
        n_states: aut.n_states,
        initial: aut.initial,
        delta: aut
            .rows()
            .map(|row| {
                row.iter()
                    .map(|st| match st {
                        Step::Reject => StepJson::Halt("0".into()),
                        Step::Accept => StepJson::Halt("1".into()),
                        Step::Move(p, t) => StepJson::Move(header.action_name(*p).to_string(), *t),
                    })
                    .collect()
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("automaton serializes")
}

/// Inverse of [`to_json`].
pub fn from_json(text: &str) -> Result<(ProgramHeader, GAutomaton)> {
    let doc: AutomatonJson = serde_json::from_str(text)?;
    let header = ProgramHeader::new(TestContext::new(&doc.tests)?, doc.actions)?;
    if doc.delta.len() != doc.n_states {
        return Err(Error::InvalidAutomaton(format!(
            "n_states is {} but delta has {} rows",
            doc.n_states,
            doc.delta.len()
        )));
    }
    let rows = doc
        .delta
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|st| match st {
                    StepJson::Halt(s) if s == "0" => Ok(Step::Reject),
                    StepJson::Halt(s) if s == "1" => Ok(Step::Accept),
                    StepJson::Halt(s) => {
                        Err(Error::InvalidAutomaton(format!("unknown step `{s}`")))
                    }
                    StepJson::Move(p, t) => header
                        .lookup_action(&p)
                        .map(|a| Step::Move(a, t))
                        .ok_or_else(|| Error::InvalidAutomaton(format!("unknown action `{p}`"))),
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let aut = GAutomaton::from_rows(header.tests().atom_count(), rows, doc.initial)?;
    Ok((header, aut))
}
