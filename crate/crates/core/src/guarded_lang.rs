//! Guarded strings and the bounded language semantics.
//!
//! A bounded language is stored as a hash-consed trie. Because every language
//! produced here satisfies the determinacy property, the first atom of a string
//! fixes what happens next: the string ends, it is impossible, or exactly one
//! action follows. A node is therefore one row `atom -> Cell`, exactly like an
//! automaton state. Moves into the empty node are stored as `Reject`, which makes
//! the representation canonical: within one arena, two nodes denote the same set
//! of strings iff they have the same id.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::boolalg::{atoms_of, Atom, AtomSet, TestContext};
use crate::error::Result;
use crate::syntax::{ActionId, Exp, ProgramHeader};

/// `α₀ p₁ α₁ … pₙ αₙ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GuardedString {
    pub atoms: Vec<Atom>,
    pub actions: Vec<ActionId>,
}

impl GuardedString {
    /// The single-atom string `α`.
    pub fn atom(alpha: Atom) -> Self {
        GuardedString {
            atoms: vec![alpha],
            actions: Vec::new(),
        }
    }

    /// Builds `α₀ p₁ α₁ …`; `atoms.len()` must be `actions.len() + 1`.
    pub fn new(atoms: Vec<Atom>, actions: Vec<ActionId>) -> Self {
        assert_eq!(
            atoms.len(),
            actions.len() + 1,
            "a guarded string has one more atom than actions"
        );
        GuardedString { atoms, actions }
    }

    pub fn action_len(&self) -> usize {
        self.actions.len()
    }

    pub fn first_atom(&self) -> Atom {
        self.atoms[0]
    }

    pub fn last_atom(&self) -> Atom {
        *self.atoms.last().expect("nonempty")
    }

    /// Renders `{t=1} . p . {t=0}`.
    pub fn show(&self, header: &ProgramHeader) -> String {
        let ctx = header.tests();
        let mut out = ctx.show_atom(self.atoms[0]);
        for (p, alpha) in self.actions.iter().zip(&self.atoms[1..]) {
            out.push_str(" . ");
            out.push_str(header.action_name(*p));
            out.push_str(" . ");
            out.push_str(&ctx.show_atom(*alpha));
        }
        out
    }
}

/// Shorter strings first; equal lengths compare token by token, atoms by their
/// enumeration index and actions by id.
impl Ord for GuardedString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.actions
            .len()
            .cmp(&other.actions.len())
            .then_with(|| self.atoms[0].cmp(&other.atoms[0]))
            .then_with(|| {
                for i in 0..self.actions.len() {
                    let c = self.actions[i]
                        .cmp(&other.actions[i])
                        .then(self.atoms[i + 1].cmp(&other.atoms[i + 1]));
                    if c != Ordering::Equal {
                        return c;
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for GuardedString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// The partial fusion product `xα ⋄ αy = xαy`; `None` when the boundary atoms differ.
pub fn fuse(x: &GuardedString, y: &GuardedString) -> Option<GuardedString> {
    if x.last_atom() != y.first_atom() {
        return None;
    }
    let mut atoms = x.atoms.clone();
    atoms.extend_from_slice(&y.atoms[1..]);
    let mut actions = x.actions.clone();
    actions.extend_from_slice(&y.actions);
    Some(GuardedString { atoms, actions })
}

/// Id of a trie node within a [`LangArena`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LangId(u32);

impl LangId {
    /// The empty language.
    pub const EMPTY: LangId = LangId(0);

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// What a language does after reading its first atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Cell {
    Reject,
    Accept,
    Move(ActionId, LangId),
}

/// Hash-consing store for trie nodes, with memo tables for the language operations.
#[derive(Clone)]
pub struct LangArena {
    n_atoms: usize,
    rows: Vec<Box<[Cell]>>,
    height: Vec<usize>,
    index: HashMap<Box<[Cell]>, LangId>,
    fuse_memo: HashMap<(LangId, LangId, usize), LangId>,
    trunc_memo: HashMap<(LangId, usize), LangId>,
}

impl LangArena {
    pub fn new(n_atoms: usize) -> Self {
        let mut arena = LangArena {
            n_atoms,
            rows: Vec::new(),
            height: Vec::new(),
            index: HashMap::new(),
            fuse_memo: HashMap::new(),
            trunc_memo: HashMap::new(),
        };
        let empty = arena.node(vec![Cell::Reject; n_atoms]);
        debug_assert_eq!(empty, LangId::EMPTY);
        arena
    }

    pub fn n_atoms(&self) -> usize {
        self.n_atoms
    }

    pub fn n_nodes(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, id: LangId) -> &[Cell] {
        &self.rows[id.index()]
    }

    /// Longest action length of a member, 0 for the empty language.
    pub fn height(&self, id: LangId) -> usize {
        self.height[id.index()]
    }

    /// Interns a row, turning moves into the empty language into `Reject`.
    pub fn node(&mut self, mut row: Vec<Cell>) -> LangId {
        assert_eq!(
            row.len(),
            self.n_atoms,
            "row length must equal the atom count"
        );
        for cell in row.iter_mut() {
            if let Cell::Move(_, LangId::EMPTY) = cell {
                *cell = Cell::Reject;
            }
        }
        let row = row.into_boxed_slice();
        if let Some(&id) = self.index.get(&row) {
            return id;
        }
        let height = row
            .iter()
            .map(|c| match c {
                Cell::Move(_, t) => 1 + self.height[t.index()],
                _ => 0,
            })
            .max()
            .unwrap_or(0);
        let id = LangId(self.rows.len() as u32);
        self.rows.push(row.clone());
        self.height.push(height);
        self.index.insert(row, id);
        id
    }

    /// The 0-action language `{α : α ∈ set}`.
    pub fn atoms(&mut self, set: &AtomSet) -> LangId {
        let row = (0..self.n_atoms)
            .map(|i| {
                if set.contains(Atom(i as u32)) {
                    Cell::Accept
                } else {
                    Cell::Reject
                }
            })
            .collect();
        self.node(row)
    }

    /// `{αpβ : α, β ∈ At}` when `budget ≥ 1`, empty otherwise.
    pub fn action(&mut self, p: ActionId, budget: usize) -> LangId {
        if budget == 0 {
            return LangId::EMPTY;
        }
        let all = self.atoms(&AtomSet::full(self.n_atoms));
        self.node(vec![Cell::Move(p, all); self.n_atoms])
    }

    /// `B·L + ¬B·K`, chosen by first atom.
    pub fn guard(&mut self, set: &AtomSet, l: LangId, k: LangId) -> LangId {
        let row = (0..self.n_atoms)
            .map(|i| {
                if set.contains(Atom(i as u32)) {
                    self.rows[l.index()][i]
                } else {
                    self.rows[k.index()][i]
                }
            })
            .collect();
        self.node(row)
    }

    /// Members of `l` with at most `budget` actions.
    pub fn truncate(&mut self, l: LangId, budget: usize) -> LangId {
        if self.height(l) <= budget {
            return l;
        }
        if let Some(&id) = self.trunc_memo.get(&(l, budget)) {
            return id;
        }
        let row: Vec<Cell> = self.rows[l.index()].to_vec();
        let row = row
            .into_iter()
            .map(|c| match c {
                Cell::Move(_, _) if budget == 0 => Cell::Reject,
                Cell::Move(p, t) => Cell::Move(p, self.truncate(t, budget - 1)),
                other => other,
            })
            .collect();
        let id = self.node(row);
        self.trunc_memo.insert((l, budget), id);
        id
    }

    /// `filter_budget(L ⋄ K)`.
    pub fn fuse(&mut self, l: LangId, k: LangId, budget: usize) -> LangId {
        if let Some(&id) = self.fuse_memo.get(&(l, k, budget)) {
            return id;
        }
        let row: Vec<Cell> = self.rows[l.index()].to_vec();
        let mut out = Vec::with_capacity(self.n_atoms);
        for (i, c) in row.into_iter().enumerate() {
            out.push(match c {
                Cell::Reject => Cell::Reject,
                Cell::Accept => {
                    let kt = self.truncate(k, budget);
                    self.rows[kt.index()][i]
                }
                Cell::Move(_, _) if budget == 0 => Cell::Reject,
                Cell::Move(p, t) => Cell::Move(p, self.fuse(t, k, budget - 1)),
            });
        }
        let id = self.node(out);
        self.fuse_memo.insert((l, k, budget), id);
        id
    }

    /// Least fixed point of `W = filter_budget((B ⋄ L) ⋄ W) ∪ ¬B`, by iteration from `∅`.
    pub fn star(&mut self, set: &AtomSet, l: LangId, budget: usize) -> LangId {
        let exit = self.atoms(&set.complement());
        let mut w = LangId::EMPTY;
        loop {
            let body = self.fuse(l, w, budget);
            let next = self.guard(set, body, exit);
            if next == w {
                return w;
            }
            w = next;
        }
    }

    /// `{w ∈ ⟦e⟧ : action_len(w) ≤ k}`, computed structurally.
    pub fn den(&mut self, ctx: &TestContext, e: &Exp, k: usize) -> Result<LangId> {
        Ok(match e {
            Exp::Act(p) => self.action(*p, k),
            Exp::Assert(b) => self.atoms(&atoms_of(ctx, b)?),
            Exp::Seq(e, f) => {
                let l = self.den(ctx, e, k)?;
                let r = self.den(ctx, f, k)?;
                self.fuse(l, r, k)
            }
            Exp::If(b, e, f) => {
                let set = atoms_of(ctx, b)?;
                let l = self.den(ctx, e, k)?;
                let r = self.den(ctx, f, k)?;
                self.guard(&set, l, r)
            }
            Exp::While(b, e) => {
                let set = atoms_of(ctx, b)?;
                let l = self.den(ctx, e, k)?;
                self.star(&set, l, k)
            }
        })
    }

    /// Number of strings in `l`, saturating.
    pub fn count(&self, l: LangId) -> u128 {
        fn go(a: &LangArena, l: LangId, memo: &mut HashMap<LangId, u128>) -> u128 {
            if let Some(&c) = memo.get(&l) {
                return c;
            }
            let mut total: u128 = 0;
            for c in a.row(l).iter() {
                let n = match c {
                    Cell::Reject => 0,
                    Cell::Accept => 1,
                    Cell::Move(_, t) => go(a, *t, memo),
                };
                total = total.saturating_add(n);
            }
            memo.insert(l, total);
            total
        }
        go(self, l, &mut HashMap::new())
    }

    pub fn contains(&self, l: LangId, w: &GuardedString) -> bool {
        if w.atoms.iter().any(|a| a.index() >= self.n_atoms) {
            return false;
        }
        let mut node = l;
        for (i, alpha) in w.atoms.iter().enumerate() {
            match self.row(node)[alpha.index()] {
                Cell::Accept => return i == w.actions.len(),
                Cell::Reject => return false,
                Cell::Move(p, t) => {
                    if i == w.actions.len() || w.actions[i] != p {
                        return false;
                    }
                    node = t;
                }
            }
        }
        false
    }

    /// Every member of `l`, in [`GuardedString`] order.
    pub fn strings(&self, l: LangId) -> BTreeSet<GuardedString> {
        fn go(
            a: &LangArena,
            l: LangId,
            atoms: &mut Vec<Atom>,
            actions: &mut Vec<ActionId>,
            out: &mut BTreeSet<GuardedString>,
        ) {
            for (i, c) in a.row(l).iter().enumerate() {
                atoms.push(Atom(i as u32));
                match *c {
                    Cell::Reject => {}
                    Cell::Accept => {
                        out.insert(GuardedString {
                            atoms: atoms.clone(),
                            actions: actions.clone(),
                        });
                    }
                    Cell::Move(p, t) => {
                        actions.push(p);
                        go(a, t, atoms, actions, out);
                        actions.pop();
                    }
                }
                atoms.pop();
            }
        }
        let mut out = BTreeSet::new();
        go(self, l, &mut Vec::new(), &mut Vec::new(), &mut out);
        out
    }

    fn shortest(&self, l: LangId, memo: &mut HashMap<LangId, Option<usize>>) -> Option<usize> {
        if let Some(&s) = memo.get(&l) {
            return s;
        }
        let mut best: Option<usize> = None;
        for c in self.row(l).iter() {
            let s = match *c {
                Cell::Reject => None,
                Cell::Accept => Some(0),
                Cell::Move(_, t) => self.shortest(t, memo).map(|s| s + 1),
            };
            best = min_opt(best, s);
        }
        memo.insert(l, best);
        best
    }

    // Least member of `l` (shortest, then lexicographic), appended to `atoms`/`actions`.
    fn least_into(
        &self,
        l: LangId,
        memo: &mut HashMap<LangId, Option<usize>>,
        atoms: &mut Vec<Atom>,
        actions: &mut Vec<ActionId>,
    ) {
        let len = self.shortest(l, memo).expect("nonempty language");
        for (i, c) in self.row(l).iter().enumerate() {
            match *c {
                Cell::Accept if len == 0 => {
                    atoms.push(Atom(i as u32));
                    return;
                }
                Cell::Move(p, t) if len > 0 && self.shortest(t, memo) == Some(len - 1) => {
                    atoms.push(Atom(i as u32));
                    actions.push(p);
                    self.least_into(t, memo, atoms, actions);
                    return;
                }
                _ => {}
            }
        }
        unreachable!("shortest length is attained");
    }
}

impl fmt::Debug for LangArena {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LangArena")
            .field("n_atoms", &self.n_atoms)
            .field("n_nodes", &self.rows.len())
            .finish()
    }
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// A finite set of guarded strings, all with at most `bound` actions.
#[derive(Clone)]
pub struct BoundedLang {
    arena: LangArena,
    root: LangId,
    bound: usize,
}

impl BoundedLang {
    pub fn from_parts(arena: LangArena, root: LangId, bound: usize) -> Self {
        debug_assert!(arena.height(root) <= bound);
        BoundedLang { arena, root, bound }
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn arena(&self) -> &LangArena {
        &self.arena
    }

    pub fn root(&self) -> LangId {
        self.root
    }

    pub fn is_empty(&self) -> bool {
        self.root == LangId::EMPTY
    }

    /// Number of strings (saturating at `u128::MAX`).
    pub fn len(&self) -> u128 {
        self.arena.count(self.root)
    }

    pub fn contains(&self, w: &GuardedString) -> bool {
        self.arena.contains(self.root, w)
    }

    /// All members in sorted order.
    pub fn strings(&self) -> BTreeSet<GuardedString> {
        self.arena.strings(self.root)
    }

    /// The least string (shortest, then lexicographic) in exactly one of the two sets.
    pub fn first_difference(&self, other: &BoundedLang) -> Option<GuardedString> {
        Diff::new(&self.arena, &other.arena).witness(self.root, other.root)
    }

    pub fn is_subset(&self, other: &BoundedLang) -> bool {
        fn go(
            a: &LangArena,
            b: &LangArena,
            x: LangId,
            y: LangId,
            seen: &mut HashMap<(LangId, LangId), bool>,
        ) -> bool {
            if x == LangId::EMPTY {
                return true;
            }
            if let Some(&r) = seen.get(&(x, y)) {
                return r;
            }
            let ok = a
                .row(x)
                .iter()
                .zip(b.row(y).iter())
                .all(|(c, d)| match (*c, *d) {
                    (Cell::Reject, _) => true,
                    (Cell::Accept, Cell::Accept) => true,
                    (Cell::Move(p, s), Cell::Move(q, t)) => p == q && go(a, b, s, t, seen),
                    _ => false,
                });
            seen.insert((x, y), ok);
            ok
        }
        self.arena.n_atoms == other.arena.n_atoms
            && go(
                &self.arena,
                &other.arena,
                self.root,
                other.root,
                &mut HashMap::new(),
            )
    }
}

impl PartialEq for BoundedLang {
    fn eq(&self, other: &Self) -> bool {
        self.first_difference(other).is_none()
    }
}

impl fmt::Debug for BoundedLang {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let strings = self.strings();
        if strings.len() <= 16 {
            f.debug_set().entries(strings.iter()).finish()
        } else {
            write!(
                f,
                "BoundedLang({} strings, bound {})",
                strings.len(),
                self.bound
            )
        }
    }
}

// Pairwise comparison of two tries, possibly from different arenas.
struct Diff<'a> {
    a: &'a LangArena,
    b: &'a LangArena,
    dist: HashMap<(LangId, LangId), Option<usize>>,
    short_a: HashMap<LangId, Option<usize>>,
    short_b: HashMap<LangId, Option<usize>>,
}

impl<'a> Diff<'a> {
    fn new(a: &'a LangArena, b: &'a LangArena) -> Self {
        assert_eq!(a.n_atoms, b.n_atoms, "languages over different atom sets");
        Diff {
            a,
            b,
            dist: HashMap::new(),
            short_a: HashMap::new(),
            short_b: HashMap::new(),
        }
    }

    // Shortest differing string starting with a given pair of cells.
    fn cell_dist(&mut self, c: Cell, d: Cell) -> Option<usize> {
        match (c, d) {
            (Cell::Reject, Cell::Reject) | (Cell::Accept, Cell::Accept) => None,
            (Cell::Accept, _) | (_, Cell::Accept) => Some(0),
            (Cell::Move(_, s), Cell::Reject) => {
                self.a.shortest(s, &mut self.short_a).map(|n| n + 1)
            }
            (Cell::Reject, Cell::Move(_, t)) => {
                self.b.shortest(t, &mut self.short_b).map(|n| n + 1)
            }
            (Cell::Move(p, s), Cell::Move(q, t)) if p != q => min_opt(
                self.a.shortest(s, &mut self.short_a),
                self.b.shortest(t, &mut self.short_b),
            )
            .map(|n| n + 1),
            (Cell::Move(_, s), Cell::Move(_, t)) => self.node_dist(s, t).map(|n| n + 1),
        }
    }

    fn node_dist(&mut self, x: LangId, y: LangId) -> Option<usize> {
        if let Some(&d) = self.dist.get(&(x, y)) {
            return d;
        }
        let mut best = None;
        for i in 0..self.a.n_atoms {
            let (c, d) = (self.a.row(x)[i], self.b.row(y)[i]);
            let cd = self.cell_dist(c, d);
            best = min_opt(best, cd);
        }
        self.dist.insert((x, y), best);
        best
    }

    fn witness(&mut self, x: LangId, y: LangId) -> Option<GuardedString> {
        let target = self.node_dist(x, y)?;
        let mut atoms = Vec::new();
        let mut actions = Vec::new();
        self.witness_into(x, y, target, &mut atoms, &mut actions);
        Some(GuardedString { atoms, actions })
    }

    fn witness_into(
        &mut self,
        x: LangId,
        y: LangId,
        target: usize,
        atoms: &mut Vec<Atom>,
        actions: &mut Vec<ActionId>,
    ) {
        for i in 0..self.a.n_atoms {
            let (c, d) = (self.a.row(x)[i], self.b.row(y)[i]);
            if self.cell_dist(c, d) != Some(target) {
                continue;
            }
            atoms.push(Atom(i as u32));
            match (c, d) {
                (Cell::Accept, _) | (_, Cell::Accept) => {}
                (Cell::Move(p, s), Cell::Move(q, t)) if p == q => {
                    actions.push(p);
                    self.witness_into(s, t, target - 1, atoms, actions);
                }
                (c, d) => {
                    // Different first actions, or one side rejects: take the least
                    // shortest member on the side that attains the target length.
                    let from_a = match c {
                        Cell::Move(p, s)
                            if self.a.shortest(s, &mut self.short_a) == Some(target - 1) =>
                        {
                            Some((p, s))
                        }
                        _ => None,
                    };
                    let from_b = match d {
                        Cell::Move(q, t)
                            if self.b.shortest(t, &mut self.short_b) == Some(target - 1) =>
                        {
                            Some((q, t))
                        }
                        _ => None,
                    };
                    match (from_a, from_b) {
                        (Some((p, s)), Some((q, _))) if p < q => {
                            actions.push(p);
                            self.a.least_into(s, &mut self.short_a, atoms, actions);
                        }
                        (_, Some((q, t))) => {
                            actions.push(q);
                            self.b.least_into(t, &mut self.short_b, atoms, actions);
                        }
                        (Some((p, s)), None) => {
                            actions.push(p);
                            self.a.least_into(s, &mut self.short_a, atoms, actions);
                        }
                        (None, None) => unreachable!("target length is attained"),
                    }
                }
            }
            return;
        }
        unreachable!("target length is attained");
    }
}

/// `{w ∈ ⟦e⟧ : action_len(w) ≤ k}`.
pub fn bounded_den(ctx: &TestContext, e: &Exp, k: usize) -> Result<BoundedLang> {
    let mut arena = LangArena::new(ctx.atom_count());
    let root = arena.den(ctx, e, k)?;
    Ok(BoundedLang::from_parts(arena, root, k))
}

/// Result of a bounded comparison; `witness` is the least string in exactly one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedComparison {
    pub equal: bool,
    pub witness: Option<GuardedString>,
}

/// Compares `⟦e⟧` and `⟦f⟧` restricted to at most `k` actions.
pub fn lang_equal_bounded(
    ctx: &TestContext,
    e: &Exp,
    f: &Exp,
    k: usize,
) -> Result<BoundedComparison> {
    let mut arena = LangArena::new(ctx.atom_count());
    let l = arena.den(ctx, e, k)?;
    let r = arena.den(ctx, f, k)?;
    if l == r {
        return Ok(BoundedComparison {
            equal: true,
            witness: None,
        });
    }
    let witness = Diff::new(&arena, &arena).witness(l, r);
    debug_assert!(witness.is_some());
    Ok(BoundedComparison {
        equal: false,
        witness,
    })
}

/// The oracle bound `(#e + 1)(#f + 1)` for full-language comparisons.
pub fn oracle_bound(e: &Exp, f: &Exp) -> usize {
    use crate::syntax::action_count;
    (action_count(e) + 1) * (action_count(f) + 1)
}
