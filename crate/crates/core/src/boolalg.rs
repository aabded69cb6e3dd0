//! The finite Boolean algebra generated by a declared set of primitive tests.
//!
//! Atoms are total truth assignments and are enumerated densely: atom `i` assigns
//! test `j` the value of bit `j` of `i`, so iterating `0..2^|T|` visits atoms in the
//! lexicographic order of their bit patterns with test 0 as the least significant bit.
//! Every "pick an atom" choice elsewhere in the crate follows this order.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Default bound on the number of primitive tests (1024 atoms).
pub const DEFAULT_TEST_CAP: usize = 10;

/// Index of a primitive test within its [`TestContext`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TestId(pub u32);

impl TestId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// An ordered, duplicate-free list of primitive test names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TestContext {
    names: Vec<String>,
    lookup: HashMap<String, TestId>,
}

impl TestContext {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        Self::with_cap(names, DEFAULT_TEST_CAP)
    }

    pub fn with_cap<S: AsRef<str>>(names: &[S], cap: usize) -> Result<Self> {
        if names.len() > cap {
            return Err(Error::TooManyTests {
                count: names.len(),
                cap,
            });
        }
        // atoms are stored as u32 bit patterns
        if names.len() > 31 {
            return Err(Error::TooManyTests {
                count: names.len(),
                cap: 31,
            });
        }
        let mut lookup = HashMap::with_capacity(names.len());
        for (i, name) in names.iter().enumerate() {
            let name = name.as_ref();
            if name.is_empty() {
                return Err(Error::EmptyName);
            }
            if lookup.insert(name.to_string(), TestId(i as u32)).is_some() {
                return Err(Error::DuplicateName(name.to_string()));
            }
        }
        Ok(TestContext {
            names: names.iter().map(|n| n.as_ref().to_string()).collect(),
            lookup,
        })
    }

    pub fn n_tests(&self) -> usize {
        self.names.len()
    }

    /// `2^|T|`.
    pub fn atom_count(&self) -> usize {
        1usize << self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, t: TestId) -> &str {
        &self.names[t.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<TestId> {
        self.lookup.get(name).copied()
    }

    /// All atoms in the fixed enumeration order.
    pub fn atoms(&self) -> impl Iterator<Item = Atom> + Clone {
        (0..self.atom_count() as u32).map(Atom)
    }

    pub fn check_atom(&self, alpha: Atom) -> Result<()> {
        if alpha.index() < self.atom_count() {
            Ok(())
        } else {
            Err(Error::ContextMismatch(format!(
                "atom {} outside a universe of {} atoms",
                alpha.0,
                self.atom_count()
            )))
        }
    }

    /// Checks that every test mentioned by `b` is declared here.
    pub fn check_bexp(&self, b: &BExp) -> Result<()> {
        match b {
            BExp::Zero | BExp::One => Ok(()),
            BExp::Test(t) if t.index() < self.n_tests() => Ok(()),
            BExp::Test(t) => Err(Error::ContextMismatch(format!(
                "test id {} is not declared ({} tests)",
                t.0,
                self.n_tests()
            ))),
            BExp::And(l, r) | BExp::Or(l, r) => {
                self.check_bexp(l)?;
                self.check_bexp(r)
            }
            BExp::Not(inner) => self.check_bexp(inner),
        }
    }

    /// Textual form `{t1=1,t2=0}` used in guarded-string output.
    pub fn show_atom(&self, alpha: Atom) -> String {
        let mut out = String::from("{");
        for (i, name) in self.names.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            out.push_str(name);
            out.push('=');
            out.push(if alpha.bit(TestId(i as u32)) {
                '1'
            } else {
                '0'
            });
        }
        out.push('}');
        out
    }

    /// The conjunction of literals `c_1 · c_2 ⋯ c_n` describing a single atom.
    pub fn atom_bexp(&self, alpha: Atom) -> BExp {
        let mut acc: Option<BExp> = None;
        for i in 0..self.n_tests() {
            let t = TestId(i as u32);
            let lit = if alpha.bit(t) {
                BExp::Test(t)
            } else {
                BExp::not(BExp::Test(t))
            };
            acc = Some(match acc {
                None => lit,
                Some(prev) => BExp::and(prev, lit),
            });
        }
        acc.unwrap_or(BExp::One)
    }

    /// The sum `Σ α` over the given atoms as an `or`-chain of atom conjunctions, in
    /// atom order. The empty sum is `0`.
    pub fn atom_sum(&self, atoms: impl IntoIterator<Item = Atom>) -> BExp {
        let mut acc: Option<BExp> = None;
        for alpha in atoms {
            let lit = self.atom_bexp(alpha);
            acc = Some(match acc {
                None => lit,
                Some(prev) => BExp::or(prev, lit),
            });
        }
        acc.unwrap_or(BExp::Zero)
    }
}

/// A total truth assignment; bit `i` is the value of test `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom(pub u32);

impl Atom {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn bit(self, t: TestId) -> bool {
        (self.0 >> t.0) & 1 == 1
    }

    pub fn from_bits(bits: &[bool]) -> Atom {
        Atom(
            bits.iter()
                .enumerate()
                .fold(0u32, |acc, (i, &b)| acc | ((b as u32) << i)),
        )
    }
}

/// Dense bitset over the `2^|T|` atoms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AtomSet {
    n_atoms: usize,
    words: Vec<u64>,
}

impl AtomSet {
    pub fn empty(n_atoms: usize) -> Self {
        AtomSet {
            n_atoms,
            words: vec![0; n_atoms.div_ceil(64)],
        }
    }

    pub fn full(n_atoms: usize) -> Self {
        let mut s = Self::empty(n_atoms);
        for i in 0..n_atoms {
            s.insert(Atom(i as u32));
        }
        s
    }

    pub fn from_atoms(n_atoms: usize, atoms: impl IntoIterator<Item = Atom>) -> Self {
        let mut s = Self::empty(n_atoms);
        for a in atoms {
            s.insert(a);
        }
        s
    }

    /// Atoms in which test `t` holds.
    pub fn of_test(n_atoms: usize, t: TestId) -> Self {
        Self::from_atoms(n_atoms, (0..n_atoms as u32).map(Atom).filter(|a| a.bit(t)))
    }

    pub fn universe(&self) -> usize {
        self.n_atoms
    }

    pub fn contains(&self, a: Atom) -> bool {
        let i = a.index();
        i < self.n_atoms && (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn insert(&mut self, a: Atom) {
        let i = a.index();
        assert!(i < self.n_atoms, "atom outside universe");
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn remove(&mut self, a: Atom) {
        let i = a.index();
        if i < self.n_atoms {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.n_atoms
    }

    pub fn union(&self, other: &AtomSet) -> AtomSet {
        self.zip(other, |a, b| a | b)
    }

    pub fn intersection(&self, other: &AtomSet) -> AtomSet {
        self.zip(other, |a, b| a & b)
    }

    pub fn complement(&self) -> AtomSet {
        let mut out = AtomSet {
            n_atoms: self.n_atoms,
            words: self.words.iter().map(|w| !w).collect(),
        };
        out.clear_tail();
        out
    }

    pub fn is_subset(&self, other: &AtomSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = Atom> + '_ {
        (0..self.n_atoms as u32)
            .map(Atom)
            .filter(move |&a| self.contains(a))
    }

    /// A compact Boolean expression denoting exactly this set, obtained by Shannon
    /// expansion on the highest-numbered test first.
    pub fn to_bexp(&self, ctx: &TestContext) -> BExp {
        assert_eq!(
            self.n_atoms,
            ctx.atom_count(),
            "atom set from another context"
        );
        let members: Vec<bool> = (0..self.n_atoms)
            .map(|i| self.contains(Atom(i as u32)))
            .collect();
        shannon(&members, ctx.n_tests())
    }

    fn zip(&self, other: &AtomSet, op: impl Fn(u64, u64) -> u64) -> AtomSet {
        assert_eq!(
            self.n_atoms, other.n_atoms,
            "atom sets over different universes"
        );
        AtomSet {
            n_atoms: self.n_atoms,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        }
    }

    fn clear_tail(&mut self) {
        let rem = self.n_atoms % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
        if self.n_atoms == 0 {
            self.words.clear();
        }
    }
}

impl fmt::Debug for AtomSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter().map(|a| a.0)).finish()
    }
}

// `members` has length 2^n and is indexed by atom; test n-1 selects the upper half.
fn shannon(members: &[bool], n: usize) -> BExp {
    if members.iter().all(|&m| !m) {
        return BExp::Zero;
    }
    if members.iter().all(|&m| m) {
        return BExp::One;
    }
    let half = members.len() / 2;
    let (low, high) = members.split_at(half);
    let t = BExp::Test(TestId((n - 1) as u32));
    if low == high {
        return shannon(low, n - 1);
    }
    let lo_empty = low.iter().all(|&m| !m);
    let hi_empty = high.iter().all(|&m| !m);
    let lo_full = low.iter().all(|&m| m);
    let hi_full = high.iter().all(|&m| m);
    let conj = |lit: BExp, rest: &[bool]| {
        let r = shannon(rest, n - 1);
        if r == BExp::One {
            lit
        } else {
            BExp::and(lit, r)
        }
    };
    if lo_empty {
        conj(t, high)
    } else if hi_empty {
        conj(BExp::not(t), low)
    } else if hi_full {
        BExp::or(t, shannon(low, n - 1))
    } else if lo_full {
        BExp::or(BExp::not(t), shannon(high, n - 1))
    } else {
        BExp::or(conj(t.clone(), high), conj(BExp::not(t), low))
    }
}

/// Boolean expressions over primitive tests.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum BExp {
    Zero,
    One,
    Test(TestId),
    And(Box<BExp>, Box<BExp>),
    Or(Box<BExp>, Box<BExp>),
    Not(Box<BExp>),
}

impl BExp {
    pub fn test(t: TestId) -> BExp {
        BExp::Test(t)
    }

    pub fn and(l: BExp, r: BExp) -> BExp {
        BExp::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BExp, r: BExp) -> BExp {
        BExp::Or(Box::new(l), Box::new(r))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(b: BExp) -> BExp {
        BExp::Not(Box::new(b))
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            BExp::Zero | BExp::One | BExp::Test(_) => 1,
            BExp::And(l, r) | BExp::Or(l, r) => 1 + l.size() + r.size(),
            BExp::Not(b) => 1 + b.size(),
        }
    }

    fn eval_unchecked(&self, alpha: Atom) -> bool {
        match self {
            BExp::Zero => false,
            BExp::One => true,
            BExp::Test(t) => alpha.bit(*t),
            BExp::And(l, r) => l.eval_unchecked(alpha) && r.eval_unchecked(alpha),
            BExp::Or(l, r) => l.eval_unchecked(alpha) || r.eval_unchecked(alpha),
            BExp::Not(b) => !b.eval_unchecked(alpha),
        }
    }

    fn atoms_unchecked(&self, n_atoms: usize) -> AtomSet {
        match self {
            BExp::Zero => AtomSet::empty(n_atoms),
            BExp::One => AtomSet::full(n_atoms),
            BExp::Test(t) => AtomSet::of_test(n_atoms, *t),
            BExp::And(l, r) => l
                .atoms_unchecked(n_atoms)
                .intersection(&r.atoms_unchecked(n_atoms)),
            BExp::Or(l, r) => l
                .atoms_unchecked(n_atoms)
                .union(&r.atoms_unchecked(n_atoms)),
            BExp::Not(b) => b.atoms_unchecked(n_atoms).complement(),
        }
    }
}

/// Standard Boolean evaluation of `b` under the truth assignment `alpha`.
pub fn eval_bexp(ctx: &TestContext, b: &BExp, alpha: Atom) -> Result<bool> {
    ctx.check_bexp(b)?;
    ctx.check_atom(alpha)?;
    Ok(b.eval_unchecked(alpha))
}

/// `⟦b⟧`: the atoms below `b`.
pub fn atoms_of(ctx: &TestContext, b: &BExp) -> Result<AtomSet> {
    ctx.check_bexp(b)?;
    Ok(b.atoms_unchecked(ctx.atom_count()))
}

/// Boolean equivalence: the atoms of `b` and `c` coincide.
pub fn ba_equiv(ctx: &TestContext, b: &BExp, c: &BExp) -> Result<bool> {
    Ok(atoms_of(ctx, b)? == atoms_of(ctx, c)?)
}

/// Entailment `b ≤ c`.
pub fn entails(ctx: &TestContext, b: &BExp, c: &BExp) -> Result<bool> {
    Ok(atoms_of(ctx, b)?.is_subset(&atoms_of(ctx, c)?))
}
