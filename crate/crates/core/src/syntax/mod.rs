//! GKAT expressions, program headers, and their concrete syntax.

mod parser;
mod pretty;

use std::collections::HashMap;

use crate::boolalg::{BExp, TestContext};
use crate::error::{Error, Result};

pub use parser::{parse, parse_bexp_with, parse_exp_with, parse_hoare, HoareQuery, Program};
pub use pretty::{pretty, pretty_bexp};

/// Index of an action within its [`ProgramHeader`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionId(pub u32);

impl ActionId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// GKAT expressions. `If(b, e, f)` is `e +_b f` and `While(b, e)` is `e^(b)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Exp {
    Act(ActionId),
    Assert(BExp),
    Seq(Box<Exp>, Box<Exp>),
    If(BExp, Box<Exp>, Box<Exp>),
    While(BExp, Box<Exp>),
}

impl Exp {
    pub fn act(a: ActionId) -> Exp {
        Exp::Act(a)
    }

    pub fn assert(b: BExp) -> Exp {
        Exp::Assert(b)
    }

    pub fn skip() -> Exp {
        Exp::Assert(BExp::One)
    }

    pub fn fail() -> Exp {
        Exp::Assert(BExp::Zero)
    }

    pub fn seq(e: Exp, f: Exp) -> Exp {
        Exp::Seq(Box::new(e), Box::new(f))
    }

    pub fn if_(b: BExp, e: Exp, f: Exp) -> Exp {
        Exp::If(b, Box::new(e), Box::new(f))
    }

    pub fn while_(b: BExp, e: Exp) -> Exp {
        Exp::While(b, Box::new(e))
    }

    /// Total number of AST nodes, Boolean nodes included.
    pub fn size(&self) -> usize {
        match self {
            Exp::Act(_) => 1,
            Exp::Assert(b) => 1 + b.size(),
            Exp::Seq(e, f) => 1 + e.size() + f.size(),
            Exp::If(b, e, f) => 1 + b.size() + e.size() + f.size(),
            Exp::While(b, e) => 1 + b.size() + e.size(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Exp::Act(_) | Exp::Assert(_) => 1,
            Exp::Seq(e, f) | Exp::If(_, e, f) => 1 + e.depth().max(f.depth()),
            Exp::While(_, e) => 1 + e.depth(),
        }
    }
}

/// `#_Σ(e)`: number of action occurrences in `e`.
pub fn action_count(e: &Exp) -> usize {
    match e {
        Exp::Act(_) => 1,
        Exp::Assert(_) => 0,
        Exp::Seq(e, f) | Exp::If(_, e, f) => action_count(e) + action_count(f),
        Exp::While(_, e) => action_count(e),
    }
}

/// Declared primitive tests and actions. The two name sets are disjoint and nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProgramHeader {
    tests: TestContext,
    actions: Vec<String>,
    action_lookup: HashMap<String, ActionId>,
}

impl ProgramHeader {
    pub fn new(tests: TestContext, actions: Vec<String>) -> Result<Self> {
        if tests.n_tests() == 0 {
            return Err(Error::EmptyDeclaration("tests"));
        }
        if actions.is_empty() {
            return Err(Error::EmptyDeclaration("actions"));
        }
        let mut action_lookup = HashMap::with_capacity(actions.len());
        for (i, name) in actions.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::EmptyName);
            }
            if tests.lookup(name).is_some() {
                return Err(Error::NameCollision(name.clone()));
            }
            if action_lookup
                .insert(name.clone(), ActionId(i as u32))
                .is_some()
            {
                return Err(Error::DuplicateName(name.clone()));
            }
        }
        Ok(ProgramHeader {
            tests,
            actions,
            action_lookup,
        })
    }

    /// Convenience constructor from plain name lists with the default test cap.
    pub fn from_names<S: AsRef<str>>(tests: &[S], actions: &[S]) -> Result<Self> {
        ProgramHeader::new(
            TestContext::new(tests)?,
            actions.iter().map(|a| a.as_ref().to_string()).collect(),
        )
    }

    pub fn tests(&self) -> &TestContext {
        &self.tests
    }

    pub fn actions(&self) -> &[String] {
        &self.actions
    }

    pub fn n_actions(&self) -> usize {
        self.actions.len()
    }

    pub fn action_name(&self, a: ActionId) -> &str {
        &self.actions[a.index()]
    }

    pub fn lookup_action(&self, name: &str) -> Option<ActionId> {
        self.action_lookup.get(name).copied()
    }

    /// Checks every identifier in `e` against this header.
    pub fn check_exp(&self, e: &Exp) -> Result<()> {
        match e {
            Exp::Act(a) if a.index() < self.actions.len() => Ok(()),
            Exp::Act(a) => Err(Error::ContextMismatch(format!(
                "action id {} is not declared ({} actions)",
                a.0,
                self.actions.len()
            ))),
            Exp::Assert(b) => self.tests.check_bexp(b),
            Exp::Seq(e, f) => {
                self.check_exp(e)?;
                self.check_exp(f)
            }
            Exp::If(b, e, f) => {
                self.tests.check_bexp(b)?;
                self.check_exp(e)?;
                self.check_exp(f)
            }
            Exp::While(b, e) => {
                self.tests.check_bexp(b)?;
                self.check_exp(e)
            }
        }
    }
}
