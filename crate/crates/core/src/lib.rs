//! Guarded Kleene Algebra with Tests. Expressions compile to linear-size
//! automata, and equivalence is decided by bisimulation on those automata.

pub mod analysis;
pub mod automaton;
pub mod bench;
pub mod boolalg;
pub mod derivatives;
pub mod equivalence;
pub mod error;
pub mod gen;
pub mod guarded_lang;
pub mod interp;
pub mod solver;
pub mod syntax;

pub use error::{Error, Result};
