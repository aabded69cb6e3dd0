//! Dead states and normalization.

use std::collections::VecDeque;

use crate::automaton::{GAutomaton, Step};
use crate::boolalg::Atom;

/// `mask[s]` is true when no accepting state is reachable from `s`.
pub fn dead_mask(aut: &GAutomaton) -> Vec<bool> {
    let n = aut.n_states();
    let mut rev_start = vec![0usize; n + 1];
    for row in aut.rows() {
        for st in row {
            if let Step::Move(_, t) = st {
                rev_start[*t + 1] += 1;
            }
        }
    }
    for i in 0..n {
        rev_start[i + 1] += rev_start[i];
    }
    let mut fill = rev_start.clone();
    let mut rev = vec![0usize; rev_start[n]];
    for (s, row) in aut.rows().enumerate() {
        for st in row {
            if let Step::Move(_, t) = st {
                rev[fill[*t]] = s;
                fill[*t] += 1;
            }
        }
    }

    let mut live = vec![false; n];
    let mut queue = VecDeque::new();
    for (s, flag) in live.iter_mut().enumerate() {
        if aut.is_accepting(s) {
            *flag = true;
            queue.push_back(s);
        }
    }
    while let Some(t) = queue.pop_front() {
        for &s in &rev[rev_start[t]..rev_start[t + 1]] {
            if !live[s] {
                live[s] = true;
                queue.push_back(s);
            }
        }
    }
    live.into_iter().map(|l| !l).collect()
}

/// States from which no accepting state is reachable, ascending.
pub fn dead_states(aut: &GAutomaton) -> Vec<usize> {
    dead_mask(aut)
        .into_iter()
        .enumerate()
        .filter_map(|(s, d)| d.then_some(s))
        .collect()
}

/// Replaces every move into a dead state by `Reject`. States keep their indices.
pub fn normalize(aut: &GAutomaton) -> GAutomaton {
    let dead = dead_mask(aut);
    let mut out = aut.clone();
    for s in 0..aut.n_states() {
        for (i, st) in aut.row(s).iter().enumerate() {
            if let Step::Move(_, t) = st {
                if dead[*t] {
                    out.set_step(s, Atom(i as u32), Step::Reject)
                        .expect("state indices unchanged");
                }
            }
        }
    }
    out
}

/// No move targets a dead state.
pub fn is_normal(aut: &GAutomaton) -> bool {
    let dead = dead_mask(aut);
    aut.rows()
        .flatten()
        .all(|st| !matches!(st, Step::Move(_, t) if dead[*t]))
}
