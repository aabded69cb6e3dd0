//! Finite relational interpretations: actions as relations, tests as state sets.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::boolalg::BExp;
use crate::error::{Error, Result};
use crate::syntax::{Exp, ProgramHeader};

/// Binary relation on `0..m`, one bitset row per source state.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    m: usize,
    rows: Vec<Vec<u64>>,
}

impl Relation {
    pub fn empty(m: usize) -> Self {
        Relation {
            m,
            rows: vec![vec![0; m.div_ceil(64)]; m],
        }
    }

    pub fn identity(m: usize) -> Self {
        Self::restricted_identity(&vec![true; m])
    }

    /// `{(s, s) : set[s]}`.
    pub fn restricted_identity(set: &[bool]) -> Self {
        let mut r = Relation::empty(set.len());
        for (s, &on) in set.iter().enumerate() {
            if on {
                r.insert(s, s);
            }
        }
        r
    }

    pub fn from_pairs(m: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut r = Relation::empty(m);
        for (s, t) in pairs {
            if s >= m || t >= m {
                return Err(Error::InvalidInterp(format!(
                    "pair ({s}, {t}) outside 0..{m}"
                )));
            }
            r.insert(s, t);
        }
        Ok(r)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn insert(&mut self, s: usize, t: usize) {
        self.rows[s][t / 64] |= 1 << (t % 64);
    }

    pub fn contains(&self, s: usize, t: usize) -> bool {
        self.rows[s][t / 64] >> (t % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.rows
            .iter()
            .flatten()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().flatten().all(|w| *w == 0)
    }

    pub fn pairs(&self) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for s in 0..self.m {
            for t in 0..self.m {
                if self.contains(s, t) {
                    out.insert((s, t));
                }
            }
        }
        out
    }

    pub fn union(&self, other: &Relation) -> Relation {
        let mut out = self.clone();
        for (a, b) in out.rows.iter_mut().zip(&other.rows) {
            for (x, y) in a.iter_mut().zip(b) {
                *x |= *y;
            }
        }
        out
    }

    /// `self ; other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let mut out = Relation::empty(self.m);
        for s in 0..self.m {
            for u in 0..self.m {
                if self.contains(s, u) {
                    for (x, y) in out.rows[s].iter_mut().zip(&other.rows[u]) {
                        *x |= *y;
                    }
                }
            }
        }
        out
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows
            .iter()
            .flatten()
            .zip(other.rows.iter().flatten())
            .all(|(a, b)| a & !b == 0)
    }
}

/// `(State, eval, sat)` over a program header: `eval` is indexed by action id,
/// `sat` by test id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelInterp {
    m: usize,
    eval: Vec<Relation>,
    sat: Vec<Vec<bool>>,
}

#[derive(Serialize, Deserialize)]
struct InterpJson {
    m: usize,
    #[serde(default)]
    eval: BTreeMap<String, Vec<(usize, usize)>>,
    #[serde(default)]
    sat: BTreeMap<String, Vec<usize>>,
}

impl RelInterp {
    pub fn new(
        header: &ProgramHeader,
        m: usize,
        eval: Vec<Relation>,
        sat: Vec<Vec<bool>>,
    ) -> Result<Self> {
        if eval.len() != header.n_actions() || sat.len() != header.tests().n_tests() {
            return Err(Error::InvalidInterp(format!(
                "expected {} relations and {} state sets",
                header.n_actions(),
                header.tests().n_tests()
            )));
        }
        if eval.iter().any(|r| r.m() != m) || sat.iter().any(|s| s.len() != m) {
            return Err(Error::InvalidInterp(format!(
                "components must range over 0..{m}"
            )));
        }
        Ok(RelInterp { m, eval, sat })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn eval(&self) -> &[Relation] {
        &self.eval
    }

    pub fn sat(&self) -> &[Vec<bool>] {
        &self.sat
    }

    /// Reads `{m, eval: {p: [[s, s']]}, sat: {t: [s]}}`. Names absent from the
    /// file denote the empty relation or set; names the header lacks are errors.
    pub fn from_json(header: &ProgramHeader, text: &str) -> Result<Self> {
        let raw: InterpJson = serde_json::from_str(text)?;
        let m = raw.m;
        let mut eval = vec![Relation::empty(m); header.n_actions()];
        for (name, pairs) in raw.eval {
            let a = header
                .lookup_action(&name)
                .ok_or_else(|| Error::InvalidInterp(format!("unknown action `{name}`")))?;
            eval[a.index()] = Relation::from_pairs(m, pairs)?;
        }
        let mut sat = vec![vec![false; m]; header.tests().n_tests()];
        for (name, states) in raw.sat {
            let t = header
                .tests()
                .lookup(&name)
                .ok_or_else(|| Error::InvalidInterp(format!("unknown test `{name}`")))?;
            for s in states {
                if s >= m {
                    return Err(Error::InvalidInterp(format!("state {s} outside 0..{m}")));
                }
                sat[t.index()][s] = true;
            }
        }
        Ok(RelInterp { m, eval, sat })
    }

    pub fn to_json(&self, header: &ProgramHeader) -> String {
        let raw = InterpJson {
            m: self.m,
            eval: header
                .actions()
                .iter()
                .zip(&self.eval)
                .map(|(n, r)| (n.clone(), r.pairs().into_iter().collect()))
                .collect(),
            sat: header
                .tests()
                .names()
                .iter()
                .zip(&self.sat)
                .map(|(n, s)| (n.clone(), (0..self.m).filter(|&i| s[i]).collect()))
                .collect(),
        };
        serde_json::to_string(&raw).expect("interpretations always serialize")
    }

    /// Each pair lands in `eval(p)` and each state in `sat(t)` with probability `density`.
    pub fn random<R: Rng>(header: &ProgramHeader, m: usize, density: f64, rng: &mut R) -> Self {
        let eval = (0..header.n_actions())
            .map(|_| {
                let mut r = Relation::empty(m);
                for s in 0..m {
                    for t in 0..m {
                        if rng.gen_bool(density) {
                            r.insert(s, t);
                        }
                    }
                }
                r
            })
            .collect();
        let sat = (0..header.tests().n_tests())
            .map(|_| (0..m).map(|_| rng.gen_bool(0.5)).collect())
            .collect();
        RelInterp { m, eval, sat }
    }

    fn check(&self, header: &ProgramHeader) -> Result<()> {
        if self.eval.len() != header.n_actions() || self.sat.len() != header.tests().n_tests() {
            return Err(Error::ContextMismatch(
                "interpretation was built for a different header".into(),
            ));
        }
        Ok(())
    }

    /// `sat†(b)` as a membership vector.
    pub fn sat_dagger(&self, b: &BExp) -> Result<Vec<bool>> {
        Ok(match b {
            BExp::Zero => vec![false; self.m],
            BExp::One => vec![true; self.m],
            BExp::Test(t) => {
                self.sat.get(t.index()).cloned().ok_or_else(|| {
                    Error::ContextMismatch(format!("test id {} is undeclared", t.0))
                })?
            }
            BExp::And(l, r) => {
                let (l, r) = (self.sat_dagger(l)?, self.sat_dagger(r)?);
                l.iter().zip(&r).map(|(a, b)| *a && *b).collect()
            }
            BExp::Or(l, r) => {
                let (l, r) = (self.sat_dagger(l)?, self.sat_dagger(r)?);
                l.iter().zip(&r).map(|(a, b)| *a || *b).collect()
            }
            BExp::Not(b) => self.sat_dagger(b)?.into_iter().map(|a| !a).collect(),
        })
    }

    fn den(&self, e: &Exp) -> Result<Relation> {
        Ok(match e {
            Exp::Act(p) => self.eval.get(p.index()).cloned().ok_or_else(|| {
                Error::ContextMismatch(format!("action id {} is undeclared", p.0))
            })?,
            Exp::Assert(b) => Relation::restricted_identity(&self.sat_dagger(b)?),
            Exp::Seq(e, f) => self.den(e)?.compose(&self.den(f)?),
            Exp::If(b, e, f) => {
                let yes = self.sat_dagger(b)?;
                let no: Vec<bool> = yes.iter().map(|x| !x).collect();
                Relation::restricted_identity(&yes)
                    .compose(&self.den(e)?)
                    .union(&Relation::restricted_identity(&no).compose(&self.den(f)?))
            }
            Exp::While(b, body) => {
                let yes = self.sat_dagger(b)?;
                let no: Vec<bool> = yes.iter().map(|x| !x).collect();
                let step = Relation::restricted_identity(&yes).compose(&self.den(body)?);
                let exit = Relation::restricted_identity(&no);
                // least X with X = exit ∪ step ; X, from the empty relation upward
                let mut x = Relation::empty(self.m);
                loop {
                    let next = exit.union(&step.compose(&x));
                    if next == x {
                        break x;
                    }
                    x = next;
                }
            }
        })
    }
}

/// The relation denoted by `e` under `i`.
pub fn rel_den(header: &ProgramHeader, i: &RelInterp, e: &Exp) -> Result<Relation> {
    i.check(header)?;
    header.check_exp(e)?;
    i.den(e)
}

pub fn rel_equiv(header: &ProgramHeader, i: &RelInterp, e: &Exp, f: &Exp) -> Result<bool> {
    Ok(rel_den(header, i, e)? == rel_den(header, i, f)?)
}
