//! Immediate termination `E`, one-step derivatives `D_α`, and guarded sums.

use crate::boolalg::{eval_bexp, Atom, AtomSet, BExp, TestContext};
use crate::error::{Error, Result};
use crate::syntax::{ActionId, Exp};

/// Outcome of `D_α(e)`: reject, accept, or perform an action and continue.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DerivResult {
    Zero,
    One,
    Step(ActionId, Exp),
}

/// `E(e)`: the atoms on which `e` halts without acting. No simplification.
pub fn e_of(e: &Exp) -> BExp {
    match e {
        Exp::Assert(b) => b.clone(),
        Exp::Act(_) => BExp::Zero,
        Exp::If(b, e, f) => BExp::or(
            BExp::and(b.clone(), e_of(e)),
            BExp::and(BExp::not(b.clone()), e_of(f)),
        ),
        Exp::Seq(e, f) => BExp::and(e_of(e), e_of(f)),
        Exp::While(b, _) => BExp::not(b.clone()),
    }
}

/// `D_α(e)`. Residuals keep their literal shape, e.g. `D_α(p;q) = (p, 1;q)`.
pub fn deriv(ctx: &TestContext, alpha: Atom, e: &Exp) -> Result<DerivResult> {
    Ok(match e {
        Exp::Assert(b) => {
            if eval_bexp(ctx, b, alpha)? {
                DerivResult::One
            } else {
                DerivResult::Zero
            }
        }
        Exp::Act(p) => DerivResult::Step(*p, Exp::skip()),
        Exp::If(b, e, f) => {
            if eval_bexp(ctx, b, alpha)? {
                deriv(ctx, alpha, e)?
            } else {
                deriv(ctx, alpha, f)?
            }
        }
        Exp::Seq(e, f) => match deriv(ctx, alpha, e)? {
            DerivResult::Step(p, rest) => DerivResult::Step(p, Exp::seq(rest, (**f).clone())),
            DerivResult::Zero => DerivResult::Zero,
            DerivResult::One => deriv(ctx, alpha, f)?,
        },
        Exp::While(b, body) => {
            if !eval_bexp(ctx, b, alpha)? {
                DerivResult::One
            } else {
                match deriv(ctx, alpha, body)? {
                    DerivResult::Step(p, rest) => DerivResult::Step(p, Exp::seq(rest, e.clone())),
                    _ => DerivResult::Zero,
                }
            }
        }
    })
}

/// `⊕` over atom-indexed expressions: `e_β₁ +_β₁ (e_β₂ +_β₂ (… +_βₘ 0))` with the
/// atoms in enumeration order. Each guard is the conjunction describing its atom.
pub fn dsum(ctx: &TestContext, entries: Vec<(Atom, Exp)>) -> Result<Exp> {
    let mut entries = entries;
    for (alpha, _) in &entries {
        ctx.check_atom(*alpha)?;
    }
    entries.sort_by_key(|(a, _)| *a);
    for w in entries.windows(2) {
        if w[0].0 == w[1].0 {
            return Err(Error::DuplicateAtom(w[0].0 .0));
        }
    }
    let mut acc = Exp::fail();
    for (alpha, e) in entries.into_iter().rev() {
        acc = Exp::if_(ctx.atom_bexp(alpha), e, acc);
    }
    Ok(acc)
}

/// A guarded sum whose branches are indexed by pairwise disjoint atom sets rather
/// than single atoms: `e₁ +_{B₁} (e₂ +_{B₂} (… +_{Bₘ} 0))`, ordered by least atom,
/// each guard printed compactly. Empty sets are dropped.
pub fn grouped_sum(ctx: &TestContext, groups: Vec<(AtomSet, Exp)>) -> Exp {
    let mut groups: Vec<(AtomSet, Exp)> =
        groups.into_iter().filter(|(s, _)| !s.is_empty()).collect();
    groups.sort_by_key(|(s, _)| s.iter().next());
    let mut acc = Exp::fail();
    for (set, e) in groups.into_iter().rev() {
        acc = Exp::if_(set.to_bexp(ctx), e, acc);
    }
    acc
}

/// `D(e) = ⊕_{α : D_α(e) = (p_α, e_α)} p_α · e_α`.
pub fn d_of(ctx: &TestContext, e: &Exp) -> Result<Exp> {
    let mut entries = Vec::new();
    for alpha in ctx.atoms() {
        if let DerivResult::Step(p, rest) = deriv(ctx, alpha, e)? {
            entries.push((alpha, Exp::seq(Exp::Act(p), rest)));
        }
    }
    dsum(ctx, entries)
}

/// `(E(e), D(e))`, so that `e ≡ 1 +_{E(e)} D(e)`.
pub fn fundamental_decompose(ctx: &TestContext, e: &Exp) -> Result<(BExp, Exp)> {
    ctx.check_bexp(&e_of(e))?;
    Ok((e_of(e), d_of(ctx, e)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::boolalg::{ba_equiv, TestId};

    fn ctx() -> TestContext {
        TestContext::new(&["b"]).unwrap()
    }

    fn b() -> BExp {
        BExp::Test(TestId(0))
    }

    fn p() -> Exp {
        Exp::Act(ActionId(0))
    }

    fn q() -> Exp {
        Exp::Act(ActionId(1))
    }

    #[test]
    fn termination_function() {
        let c = ctx();
        assert_eq!(e_of(&p()), BExp::Zero);
        assert_eq!(e_of(&Exp::while_(b(), p())), BExp::not(b()));
        let e = e_of(&Exp::if_(b(), p(), Exp::skip()));
        assert!(ba_equiv(&c, &e, &BExp::not(b())).unwrap());
    }

    #[test]
    fn derivative_clauses() {
        let c = ctx();
        let alpha = Atom(1);
        assert_eq!(
            deriv(&c, alpha, &p()).unwrap(),
            DerivResult::Step(ActionId(0), Exp::skip())
        );
        assert_eq!(
            deriv(&c, alpha, &Exp::assert(b())).unwrap(),
            DerivResult::One
        );
        assert_eq!(
            deriv(&c, Atom(0), &Exp::assert(b())).unwrap(),
            DerivResult::Zero
        );
        assert_eq!(
            deriv(&c, alpha, &Exp::seq(p(), q())).unwrap(),
            DerivResult::Step(ActionId(0), Exp::seq(Exp::skip(), q()))
        );
        let w = Exp::while_(b(), p());
        assert_eq!(
            deriv(&c, alpha, &w).unwrap(),
            DerivResult::Step(ActionId(0), Exp::seq(Exp::skip(), w.clone()))
        );
        assert_eq!(deriv(&c, Atom(0), &w).unwrap(), DerivResult::One);
        // a non-productive body makes the loop reject on entry
        let w0 = Exp::while_(b(), Exp::skip());
        assert_eq!(deriv(&c, alpha, &w0).unwrap(), DerivResult::Zero);
    }

    #[test]
    fn guarded_sums() {
        let c = ctx();
        assert_eq!(dsum(&c, vec![]).unwrap(), Exp::fail());
        assert_eq!(
            dsum(&c, vec![(Atom(1), p())]).unwrap(),
            Exp::if_(b(), p(), Exp::fail())
        );
        assert_eq!(
            dsum(&c, vec![(Atom(1), p()), (Atom(0), q())]).unwrap(),
            Exp::if_(BExp::not(b()), q(), Exp::if_(b(), p(), Exp::fail()))
        );
        assert_eq!(
            dsum(&c, vec![(Atom(1), p()), (Atom(1), q())]),
            Err(Error::DuplicateAtom(1))
        );
    }

    #[test]
    fn decomposition_shapes() {
        let c = ctx();
        let (e, d) = fundamental_decompose(&c, &Exp::assert(b())).unwrap();
        assert_eq!((e, d), (b(), Exp::fail()));
        let (e, d) = fundamental_decompose(&c, &p()).unwrap();
        assert_eq!(e, BExp::Zero);
        let step = Exp::seq(p(), Exp::skip());
        assert_eq!(
            d,
            dsum(&c, vec![(Atom(0), step.clone()), (Atom(1), step)]).unwrap()
        );
        let w = Exp::while_(b(), p());
        let (e, d) = fundamental_decompose(&c, &w).unwrap();
        assert_eq!(e, BExp::not(b()));
        assert_eq!(
            d,
            Exp::if_(b(), Exp::seq(p(), Exp::seq(Exp::skip(), w)), Exp::fail())
        );
    }
}
