//! Keyword-syntax printer. Output parses back to the same tree.

use crate::boolalg::{BExp, TestContext};

use super::{Exp, ProgramHeader};

/// Prints `e` in keyword syntax (`if/then/else`, `while/do`, `;`).
pub fn pretty(header: &ProgramHeader, e: &Exp) -> String {
    let mut out = String::new();
    write_seq(header, e, &mut out);
    out
}

/// Prints `b` with `not`/`and`/`or`, adding only the parentheses the grammar needs.
pub fn pretty_bexp(ctx: &TestContext, b: &BExp) -> String {
    let mut out = String::new();
    write_bexp(ctx, b, 0, &mut out);
    out
}

fn write_seq(h: &ProgramHeader, e: &Exp, out: &mut String) {
    // walk the right spine iteratively; long sequences are right-nested
    let mut cur = e;
    while let Exp::Seq(l, r) = cur {
        if matches!(**l, Exp::Seq(..)) {
            out.push('(');
            write_seq(h, l, out);
            out.push(')');
        } else {
            write_unit(h, l, out);
        }
        out.push_str("; ");
        cur = r;
    }
    write_unit(h, cur, out);
}

// A branch or loop body is parsed at the guarded-union level, so a sequence needs parentheses.
fn write_branch(h: &ProgramHeader, e: &Exp, out: &mut String) {
    if matches!(e, Exp::Seq(..)) {
        out.push('(');
        write_seq(h, e, out);
        out.push(')');
    } else {
        write_unit(h, e, out);
    }
}

fn write_unit(h: &ProgramHeader, e: &Exp, out: &mut String) {
    match e {
        Exp::Act(a) => out.push_str(h.action_name(*a)),
        Exp::Assert(BExp::One) => out.push_str("skip"),
        Exp::Assert(BExp::Zero) => out.push_str("fail"),
        Exp::Assert(b) => {
            out.push_str("assert ");
            write_bexp(h.tests(), b, 0, out);
        }
        Exp::If(b, e, f) => {
            out.push_str("if ");
            write_bexp(h.tests(), b, 0, out);
            out.push_str(" then ");
            write_branch(h, e, out);
            out.push_str(" else ");
            write_branch(h, f, out);
        }
        Exp::While(b, e) => {
            out.push_str("while ");
            write_bexp(h.tests(), b, 0, out);
            out.push_str(" do ");
            write_branch(h, e, out);
        }
        Exp::Seq(..) => write_branch(h, e, out),
    }
}

// Precedence levels: or = 0, and = 1, not = 2, atomic = 3.
fn level(b: &BExp) -> u8 {
    match b {
        BExp::Or(..) => 0,
        BExp::And(..) => 1,
        BExp::Not(_) => 2,
        _ => 3,
    }
}

fn write_bexp(ctx: &TestContext, b: &BExp, min: u8, out: &mut String) {
    let paren = level(b) < min;
    if paren {
        out.push('(');
    }
    match b {
        BExp::Zero => out.push('0'),
        BExp::One => out.push('1'),
        BExp::Test(t) => out.push_str(ctx.name(*t)),
        BExp::Or(l, r) => {
            write_bexp(ctx, l, 0, out);
            out.push_str(" or ");
            write_bexp(ctx, r, 1, out);
        }
        BExp::And(l, r) => {
            write_bexp(ctx, l, 1, out);
            out.push_str(" and ");
            write_bexp(ctx, r, 2, out);
        }
        BExp::Not(inner) => {
            out.push_str("not ");
            write_bexp(ctx, inner, 2, out);
        }
    }
    if paren {
        out.push(')');
    }
}
