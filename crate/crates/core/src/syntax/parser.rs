//! Recursive-descent parser for program files.
//!
//! ```text
//! file    := header section ( "---" section )*
//! header  := "tests" ":" names ";" "actions" ":" names ";"
//! seq     := union ( (";" | "·") seq )?
//! union   := postfix ( "+" "[" bexp "]" union )?
//! postfix := primary ( "^" "[" bexp "]" )*
//! primary := "if" bexp "then" union "else" union
//!          | "while" bexp "do" union
//!          | "assert" bexp | "skip" | "fail"
//!          | action | "(" seq ")" | bexp
//! bexp    := conj ( "or" conj )*
//! conj    := neg ( "and" neg )*
//! neg     := "not" neg | "0" | "1" | test | "(" bexp ")"
//! ```
//!
//! A `---` line on its own separates expressions. `#` starts a comment.

use crate::boolalg::{BExp, TestContext};
use crate::error::{Error, Result};

use super::{Exp, ProgramHeader};

const KEYWORDS: &[&str] = &[
    "if", "then", "else", "while", "do", "assert", "skip", "fail", "not", "and", "or", "tests",
    "actions",
];

/// A parsed program file: its header and one or two expressions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Program {
    pub header: ProgramHeader,
    pub exps: Vec<Exp>,
}

/// A Hoare triple `{pre} body {post}` read from a three-section file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoareQuery {
    pub header: ProgramHeader,
    pub pre: BExp,
    pub body: Exp,
    pub post: BExp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    LParen,
    RParen,
    LBracket,
    RBracket,
    Semi,
    Comma,
    Colon,
    Plus,
    Caret,
    Sep,
    Eof,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut last_line = 1;
    for (ln, line) in text.lines().enumerate() {
        let line_no = ln + 1;
        last_line = line_no;
        if line.trim() == "---" {
            let column = line.find('-').unwrap_or(0) + 1;
            out.push(Token {
                tok: Tok::Sep,
                line: line_no,
                column,
            });
            continue;
        }
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let column = i + 1;
            let simple = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                '[' => Some(Tok::LBracket),
                ']' => Some(Tok::RBracket),
                ';' | '·' => Some(Tok::Semi),
                ',' => Some(Tok::Comma),
                ':' => Some(Tok::Colon),
                '+' => Some(Tok::Plus),
                '^' => Some(Tok::Caret),
                _ => None,
            };
            if let Some(tok) = simple {
                out.push(Token {
                    tok,
                    line: line_no,
                    column,
                });
                i += 1;
                continue;
            }
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                    i += 1;
                }
                let lit: String = chars[start..i].iter().collect();
                let tok = match lit.as_str() {
                    "0" => Tok::Zero,
                    "1" => Tok::One,
                    _ => {
                        return Err(Error::Parse {
                            line: line_no,
                            column,
                            message: format!("unexpected literal `{lit}` (only 0 and 1)"),
                        })
                    }
                };
                out.push(Token {
                    tok,
                    line: line_no,
                    column,
                });
                continue;
            }
            if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len()
                    && (chars[i].is_alphanumeric() || chars[i] == '_' || chars[i] == '\'')
                {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: line_no,
                    column,
                });
                continue;
            }
            return Err(Error::Parse {
                line: line_no,
                column,
                message: format!("unexpected character `{c}`"),
            });
        }
    }
    out.push(Token {
        tok: Tok::Eof,
        line: last_line + 1,
        column: 1,
    });
    Ok(out)
}

struct Parser<'h> {
    toks: Vec<Token>,
    pos: usize,
    header: Option<&'h ProgramHeader>,
}

impl<'h> Parser<'h> {
    fn new(text: &str) -> Result<Self> {
        Ok(Parser {
            toks: lex(text)?,
            pos: 0,
            header: None,
        })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn here(&self) -> (usize, usize) {
        let t = &self.toks[self.pos];
        (t.line, t.column)
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T> {
        let (line, column) = self.here();
        Err(Error::Parse {
            line,
            column,
            message: message.into(),
        })
    }

    fn describe(&self) -> String {
        match self.peek() {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Zero => "`0`".into(),
            Tok::One => "`1`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::LBracket => "`[`".into(),
            Tok::RBracket => "`]`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Colon => "`:`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Sep => "`---`".into(),
            Tok::Eof => "end of input".into(),
        }
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", self.describe()))
        }
    }

    fn is_keyword(&self, kw: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == kw)
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<()> {
        if self.is_keyword(kw) {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected `{kw}`, found {}", self.describe()))
        }
    }

    fn header(&self) -> &'h ProgramHeader {
        self.header.expect("header parsed before expressions")
    }

    fn parse_header(&mut self) -> Result<ProgramHeader> {
        self.expect_keyword("tests")?;
        self.expect(Tok::Colon, "`:`")?;
        let tests = self.parse_names()?;
        self.expect(Tok::Semi, "`;` after test list")?;
        self.expect_keyword("actions")?;
        self.expect(Tok::Colon, "`:`")?;
        let actions = self.parse_names()?;
        self.expect(Tok::Semi, "`;` after action list")?;
        let (line, column) = self.here();
        let at = |e: Error| match e {
            Error::Parse { .. } => e,
            other => Error::Parse {
                line,
                column,
                message: format!("invalid header: {other}"),
            },
        };
        let ctx = TestContext::new(&tests).map_err(at)?;
        ProgramHeader::new(ctx, actions).map_err(at)
    }

    fn parse_names(&mut self) -> Result<Vec<String>> {
        let mut names = Vec::new();
        loop {
            match self.peek().clone() {
                Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                    self.bump();
                    names.push(name);
                }
                Tok::Ident(name) => {
                    return self.error(format!("`{name}` is a keyword and cannot be declared"))
                }
                _ => return self.error(format!("expected a name, found {}", self.describe())),
            }
            if *self.peek() == Tok::Comma {
                self.bump();
            } else {
                return Ok(names);
            }
        }
    }

    fn parse_seq(&mut self) -> Result<Exp> {
        let mut items = vec![self.parse_union()?];
        while *self.peek() == Tok::Semi {
            self.bump();
            items.push(self.parse_union()?);
        }
        // right-associative; folded iteratively so long chains need no deep recursion
        let mut acc = items.pop().expect("at least one item");
        while let Some(prev) = items.pop() {
            acc = Exp::seq(prev, acc);
        }
        Ok(acc)
    }

    fn parse_union(&mut self) -> Result<Exp> {
        let mut lhs = vec![];
        let mut last = self.parse_postfix()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            self.expect(Tok::LBracket, "`[` after `+`")?;
            let guard = self.parse_bexp()?;
            self.expect(Tok::RBracket, "`]`")?;
            lhs.push((last, guard));
            last = self.parse_postfix()?;
        }
        let mut acc = last;
        while let Some((e, guard)) = lhs.pop() {
            acc = Exp::if_(guard, e, acc);
        }
        Ok(acc)
    }

    fn parse_postfix(&mut self) -> Result<Exp> {
        let mut e = self.parse_primary()?;
        while *self.peek() == Tok::Caret {
            self.bump();
            self.expect(Tok::LBracket, "`[` after `^`")?;
            let guard = self.parse_bexp()?;
            self.expect(Tok::RBracket, "`]`")?;
            e = Exp::while_(guard, e);
        }
        Ok(e)
    }

    fn parse_primary(&mut self) -> Result<Exp> {
        match self.peek().clone() {
            Tok::Ident(kw) if kw == "if" => {
                self.bump();
                let guard = self.parse_bexp()?;
                self.expect_keyword("then")?;
                let then = self.parse_union()?;
                self.expect_keyword("else")?;
                let other = self.parse_union()?;
                Ok(Exp::if_(guard, then, other))
            }
            Tok::Ident(kw) if kw == "while" => {
                self.bump();
                let guard = self.parse_bexp()?;
                self.expect_keyword("do")?;
                let body = self.parse_union()?;
                Ok(Exp::while_(guard, body))
            }
            Tok::Ident(kw) if kw == "assert" => {
                self.bump();
                Ok(Exp::Assert(self.parse_bexp()?))
            }
            Tok::Ident(kw) if kw == "skip" => {
                self.bump();
                Ok(Exp::skip())
            }
            Tok::Ident(kw) if kw == "fail" => {
                self.bump();
                Ok(Exp::fail())
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) || name == "not" => {
                if let Some(a) = self.header().lookup_action(&name) {
                    self.bump();
                    return Ok(Exp::Act(a));
                }
                Ok(Exp::Assert(self.parse_bexp()?))
            }
            Tok::Zero | Tok::One => Ok(Exp::Assert(self.parse_bexp()?)),
            Tok::LParen => {
                let save = self.pos;
                if let Ok(b) = self.parse_bexp() {
                    return Ok(Exp::Assert(b));
                }
                self.pos = save;
                self.bump();
                let e = self.parse_seq()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(e)
            }
            _ => self.error(format!("expected an expression, found {}", self.describe())),
        }
    }

    fn parse_bexp(&mut self) -> Result<BExp> {
        let mut acc = self.parse_conj()?;
        while self.is_keyword("or") {
            self.bump();
            acc = BExp::or(acc, self.parse_conj()?);
        }
        Ok(acc)
    }

    fn parse_conj(&mut self) -> Result<BExp> {
        let mut acc = self.parse_neg()?;
        while self.is_keyword("and") {
            self.bump();
            acc = BExp::and(acc, self.parse_neg()?);
        }
        Ok(acc)
    }

    fn parse_neg(&mut self) -> Result<BExp> {
        match self.peek().clone() {
            Tok::Ident(kw) if kw == "not" => {
                self.bump();
                Ok(BExp::not(self.parse_neg()?))
            }
            Tok::Zero => {
                self.bump();
                Ok(BExp::Zero)
            }
            Tok::One => {
                self.bump();
                Ok(BExp::One)
            }
            Tok::LParen => {
                self.bump();
                let b = self.parse_bexp()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(b)
            }
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let (line, column) = self.here();
                match self.header().tests().lookup(&name) {
                    Some(t) => {
                        self.bump();
                        Ok(BExp::Test(t))
                    }
                    None if self.header().lookup_action(&name).is_some() => {
                        self.error(format!("`{name}` is an action, expected a test"))
                    }
                    None => Err(Error::Undeclared { name, line, column }),
                }
            }
            _ => self.error(format!("expected a test, found {}", self.describe())),
        }
    }

    fn end_of_section(&self) -> bool {
        matches!(self.peek(), Tok::Sep | Tok::Eof)
    }

    fn finish_section(&self, what: &str) -> Result<()> {
        if self.end_of_section() {
            Ok(())
        } else {
            self.error(format!("unexpected {} after {what}", self.describe()))
        }
    }
}

/// Parses a header followed by one expression, or two separated by `---`.
pub fn parse(text: &str) -> Result<Program> {
    let mut p = Parser::new(text)?;
    let header = p.parse_header()?;
    let exps = {
        let mut p = Parser {
            toks: std::mem::take(&mut p.toks),
            pos: p.pos,
            header: Some(&header),
        };
        let mut exps = vec![p.parse_seq()?];
        p.finish_section("expression")?;
        while *p.peek() == Tok::Sep {
            p.bump();
            if exps.len() == 2 {
                return p.error("at most two expressions may be given");
            }
            exps.push(p.parse_seq()?);
            p.finish_section("expression")?;
        }
        exps
    };
    Ok(Program { header, exps })
}

/// Parses a header followed by three sections: precondition, program, postcondition.
pub fn parse_hoare(text: &str) -> Result<HoareQuery> {
    let mut p = Parser::new(text)?;
    let header = p.parse_header()?;
    let (pre, body, post) = {
        let mut p = Parser {
            toks: std::mem::take(&mut p.toks),
            pos: p.pos,
            header: Some(&header),
        };
        let pre = p.parse_bexp()?;
        p.finish_section("precondition")?;
        p.expect(Tok::Sep, "`---` before the program")?;
        let body = p.parse_seq()?;
        p.finish_section("program")?;
        p.expect(Tok::Sep, "`---` before the postcondition")?;
        let post = p.parse_bexp()?;
        p.expect(Tok::Eof, "end of input after the postcondition")?;
        (pre, body, post)
    };
    Ok(HoareQuery {
        header,
        pre,
        body,
        post,
    })
}

/// Parses a bare expression against an existing header.
pub fn parse_exp_with(header: &ProgramHeader, text: &str) -> Result<Exp> {
    let mut p = Parser::new(text)?;
    p.header = Some(header);
    let e = p.parse_seq()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(e)
}

/// Parses a bare Boolean expression against an existing header.
pub fn parse_bexp_with(header: &ProgramHeader, text: &str) -> Result<BExp> {
    let mut p = Parser::new(text)?;
    p.header = Some(header);
    let b = p.parse_bexp()?;
    p.expect(Tok::Eof, "end of input")?;
    Ok(b)
}
