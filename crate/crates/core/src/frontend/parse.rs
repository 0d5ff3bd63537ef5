//! Lexer and recursive-descent parser for the straight-line source language:
//!
//! ```text
//! program := 'def' IDENT '(' IDENT ')' ':' stmt* 'return' expr
//! stmt    := IDENT '=' expr            (separated by newlines or ';')
//! expr    := term (('+' | '-') term)*
//! term    := factor ('*' factor)*
//! factor  := atom ('**' INT)?
//! atom    := IDENT | INT | '(' expr ')'
//! ```
//!
//! `#` starts a comment. Indentation is ignored.

use std::collections::HashSet;

use num_bigint::BigInt;

use super::ast::{Assignment, Ast, BinOp, Expr};
use super::FrontendError;

/// Names the flattener claims for itself.
pub const RESERVED: [&str; 2] = ["one", "out"];
const MAX_EXPONENT: u32 = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Def,
    Return,
    Ident(String),
    Int(BigInt),
    LParen,
    RParen,
    Colon,
    Assign,
    Plus,
    Minus,
    Star,
    StarStar,
    Sep,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Def => "'def'".into(),
            Tok::Return => "'return'".into(),
            Tok::Ident(s) => format!("identifier '{s}'"),
            Tok::Int(n) => format!("integer {n}"),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Colon => "':'".into(),
            Tok::Assign => "'='".into(),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::StarStar => "'**'".into(),
            Tok::Sep => "end of statement".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, FrontendError> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (li + 1, i + 1);
            let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line, col });
            match c {
                '#' => break,
                c if c.is_whitespace() => {
                    i += 1;
                    continue;
                }
                c if c.is_ascii_alphabetic() || c == '_' => {
                    let start = i;
                    while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                        i += 1;
                    }
                    let word: String = chars[start..i].iter().collect();
                    let tok = match word.as_str() {
                        "def" => Tok::Def,
                        "return" => Tok::Return,
                        _ => Tok::Ident(word),
                    };
                    push(&mut out, tok);
                    continue;
                }
                c if c.is_ascii_digit() => {
                    let start = i;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                    let digits: String = chars[start..i].iter().collect();
                    push(&mut out, Tok::Int(digits.parse().expect("ascii digits")));
                    continue;
                }
                '*' if chars.get(i + 1) == Some(&'*') => {
                    push(&mut out, Tok::StarStar);
                    i += 2;
                    continue;
                }
                '*' => push(&mut out, Tok::Star),
                '+' => push(&mut out, Tok::Plus),
                '-' => push(&mut out, Tok::Minus),
                '(' => push(&mut out, Tok::LParen),
                ')' => push(&mut out, Tok::RParen),
                ':' => push(&mut out, Tok::Colon),
                '=' => push(&mut out, Tok::Assign),
                ';' => push(&mut out, Tok::Sep),
                other => {
                    return Err(FrontendError::Syntax {
                        line,
                        col,
                        msg: format!("unexpected character {other:?}"),
                    })
                }
            }
            i += 1;
        }
        out.push(Token {
            tok: Tok::Sep,
            line: li + 1,
            col: chars.len() + 1,
        });
    }
    let (line, col) = out.last().map_or((1, 1), |t| (t.line, t.col));
    out.push(Token { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Names bound so far, for use-before-definition and reassignment checks.
    bound: HashSet<String>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error_at(t: &Token, msg: String) -> FrontendError {
        FrontendError::Syntax {
            line: t.line,
            col: t.col,
            msg,
        }
    }

    fn expect(&mut self, want: Tok, ctx: &str) -> Result<Token, FrontendError> {
        let t = self.next();
        if t.tok == want {
            Ok(t)
        } else {
            Err(Self::error_at(
                &t,
                format!("expected {} {ctx}, found {}", want.describe(), t.tok.describe()),
            ))
        }
    }

    fn ident(&mut self, ctx: &str) -> Result<(String, Token), FrontendError> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => Err(Self::error_at(
                &t,
                format!("expected identifier {ctx}, found {}", other.describe()),
            )),
        }
    }

    fn skip_seps(&mut self) {
        while self.peek().tok == Tok::Sep {
            self.next();
        }
    }

    fn bind(&mut self, name: &str, at: &Token) -> Result<(), FrontendError> {
        if RESERVED.contains(&name) {
            return Err(FrontendError::ReservedName {
                name: name.to_string(),
                line: at.line,
                col: at.col,
            });
        }
        if !self.bound.insert(name.to_string()) {
            return Err(FrontendError::Reassignment {
                name: name.to_string(),
                line: at.line,
                col: at.col,
            });
        }
        Ok(())
    }

    fn program(&mut self) -> Result<Ast, FrontendError> {
        self.skip_seps();
        self.expect(Tok::Def, "at start of program")?;
        let (name, _) = self.ident("after 'def'")?;
        self.expect(Tok::LParen, "after function name")?;
        let (param, ptok) = self.ident("as the function parameter")?;
        self.bind(&param, &ptok)?;
        self.expect(Tok::RParen, "after parameter")?;
        self.expect(Tok::Colon, "after parameter list")?;

        let mut assignments = Vec::new();
        loop {
            self.skip_seps();
            let t = self.peek().clone();
            match t.tok.clone() {
                Tok::Return => {
                    self.next();
                    let ret = self.expr()?;
                    self.skip_seps();
                    let end = self.next();
                    if end.tok != Tok::Eof {
                        return Err(Self::error_at(
                            &end,
                            format!("unexpected {} after return", end.tok.describe()),
                        ));
                    }
                    return Ok(Ast {
                        name,
                        param,
                        assignments,
                        ret,
                    });
                }
                Tok::Ident(_) => {
                    let (target, ttok) = self.ident("")?;
                    self.expect(Tok::Assign, "in assignment")?;
                    // Right-hand side sees only earlier bindings.
                    let expr = self.expr()?;
                    self.bind(&target, &ttok)?;
                    let sep = self.peek().clone();
                    if sep.tok != Tok::Sep {
                        return Err(Self::error_at(
                            &sep,
                            format!("expected end of statement, found {}", sep.tok.describe()),
                        ));
                    }
                    assignments.push(Assignment { target, expr });
                }
                Tok::Eof => return Err(Self::error_at(&t, "missing return statement".into())),
                other => {
                    return Err(Self::error_at(
                        &t,
                        format!("expected statement, found {}", other.describe()),
                    ))
                }
            }
        }
    }

    fn expr(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek().tok {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.next();
            let rhs = self.term()?;
            lhs = Expr::bin(lhs, op, rhs);
        }
    }

    fn term(&mut self) -> Result<Expr, FrontendError> {
        let mut lhs = self.factor()?;
        while self.peek().tok == Tok::Star {
            self.next();
            let rhs = self.factor()?;
            lhs = Expr::bin(lhs, BinOp::Mul, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, FrontendError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::StarStar {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        let k = match &t.tok {
            Tok::Int(n) => u32::try_from(n).ok().filter(|k| (1..=MAX_EXPONENT).contains(k)),
            other => {
                return Err(Self::error_at(
                    &t,
                    format!("exponent must be an integer literal, found {}", other.describe()),
                ))
            }
        };
        let k = k.ok_or_else(|| {
            Self::error_at(&t, format!("exponent must be between 1 and {MAX_EXPONENT}"))
        })?;
        Ok(Expr::pow(base, k))
    }

    fn atom(&mut self) -> Result<Expr, FrontendError> {
        let t = self.next();
        match t.tok.clone() {
            Tok::Ident(name) => {
                if !self.bound.contains(&name) {
                    return Err(FrontendError::UndefinedVariable {
                        name,
                        line: t.line,
                        col: t.col,
                    });
                }
                Ok(Expr::Var(name))
            }
            Tok::Int(n) => Ok(Expr::Lit(n)),
            Tok::LParen => {
                let e = self.expr()?;
                self.expect(Tok::RParen, "to close '('")?;
                Ok(e)
            }
            other => Err(Self::error_at(
                &t,
                format!("expected expression, found {}", other.describe()),
            )),
        }
    }
}

/// Parses and validates a program.
pub fn parse_source(text: &str) -> Result<Ast, FrontendError> {
    let toks = lex(text)?;
    Parser {
        toks,
        pos: 0,
        bound: HashSet::new(),
    }
    .program()
}
