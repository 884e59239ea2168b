//! Recursive-descent parser.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' uint)?
//! atom  := number | 'z' | 'lam' | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-z^4` is `-(z^4)`.

use std::fmt;

use num_complex::Complex64;
use thiserror::Error;

use super::ast::{ExprAst, Span, Var};

/// Parenthesis/unary nesting limit; keeps hostile input off the stack.
pub const MAX_NESTING: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Position {
    pub line: usize,
    pub column: usize,
    pub offset: usize,
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at {at}: found {found}, expected one of {}", expected.join(", "))]
    Syntax {
        at: Position,
        found: String,
        expected: Vec<&'static str>,
    },
    #[error("exponent error at {at}: `{found}` is not a non-negative integer")]
    Exponent { at: Position, found: String },
    #[error("expression nested deeper than {MAX_NESTING} levels at {at}")]
    TooDeep { at: Position },
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number { text: String, imaginary: bool },
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Unknown(char),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number { text, imaginary } => {
                format!("number `{text}{}`", if *imaginary { "i" } else { "" })
            }
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Caret => "`^`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Unknown(c) => format!("character `{c}`"),
            Tok::Eof => "end of input".into(),
        }
    }
}

struct Token {
    tok: Tok,
    at: Position,
    end: usize,
}

fn lex(src: &str) -> Vec<Token> {
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let (offset, ch) = chars[i];
        let at = Position {
            line,
            column: col,
            offset,
        };
        let start = i;
        let tok = if ch == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        } else if ch.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        } else if ch.is_ascii_digit() || ch == '.' {
            let mut text = String::new();
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                text.push(chars[i].1);
                i += 1;
            }
            if i < chars.len() && chars[i].1 == '.' {
                text.push('.');
                i += 1;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    text.push(chars[i].1);
                    i += 1;
                }
            }
            let imaginary = i < chars.len() && chars[i].1 == 'i';
            if imaginary {
                i += 1;
            }
            Tok::Number { text, imaginary }
        } else if ch.is_alphabetic() || ch == '_' {
            let mut s = String::new();
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                s.push(chars[i].1);
                i += 1;
            }
            Tok::Ident(s)
        } else {
            i += 1;
            match ch {
                '+' => Tok::Plus,
                '-' => Tok::Minus,
                '*' => Tok::Star,
                '/' => Tok::Slash,
                '^' => Tok::Caret,
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                c => Tok::Unknown(c),
            }
        };
        col += i - start;
        let end = chars.get(i).map_or(src.len(), |&(o, _)| o);
        out.push(Token { tok, at, end });
    }
    let at = Position {
        line,
        column: col,
        offset: src.len(),
    };
    out.push(Token {
        tok: Tok::Eof,
        at,
        end: src.len(),
    });
    out
}

const ATOM_START: &[&str] = &["number", "`z`", "`lam`", "`(`", "`-`"];
const AFTER_OPERAND: &[&str] = &["`+`", "`-`", "`*`", "`/`", "`^`"];

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    depth: usize,
}

pub fn parse(source: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser {
        toks: lex(source),
        pos: 0,
        depth: 0,
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::Eof {
        let mut expected = AFTER_OPERAND.to_vec();
        expected.push("end of input");
        return Err(p.unexpected(expected));
    }
    Ok(e)
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> &Token {
        let t = &self.toks[self.pos];
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: Vec<&'static str>) -> ParseError {
        let t = self.peek();
        ParseError::Syntax {
            at: t.at,
            found: t.tok.describe(),
            expected,
        }
    }

    fn descend(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_NESTING {
            return Err(ParseError::TooDeep { at: self.peek().at });
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<ExprAst, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Plus => {
                    self.bump();
                    lhs = ExprAst::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Minus => {
                    self.bump();
                    lhs = ExprAst::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<ExprAst, ParseError> {
        let start = self.peek().at.offset;
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Star => {
                    self.bump();
                    lhs = ExprAst::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Slash => {
                    self.bump();
                    let rhs = self.unary()?;
                    let end = self.toks[self.pos.saturating_sub(1)].end;
                    lhs = ExprAst::Div(Box::new(lhs), Box::new(rhs), Span { start, end });
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<ExprAst, ParseError> {
        if self.peek().tok == Tok::Minus {
            self.bump();
            self.descend()?;
            let inner = self.unary()?;
            self.depth -= 1;
            return Ok(ExprAst::Neg(Box::new(inner)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<ExprAst, ParseError> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let t = self.peek();
        let at = t.at;
        let found = match &t.tok {
            Tok::Number {
                text,
                imaginary: false,
            } if !text.contains('.') => match text.parse::<u32>() {
                Ok(e) => {
                    self.bump();
                    return Ok(ExprAst::Pow(Box::new(base), e));
                }
                Err(_) => text.clone(),
            },
            Tok::Number { text, imaginary } => {
                format!("{text}{}", if *imaginary { "i" } else { "" })
            }
            Tok::Minus => match &self.toks[self.pos + 1].tok {
                Tok::Number { text, .. } => format!("-{text}"),
                other => format!("- {}", other.describe()),
            },
            Tok::Ident(_) | Tok::LParen => t.tok.describe(),
            _ => return Err(self.unexpected(vec!["non-negative integer"])),
        };
        Err(ParseError::Exponent { at, found })
    }

    fn atom(&mut self) -> Result<ExprAst, ParseError> {
        let t = self.peek();
        let at = t.at;
        match t.tok.clone() {
            Tok::Number { text, imaginary } => {
                let value = parse_decimal(&text).ok_or_else(|| ParseError::Syntax {
                    at,
                    found: format!("malformed number `{text}`"),
                    expected: vec!["number"],
                })?;
                self.bump();
                Ok(ExprAst::Number(if imaginary {
                    Complex64::new(0.0, value)
                } else {
                    Complex64::new(value, 0.0)
                }))
            }
            Tok::Ident(s) if s == "z" => {
                self.bump();
                Ok(ExprAst::Var(Var::Z))
            }
            Tok::Ident(s) if s == "lam" => {
                self.bump();
                Ok(ExprAst::Var(Var::Lam))
            }
            Tok::LParen => {
                self.bump();
                self.descend()?;
                let e = self.expr()?;
                self.depth -= 1;
                if self.peek().tok != Tok::RParen {
                    let mut expected = AFTER_OPERAND.to_vec();
                    expected.push("`)`");
                    return Err(self.unexpected(expected));
                }
                self.bump();
                Ok(e)
            }
            _ => Err(self.unexpected(ATOM_START.to_vec())),
        }
    }
}

/// `digits ('.' digits?)?` or `'.' digits`; a lone `.` is rejected.
fn parse_decimal(text: &str) -> Option<f64> {
    if text == "." || text.is_empty() {
        return None;
    }
    let v: f64 = if let Some(rest) = text.strip_prefix('.') {
        format!("0.{rest}").parse().ok()?
    } else {
        text.trim_end_matches('.').parse().ok()?
    };
    v.is_finite().then_some(v)
}
