//! Lexer and recursive-descent parser.
//!
//! ```text
//! stmt    := ident '=' expr | expr
//! expr    := sum (cmp sum)?            cmp: < <= == != >= >
//! sum     := product (('+' | '-') product)*
//! product := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := atom ('^' integer)?
//! atom    := number | 'n' | 'inf' | 'eps' | ident | ident '(' args ')'
//!          | 'cyc' '[' expr (',' expr)* ']' | 'cyc' '{' expr (';' expr)* '}'
//!          | '(' expr ')'
//! ```
//!
//! `^` binds tighter than unary minus, so `-x^2` is `-(x^2)`. Comparisons
//! do not chain. `#` starts a comment.

use vext::scalar::rational_from_decimal;
use vext::vreal::CmpOp;
use vext::Rational;

use crate::diag::{Diagnostic, Pos};

/// Reserved words that cannot be assigned.
pub const RESERVED: [&str; 13] = [
    "n", "inf", "eps", "cyc", "st", "st~", "sign", "classify", "ln", "sin", "cos", "exp", "deriv",
];

const MAX_EXPONENT_DIGITS: usize = 4;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Number(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    LBracket,
    RBracket,
    LBrace,
    RBrace,
    Comma,
    Semi,
    Assign,
    Cmp(CmpOp),
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Number(s) => format!("number {s}"),
            Tok::Ident(s) => format!("identifier {s}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::LBracket => "'['".into(),
            Tok::RBracket => "']'".into(),
            Tok::LBrace => "'{'".into(),
            Tok::RBrace => "'}'".into(),
            Tok::Comma => "','".into(),
            Tok::Semi => "';'".into(),
            Tok::Assign => "'='".into(),
            Tok::Cmp(op) => format!("'{}'", op.symbol()),
            Tok::End => "end of input".into(),
        }
    }
}

fn lex(text: &str, line: usize) -> Result<Vec<(Tok, Pos)>, Diagnostic> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let pos_at = |i: usize| Pos { line, column: i + 1 };
    while i < chars.len() {
        let c = chars[i];
        let start = i;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(char::is_ascii_digit)) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '+' || chars[j] == '-') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    let digits_start = j;
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                    if j - digits_start > MAX_EXPONENT_DIGITS {
                        return Err(Diagnostic::syntax(pos_at(start), "exponent of the literal is too large", &[]));
                    }
                    i = j;
                }
            }
            out.push((Tok::Number(chars[start..i].iter().collect()), pos_at(start)));
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let mut word: String = chars[start..i].iter().collect();
            if word == "st" && chars.get(i) == Some(&'~') {
                word.push('~');
                i += 1;
            }
            out.push((Tok::Ident(word), pos_at(start)));
            continue;
        }
        let two: String = chars[i..(i + 2).min(chars.len())].iter().collect();
        let (tok, len) = match two.as_str() {
            "<=" => (Tok::Cmp(CmpOp::Le), 2),
            ">=" => (Tok::Cmp(CmpOp::Ge), 2),
            "==" => (Tok::Cmp(CmpOp::Eq), 2),
            "!=" => (Tok::Cmp(CmpOp::Ne), 2),
            _ => match c {
                '+' => (Tok::Plus, 1),
                '-' | '\u{2212}' => (Tok::Minus, 1),
                '*' => (Tok::Star, 1),
                '/' => (Tok::Slash, 1),
                '^' => (Tok::Caret, 1),
                '(' => (Tok::LParen, 1),
                ')' => (Tok::RParen, 1),
                '[' => (Tok::LBracket, 1),
                ']' => (Tok::RBracket, 1),
                '{' => (Tok::LBrace, 1),
                '}' => (Tok::RBrace, 1),
                ',' => (Tok::Comma, 1),
                ';' => (Tok::Semi, 1),
                '=' => (Tok::Assign, 1),
                '<' => (Tok::Cmp(CmpOp::Lt), 1),
                '>' => (Tok::Cmp(CmpOp::Gt), 1),
                other => return Err(Diagnostic::syntax(pos_at(start), format!("unexpected character {other:?}"), &[])),
            },
        };
        out.push((tok, pos_at(start)));
        i += len;
    }
    out.push((Tok::End, pos_at(chars.len())));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExprKind {
    Number(Rational),
    /// The index sequence `n`.
    Index,
    Inf,
    Eps,
    Ident(String),
    Cyc(Vec<Expr>),
    Neg(Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    Compare(CmpOp, Box<Expr>, Box<Expr>),
    Call(String, Vec<Expr>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Expr {
    pub kind: ExprKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Assign { name: String, pos: Pos, expr: Expr },
    Expr(Expr),
}

const ATOM_START: &[&str] = &["number", "identifier", "'('", "'-'", "cyc"];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, expected: &[&str]) -> Diagnostic {
        Diagnostic::syntax(self.pos(), format!("unexpected {}", self.peek().describe()), expected)
    }

    fn expect(&mut self, tok: Tok, label: &str) -> Result<Pos, Diagnostic> {
        if *self.peek() == tok {
            Ok(self.bump().1)
        } else {
            Err(self.unexpected(&[label]))
        }
    }

    fn statement(&mut self) -> Result<Option<Stmt>, Diagnostic> {
        if *self.peek() == Tok::End {
            return Ok(None);
        }
        let stmt = match (self.peek().clone(), &self.toks.get(self.at + 1).map(|t| &t.0)) {
            (Tok::Ident(name), Some(Tok::Assign)) => {
                let pos = self.pos();
                if RESERVED.contains(&name.as_str()) {
                    return Err(Diagnostic::syntax(pos, format!("{name} is reserved and cannot be assigned"), &[]));
                }
                self.bump();
                self.bump();
                Stmt::Assign { name, pos, expr: self.expr()? }
            }
            _ => Stmt::Expr(self.expr()?),
        };
        if *self.peek() != Tok::End {
            return Err(self.unexpected(&["an operator", "end of input"]));
        }
        Ok(Some(stmt))
    }

    fn expr(&mut self) -> Result<Expr, Diagnostic> {
        let lhs = self.sum()?;
        if let Tok::Cmp(op) = *self.peek() {
            let pos = self.bump().1;
            let rhs = self.sum()?;
            if let Tok::Cmp(_) = self.peek() {
                return Err(Diagnostic::syntax(self.pos(), "comparisons do not chain", &["an operator", "end of input"]));
            }
            return Ok(Expr { kind: ExprKind::Compare(op, Box::new(lhs), Box::new(rhs)), pos });
        }
        Ok(lhs)
    }

    fn sum(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            let pos = self.bump().1;
            let rhs = self.product()?;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn product(&mut self) -> Result<Expr, Diagnostic> {
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            let pos = self.bump().1;
            let rhs = self.unary()?;
            lhs = Expr { kind: ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), pos };
        }
    }

    fn unary(&mut self) -> Result<Expr, Diagnostic> {
        if *self.peek() == Tok::Minus {
            let pos = self.bump().1;
            let inner = self.unary()?;
            return Ok(Expr { kind: ExprKind::Neg(Box::new(inner)), pos });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, Diagnostic> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        let pos = self.bump().1;
        let exp_pos = self.pos();
        let Tok::Number(text) = self.peek().clone() else {
            return Err(Diagnostic::syntax(
                exp_pos,
                format!("the exponent must be a nonnegative integer literal, found {}", self.peek().describe()),
                &["integer"],
            ));
        };
        let k: u32 = text.parse().map_err(|_| {
            Diagnostic::syntax(exp_pos, format!("the exponent must be a nonnegative integer literal, found {text}"), &["integer"])
        })?;
        self.bump();
        if *self.peek() == Tok::Caret {
            return Err(Diagnostic::syntax(self.pos(), "powers do not chain; add parentheses", &["an operator", "end of input"]));
        }
        Ok(Expr { kind: ExprKind::Pow(Box::new(base), k), pos })
    }

    fn atom(&mut self) -> Result<Expr, Diagnostic> {
        let pos = self.pos();
        let kind = match self.peek().clone() {
            Tok::Number(text) => {
                self.bump();
                let q = rational_from_decimal(&text)
                    .ok_or_else(|| Diagnostic::syntax(pos, format!("malformed number {text}"), &["number"]))?;
                ExprKind::Number(q)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                self.expect(Tok::RParen, "')'")?;
                return Ok(inner);
            }
            Tok::Ident(name) => {
                self.bump();
                match name.as_str() {
                    "n" => ExprKind::Index,
                    "inf" => ExprKind::Inf,
                    "eps" => ExprKind::Eps,
                    "cyc" => self.cyc()?,
                    _ if *self.peek() == Tok::LParen => {
                        self.bump();
                        let mut args = Vec::new();
                        if *self.peek() != Tok::RParen {
                            args.push(self.expr()?);
                            while *self.peek() == Tok::Comma {
                                self.bump();
                                args.push(self.expr()?);
                            }
                        }
                        if *self.peek() != Tok::RParen {
                            return Err(self.unexpected(&["','", "')'"]));
                        }
                        self.bump();
                        ExprKind::Call(name, args)
                    }
                    _ => ExprKind::Ident(name),
                }
            }
            _ => return Err(self.unexpected(ATOM_START)),
        };
        Ok(Expr { kind, pos })
    }

    fn cyc(&mut self) -> Result<ExprKind, Diagnostic> {
        let (close, sep, close_label, sep_label) = match self.peek() {
            Tok::LBracket => (Tok::RBracket, Tok::Comma, "']'", "','"),
            Tok::LBrace => (Tok::RBrace, Tok::Semi, "'}'", "';'"),
            _ => return Err(self.unexpected(&["'['", "'{'"])),
        };
        self.bump();
        let mut items = vec![self.expr()?];
        while *self.peek() == sep {
            self.bump();
            items.push(self.expr()?);
        }
        if *self.peek() != close {
            return Err(self.unexpected(&[sep_label, close_label]));
        }
        self.bump();
        Ok(ExprKind::Cyc(items))
    }
}

/// Parses one line; `None` for a blank or comment-only line.
pub fn parse_line(text: &str, line: usize) -> Result<Option<Stmt>, Diagnostic> {
    let mut p = Parser { toks: lex(text, line)?, at: 0 };
    p.statement()
}
