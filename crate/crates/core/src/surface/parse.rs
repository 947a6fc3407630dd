//! Divisor expressions such as `9H - 2F1 - ... - 2F8 - 5E1 - 4E2 - 7E3`.
//!
//! ```text
//! expr  := ['+'|'-'] term (('+'|'-') term)*
//! term  := INT ['*'] atom | INT | atom | '...'
//! atom  := NAME | '(' expr ')'
//! ```
//!
//! Names are registry names, case-insensitive. `...` between two terms of the
//! same family and coefficient (`F1`, `F8`) fills in the skipped indices.

use super::{DivY, SurfaceModel};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("ellipsis must sit between two terms of one family with equal coefficients")]
    BadEllipsis,
    #[error("coefficient overflow")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(i64),
    Name(String),
    Plus,
    Minus,
    Star,
    Open,
    Close,
    Dots,
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let b: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push((start, Tok::Plus));
                i += 1
            }
            '-' | '−' => {
                out.push((start, Tok::Minus));
                i += 1
            }
            '*' | '·' => {
                out.push((start, Tok::Star));
                i += 1
            }
            '(' => {
                out.push((start, Tok::Open));
                i += 1
            }
            ')' => {
                out.push((start, Tok::Close));
                i += 1
            }
            '…' => {
                out.push((start, Tok::Dots));
                i += 1
            }
            '.' => {
                if b.get(i + 1) == Some(&'.') && b.get(i + 2) == Some(&'.') {
                    out.push((start, Tok::Dots));
                    i += 3;
                } else {
                    return Err(ParseError::Syntax { pos: start, msg: "stray '.'".into() });
                }
            }
            c if c.is_ascii_digit() => {
                while i < b.len() && b[i].is_ascii_digit() {
                    i += 1;
                }
                let t: String = b[start..i].iter().collect();
                out.push((start, Tok::Int(t.parse().map_err(|_| ParseError::Overflow)?)));
            }
            c if c.is_alphabetic() || c == 'ℓ' => {
                while i < b.len() && (b[i].is_alphanumeric() || b[i] == '_') {
                    i += 1;
                }
                let t: String = b[start..i].iter().collect();
                out.push((start, Tok::Name(if t == "ℓ" { "l".into() } else { t })));
            }
            _ => return Err(ParseError::Syntax { pos: start, msg: format!("unexpected '{c}'") }),
        }
    }
    Ok(out)
}

enum Item {
    Named { coef: i64, family: String, idx: u32 },
    Vector(i64, DivY),
    Dots,
}

struct Parser<'a> {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    model: &'a SurfaceModel,
    end: usize,
}

fn split_name(name: &str) -> Option<(String, u32)> {
    let cut = name.find(|c: char| c.is_ascii_digit())?;
    let (fam, idx) = name.split_at(cut);
    Some((fam.to_lowercase(), idx.parse().ok()?))
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn here(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |t| t.0)
    }

    fn err<T>(&self, msg: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax { pos: self.here(), msg: msg.into() })
    }

    fn lookup(&self, name: &str) -> Result<DivY, ParseError> {
        self.model.class(name).map_err(|_| ParseError::UnknownName(name.to_string()))
    }

    fn expr(&mut self) -> Result<DivY, ParseError> {
        let mut items: Vec<Item> = Vec::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    1
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            items.push(self.term(sign)?);
        }
        self.resolve(items)
    }

    fn term(&mut self, sign: i64) -> Result<Item, ParseError> {
        let mut coef = sign;
        if let Some(Tok::Int(k)) = self.peek() {
            coef = coef.checked_mul(*k).ok_or(ParseError::Overflow)?;
            self.pos += 1;
            if let Some(Tok::Star) = self.peek() {
                self.pos += 1;
            }
            if !matches!(self.peek(), Some(Tok::Name(_)) | Some(Tok::Open)) {
                // a bare integer is only meaningful as zero
                if coef == 0 {
                    return Ok(Item::Vector(0, DivY::zero(self.model.rank())));
                }
                return self.err("a nonzero integer needs a class");
            }
        }
        match self.peek().cloned() {
            Some(Tok::Name(n)) => {
                self.pos += 1;
                let v = self.lookup(&n)?;
                match split_name(&n) {
                    Some((family, idx)) => Ok(Item::Named { coef, family, idx }),
                    None => Ok(Item::Vector(coef, v)),
                }
            }
            Some(Tok::Open) => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(&Tok::Close) {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                Ok(Item::Vector(coef, v))
            }
            Some(Tok::Dots) if coef.abs() == 1 => {
                self.pos += 1;
                Ok(Item::Dots)
            }
            _ => self.err("expected a class name, '(' or '...'"),
        }
    }

    fn resolve(&self, items: Vec<Item>) -> Result<DivY, ParseError> {
        let mut acc = DivY::zero(self.model.rank());
        for (i, it) in items.iter().enumerate() {
            match it {
                Item::Vector(c, v) => acc += &(*c * v),
                Item::Named { coef, family, idx } => {
                    acc += &(*coef * &self.lookup(&format!("{family}{idx}"))?);
                }
                Item::Dots => {
                    let prev = i.checked_sub(1).and_then(|j| items.get(j));
                    let (Some(Item::Named { coef: c0, family: f0, idx: i0 }), Some(Item::Named { coef: c1, family: f1, idx: i1 })) =
                        (prev, items.get(i + 1))
                    else {
                        return Err(ParseError::BadEllipsis);
                    };
                    if c0 != c1 || f0 != f1 || i0 >= i1 {
                        return Err(ParseError::BadEllipsis);
                    }
                    for k in i0 + 1..*i1 {
                        acc += &(*c0 * &self.lookup(&format!("{f0}{k}"))?);
                    }
                }
            }
        }
        Ok(acc)
    }
}

pub fn parse_divisor(model: &SurfaceModel, text: &str) -> Result<DivY, ParseError> {
    let toks = lex(text)?;
    if toks.is_empty() {
        return Err(ParseError::Syntax { pos: 0, msg: "empty expression".into() });
    }
    let mut p = Parser { toks, pos: 0, model, end: text.chars().count() };
    let d = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(d)
}
