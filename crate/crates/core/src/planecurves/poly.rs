//! Homogeneous polynomials in `x, y, z` with rational coefficients.

use crate::exactmath::{fmt_rat, rat, Rat};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Exponent vector `[i, j, k]` of `x^i y^j z^k`.
pub type Mon = [u32; 3];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at position {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("exponent too large")]
    Overflow,
}

/// Number of monomials of degree `d` in three variables.
pub fn mon_count(d: u32) -> usize {
    let d = d as usize;
    (d + 1) * (d + 2) / 2
}

/// Monomials of degree `d`, ordered by descending power of `x`, then of `y`.
pub fn monomials(d: u32) -> Vec<Mon> {
    let mut out = Vec::with_capacity(mon_count(d));
    for i in (0..=d).rev() {
        for j in (0..=d - i).rev() {
            out.push([i, j, d - i - j]);
        }
    }
    out
}

/// Position of `m` in [`monomials`] of its degree.
pub fn mon_index(m: Mon) -> usize {
    let d = (m[0] + m[1] + m[2]) as usize;
    let t = d - m[0] as usize;
    t * (t + 1) / 2 + m[2] as usize
}

/// A homogeneous form. The zero form keeps the degree it was created with.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomPoly {
    degree: u32,
    terms: BTreeMap<Mon, Rat>,
}

impl HomPoly {
    pub fn zero(degree: u32) -> Self {
        HomPoly { degree, terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial([0, 0, 0], rat(1))
    }

    pub fn monomial(m: Mon, c: Rat) -> Self {
        let mut p = Self::zero(m.iter().sum());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Linear form `a x + b y + c z`.
    pub fn linear(a: i64, b: i64, c: i64) -> Self {
        let mut p = Self::zero(1);
        for (m, v) in [([1, 0, 0], a), ([0, 1, 0], b), ([0, 0, 1], c)] {
            if v != 0 {
                p.terms.insert(m, rat(v));
            }
        }
        p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mon, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mon) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Variables that occur in some term.
    pub fn support_vars(&self) -> [bool; 3] {
        let mut s = [false; 3];
        for m in self.terms.keys() {
            for v in 0..3 {
                s[v] |= m[v] > 0;
            }
        }
        s
    }

    /// Coefficient vector indexed by [`mon_index`].
    pub fn dense(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); mon_count(self.degree)];
        for (m, c) in &self.terms {
            v[mon_index(*m)] = c.clone();
        }
        v
    }

    pub fn from_dense(degree: u32, coeffs: &[Rat]) -> Self {
        let mut p = Self::zero(degree);
        for (m, c) in monomials(degree).into_iter().zip(coeffs) {
            if !c.is_zero() {
                p.terms.insert(m, c.clone());
            }
        }
        p
    }

    pub fn add(&self, o: &HomPoly) -> HomPoly {
        assert_eq!(self.degree, o.degree, "adding forms of different degrees");
        let mut out = self.clone();
        for (m, c) in &o.terms {
            let e = out.terms.entry(*m).or_insert_with(Rat::zero);
            *e += c;
            if e.is_zero() {
                out.terms.remove(m);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> HomPoly {
        if c.is_zero() {
            return Self::zero(self.degree);
        }
        HomPoly { degree: self.degree, terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect() }
    }

    pub fn mul(&self, o: &HomPoly) -> HomPoly {
        let mut out = Self::zero(self.degree + o.degree);
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                let m = [a[0] + b[0], a[1] + b[1], a[2] + b[2]];
                let e = out.terms.entry(m).or_insert_with(Rat::zero);
                *e += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, k: u32) -> HomPoly {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval(&self, p: &[Rat; 3]) -> Rat {
        let mut s = Rat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for v in 0..3 {
                for _ in 0..m[v] {
                    t *= &p[v];
                }
            }
            s += t;
        }
        s
    }

    /// Partial derivative in variable `v`.
    pub fn diff(&self, v: usize) -> HomPoly {
        let mut out = Self::zero(self.degree.saturating_sub(1));
        for (m, c) in &self.terms {
            if m[v] > 0 {
                let mut n = *m;
                n[v] -= 1;
                out.terms.insert(n, c * rat(m[v] as i64));
            }
        }
        out
    }

    pub fn gradient_at(&self, p: &[Rat; 3]) -> [Rat; 3] {
        [self.diff(0).eval(p), self.diff(1).eval(p), self.diff(2).eval(p)]
    }

    /// Substitutes linear forms for the variables: `self(xs[0], xs[1], xs[2])`.
    pub fn compose(&self, xs: &[HomPoly; 3]) -> HomPoly {
        let deg = xs[0].degree * self.degree;
        let mut out = Self::zero(deg);
        for (m, c) in &self.terms {
            let mut t = Self::monomial([0, 0, 0], c.clone());
            for v in 0..3 {
                t = t.mul(&xs[v].pow(m[v]));
            }
            out = out.add(&t);
        }
        out
    }
}

impl fmt::Display for HomPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        // highest x power first
        for (n, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (n, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let a = c.abs();
            let is_const = m.iter().all(|&e| e == 0);
            let mut parts = Vec::new();
            if !a.is_one() || is_const {
                parts.push(fmt_rat(&a));
            }
            for (v, name) in ["x", "y", "z"].iter().enumerate() {
                match m[v] {
                    0 => {}
                    1 => parts.push(name.to_string()),
                    e => parts.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

// ---- parsing ---------------------------------------------------------------

type Sparse = BTreeMap<Mon, Rat>;

fn sp_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
            *out.entry(m).or_insert_with(Rat::zero) += ca * cb;
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

fn sp_add(a: &mut Sparse, b: &Sparse, sign: i64) {
    for (m, c) in b {
        *a.entry(*m).or_insert_with(Rat::zero) += c * rat(sign);
    }
    a.retain(|_, c| !c.is_zero());
}

struct PolyParser {
    s: Vec<char>,
    pos: usize,
}

impl PolyParser {
    fn skip_ws(&mut self) {
        while self.s.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: &str) -> Result<T, PolyError> {
        Err(PolyError::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn int(&mut self) -> Result<u64, PolyError> {
        self.skip_ws();
        let start = self.pos;
        while self.s.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        let t: String = self.s[start..self.pos].iter().collect();
        t.parse().map_err(|_| PolyError::Overflow)
    }

    fn expr(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = Sparse::new();
        let mut first = true;
        loop {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') | Some('−') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                _ => break,
            };
            first = false;
            let t = self.term()?;
            sp_add(&mut acc, &t, sign);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sparse, PolyError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some('*') => {
                    self.pos += 1;
                }
                // juxtaposition: `2x`, `(y-z)^2z`
                Some(c) if c.is_ascii_digit() || "xyz(".contains(c) => {}
                _ => break,
            }
            let f = self.factor()?;
            acc = sp_mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sparse, PolyError> {
        let base = match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let v = self.int()?;
                let v = i64::try_from(v).map_err(|_| PolyError::Overflow)?;
                let mut c = rat(v);
                // fraction literal `3/4`, as printed for rational coefficients
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let d = i64::try_from(self.int()?).map_err(|_| PolyError::Overflow)?;
                    if d == 0 {
                        return self.err("zero denominator");
                    }
                    c /= rat(d);
                }
                let mut s = Sparse::new();
                if !c.is_zero() {
                    s.insert([0, 0, 0], c);
                }
                s
            }
            Some(c @ ('x' | 'y' | 'z')) => {
                self.pos += 1;
                let mut m = [0; 3];
                m[(c as u8 - b'x') as usize] = 1;
                Sparse::from([(m, rat(1))])
            }
            Some('(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(')') {
                    return self.err("expected ')'");
                }
                self.pos += 1;
                e
            }
            Some(c) => return self.err(&format!("unexpected '{c}'")),
            None => return self.err("unexpected end of input"),
        };
        if self.peek() == Some('^') {
            self.pos += 1;
            let k = self.int()?;
            if k > 64 {
                return Err(PolyError::Overflow);
            }
            let mut acc = Sparse::from([([0, 0, 0], rat(1))]);
            for _ in 0..k {
                acc = sp_mul(&acc, &base);
            }
            return Ok(acc);
        }
        Ok(base)
    }
}

/// Parses a polynomial in `x, y, z` such as `(y-z)^2z - x^3 - x^2z` and checks
/// that it is homogeneous. The zero polynomial gets degree 0.
pub fn parse_poly(text: &str) -> Result<HomPoly, PolyError> {
    let mut p = PolyParser { s: text.chars().collect(), pos: 0 };
    if p.peek().is_none() {
        return p.err("empty polynomial");
    }
    let sp = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    let mut degs = sp.keys().map(|m| m.iter().sum::<u32>());
    let degree = degs.next().unwrap_or(0);
    if degs.any(|d| d != degree) {
        return Err(PolyError::NotHomogeneous);
    }
    Ok(HomPoly { degree, terms: sp })
}
