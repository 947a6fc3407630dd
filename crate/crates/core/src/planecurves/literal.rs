//! Graded pieces of ideals exactly as written, without saturating.
//!
//! Exact over Q and meant for small degrees. Quotients `(I : J)` need
//! generators for `J`, so `J` may not itself contain a quotient.

use super::poly::{mon_count, monomials, HomPoly};
use super::{IdealExpr, PlaneError};
use crate::exactmath::{nullspace, rref, Rat};
use num_traits::Zero;
use std::collections::{HashMap, HashSet};
use std::rc::Rc;

type Basis = Rc<Vec<Vec<Rat>>>;

/// Row-reduced basis of the span of `rows` in `Q^n`.
fn span(mut rows: Vec<Vec<Rat>>, n: usize) -> Vec<Vec<Rat>> {
    let pivots = rref(&mut rows, n);
    rows.truncate(pivots.len());
    rows
}

/// Generators, when the expression has no quotient in it.
fn generators(e: &IdealExpr) -> Option<Vec<HomPoly>> {
    let product = |a: Vec<HomPoly>, b: &[HomPoly]| -> Vec<HomPoly> {
        let mut seen = HashSet::new();
        let mut out = Vec::new();
        for x in &a {
            for y in b {
                let p = x.mul(y);
                if seen.insert(p.clone()) {
                    out.push(p);
                }
            }
        }
        out
    };
    match e {
        IdealExpr::Gens(gs) => Some(gs.iter().filter(|g| !g.is_zero()).cloned().collect()),
        IdealExpr::Prod(es) => {
            let mut acc = vec![HomPoly::one()];
            for x in es {
                acc = product(acc, &generators(x)?);
            }
            Some(acc)
        }
        IdealExpr::Pow(x, k) => {
            let g = generators(x)?;
            let mut acc = vec![HomPoly::one()];
            for _ in 0..*k {
                acc = product(acc, &g);
            }
            Some(acc)
        }
        IdealExpr::Colon(..) => None,
    }
}

#[derive(Default)]
struct Literal {
    memo: HashMap<(usize, u32), Basis>,
}

impl Literal {
    fn piece(&mut self, e: &IdealExpr, d: u32) -> Result<Basis, PlaneError> {
        let key = (e as *const IdealExpr as usize, d);
        if let Some(b) = self.memo.get(&key) {
            return Ok(b.clone());
        }
        let n = mon_count(d);
        let rows = if let Some(gs) = generators(e) {
            let mut rows = Vec::new();
            for g in gs.iter().filter(|g| g.degree() <= d) {
                for m in monomials(d - g.degree()) {
                    rows.push(g.mul(&HomPoly::monomial(m, Rat::from_integer(1.into()))).dense());
                }
            }
            span(rows, n)
        } else {
            match e {
                IdealExpr::Colon(a, b) => self.colon(a, b, d)?,
                IdealExpr::Prod(es) => {
                    let fs: Vec<&IdealExpr> = es.iter().collect();
                    self.product(&fs, d)?
                }
                IdealExpr::Pow(x, k) => {
                    let fs = vec![x.as_ref(); *k as usize];
                    self.product(&fs, d)?
                }
                IdealExpr::Gens(_) => unreachable!("generators exist for Gens"),
            }
        };
        let b = Rc::new(rows);
        self.memo.insert(key, b.clone());
        Ok(b)
    }

    /// `Σ_{d1} (I_0)_{d1} · (I_1 ⋯ I_k)_{d - d1}`.
    fn product(&mut self, fs: &[&IdealExpr], d: u32) -> Result<Vec<Vec<Rat>>, PlaneError> {
        let n = mon_count(d);
        match fs {
            [] => Ok(span(monomials(d).into_iter().map(|m| HomPoly::monomial(m, Rat::from_integer(1.into())).dense()).collect(), n)),
            [one] => Ok(self.piece(one, d)?.as_ref().clone()),
            [first, rest @ ..] => {
                let mut rows = Vec::new();
                for d1 in 0..=d {
                    let a = self.piece(first, d1)?;
                    if a.is_empty() {
                        continue;
                    }
                    let b = self.product(rest, d - d1)?;
                    for x in a.iter() {
                        let fx = HomPoly::from_dense(d1, x);
                        for y in &b {
                            rows.push(fx.mul(&HomPoly::from_dense(d - d1, y)).dense());
                        }
                    }
                }
                Ok(span(rows, n))
            }
        }
    }

    fn colon(&mut self, a: &IdealExpr, b: &IdealExpr, d: u32) -> Result<Vec<Vec<Rat>>, PlaneError> {
        let Some(gs) = generators(b) else {
            return Err(PlaneError::Unsupported("quotient by an ideal that is itself a quotient".into()));
        };
        let n = mon_count(d);
        let mons = monomials(d);
        let mut conditions: Vec<Vec<Rat>> = Vec::new();
        for g in &gs {
            let big = d + g.degree();
            let basis = self.piece(a, big)?;
            let pivots: Vec<usize> =
                basis.iter().map(|r| r.iter().position(|x| !x.is_zero()).expect("nonzero row")).collect();
            // residue of g·m modulo the basis, one column per monomial m
            let mut cols = Vec::with_capacity(n);
            for m in &mons {
                let mut v = g.mul(&HomPoly::monomial(*m, Rat::from_integer(1.into()))).dense();
                for (row, &pc) in basis.iter().zip(&pivots) {
                    if !v[pc].is_zero() {
                        let f = v[pc].clone();
                        for (x, r) in v.iter_mut().zip(row) {
                            *x -= &f * r;
                        }
                    }
                }
                cols.push(v);
            }
            for j in 0..mon_count(big) {
                let row: Vec<Rat> = cols.iter().map(|c| c[j].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    conditions.push(row);
                }
            }
        }
        Ok(nullspace(&conditions, n))
    }
}

/// Dimension of the degree-`d` piece of the ideal as written.
pub fn graded_dim_literal(e: &IdealExpr, d: u32) -> Result<usize, PlaneError> {
    Ok(Literal::default().piece(e, d)?.len())
}

pub fn graded_piece_literal(e: &IdealExpr, d: u32) -> Result<Vec<HomPoly>, PlaneError> {
    let b = Literal::default().piece(e, d)?;
    Ok(b.iter().map(|v| HomPoly::from_dense(d, v)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;
    use crate::planecurves::{graded_dim, Cubics};

    fn j9() -> IdealExpr {
        let c = Cubics::standard();
        IdealExpr::Gens(vec![c.h1, c.h2])
    }

    #[test]
    fn examples() {
        assert_eq!(graded_dim_literal(&IdealExpr::gens(&["x", "y", "z"]).unwrap(), 1).unwrap(), 3);
        assert_eq!(graded_dim_literal(&IdealExpr::gens(&["x", "y"]).unwrap().pow(2), 2).unwrap(), 3);
        assert_eq!(graded_dim_literal(&j9(), 3).unwrap(), 2);
        assert_eq!(graded_dim_literal(&IdealExpr::unit(), 9).unwrap(), 55);
        // not saturated: x is missing from (x,y)(x,z) in degree 1
        let pq = IdealExpr::Prod(vec![IdealExpr::gens(&["x", "y"]).unwrap(), IdealExpr::gens(&["x", "z"]).unwrap()]);
        assert_eq!(graded_dim_literal(&pq, 1).unwrap(), 0);
        assert_eq!(graded_dim(&pq, 1).unwrap(), 1);
    }

    #[test]
    fn colon_absorbs() {
        let i = IdealExpr::gens(&["x^2", "y"]).unwrap();
        let j = IdealExpr::gens(&["x", "z"]).unwrap();
        let ij = IdealExpr::Prod(vec![i.clone(), j.clone()]);
        for d in 1..5 {
            let q = graded_piece_literal(&ij.clone().colon(j.clone()), d).unwrap();
            let base = graded_dim_literal(&i, d).unwrap();
            assert!(q.len() >= base);
            // I ⊆ (IJ : J) in every degree
            let both = graded_dim_literal(&IdealExpr::Prod(vec![ij.clone().colon(j.clone())]), d).unwrap();
            assert_eq!(both, q.len());
        }
        // (m^3 : m) = m^2
        let m = IdealExpr::gens(&["x", "y"]).unwrap();
        for d in 0..6 {
            assert_eq!(
                graded_dim_literal(&m.clone().pow(3).colon(m.clone()), d).unwrap(),
                graded_dim_literal(&m.clone().pow(2), d).unwrap()
            );
        }
    }

    #[test]
    fn agrees_with_sheaf_on_saturated_ideals() {
        let c = Cubics::standard();
        let p8 = IdealExpr::point(&c.f8);
        let p9 = IdealExpr::point(&c.f9);
        let j7 = j9().colon(IdealExpr::Prod(vec![p8, p9]));
        let m = IdealExpr::point(&[rat(1), rat(2), rat(-1)]);
        let cases = [
            (j9(), 2..8),
            (j7, 2..7),
            (m.clone().pow(3), 0..7),
            (IdealExpr::gens(&["x^2", "y"]).unwrap().pow(2), 0..6),
        ];
        for (e, ds) in cases {
            for d in ds {
                assert_eq!(graded_dim_literal(&e, d).unwrap(), graded_dim(&e, d).unwrap(), "{e} in degree {d}");
            }
        }
    }
}
