//! Euler characteristics on the reducible central fiber and the Néron–Severi
//! lattice of the smoothing `X^gen`, for the `(3,1)` model only.
//!
//! An admissible `D` on `Y` glues with `O(d1)` on `W1 = P²` and `O(2 d2)` on
//! `W2 = P(1,2,1)` along the conics `Z1`, `Z2`. The Euler characteristic of
//! the glued bundle is deformation invariant, and everything else (the
//! intersection pairing on `X^gen`, coordinates in `NS`) is polarized from it.

use crate::surface::{DivY, SurfaceError, SurfaceModel};
use serde::Serialize;
use std::ops::{Add, Mul, Neg, Sub};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DefPicError {
    #[error("{0} is not admissible: needs (D·C1) even, (D·C2) ≡ 0 mod 3 and (D·E2) = 0")]
    NotAdmissible(String),
    #[error("O({m}) is not invertible on P(1,{w},1)")]
    NotInvertible { m: i64, w: i64 },
    #[error("the deformation engine only covers (n,a) = (3,1), got ({n},{a})")]
    UnsupportedModel { n: i64, a: i64 },
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}

/// `χ(O(m))` on `P(1, n-1, 1)`; `m` must be a multiple of `n-1`.
pub fn chi_wp2(m: i64, n: i64) -> Result<i64, DefPicError> {
    let w = n - 1;
    if w < 1 || m % w != 0 {
        return Err(DefPicError::NotInvertible { m, w });
    }
    // the monomial count (q+1)(m+2)/2, q = m/w, is a polynomial on m ∈ wZ
    let q = m / w;
    Ok((q + 1) * (m + 2) / 2)
}

pub fn chi_p2(d: i64) -> i64 {
    (d + 1) * (d + 2) / 2
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChiBreakdown {
    pub chi_y: i64,
    pub chi_w1: i64,
    pub chi_w2: i64,
    pub chi_z1: i64,
    pub chi_z2: i64,
    pub total: i64,
}

/// Coordinates in the basis `G1..G10` of `NS(X^gen)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct DivGen(pub [i64; 10]);

const NS_DIAG: [i64; 10] = [-1, -1, -1, -1, -1, -1, -1, -1, -1, 1];

impl DivGen {
    pub fn zero() -> Self {
        DivGen([0; 10])
    }

    pub fn basis(i: usize) -> Self {
        let mut v = [0; 10];
        v[i] = 1;
        DivGen(v)
    }

    pub fn dot(&self, o: &DivGen) -> i64 {
        (0..10).map(|i| NS_DIAG[i] * self.0[i] * o.0[i]).sum()
    }

    /// Riemann–Roch on `X^gen`, where `χ(O) = 1`.
    pub fn chi(&self, k: &DivGen) -> i64 {
        let v = self.dot(&(*self - *k));
        debug_assert!(v % 2 == 0);
        v / 2 + 1
    }
}

impl Add for DivGen {
    type Output = DivGen;
    fn add(self, o: DivGen) -> DivGen {
        DivGen(std::array::from_fn(|i| self.0[i] + o.0[i]))
    }
}

impl Sub for DivGen {
    type Output = DivGen;
    fn sub(self, o: DivGen) -> DivGen {
        DivGen(std::array::from_fn(|i| self.0[i] - o.0[i]))
    }
}

impl Neg for DivGen {
    type Output = DivGen;
    fn neg(self) -> DivGen {
        DivGen(self.0.map(|x| -x))
    }
}

impl Mul<DivGen> for i64 {
    type Output = DivGen;
    fn mul(self, d: DivGen) -> DivGen {
        DivGen(d.0.map(|x| self * x))
    }
}

/// The deformation engine over the `(3,1)` surface.
#[derive(Debug, Clone)]
pub struct DefPic {
    pub model: SurfaceModel,
    g_reps: Vec<DivY>,
}

impl Default for DefPic {
    fn default() -> Self {
        Self::new(SurfaceModel::default_model()).expect("the default model is (3,1)")
    }
}

impl DefPic {
    pub fn new(model: SurfaceModel) -> Result<Self, DefPicError> {
        if (model.chain.n, model.chain.a) != (3, 1) {
            return Err(DefPicError::UnsupportedModel { n: model.chain.n, a: model.chain.a });
        }
        let mut dp = DefPic { model, g_reps: Vec::new() };
        dp.g_reps = (0..=11).map(|i| dp.build_g(i)).collect::<Result<_, _>>()?;
        Ok(dp)
    }

    fn cls(&self, s: &str) -> DivY {
        self.model.class(s).expect("registry name")
    }

    /// A divisor on `Y` deforming to `m·K`: `C0 ↦ 6K`, `E1 ↦ 3K`,
    /// `C2+E2+E3 ↦ 2K`.
    pub fn k_multiple_rep(&self, m: i64) -> DivY {
        let (q, s) = (m.div_euclid(6), m.rem_euclid(6));
        let t = &(&self.cls("C2") + &self.cls("E2")) + &self.cls("E3");
        let e1 = self.cls("E1");
        let rest = match s {
            0 => DivY::zero(self.model.rank()),
            1 => &e1 - &t,
            2 => t,
            3 => e1,
            4 => 2 * &t,
            _ => &e1 + &t,
        };
        &(q * &self.cls("C0")) + &rest
    }

    fn build_g(&self, i: usize) -> Result<DivY, DefPicError> {
        let l0 = self.cls("L0");
        let h3f9 = self.model.parse("H - 3F9")?;
        let f9 = self.cls("F9");
        Ok(match i {
            0 => DivY::zero(self.model.rank()),
            1..=8 => &(&(-&l0) + &self.k_multiple_rep(10)) + &(&self.cls(&format!("F{i}")) - &f9),
            9 => &(-&l0) + &self.k_multiple_rep(11),
            10 => &(&(-3 * &l0) + &h3f9) + &self.k_multiple_rep(28),
            // G11 = 2 G10
            _ => &(&(-6 * &l0) + &(2 * &h3f9)) + &self.k_multiple_rep(56),
        })
    }

    /// Representative on `Y` of `G_i^gen`, `0 ≤ i ≤ 11` (`G0 = 0`, `G11 = 2G10`).
    pub fn g_rep(&self, i: usize) -> &DivY {
        &self.g_reps[i]
    }

    fn degrees(&self, d: &DivY) -> Result<(i64, i64), DefPicError> {
        self.model
            .degrees(d)?
            .ok_or_else(|| DefPicError::NotAdmissible(self.model.fmt_div(d)))
    }

    /// `χ` of the glued bundle on the central fiber, hence of `D^gen`.
    pub fn chi_gen(&self, d: &DivY) -> Result<ChiBreakdown, DefPicError> {
        let (d1, d2) = self.degrees(d)?;
        let chi_y = self.model.chi_y(d)?;
        let chi_w1 = chi_p2(d1);
        let chi_w2 = chi_wp2(2 * d2, 3)?;
        let chi_z1 = 2 * d1 + 1;
        let chi_z2 = 3 * d2 + 1;
        Ok(ChiBreakdown {
            chi_y,
            chi_w1,
            chi_w2,
            chi_z1,
            chi_z2,
            total: chi_y + chi_w1 + chi_w2 - chi_z1 - chi_z2,
        })
    }

    pub fn chi(&self, d: &DivY) -> Result<i64, DefPicError> {
        Ok(self.chi_gen(d)?.total)
    }

    /// `(D^gen · D'^gen)`, polarized from `χ`.
    pub fn pair_gen(&self, d: &DivY, e: &DivY) -> Result<i64, DefPicError> {
        Ok(self.chi(&(d + e))? - self.chi(d)? - self.chi(e)? + 1)
    }

    pub fn to_gen(&self, d: &DivY) -> Result<DivGen, DefPicError> {
        let mut c = [0i64; 10];
        for (i, ci) in c.iter_mut().enumerate() {
            *ci = NS_DIAG[i] * self.pair_gen(d, &self.g_reps[i + 1])?;
        }
        Ok(DivGen(c))
    }

    pub fn k_gen(&self) -> DivGen {
        self.to_gen(&self.k_multiple_rep(1)).expect("K-rep is admissible")
    }

    /// Gram matrix of `G1..G10` under `pair_gen`.
    pub fn ns_gram(&self) -> Vec<Vec<i64>> {
        (1..=10)
            .map(|i| {
                (1..=10)
                    .map(|j| self.pair_gen(&self.g_reps[i], &self.g_reps[j]).expect("G reps are admissible"))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::det_z;
    use num_bigint::BigInt;

    fn dp() -> DefPic {
        DefPic::default()
    }

    #[test]
    fn weighted_plane() {
        assert_eq!(chi_wp2(-4, 3).unwrap(), 1);
        assert_eq!(chi_wp2(0, 3).unwrap(), 1);
        assert_eq!(chi_wp2(2, 3).unwrap(), 4);
        assert!(matches!(chi_wp2(3, 3), Err(DefPicError::NotInvertible { .. })));
        // brute-force monomial count on P(1,2,1) and P(1,3,1)
        for w in [1i64, 2, 3] {
            for q in 0..6 {
                let m = w * q;
                let mut count = 0;
                for j in 0..=q {
                    count += m - w * j + 1;
                }
                assert_eq!(chi_wp2(m, w + 1).unwrap(), count);
            }
        }
        for m in [-8, -6, -2, 4, 10] {
            assert_eq!(chi_wp2(m, 3).unwrap(), m * (m + 4) / 4 + 1);
        }
    }

    #[test]
    fn chi_values() {
        let d = dp();
        let p = |s| d.model.parse(s).unwrap();
        assert_eq!(d.chi(&p("0")).unwrap(), 1);
        assert_eq!(d.chi(&p("-L0 + F1 - F9")).unwrap(), 11);
        assert_eq!(d.chi(&p("-L0")).unwrap(), 12);
        assert!(matches!(d.chi(&p("F1")), Err(DefPicError::NotAdmissible(_))));
        let b = d.chi_gen(&p("-L0")).unwrap();
        assert_eq!(b.total, b.chi_y + b.chi_w1 + b.chi_w2 - b.chi_z1 - b.chi_z2);
    }

    #[test]
    fn k_reps() {
        let d = dp();
        let p = |s| d.model.parse(s).unwrap();
        assert_eq!(d.k_multiple_rep(6), p("C0"));
        assert_eq!(d.k_multiple_rep(1), p("E1 - C2 - E2 - E3"));
        assert!(d.k_multiple_rep(0).is_zero());
        // K_Y itself deforms to K
        assert_eq!(d.to_gen(&p("K")).unwrap(), d.k_gen());
        for m in -13..13 {
            assert_eq!(d.to_gen(&d.k_multiple_rep(m)).unwrap(), m * d.k_gen(), "m = {m}");
        }
    }

    #[test]
    fn pairings() {
        let d = dp();
        let k = d.k_multiple_rep(1);
        assert_eq!(d.pair_gen(&k, &k).unwrap(), 0);
        assert_eq!(d.pair_gen(d.g_rep(1), d.g_rep(1)).unwrap(), -1);
        let c1 = d.model.class("C1").unwrap();
        for i in 0..=11 {
            assert_eq!(d.pair_gen(&c1, d.g_rep(i)).unwrap(), 0);
        }
    }

    #[test]
    fn ns_lattice() {
        let d = dp();
        let g = d.ns_gram();
        let want: Vec<Vec<i64>> =
            (0..10).map(|i| (0..10).map(|j| if i == j { NS_DIAG[i] } else { 0 }).collect()).collect();
        assert_eq!(g, want);
        let big: Vec<Vec<BigInt>> = g.iter().map(|r| r.iter().map(|&x| x.into()).collect()).collect();
        assert_eq!(det_z(&big).unwrap(), BigInt::from(-1));
        for i in 1..=10 {
            assert_eq!(d.to_gen(d.g_rep(i)).unwrap(), DivGen::basis(i - 1));
        }
        let mut sum = -d.k_gen();
        for i in 0..9 {
            sum = sum + DivGen::basis(i);
        }
        assert_eq!(3 * DivGen::basis(9), sum);
        assert_eq!(d.to_gen(d.g_rep(11)).unwrap(), 2 * DivGen::basis(9));
        let p = |s| d.model.parse(s).unwrap();
        assert_eq!(d.to_gen(&p("C1")).unwrap(), DivGen::zero());
        assert_eq!(d.to_gen(&p("2C2 + E2")).unwrap(), DivGen::zero());
        let k = d.k_gen();
        assert_eq!(k.dot(&k), 0);
        for i in 0..9 {
            assert_eq!(k.dot(&DivGen::basis(i)), -1);
        }
    }

    #[test]
    fn rejects_other_models() {
        let m = SurfaceModel::build(5, 2).unwrap();
        assert!(matches!(DefPic::new(m), Err(DefPicError::UnsupportedModel { n: 5, a: 2 })));
    }
}
