//! Resolution chains of T-singularities `1/n²(1, na-1)`.
//!
//! A chain `[k_1..k_r]` lists the negated self-intersections of the exceptional
//! curves. The fiber through the chain also contains one (-1)-curve meeting
//! both ends (meeting the single curve twice when `r = 1`); its coefficient in
//! the fiber is `n` and the chain end `k_1` carries `a`.

use crate::exactmath::{nullspace, tridiag_det, LinAlgError, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TsingError {
    #[error("({n},{a}) is not a coprime pair with n > a > 0")]
    InvalidPair { n: i64, a: i64 },
    #[error(transparent)]
    InvalidChain(#[from] LinAlgError),
    #[error("fiber Gram matrix of {0:?} does not have a one-dimensional kernel")]
    DegenerateChain(Vec<i64>),
    #[error("{0:?} is not the resolution chain of a T-singularity")]
    NotTChain(Vec<i64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum End {
    L,
    R,
}

/// Resolution chain with its `(n, a)`; `ks[0]` is the end with fiber coefficient `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TChain {
    pub ks: Vec<i64>,
    pub n: i64,
    pub a: i64,
}

impl TChain {
    /// Recovers `(n, a)` from the fiber of the chain and checks it against
    /// the continued fraction of `n²/(na-1)`.
    pub fn from_ks(ks: Vec<i64>) -> Result<Self, TsingError> {
        tridiag_det(&ks)?;
        let fiber = fiber_of(&ks)?;
        let n = *fiber.last().unwrap();
        let a = fiber[0];
        let c = TChain { ks, n, a };
        let expected = hj_expand(n, a).map_err(|_| TsingError::NotTChain(c.ks.clone()))?;
        if expected.ks != c.ks {
            return Err(TsingError::NotTChain(c.ks));
        }
        Ok(c)
    }

    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    /// Orientation-free form used for reporting: the smaller of `ks` and its reverse.
    pub fn reported_ks(&self) -> Vec<i64> {
        let mut rev = self.ks.clone();
        rev.reverse();
        if rev < self.ks {
            rev
        } else {
            self.ks.clone()
        }
    }
}

fn check_pair(n: i64, a: i64) -> Result<(), TsingError> {
    if !(n > a && a > 0 && n.gcd(&a) == 1) {
        return Err(TsingError::InvalidPair { n, a });
    }
    Ok(())
}

/// Hirzebruch–Jung expansion of `n²/(na-1)`.
pub fn hj_expand(n: i64, a: i64) -> Result<TChain, TsingError> {
    check_pair(n, a)?;
    let (mut x, mut y): (BigInt, BigInt) = (BigInt::from(n) * n, BigInt::from(n) * a - 1);
    let mut ks = Vec::new();
    while y.is_positive() {
        let k = x.div_ceil(&y);
        let next = &k * &y - &x;
        ks.push(k.to_i64().expect("chain entries are small"));
        x = y;
        y = next;
    }
    Ok(TChain { ks, n, a })
}

/// Blows up the point where the (-1)-curve meets the given end of the chain.
pub fn blow_up_chain(c: &TChain, end: End) -> Result<TChain, TsingError> {
    let mut ks = c.ks.clone();
    match end {
        End::L => {
            ks[0] += 1;
            ks.push(2);
        }
        End::R => {
            *ks.last_mut().unwrap() += 1;
            ks.insert(0, 2);
        }
    }
    TChain::from_ks(ks)
}

/// Gram matrix of the chain followed by the (-1)-curve meeting both ends.
pub fn fiber_gram(ks: &[i64]) -> Vec<Vec<i64>> {
    let r = ks.len();
    let mut g = vec![vec![0i64; r + 1]; r + 1];
    for i in 0..r {
        g[i][i] = -ks[i];
        if i + 1 < r {
            g[i][i + 1] = 1;
            g[i + 1][i] = 1;
        }
    }
    g[r][r] = -1;
    // for r = 1 both updates hit the same entry: the curve is met twice
    g[r][0] += 1;
    g[0][r] += 1;
    g[r][r - 1] += 1;
    g[r - 1][r] += 1;
    g
}

fn fiber_of(ks: &[i64]) -> Result<Vec<i64>, TsingError> {
    if ks.is_empty() {
        return Err(TsingError::DegenerateChain(vec![]));
    }
    let g = fiber_gram(ks);
    let rows: Vec<Vec<Rat>> = g
        .iter()
        .map(|r| r.iter().map(|&x| Rat::from_integer(x.into())).collect())
        .collect();
    let ns = nullspace(&rows, ks.len() + 1);
    if ns.len() != 1 {
        return Err(TsingError::DegenerateChain(ks.to_vec()));
    }
    let v = &ns[0];
    let mut den = BigInt::one();
    for x in v {
        den = den.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&den / x.denom())).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    let sign = if ints.iter().any(|x| x.is_negative()) { -1 } else { 1 };
    let out: Vec<i64> = ints
        .iter()
        .map(|x| (x / &g * BigInt::from(sign)).to_i64().expect("fiber coefficients are small"))
        .collect();
    if out.iter().any(|&x| x <= 0) {
        return Err(TsingError::DegenerateChain(ks.to_vec()));
    }
    Ok(out)
}

/// Fiber multiplicities of the chain curves followed by that of the (-1)-curve.
pub fn fiber_coefficients(c: &TChain) -> Result<Vec<i64>, TsingError> {
    fiber_of(&c.ks)
}

/// The chain-curve fiber coefficients divided by `n`; all lie strictly in (0,1).
pub fn discrepancies(c: &TChain) -> Result<Vec<Rat>, TsingError> {
    let f = fiber_of(&c.ks)?;
    let n = *f.last().unwrap();
    Ok(f[..f.len() - 1]
        .iter()
        .map(|&m| Rat::new(m.into(), n.into()))
        .collect())
}

/// The word of end blow-ups producing `c` from the chain `[4]`, in order.
/// Both ends equal to 2 never occurs past the first step, where L is preferred.
pub fn blow_up_word(c: &TChain) -> Result<Vec<End>, TsingError> {
    let mut ks = c.ks.clone();
    let mut word = Vec::new();
    while ks != [4] {
        let r = ks.len();
        if r < 2 {
            return Err(TsingError::NotTChain(c.ks.clone()));
        }
        if ks[r - 1] == 2 && ks[0] > 2 {
            ks.pop();
            ks[0] -= 1;
            word.push(End::L);
        } else if ks[0] == 2 && ks[r - 1] > 2 {
            ks.remove(0);
            ks[r - 2] -= 1;
            word.push(End::R);
        } else {
            return Err(TsingError::NotTChain(c.ks.clone()));
        }
    }
    word.reverse();
    Ok(word)
}
