//! Exact arithmetic: big rationals, dense rational matrices, and prime fields.
//!
//! Everything downstream is exact. Prime fields only ever produce *bounds*
//! (a rank mod p never exceeds the rank over Q), and callers pair them with an
//! independent bound before trusting a number.

mod field;
mod matrix;

pub use field::{Field, Fp, FromRat, Fp31, Fp61, FpM};
pub use matrix::{
    det_z, nullspace, rank_field, rank_q, rref, solve_q, tridiag_det, MatQ,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Rational number in lowest terms with a positive denominator.
pub type Rat = num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinAlgError {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("invalid chain entry {0}: every entry must be at least 2")]
    InvalidChain(i64),
}

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Largest integer not exceeding `r`.
pub fn floor_rat(r: &Rat) -> BigInt {
    r.floor().to_integer()
}

/// Renders `p/q`, or just `p` for integers. Never floats.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Multiplies a rational vector by the lcm of its denominators.
pub(crate) fn clear_denominators(row: &[Rat]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in row {
        l = num_integer::Integer::lcm(&l, x.denom());
    }
    row.iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect()
}

/// Sign of a rational, as -1, 0 or 1.
pub fn signum(r: &Rat) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
