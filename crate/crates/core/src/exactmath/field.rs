use super::Rat;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use std::fmt::Debug;

/// Minimal field interface shared by the exact and the modular code paths.
pub trait Field: Clone + PartialEq + Debug {
    fn fzero() -> Self;
    fn fone() -> Self;
    fn fis_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn from_i64(v: i64) -> Self;
}

/// Reduction of rationals into a field. Fails when a denominator vanishes.
pub trait FromRat: Field {
    fn from_rat(r: &Rat) -> Option<Self>;
}

impl Field for Rat {
    fn fzero() -> Self {
        Zero::zero()
    }
    fn fone() -> Self {
        One::one()
    }
    fn fis_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Option<Self> {
        if Zero::is_zero(self) {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_i64(v: i64) -> Self {
        Rat::from_integer(BigInt::from(v))
    }
}

impl FromRat for Rat {
    fn from_rat(r: &Rat) -> Option<Self> {
        Some(r.clone())
    }
}

/// Element of the prime field F_P, stored reduced in `0..P`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u64>(pub u64);

pub type Fp61 = Fp<2_305_843_009_213_693_951>;
pub type Fp31 = Fp<2_147_483_647>;
pub type FpM = Fp<1_000_000_007>;

impl<const P: u64> Debug for Fp<P> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u64> Fp<P> {
    pub const MODULUS: u64 = P;

    pub fn new(v: u64) -> Self {
        Fp(v % P)
    }

    fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Fp(1 % P);
        while e > 0 {
            if e & 1 == 1 {
                acc = Field::mul(&acc, &base);
            }
            base = Field::mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    fn from_big(b: &BigInt) -> Self {
        let m = BigInt::from(P);
        let mut r = b % &m;
        if r < BigInt::zero() {
            r += &m;
        }
        Fp(r.to_u64().expect("reduced residue fits in u64"))
    }
}

impl<const P: u64> Field for Fp<P> {
    fn fzero() -> Self {
        Fp(0)
    }
    fn fone() -> Self {
        Fp(1 % P)
    }
    fn fis_zero(&self) -> bool {
        self.0 == 0
    }
    fn add(&self, o: &Self) -> Self {
        let s = self.0 as u128 + o.0 as u128;
        if s >= P as u128 {
            Fp((s - P as u128) as u64)
        } else {
            Fp(s as u64)
        }
    }
    fn sub(&self, o: &Self) -> Self {
        if self.0 >= o.0 {
            Fp(self.0 - o.0)
        } else {
            Fp(P - (o.0 - self.0))
        }
    }
    fn mul(&self, o: &Self) -> Self {
        if P < (1 << 32) {
            // both operands are below 2^32, so the product fits in a u64
            return Fp(self.0 * o.0 % P);
        }
        Fp(((self.0 as u128 * o.0 as u128) % P as u128) as u64)
    }
    fn neg(&self) -> Self {
        if self.0 == 0 {
            *self
        } else {
            Fp(P - self.0)
        }
    }
    fn inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P - 2))
        }
    }
    fn from_i64(v: i64) -> Self {
        Fp((v as i128).rem_euclid(P as i128) as u64)
    }
}

impl<const P: u64> FromRat for Fp<P> {
    fn from_rat(r: &Rat) -> Option<Self> {
        let d = Self::from_big(r.denom());
        let n = Self::from_big(r.numer());
        d.inv().map(|di| n.mul(&di))
    }
}
