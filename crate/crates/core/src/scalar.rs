//! Exact scalars: arbitrary-precision rationals and the sign group {±1}.
//!
//! All structure constants in this crate are exact rationals; nothing is
//! ever evaluated in floating point.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Mul, MulAssign, Neg};

/// Exact rational scalar used throughout the crate.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational `num/den`. Panics if `den == 0`.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// An element of the multiplicative group {+1, −1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `Minus` for odd parity, `Plus` for even.
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    /// Extracts the sign of a rational, provided it is exactly ±1.
    pub fn from_rational(r: &Rational) -> Option<Self> {
        if r.is_one() {
            Some(Sign::Plus)
        } else if (-r).is_one() {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn is_minus(self) -> bool {
        matches!(self, Sign::Minus)
    }

    pub fn to_rational(self) -> Rational {
        rat_int(self.as_i8() as i64)
    }

    /// Sign raised to an integer exponent.
    pub fn pow(self, exp: u64) -> Self {
        if exp % 2 == 0 {
            Sign::Plus
        } else {
            self
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self.is_minus() ^ rhs.is_minus())
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sign::Plus => write!(f, "+1"),
            Sign::Minus => write!(f, "-1"),
        }
    }
}

/// Sign of a rational as an `i8` in {−1, 0, +1}.
pub fn signum(r: &Rational) -> i8 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}
