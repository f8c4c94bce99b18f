//! Half-integral exact scalars.
//!
//! Every weight entry, character exponent and reduction point in this crate
//! lives in `(1/2)Z`. [`Scalar`] stores twice its value as an `i64`, so all
//! arithmetic is exact and comparison is plain integer comparison.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(i64);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(2);

    pub const fn int(v: i64) -> Self {
        Scalar(2 * v)
    }

    /// The scalar `halves / 2`.
    pub const fn from_halves(halves: i64) -> Self {
        Scalar(halves)
    }

    pub const fn halves(self) -> i64 {
        self.0
    }

    pub fn is_integer(self) -> bool {
        self.0 % 2 == 0
    }

    /// Integer value, if this scalar is integral.
    pub fn to_integer(self) -> Option<i64> {
        self.is_integer().then_some(self.0 / 2)
    }

    pub fn abs(self) -> Self {
        Scalar(self.0.abs())
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0
    }

    /// `value mod 2` for integral scalars.
    pub fn parity(self) -> Option<u8> {
        self.to_integer().map(|v| v.rem_euclid(2) as u8)
    }

    /// Multiply by a small integer.
    pub fn times(self, k: i64) -> Self {
        Scalar(self.0 * k)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::int(v)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Mul<i64> for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: i64) -> Scalar {
        self.times(rhs)
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.0 / 2)
        } else {
            write!(f, "{}/2", self.0)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `a`, `a/1` and `a/2`; `2a/4`-style non-reduced forms are
    /// accepted when they reduce to a half-integer.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid scalar '{s}'"));
        match s.split_once('/') {
            None => s.parse::<i64>().map(Scalar::int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i64 = num.trim().parse().map_err(|_| bad())?;
                let den: i64 = den.trim().parse().map_err(|_| bad())?;
                if den <= 0 || (2 * num) % den != 0 {
                    return Err(Error::Parse(format!(
                        "scalar '{s}' is not a half-integer"
                    )));
                }
                Ok(Scalar(2 * num / den))
            }
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        assert_eq!("5/2".parse::<Scalar>().unwrap(), Scalar::from_halves(5));
        assert_eq!("-3".parse::<Scalar>().unwrap(), Scalar::int(-3));
        assert_eq!("4/2".parse::<Scalar>().unwrap(), Scalar::int(2));
        assert!("1/3".parse::<Scalar>().is_err());
        assert!("x".parse::<Scalar>().is_err());
        assert_eq!(Scalar::from_halves(-7).to_string(), "-7/2");
        assert_eq!(Scalar::int(-7).to_string(), "-7");
    }

    #[test]
    fn parity_of_negative_integers() {
        assert_eq!(Scalar::int(-3).parity(), Some(1));
        assert_eq!(Scalar::int(-4).parity(), Some(0));
        assert_eq!(Scalar::from_halves(3).parity(), None);
    }
}
