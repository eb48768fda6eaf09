//! Exact rational scalars.
//!
//! Every probability value handled by the crate is a [`Rat`]. There is no
//! floating-point path anywhere: equality tests are exact.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Arbitrary-precision rational number kept in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Rat(BigRational);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {0:?} (expected \"p\" or \"p/q\")")]
pub struct ParseRatError(pub String);

impl Rat {
    pub fn new(num: i64, den: i64) -> Rat {
        assert!(den != 0, "zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn int(n: i64) -> Rat {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn half() -> Rat {
        Rat::new(1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// `0 <= self <= 1`.
    pub fn in_unit_interval(&self) -> bool {
        !self.is_negative() && self.0 <= BigRational::one()
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }

    pub fn signum(&self) -> Ordering {
        self.0.cmp(&BigRational::zero())
    }

    /// `self * a` folded into `self`, skipping the multiply when `a` is zero.
    pub fn add_mul(&mut self, a: &Rat, b: &Rat) {
        if !a.is_zero() && !b.is_zero() {
            self.0 += &a.0 * &b.0;
        }
    }
}

impl Ord for Rat {
    fn cmp(&self, other: &Rat) -> Ordering {
        // cross-multiplication; denominators are positive
        let (a, b) = (&self.0, &other.0);
        if a.denom() == b.denom() {
            return a.numer().cmp(b.numer());
        }
        (a.numer() * b.denom()).cmp(&(b.numer() * a.denom()))
    }
}

impl PartialOrd for Rat {
    fn partial_cmp(&self, other: &Rat) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Rat {
    pub fn from_big(n: BigInt) -> Rat {
        Rat(BigRational::from_integer(n))
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

impl From<BigRational> for Rat {
    fn from(r: BigRational) -> Rat {
        Rat(r)
    }
}

impl FromStr for Rat {
    type Err = ParseRatError;

    fn from_str(s: &str) -> Result<Rat, ParseRatError> {
        let err = || ParseRatError(s.to_string());
        let t = s.trim();
        let (n, d) = match t.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (t, "1"),
        };
        let num: BigInt = n.parse().map_err(|_| err())?;
        let den: BigInt = d.parse().map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        Ok(Rat(BigRational::new(num, den)))
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Rat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0 $op rhs.0)
            }
        }
        impl<'a> $tr<&'a Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &'a Rat) -> Rat {
                Rat(self.0 $op &rhs.0)
            }
        }
        impl<'a> $tr<Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(&self.0 $op rhs.0)
            }
        }
        impl<'a, 'b> $tr<&'b Rat> for &'a Rat {
            type Output = Rat;
            fn $m(self, rhs: &'b Rat) -> Rat {
                Rat(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);
binop!(Div, div, /);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl AddAssign<Rat> for Rat {
    fn add_assign(&mut self, rhs: Rat) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl SubAssign<Rat> for Rat {
    fn sub_assign(&mut self, rhs: Rat) {
        self.0 -= rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

impl Sum for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// Dot product of two equal-length rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Rat::zero();
    for (x, y) in a.iter().zip(b) {
        acc.add_mul(x, y);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_and_prints_lowest_terms() {
        let r: Rat = "2/4".parse().unwrap();
        assert_eq!(r.to_string(), "1/2");
        assert_eq!("-6/3".parse::<Rat>().unwrap().to_string(), "-2");
        assert_eq!("3/-6".parse::<Rat>().unwrap().to_string(), "-1/2");
        assert_eq!(" 7 ".parse::<Rat>().unwrap(), Rat::int(7));
    }

    #[test]
    fn rejects_bad_literals() {
        for s in ["", "1/0", "a/2", "1.5", "1/2/3"] {
            assert!(s.parse::<Rat>().is_err(), "{s}");
        }
    }

    #[test]
    fn serde_uses_string_form() {
        let r = Rat::new(1, 3);
        let j = serde_json::to_string(&r).unwrap();
        assert_eq!(j, "\"1/3\"");
        let back: Rat = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let r = Rat::new(n, d);
            let back: Rat = r.to_string().parse().unwrap();
            prop_assert_eq!(&back, &r);
            let g = num_integer::gcd(r.numer().clone(), r.denom().clone());
            prop_assert!(g == BigInt::from(1) || r.is_zero());
            prop_assert!(r.denom() > &BigInt::from(0));
        }

        #[test]
        fn field_identities(a in -500i64..500, b in 1i64..500, c in -500i64..500, d in 1i64..500) {
            let x = Rat::new(a, b);
            let y = Rat::new(c, d);
            prop_assert_eq!(&(&x + &y) - &y, x.clone());
            if !y.is_zero() {
                prop_assert_eq!(&(&x * &y) / &y, x.clone());
            }
        }
    }
}
