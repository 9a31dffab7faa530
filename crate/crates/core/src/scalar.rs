//! Exact Gaussian rationals `p/q + i·r/s`.
//!
//! Every certificate produced by the exact modules is computed over this
//! field, so equality tests are proofs rather than tolerance checks.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational from {0:?}")]
pub struct ParseRationalError(pub String);

/// Parses `"p"`, `"p/q"` or `"-p/q"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let err = || ParseRationalError(s.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p = BigInt::from_str(p.trim()).map_err(|_| err())?;
            let q = BigInt::from_str(q.trim()).map_err(|_| err())?;
            if q.is_zero() {
                return Err(err());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(t).map_err(|_| err())?,
        )),
    }
}

/// Always renders as `"p/q"`, including integers (`"3/1"`).
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_int(p: i64) -> Rational {
    BigRational::from_integer(BigInt::from(p))
}

/// An element of `ℚ(i)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Gq {
    pub re: Rational,
    pub im: Rational,
}

impl Gq {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gq { re, im }
    }

    pub fn real(re: Rational) -> Self {
        Gq {
            re,
            im: Rational::zero(),
        }
    }

    pub fn int(n: i64) -> Self {
        Gq::real(rat_int(n))
    }

    pub fn frac(p: i64, q: i64) -> Self {
        Gq::real(rat(p, q))
    }

    pub fn i() -> Self {
        Gq {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        Gq {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn norm_sqr(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Multiplicative inverse. Panics on zero, like integer division.
    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero in Gq");
        Gq {
            re: &self.re / &n,
            im: -(&self.im / &n),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    pub fn scale(&self, r: &Rational) -> Self {
        Gq {
            re: &self.re * r,
            im: &self.im * r,
        }
    }
}

impl Zero for Gq {
    fn zero() -> Self {
        Gq::default()
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Gq {
    fn one() -> Self {
        Gq::int(1)
    }
}

impl<'a> Add<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn add(self, o: &Gq) -> Gq {
        Gq {
            re: &self.re + &o.re,
            im: &self.im + &o.im,
        }
    }
}

impl<'a> Sub<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn sub(self, o: &Gq) -> Gq {
        Gq {
            re: &self.re - &o.re,
            im: &self.im - &o.im,
        }
    }
}

impl<'a> Mul<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn mul(self, o: &Gq) -> Gq {
        if self.im.is_zero() && o.im.is_zero() {
            return Gq::real(&self.re * &o.re);
        }
        Gq {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl<'a> Div<&'a Gq> for &'a Gq {
    type Output = Gq;
    fn div(self, o: &Gq) -> Gq {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero in Gq");
            return Gq {
                re: &self.re / &o.re,
                im: &self.im / &o.re,
            };
        }
        self * &o.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Gq> for Gq {
            type Output = Gq;
            fn $m(self, o: Gq) -> Gq {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a Gq> for Gq {
            type Output = Gq;
            fn $m(self, o: &Gq) -> Gq {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Neg for &Gq {
    type Output = Gq;
    fn neg(self) -> Gq {
        Gq {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl AddAssign<&Gq> for Gq {
    fn add_assign(&mut self, o: &Gq) {
        self.re += &o.re;
        if !o.im.is_zero() {
            self.im += &o.im;
        }
    }
}

impl SubAssign<&Gq> for Gq {
    fn sub_assign(&mut self, o: &Gq) {
        self.re -= &o.re;
        if !o.im.is_zero() {
            self.im -= &o.im;
        }
    }
}

impl MulAssign<&Gq> for Gq {
    fn mul_assign(&mut self, o: &Gq) {
        *self = &*self * o;
    }
}

impl From<Rational> for Gq {
    fn from(r: Rational) -> Self {
        Gq::real(r)
    }
}

impl From<i64> for Gq {
    fn from(n: i64) -> Self {
        Gq::int(n)
    }
}

impl fmt::Display for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -self.im.clone())
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for Gq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Wire form of a Gaussian rational: `{"re": "p/q", "im": "r/s"}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GqRepr {
    pub re: String,
    #[serde(default = "zero_string")]
    pub im: String,
}

fn zero_string() -> String {
    "0/1".to_string()
}

impl From<&Gq> for GqRepr {
    fn from(z: &Gq) -> Self {
        GqRepr {
            re: format_rational(&z.re),
            im: format_rational(&z.im),
        }
    }
}

impl TryFrom<&GqRepr> for Gq {
    type Error = ParseRationalError;
    fn try_from(r: &GqRepr) -> Result<Self, Self::Error> {
        Ok(Gq::new(parse_rational(&r.re)?, parse_rational(&r.im)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_ops() {
        let a = Gq::new(rat(1, 2), rat(1, 3));
        let b = Gq::new(rat(-2, 5), rat(3, 1));
        assert_eq!(&(&a * &b) / &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!(&a * &a.inv(), Gq::one());
        assert_eq!(Gq::i() * Gq::i(), Gq::int(-1));
        assert_eq!(a.conj().conj(), a);
        assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
    }

    #[test]
    fn rational_strings() {
        assert_eq!(parse_rational("3/6").unwrap(), rat(1, 2));
        assert_eq!(parse_rational(" -4 ").unwrap(), rat_int(-4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&rat_int(3)), "3/1");
        assert_eq!(format_rational(&rat(-2, 4)), "-1/2");
    }
}
