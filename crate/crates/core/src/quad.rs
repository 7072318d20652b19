//! Exact numbers of the form `a + b√2` with arbitrary-precision rational parts.
//!
//! Every bound and expectation value in the crate is a [`Quad`], so violation
//! verdicts never depend on floating-point rounding.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::Error;

/// Rational number used for Quad components and probabilities.
pub type Rational = BigRational;

/// Builds a rational `num/den`. Panics on a zero denominator.
pub fn ratio(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serializes a rational as its `p/q` string.
pub fn serialize_rational<S: serde::Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(r))
}

pub fn serialize_rational_opt<S: serde::Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => serialize_rational(r, s),
        None => s.serialize_none(),
    }
}

/// Parses `p/q` or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Rational, Error> {
    let s = s.trim();
    let bad = || Error::Parse {
        line: 0,
        column: 0,
        message: format!("invalid rational `{s}`"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(BigInt::from_str(s).map_err(|_| bad())?)),
    }
}

/// An element `a + b√2` of Q[√2].
///
/// `BigRational` keeps both components in lowest terms with a positive
/// denominator, so the derived equality is exact equality of the real numbers.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Quad {
    a: Rational,
    b: Rational,
}

impl Quad {
    pub fn new(a: Rational, b: Rational) -> Self {
        Quad { a, b }
    }

    /// `a + b√2` from integer parts.
    pub fn from_ints(a: i64, b: i64) -> Self {
        Quad::new(int(a), int(b))
    }

    pub fn from_rational(a: Rational) -> Self {
        Quad::new(a, Rational::zero())
    }

    pub fn zero() -> Self {
        Quad::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Quad::from_ints(1, 0)
    }

    pub fn sqrt2() -> Self {
        Quad::from_ints(0, 1)
    }

    /// Rational part.
    pub fn a(&self) -> &Rational {
        &self.a
    }

    /// Coefficient of √2.
    pub fn b(&self) -> &Rational {
        &self.b
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Multiplies both components by a rational.
    pub fn scale(&self, c: &Rational) -> Quad {
        Quad::new(&self.a * c, &self.b * c)
    }

    /// Conjugate `a − b√2`.
    pub fn conjugate(&self) -> Quad {
        Quad::new(self.a.clone(), -self.b.clone())
    }

    /// Field norm `a² − 2b²`, zero only for zero.
    pub fn norm(&self) -> Rational {
        &self.a * &self.a - int(2) * &self.b * &self.b
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn recip(&self) -> Option<Quad> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(Quad::new(&self.a / &n, -(&self.b / &n)))
    }

    /// Exact sign as an ordering against zero.
    pub fn signum(&self) -> Ordering {
        let sa = self.a.sign_ordering();
        let sb = self.b.sign_ordering();
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            // Opposite signs: the side with the larger square wins.
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = int(2) * &self.b * &self.b;
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    /// Floating-point value; both parts are converted before combining.
    pub fn to_f64(&self) -> f64 {
        rational_to_f64(&self.a) + rational_to_f64(&self.b) * std::f64::consts::SQRT_2
    }

    /// Largest integer `k` with `k ≤ self`.
    pub fn floor(&self) -> BigInt {
        let guess = BigInt::from(self.to_f64().floor() as i64);
        let mut k = guess;
        while Quad::from_rational(Rational::from_integer(k.clone())) > *self {
            k -= 1;
        }
        while Quad::from_rational(Rational::from_integer(&k + 1)) <= *self {
            k += 1;
        }
        k
    }
}

trait SignOrdering {
    fn sign_ordering(&self) -> Ordering;
}

impl SignOrdering for Rational {
    fn sign_ordering(&self) -> Ordering {
        match self.numer().sign() {
            Sign::Minus => Ordering::Less,
            Sign::NoSign => Ordering::Equal,
            Sign::Plus => Ordering::Greater,
        }
    }
}

fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Huge components: scale both parts down to a representable range.
    let shift = r.numer().bits().max(r.denom().bits()) as i64 - 1000;
    let n = r.numer() >> shift.max(0) as usize;
    let d = r.denom() >> shift.max(0) as usize;
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}

impl Ord for Quad {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum()
    }
}

impl PartialOrd for Quad {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Default for Quad {
    fn default() -> Self {
        Quad::zero()
    }
}

impl<'a> Add<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn add(self, rhs: &Quad) -> Quad {
        Quad::new(&self.a + &rhs.a, &self.b + &rhs.b)
    }
}

impl<'a> Sub<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn sub(self, rhs: &Quad) -> Quad {
        Quad::new(&self.a - &rhs.a, &self.b - &rhs.b)
    }
}

impl<'a> Mul<&'a Quad> for &'a Quad {
    type Output = Quad;
    fn mul(self, rhs: &Quad) -> Quad {
        Quad::new(
            &self.a * &rhs.a + int(2) * &self.b * &rhs.b,
            &self.a * &rhs.b + &self.b * &rhs.a,
        )
    }
}

impl<'a> Div<&'a Quad> for &'a Quad {
    type Output = Quad;
    /// Panics on division by zero.
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Quad) -> Quad {
        self * &rhs.recip().expect("division by zero Quad")
    }
}

impl Neg for &Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        Quad::new(-self.a.clone(), -self.b.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Quad> for Quad {
            type Output = Quad;
            fn $m(self, rhs: Quad) -> Quad { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a Quad> for Quad {
            type Output = Quad;
            fn $m(self, rhs: &Quad) -> Quad { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for Quad {
    type Output = Quad;
    fn neg(self) -> Quad {
        -&self
    }
}

impl std::iter::Sum for Quad {
    fn sum<I: Iterator<Item = Quad>>(iter: I) -> Quad {
        iter.fold(Quad::zero(), |acc, x| acc + x)
    }
}

impl fmt::Display for Quad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}√2", self.b),
            (false, false) if self.b.is_negative() => {
                write!(f, "{} - {}√2", self.a, -self.b.clone())
            }
            (false, false) => write!(f, "{} + {}√2", self.a, self.b),
        }
    }
}

/// Wire form: `{"a": "p/q", "b": "r/s", "approx": 1.23}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct QuadRepr {
    pub a: String,
    pub b: String,
    pub approx: f64,
}

impl From<&Quad> for QuadRepr {
    fn from(q: &Quad) -> Self {
        QuadRepr {
            a: format_rational(&q.a),
            b: format_rational(&q.b),
            approx: q.to_f64(),
        }
    }
}

impl TryFrom<QuadRepr> for Quad {
    type Error = Error;
    fn try_from(r: QuadRepr) -> Result<Quad, Error> {
        Ok(Quad::new(parse_rational(&r.a)?, parse_rational(&r.b)?))
    }
}

impl Serialize for Quad {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        QuadRepr::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Quad {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = QuadRepr::deserialize(d)?;
        Quad::try_from(repr).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> Quad {
        Quad::from_ints(a, b)
    }

    #[test]
    fn addition_examples() {
        assert_eq!(q(5, 12) + q(-3, -3), q(2, 9));
        assert_eq!(q(0, 0) + q(7, -4), q(7, -4));
        assert_eq!(q(1, 1) + q(1, -1), q(2, 0));
    }

    #[test]
    fn scale_examples() {
        assert_eq!(q(5, 12).scale(&ratio(1, 2)), Quad::new(ratio(5, 2), int(6)));
        assert_eq!(q(3, -8).scale(&int(0)), Quad::zero());
        assert_eq!(q(4, 11).scale(&int(1)), q(4, 11));
    }

    #[test]
    fn comparison_examples() {
        // 9²·2 = 162 > 12² = 144
        assert_eq!(q(2, 9).cmp(&q(14, 0)), Ordering::Greater);
        assert_eq!(q(1, 8).cmp(&q(13, 0)), Ordering::Less);
        assert_eq!(q(3, -7).cmp(&q(3, -7)), Ordering::Equal);
        // Frozen with 50-digit mpmath: 2+9√2 = 14.7279..., 1+8√2 = 12.3137...
        assert!((q(2, 9).to_f64() - 14.727_922_061_357_855).abs() < 1e-12);
        assert!((q(1, 8).to_f64() - 12.313_708_498_984_761).abs() < 1e-12);
    }

    #[test]
    fn float_conversion() {
        assert!((q(5, 12).to_f64() - 21.970_562_748_477_141).abs() < 1e-12);
        assert_eq!(q(0, 1).to_f64(), std::f64::consts::SQRT_2);
        assert_eq!(q(7, 0).to_f64(), 7.0);
    }

    #[test]
    fn division_and_floor() {
        let x = q(3, 2);
        assert_eq!(&(&x / &q(1, 1)) * &q(1, 1), x);
        assert!(Quad::zero().recip().is_none());
        // 12 - 6√2 ≈ 3.515
        assert_eq!(q(12, -6).floor(), BigInt::from(3));
        assert_eq!(q(-1, 0).floor(), BigInt::from(-1));
        assert_eq!(q(0, -1).floor(), BigInt::from(-2));
    }

    #[test]
    fn rational_round_trip_text() {
        assert_eq!(parse_rational("5/10").unwrap(), ratio(1, 2));
        assert_eq!(parse_rational("-7").unwrap(), int(-7));
        assert!(parse_rational("1/0").is_err());
        assert_eq!(format_rational(&int(5)), "5/1");
        let json = serde_json::to_string(&q(5, 12)).unwrap();
        assert!(json.starts_with(r#"{"a":"5/1","b":"12/1","approx":21.97"#));
        let back: Quad = serde_json::from_str(&json).unwrap();
        assert_eq!(back, q(5, 12));
    }

    #[test]
    fn display() {
        assert_eq!(q(4, 11).to_string(), "4 + 11√2");
        assert_eq!(q(0, 4).to_string(), "4√2");
        assert_eq!(q(17, 0).to_string(), "17");
        assert_eq!(q(1, -1).to_string(), "1 - 1√2");
    }
}
