//! Exact rational arithmetic.
//!
//! Every quantity in this crate (distances, scales, weights, barycentric
//! coordinates) is an exact rational. `Q` keeps values in a reduced
//! `i64/i64` form while they fit and promotes to arbitrary precision
//! when they do not, so arithmetic is allocation-free at desk scale and
//! never silently wrong beyond it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

type BigRatio = num_rational_shim::BigRatio;

/// Minimal big-rational built on `BigInt`. Only the operations `Q` needs.
mod num_rational_shim {
    use super::*;

    /// Reduced fraction; `den` always positive.
    #[derive(Clone, Debug, PartialEq, Eq)]
    pub struct BigRatio {
        pub num: BigInt,
        pub den: BigInt,
    }

    impl BigRatio {
        pub fn new(num: BigInt, den: BigInt) -> Self {
            assert!(!den.is_zero(), "rational with zero denominator");
            let mut num = num;
            let mut den = den;
            if den.is_negative() {
                num = -num;
                den = -den;
            }
            let g = num.gcd(&den);
            if !g.is_zero() {
                num /= &g;
                den /= &g;
            }
            BigRatio { num, den }
        }

        pub fn add(&self, o: &Self) -> Self {
            BigRatio::new(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
        }

        pub fn sub(&self, o: &Self) -> Self {
            BigRatio::new(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den)
        }

        pub fn mul(&self, o: &Self) -> Self {
            BigRatio::new(&self.num * &o.num, &self.den * &o.den)
        }

        pub fn div(&self, o: &Self) -> Self {
            assert!(!o.num.is_zero(), "division by zero rational");
            BigRatio::new(&self.num * &o.den, &self.den * &o.num)
        }

        pub fn cmp(&self, o: &Self) -> Ordering {
            (&self.num * &o.den).cmp(&(&o.num * &self.den))
        }
    }
}

#[derive(Clone, Debug)]
enum Repr {
    Small { num: i64, den: i64 },
    Big(Box<BigRatio>),
}

/// Exact rational number.
///
/// Canonical form: reduced, positive denominator, and the compact
/// representation whenever numerator and denominator fit in `i64`.
/// Equality, ordering, and hashing agree across representations
/// because canonicalization makes the representation unique.
#[derive(Clone, Debug)]
pub struct Q(Repr);

const fn gcd_i128(mut a: i128, mut b: i128) -> i128 {
    if a < 0 {
        a = -a;
    }
    if b < 0 {
        b = -b;
    }
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Q {
    pub const ZERO: Q = Q(Repr::Small { num: 0, den: 1 });
    pub const ONE: Q = Q(Repr::Small { num: 1, den: 1 });

    pub fn from_int(n: i64) -> Q {
        Q(Repr::Small { num: n, den: 1 })
    }

    /// `num/den` reduced. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Q {
        assert!(den != 0, "rational with zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Q {
        debug_assert!(den != 0);
        let (mut num, mut den) = if den < 0 { (-num, -den) } else { (num, den) };
        let g = gcd_i128(num, den);
        if g > 1 {
            num /= g;
            den /= g;
        }
        match (i64::try_from(num), i64::try_from(den)) {
            (Ok(n), Ok(d)) => Q(Repr::Small { num: n, den: d }),
            _ => Q(Repr::Big(Box::new(BigRatio::new(
                BigInt::from(num),
                BigInt::from(den),
            )))),
        }
    }

    fn from_big(b: BigRatio) -> Q {
        match (b.num.to_i64(), b.den.to_i64()) {
            (Some(num), Some(den)) => Q(Repr::Small { num, den }),
            _ => Q(Repr::Big(Box::new(b))),
        }
    }

    fn to_big(&self) -> BigRatio {
        match &self.0 {
            Repr::Small { num, den } => BigRatio {
                num: BigInt::from(*num),
                den: BigInt::from(*den),
            },
            Repr::Big(b) => (**b).clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Small { num: 0, .. })
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num < 0,
            Repr::Big(b) => b.num.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match &self.0 {
            Repr::Small { num, .. } => *num > 0,
            Repr::Big(b) => b.num.is_positive(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match &self.0 {
            Repr::Small { den, .. } => *den == 1,
            Repr::Big(b) => b.den == BigInt::from(1),
        }
    }

    /// Integer value if this rational is an integer fitting `i64`.
    pub fn as_integer(&self) -> Option<i64> {
        match &self.0 {
            Repr::Small { num, den: 1 } => Some(*num),
            _ => None,
        }
    }

    pub fn abs(&self) -> Q {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(self, other: Q) -> Q {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Q) -> Q {
        if self >= other {
            self
        } else {
            other
        }
    }

    /// Halve without going through a generic multiply.
    pub fn half(&self) -> Q {
        self.clone() / Q::from_int(2)
    }
}

impl PartialEq for Q {
    fn eq(&self, other: &Self) -> bool {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => a == c && b == d,
            (Repr::Big(x), Repr::Big(y)) => x == y,
            // canonical form: a Big never equals a Small
            _ => false,
        }
    }
}
impl Eq for Q {}

impl PartialOrd for Q {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Q {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                // i64 products fit in i128 exactly
                (*a as i128 * *d as i128).cmp(&(*c as i128 * *b as i128))
            }
            _ => self.to_big().cmp(&other.to_big()),
        }
    }
}

impl Hash for Q {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match &self.0 {
            Repr::Small { num, den } => {
                0u8.hash(state);
                num.hash(state);
                den.hash(state);
            }
            Repr::Big(b) => {
                1u8.hash(state);
                b.num.hash(state);
                b.den.hash(state);
            }
        }
    }
}

impl Add for Q {
    type Output = Q;
    fn add(self, rhs: Q) -> Q {
        &self + &rhs
    }
}

impl Add for &Q {
    type Output = Q;
    fn add(self, rhs: &Q) -> Q {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::from_i128(a * d + c * b, b * d)
            }
            _ => Q::from_big(self.to_big().add(&rhs.to_big())),
        }
    }
}

impl Sub for Q {
    type Output = Q;
    fn sub(self, rhs: Q) -> Q {
        &self - &rhs
    }
}

impl Sub for &Q {
    type Output = Q;
    fn sub(self, rhs: &Q) -> Q {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                Q::from_i128(a * d - c * b, b * d)
            }
            _ => Q::from_big(self.to_big().sub(&rhs.to_big())),
        }
    }
}

impl Mul for Q {
    type Output = Q;
    fn mul(self, rhs: Q) -> Q {
        &self * &rhs
    }
}

impl Mul for &Q {
    type Output = Q;
    fn mul(self, rhs: &Q) -> Q {
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Q::from_i128(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Q::from_big(self.to_big().mul(&rhs.to_big())),
        }
    }
}

impl Div for Q {
    type Output = Q;
    fn div(self, rhs: Q) -> Q {
        &self / &rhs
    }
}

impl Div for &Q {
    type Output = Q;
    fn div(self, rhs: &Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero rational");
        match (&self.0, &rhs.0) {
            (Repr::Small { num: a, den: b }, Repr::Small { num: c, den: d }) => {
                Q::from_i128(*a as i128 * *d as i128, *b as i128 * *c as i128)
            }
            _ => Q::from_big(self.to_big().div(&rhs.to_big())),
        }
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        match self.0 {
            Repr::Small { num, den } => {
                if num == i64::MIN {
                    Q::from_i128(-(num as i128), den as i128)
                } else {
                    Q(Repr::Small { num: -num, den })
                }
            }
            Repr::Big(b) => Q::from_big(BigRatio::new(-b.num.clone(), b.den.clone())),
        }
    }
}

impl AddAssign for Q {
    fn add_assign(&mut self, rhs: Q) {
        *self = &*self + &rhs;
    }
}

impl SubAssign for Q {
    fn sub_assign(&mut self, rhs: Q) {
        *self = &*self - &rhs;
    }
}

impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::ZERO, |a, b| a + b)
    }
}

impl<'a> Sum<&'a Q> for Q {
    fn sum<I: Iterator<Item = &'a Q>>(iter: I) -> Q {
        iter.fold(Q::ZERO, |a, b| &a + b)
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::from_int(n)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small { num, den: 1 } => write!(f, "{num}"),
            Repr::Small { num, den } => write!(f, "{num}/{den}"),
            Repr::Big(b) if b.den == BigInt::from(1) => write!(f, "{}", b.num),
            Repr::Big(b) => write!(f, "{}/{}", b.num, b.den),
        }
    }
}

/// Error parsing a rational from text.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid rational literal {input:?}: {reason}")]
pub struct ParseQError {
    pub input: String,
    pub reason: &'static str,
}

impl FromStr for Q {
    type Err = ParseQError;

    /// Accepts `"p"` or `"p/q"` with optionally signed integer parts.
    fn from_str(s: &str) -> Result<Q, ParseQError> {
        let err = |reason| ParseQError {
            input: s.to_string(),
            reason,
        };
        let s = s.trim();
        let parse_int = |t: &str, what| -> Result<BigInt, ParseQError> {
            if t.is_empty() {
                return Err(err(what));
            }
            BigInt::from_str(t).map_err(|_| err(what))
        };
        match s.split_once('/') {
            None => {
                let n = parse_int(s, "expected an integer")?;
                Ok(Q::from_big(BigRatio::new(n, BigInt::from(1))))
            }
            Some((p, q)) => {
                let num = parse_int(p, "expected an integer numerator")?;
                let den = parse_int(q, "expected an integer denominator")?;
                if den.is_zero() {
                    return Err(err("zero denominator"));
                }
                Ok(Q::from_big(BigRatio::new(num, den)))
            }
        }
    }
}

// JSON form: bare integer when the value is an i64 integer, "p/q" string otherwise.
impl serde::Serialize for Q {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self.as_integer() {
            Some(n) => serializer.serialize_i64(n),
            None => serializer.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Q {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Q, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Q;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer or a \"p/q\" string")
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Q, E> {
                Ok(Q::from_int(v))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Q, E> {
                i64::try_from(v)
                    .map(Q::from_int)
                    .map_err(|_| E::custom("integer out of range"))
            }
            fn visit_f64<E: serde::de::Error>(self, v: f64) -> Result<Q, E> {
                // exactness contract: no floats, even ones that look integral
                Err(E::custom(format!(
                    "non-integer number {v}: write fractions as \"p/q\" strings"
                )))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Q, E> {
                v.parse().map_err(|e: ParseQError| E::custom(e.to_string()))
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// A rational extended with a single infinite value.
///
/// Used where a quantity can be genuinely unbounded on finite data:
/// the distance to an empty set, the Lebesgue number of a cover that
/// contains the whole space as one set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Extended {
    Finite(Q),
    Infinite,
}

impl Extended {
    pub fn finite(&self) -> Option<&Q> {
        match self {
            Extended::Finite(q) => Some(q),
            Extended::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Extended::Infinite)
    }
}

impl PartialOrd for Extended {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Extended {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Extended::Finite(a), Extended::Finite(b)) => a.cmp(b),
            (Extended::Finite(_), Extended::Infinite) => Ordering::Less,
            (Extended::Infinite, Extended::Finite(_)) => Ordering::Greater,
            (Extended::Infinite, Extended::Infinite) => Ordering::Equal,
        }
    }
}

impl From<Q> for Extended {
    fn from(q: Q) -> Extended {
        Extended::Finite(q)
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::Finite(q) => write!(f, "{q}"),
            Extended::Infinite => write!(f, "inf"),
        }
    }
}

impl serde::Serialize for Extended {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Extended::Finite(q) => q.serialize(serializer),
            Extended::Infinite => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> serde::Deserialize<'de> for Extended {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Extended, D::Error> {
        struct V;
        impl serde::de::Visitor<'_> for V {
            type Value = Extended;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                write!(f, "an integer, a \"p/q\" string, or \"inf\"")
            }
            fn visit_i64<E: serde::de::Error>(self, v: i64) -> Result<Extended, E> {
                Ok(Extended::Finite(Q::from_int(v)))
            }
            fn visit_u64<E: serde::de::Error>(self, v: u64) -> Result<Extended, E> {
                i64::try_from(v)
                    .map(|n| Extended::Finite(Q::from_int(n)))
                    .map_err(|_| E::custom("integer out of range"))
            }
            fn visit_str<E: serde::de::Error>(self, v: &str) -> Result<Extended, E> {
                if v == "inf" {
                    return Ok(Extended::Infinite);
                }
                v.parse()
                    .map(Extended::Finite)
                    .map_err(|e: ParseQError| E::custom(e.to_string()))
            }
        }
        deserializer.deserialize_any(V)
    }
}

/// Parse a rational, mapping failures to a caller-supplied error.
pub fn parse_q(s: &str) -> Result<Q, ParseQError> {
    s.parse()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Q {
        s.parse().unwrap()
    }

    #[test]
    fn construction_reduces() {
        assert_eq!(Q::new(2, 4), Q::new(1, 2));
        assert_eq!(Q::new(-2, -4), Q::new(1, 2));
        assert_eq!(Q::new(2, -4), Q::new(-1, 2));
        assert_eq!(Q::new(0, 5), Q::ZERO);
    }

    #[test]
    fn parse_and_display_round_trip() {
        for s in ["0", "7", "-3", "5/3", "-5/3", "1000000000000000000000000/7"] {
            assert_eq!(q(s).to_string(), s);
        }
        assert_eq!(q("4/6").to_string(), "2/3");
        assert_eq!(q("4/-6").to_string(), "-2/3");
        assert!("1/0".parse::<Q>().is_err());
        assert!("x".parse::<Q>().is_err());
        assert!("".parse::<Q>().is_err());
    }

    #[test]
    fn arithmetic_small() {
        assert_eq!(q("1/2") + q("1/3"), q("5/6"));
        assert_eq!(q("1/2") - q("1/3"), q("1/6"));
        assert_eq!(q("2/3") * q("9/4"), q("3/2"));
        assert_eq!(q("2/3") / q("4/3"), q("1/2"));
        assert_eq!(-q("5/3"), q("-5/3"));
        assert!(q("1/3") < q("1/2"));
        assert!(q("-1/2") < q("0"));
    }

    #[test]
    fn promotion_and_demotion() {
        let big = Q::from_int(i64::MAX);
        let sum = &big * &big; // exceeds i64
        assert_eq!(sum.to_string(), format!("{}", (i64::MAX as i128).pow(2)));
        let back = &sum / &big;
        assert_eq!(back, big);
        assert!(back.as_integer().is_some());
    }

    #[test]
    fn adversarial_denominators() {
        // lcm of many primes overflows i64; exactness must survive
        let primes = [
            1009i64, 1013, 1019, 1021, 1031, 1033, 1039, 1049, 1051, 1061, 1063, 1069,
        ];
        let total: Q = primes.iter().map(|&p| Q::new(1, p)).sum();
        let back: Q = primes
            .iter()
            .map(|&p| &total - &(&total - &Q::new(1, p)))
            .sum::<Q>();
        assert_eq!(back, total);
        // spot-check one exact subtraction
        let rest = &total - &Q::new(1, 1009);
        assert_eq!(&rest + &Q::new(1, 1009), total);
    }

    #[test]
    fn json_forms() {
        assert_eq!(serde_json::to_string(&Q::from_int(5)).unwrap(), "5");
        assert_eq!(serde_json::to_string(&q("5/3")).unwrap(), "\"5/3\"");
        assert_eq!(serde_json::from_str::<Q>("5").unwrap(), Q::from_int(5));
        assert_eq!(serde_json::from_str::<Q>("\"5/3\"").unwrap(), q("5/3"));
        assert_eq!(serde_json::from_str::<Q>("\"-7\"").unwrap(), q("-7"));
        assert!(serde_json::from_str::<Q>("0.5").is_err());
        assert!(serde_json::from_str::<Q>("1.0").is_err());
    }

    #[test]
    fn extended_order() {
        assert!(Extended::Finite(q("1000000")) < Extended::Infinite);
        assert_eq!(Extended::Infinite, Extended::Infinite);
        assert_eq!(
            serde_json::to_string(&Extended::Infinite).unwrap(),
            "\"inf\""
        );
        assert_eq!(
            serde_json::from_str::<Extended>("\"inf\"").unwrap(),
            Extended::Infinite
        );
    }
}
