//! Scalar types the geometry is generic over.
//!
//! All predicates are written against [`Scalar`]. Exact instantiations
//! ([`Rational`], [`BigRational`]) decide every predicate correctly; the float
//! instantiations exist for quick experiments and rendering and carry the usual
//! floating-point caveats.
//!
//! [`Rational`] is the default exact type. It keeps a certified `f64`
//! enclosure next to the exact value so that comparisons and orientation
//! tests only touch the big integers when the enclosures cannot separate the
//! operands.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Closed `f64` interval guaranteed to contain an exact value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Enclosure {
    pub lo: f64,
    pub hi: f64,
}

impl Enclosure {
    pub const WHOLE: Enclosure = Enclosure {
        lo: f64::NEG_INFINITY,
        hi: f64::INFINITY,
    };

    #[inline]
    pub fn point(v: f64) -> Self {
        Enclosure { lo: v, hi: v }
    }

    /// Enclosure of a value whose `f64` conversion is `v` (within two ulps).
    #[inline]
    pub fn around(v: f64) -> Self {
        if v.is_finite() {
            Enclosure {
                lo: v.next_down().next_down(),
                hi: v.next_up().next_up(),
            }
        } else {
            Self::WHOLE
        }
    }

    /// Sign of every value in the enclosure, if it is the same for all of them.
    #[inline]
    pub fn sign(self) -> Option<Ordering> {
        if self.lo > 0.0 {
            Some(Ordering::Greater)
        } else if self.hi < 0.0 {
            Some(Ordering::Less)
        } else if self.lo == 0.0 && self.hi == 0.0 {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    /// Order of two values, if their enclosures separate them.
    #[inline]
    pub fn separate(self, other: Self) -> Option<Ordering> {
        if self.hi < other.lo {
            Some(Ordering::Less)
        } else if self.lo > other.hi {
            Some(Ordering::Greater)
        } else {
            None
        }
    }
}

impl std::ops::Sub for Enclosure {
    type Output = Enclosure;

    #[inline]
    fn sub(self, other: Self) -> Self {
        Enclosure {
            lo: (self.lo - other.hi).next_down(),
            hi: (self.hi - other.lo).next_up(),
        }
    }
}

impl std::ops::Mul for Enclosure {
    type Output = Enclosure;

    #[inline]
    fn mul(self, other: Self) -> Self {
        let a = self.lo * other.lo;
        let b = self.lo * other.hi;
        let c = self.hi * other.lo;
        let d = self.hi * other.hi;
        Enclosure {
            lo: a.min(b).min(c).min(d).next_down(),
            hi: a.max(b).max(c).max(d).next_up(),
        }
    }
}

/// Ordered field used for terrain coordinates.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// Whether field operations and comparisons are exact.
    const EXACT: bool;

    fn from_rational(value: &BigRational) -> Self;

    fn to_rational(&self) -> Option<BigRational>;

    fn to_f64(&self) -> f64;

    /// Certified enclosure, when one is cheaply available.
    #[inline]
    fn enclosure(&self) -> Option<Enclosure> {
        None
    }

    fn total_cmp(&self, other: &Self) -> Ordering;

    fn from_i64(v: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(v)))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_rational(&BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    #[inline]
    fn sign(&self) -> Ordering {
        self.total_cmp(&Self::zero())
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn from_rational(value: &BigRational) -> Self {
        ToPrimitive::to_f64(value).unwrap_or(f64::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }

    #[inline]
    fn total_cmp(&self, other: &Self) -> Ordering {
        f64::total_cmp(self, other)
    }
}

impl Scalar for f32 {
    const EXACT: bool = false;

    fn from_rational(value: &BigRational) -> Self {
        value.to_f32().unwrap_or(f32::NAN)
    }

    fn to_rational(&self) -> Option<BigRational> {
        BigRational::from_float(*self)
    }

    #[inline]
    fn to_f64(&self) -> f64 {
        *self as f64
    }

    #[inline]
    fn total_cmp(&self, other: &Self) -> Ordering {
        f32::total_cmp(self, other)
    }
}

impl Scalar for BigRational {
    const EXACT: bool = true;

    fn from_rational(value: &BigRational) -> Self {
        value.clone()
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.clone())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    #[inline]
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }
}

/// Exact rational with a cached floating-point enclosure.
#[derive(Clone)]
pub struct Rational {
    value: BigRational,
    approx: Enclosure,
}

impl Rational {
    pub fn new(value: BigRational) -> Self {
        let approx = match ToPrimitive::to_f64(&value) {
            Some(v) if value.is_integer() && v.abs() < 9.0e15 => Enclosure::point(v),
            Some(v) => Enclosure::around(v),
            None => Enclosure::WHOLE,
        };
        Rational { value, approx }
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn into_inner(self) -> BigRational {
        self.value
    }
}

impl From<BigRational> for Rational {
    fn from(value: BigRational) -> Self {
        Rational::new(value)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::new(BigRational::from_integer(BigInt::from(v)))
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.approx.separate(other.approx).is_none() && self.value == other.value
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.approx
            .separate(other.approx)
            .unwrap_or_else(|| self.value.cmp(&other.value))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident) => {
        impl $tr for Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: Rational) -> Rational {
                Rational::new(self.value.$method(rhs.value))
            }
        }
        impl<'a> $tr<&'a Rational> for &'a Rational {
            type Output = Rational;
            #[inline]
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational::new((&self.value).$method(&rhs.value))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            value: -self.value,
            approx: Enclosure {
                lo: -self.approx.hi,
                hi: -self.approx.lo,
            },
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational {
            value: BigRational::zero(),
            approx: Enclosure::point(0.0),
        }
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational {
            value: BigRational::one(),
            approx: Enclosure::point(1.0),
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_rational(value: &BigRational) -> Self {
        Rational::new(value.clone())
    }

    fn to_rational(&self) -> Option<BigRational> {
        Some(self.value.clone())
    }

    fn to_f64(&self) -> f64 {
        if self.approx.lo == self.approx.hi {
            self.approx.lo
        } else {
            ToPrimitive::to_f64(&self.value).unwrap_or(f64::NAN)
        }
    }

    #[inline]
    fn enclosure(&self) -> Option<Enclosure> {
        Some(self.approx)
    }

    #[inline]
    fn total_cmp(&self, other: &Self) -> Ordering {
        self.cmp(other)
    }

    #[inline]
    fn sign(&self) -> Ordering {
        self.approx
            .sign()
            .unwrap_or_else(|| self.value.numer().sign().cmp_zero())
    }
}

trait CmpZero {
    fn cmp_zero(self) -> Ordering;
}

impl CmpZero for num_bigint::Sign {
    fn cmp_zero(self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed number {0:?}")]
pub struct ParseNumberError(pub String);

/// Parses a decimal literal (`-1.25`, `3e-2`) or a fraction (`7/3`) exactly.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseNumberError> {
    let err = || ParseNumberError(text.to_string());
    let text = text.trim();
    if text.is_empty() {
        return Err(err());
    }
    if let Some((num, den)) = text.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| err())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| err())?;
        if den.is_zero() {
            return Err(err());
        }
        return Ok(BigRational::new(num, den));
    }

    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => {
            let exp: i64 = text[pos + 1..].parse().map_err(|_| err())?;
            (&text[..pos], exp)
        }
        None => (text, 0),
    };
    let (negative, digits) = match mantissa.as_bytes().first() {
        Some(b'-') => (true, &mantissa[1..]),
        Some(b'+') => (false, &mantissa[1..]),
        _ => (false, mantissa),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part
        .bytes()
        .chain(frac_part.bytes())
        .all(|b| b.is_ascii_digit())
    {
        return Err(err());
    }
    let all_digits = format!("{int_part}{frac_part}");
    let mut numer = BigInt::from_str(&all_digits).map_err(|_| err())?;
    if negative {
        numer = -numer;
    }
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(numer * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(numer, num_traits::pow(ten, (-scale) as usize))
    };
    Ok(value)
}

/// Formats an exact value as `p/q` (or an integer); floats fall back to their
/// shortest round-trip decimal.
pub fn format_scalar<S: Scalar>(value: &S) -> String {
    if S::EXACT {
        match value.to_rational() {
            Some(r) if r.is_negative() && r.is_integer() => r.numer().to_string(),
            Some(r) => r.to_string(),
            None => value.to_string(),
        }
    } else {
        value.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parses_decimals_exactly() {
        assert_eq!(parse_rational("0.1").unwrap(), q(1, 10));
        assert_eq!(parse_rational("-2.50").unwrap(), q(-5, 2));
        assert_eq!(parse_rational("3e-2").unwrap(), q(3, 100));
        assert_eq!(parse_rational("1.5E3").unwrap(), q(1500, 1));
        assert_eq!(parse_rational("7/3").unwrap(), q(7, 3));
        assert_eq!(parse_rational("-4/6").unwrap(), q(-2, 3));
        assert_eq!(parse_rational(".5").unwrap(), q(1, 2));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "--1", "1e", "."] {
            assert!(parse_rational(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn rational_ordering_matches_exact() {
        let a = Rational::new(q(1, 3));
        let b = Rational::new(q(1, 3) + q(1, 1_000_000_000_000_000_000));
        assert!(a < b);
        assert_eq!(a, Rational::new(q(2, 6)));
        assert_eq!((a.clone() - a.clone()).sign(), Ordering::Equal);
        assert_eq!((b - a).sign(), Ordering::Greater);
    }

    #[test]
    fn enclosure_arithmetic_contains_result() {
        let x = Enclosure::around(0.1);
        let y = Enclosure::around(0.2);
        let p = x * y;
        assert!(p.lo <= 0.02 && 0.02 <= p.hi);
        let d = y - x;
        assert!(d.lo <= 0.1 && 0.1 <= d.hi);
        assert_eq!(Enclosure::point(0.0).sign(), Some(Ordering::Equal));
    }
}
