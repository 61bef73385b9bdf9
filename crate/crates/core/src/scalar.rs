//! Numeric abstraction shared by the exact and floating-point paths.
//!
//! [`Scalar`] is what the model, the instance builders and certificate
//! verification need: field arithmetic, ordering and conversions. The simplex
//! solver additionally wants hardware floats, expressed by [`FloatScalar`].

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, NumAssign, Signed, ToPrimitive};

pub trait Scalar:
    Clone + Debug + Display + PartialOrd + Num + Signed + Send + Sync + 'static
{
    /// Exact conversion of a binary double (rationals keep every bit).
    fn cast_f64(v: f64) -> Self;

    fn as_f64(&self) -> f64;

    /// Parse a decimal literal such as `"0.612275"` or `"-1.5e-3"`.
    /// Rationals parse it exactly; floats round once.
    fn from_decimal(s: &str) -> Option<Self>;

    fn from_int(v: i64) -> Self;

    /// `self > 0`. `Signed::is_positive` reads the sign bit on floats and so
    /// counts `+0.0` as positive; this does not.
    fn gt_zero(&self) -> bool {
        *self > Self::zero()
    }

    /// `self < 0`, false for `-0.0`.
    fn lt_zero(&self) -> bool {
        *self < Self::zero()
    }

    /// True for types where comparisons are exact and no tolerance is needed.
    fn is_exact() -> bool {
        false
    }

    fn max_of(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }

    fn min_of(self, other: Self) -> Self {
        if other < self {
            other
        } else {
            self
        }
    }
}

/// Scalars the simplex solver runs on.
pub trait FloatScalar: Scalar + Float + NumAssign + Sum + Copy {}

impl Scalar for f64 {
    fn cast_f64(v: f64) -> Self {
        v
    }
    fn as_f64(&self) -> f64 {
        *self
    }
    fn from_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
}

impl Scalar for f32 {
    fn cast_f64(v: f64) -> Self {
        v as f32
    }
    fn as_f64(&self) -> f64 {
        f64::from(*self)
    }
    fn from_decimal(s: &str) -> Option<Self> {
        s.trim().parse().ok()
    }
    fn from_int(v: i64) -> Self {
        v as f32
    }
}

impl FloatScalar for f64 {}
impl FloatScalar for f32 {}

impl Scalar for BigRational {
    fn cast_f64(v: f64) -> Self {
        BigRational::from_float(v).expect("finite f64")
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or_else(|| {
            // Huge numerators/denominators: fall back to a scaled division.
            let n = self.numer().to_f64().unwrap_or(f64::NAN);
            let d = self.denom().to_f64().unwrap_or(f64::NAN);
            n / d
        })
    }
    fn from_decimal(s: &str) -> Option<Self> {
        parse_decimal(s)
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_i64(v).expect("i64 fits")
    }
    fn is_exact() -> bool {
        true
    }
}

fn parse_decimal(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (mantissa, exponent) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (negative, mantissa) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = match mantissa.split_once('.') {
        Some((i, f)) => (i, f),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let numer = BigInt::from_str_radix(if digits.is_empty() { "0" } else { &digits }, 10).ok()?;
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10);
    let mut value = BigRational::from_integer(numer);
    if scale >= 0 {
        value *= BigRational::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        value /= BigRational::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if negative { -value } else { value })
}

/// Convert between scalar types through `f64`; exact from a float into an
/// exact type, rounding otherwise.
pub fn convert<S: Scalar, T: Scalar>(v: &S) -> T {
    T::cast_f64(v.as_f64())
}

pub fn sum<T: Scalar>(items: impl IntoIterator<Item = T>) -> T {
    items.into_iter().fold(T::zero(), |acc, v| acc + v)
}
