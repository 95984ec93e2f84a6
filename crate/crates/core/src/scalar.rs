//! Numeric abstraction shared by every algorithm in the crate.
//!
//! All thresholds in the allocation algorithms are strict comparisons, so the
//! reference scalar is [`BigRational`](num_rational::BigRational). `f64`, `f32` and
//! `Ratio<i64>` are supported for quick experiments where exactness is not
//! required.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, ToPrimitive, Zero};

pub trait Scalar:
    Num + Clone + PartialOrd + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// `numer / denom` in this scalar type.
    fn ratio(numer: i64, denom: i64) -> Self {
        Self::from_i64(numer).expect("numerator representable")
            / Self::from_i64(denom).expect("denominator representable")
    }

    fn from_count(value: usize) -> Self {
        <Self as FromPrimitive>::from_usize(value).expect("count representable")
    }

    fn half(&self) -> Self {
        self.clone() / (Self::one() + Self::one())
    }

    /// Whether `sum` equals one, up to the precision of the type.
    fn is_unit(sum: &Self) -> bool {
        *sum == Self::one()
    }

    fn is_negative(&self) -> bool {
        *self < Self::zero()
    }

    /// Rejects values that cannot take part in comparisons (NaN, infinities).
    fn is_finite(&self) -> bool {
        true
    }

    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for BigRational {}

impl Scalar for Ratio<i64> {}

impl Scalar for f64 {
    fn is_unit(sum: &Self) -> bool {
        (sum - 1.0).abs() <= 1e-9
    }

    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
}

impl Scalar for f32 {
    fn is_unit(sum: &Self) -> bool {
        (sum - 1.0).abs() <= 1e-5
    }

    fn is_finite(&self) -> bool {
        f32::is_finite(*self)
    }
}

pub(crate) fn sum<'a, T: Scalar>(values: impl IntoIterator<Item = &'a T>) -> T {
    values.into_iter().fold(T::zero(), |acc, v| acc + v.clone())
}

/// Total order for sorting; `Scalar` values are finite after validation.
pub(crate) fn cmp<T: Scalar>(a: &T, b: &T) -> std::cmp::Ordering {
    a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal)
}

pub(crate) fn max<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Parses `"3"`, `"-0.25"` or `"7/20"` into an exact rational. Exponent notation is rejected.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if text.is_empty() {
        return None;
    }
    if let Some((numer, denom)) = text.split_once('/') {
        let numer: BigInt = numer.trim().parse().ok()?;
        let denom: BigInt = denom.trim().parse().ok()?;
        if denom.is_zero() {
            return None;
        }
        return Some(BigRational::new(numer, denom));
    }
    let (negative, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text.strip_prefix('+').unwrap_or(text)),
    };
    let (whole, frac) = digits.split_once('.').unwrap_or((digits, ""));
    if whole.is_empty() && frac.is_empty() {
        return None;
    }
    if !whole.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let mantissa: BigInt = format!("{whole}{frac}").parse().ok()?;
    let scale = num_traits::pow(BigInt::from(10u8), frac.len());
    let value = BigRational::new(mantissa, scale);
    Some(if negative { -value } else { value })
}

/// Canonical text form: integers as `"n"`, everything else as `"p/q"`.
pub fn format_rational(value: &BigRational) -> String {
    value.to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn parses_decimal_and_fraction_forms() {
        assert_eq!(parse_rational("0.8"), Some(q(4, 5)));
        assert_eq!(parse_rational("7/20"), Some(q(7, 20)));
        assert_eq!(parse_rational(" 3 "), Some(q(3, 1)));
        assert_eq!(parse_rational("-0.25"), Some(q(-1, 4)));
        assert_eq!(parse_rational(".5"), Some(q(1, 2)));
        assert_eq!(parse_rational("0.1000"), Some(q(1, 10)));
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "abc", "1/0", "1.2.3", "1e3", "--1", "."] {
            assert_eq!(parse_rational(bad), None, "{bad:?}");
        }
    }

    #[test]
    fn format_round_trips() {
        for v in [q(0, 1), q(104, 5), q(-3, 7), q(12, 1)] {
            assert_eq!(parse_rational(&format_rational(&v)), Some(v));
        }
    }

    #[test]
    fn float_unit_tolerance() {
        assert!(<f64 as Scalar>::is_unit(&(0.1 + 0.2 + 0.7)));
        assert!(!<f64 as Scalar>::is_unit(&0.9));
        assert!(!<BigRational as Scalar>::is_unit(&q(9, 10)));
    }
}
