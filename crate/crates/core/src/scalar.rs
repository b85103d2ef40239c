//! Coefficient scalars for polynomials and rational functions.
//!
//! Everything in the exact tier is written against [`Scalar`], a thin
//! extension of the `num-traits` field-like bounds. The crate itself
//! instantiates it with [`BigRational`](num_rational::BigRational); `f64`
//! and `f32` also implement it, which is handy for quick numeric experiments
//! but gives up the exactness every eventual-sign decision relies on.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

pub trait Scalar: Clone + Debug + Display + PartialEq + Num + Signed + ToPrimitive {
    /// The scalar standing for the sequence index `i`.
    fn from_index(i: u64) -> Self;

    /// Positive-leading multiplier that brings a numerator/denominator pair
    /// into canonical scale. Applied to both polynomials after the gcd has
    /// been divided out; must make the denominator's leading coefficient
    /// positive.
    fn canonical_scale(num: &[Self], den: &[Self]) -> Self;

    /// Whether the scalar is an integer (always false for floats that are
    /// not whole numbers).
    fn is_integral(&self) -> bool;
}

macro_rules! impl_ratio_scalar {
    ($int:ty, $from:expr) => {
        impl Scalar for Ratio<$int> {
            fn from_index(i: u64) -> Self {
                Ratio::from_integer($from(i))
            }

            fn canonical_scale(num: &[Self], den: &[Self]) -> Self {
                let mut lcm = <$int>::one();
                for c in num.iter().chain(den) {
                    lcm = lcm.lcm(c.denom());
                }
                let mut gcd = <$int>::zero();
                for c in num.iter().chain(den) {
                    let scaled = (c * Ratio::from_integer(lcm.clone())).to_integer();
                    gcd = gcd.gcd(&scaled);
                }
                if gcd.is_zero() {
                    gcd = <$int>::one();
                }
                let scale = Ratio::new(lcm, gcd);
                match den.last() {
                    Some(lead) if lead.is_negative() => -scale,
                    _ => scale,
                }
            }

            fn is_integral(&self) -> bool {
                self.is_integer()
            }
        }
    };
}

impl_ratio_scalar!(BigInt, BigInt::from);
impl_ratio_scalar!(i64, |i: u64| i as i64);

macro_rules! impl_float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn from_index(i: u64) -> Self {
                i as $t
            }

            fn canonical_scale(_num: &[Self], den: &[Self]) -> Self {
                match den.last() {
                    Some(lead) if *lead != 0.0 => 1.0 / lead,
                    _ => 1.0,
                }
            }

            fn is_integral(&self) -> bool {
                self.fract() == 0.0
            }
        }
    };
}

impl_float_scalar!(f64);
impl_float_scalar!(f32);

/// Parses `a`, `-a` or `a/b` into an exact rational.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(BigRational::new(num, den))
}

/// Converts a decimal literal such as `12.5` or `1e-3` into an exact rational.
pub fn rational_from_decimal(text: &str) -> Option<BigRational> {
    let (mantissa, exponent) = match text.find(['e', 'E']) {
        Some(pos) => (&text[..pos], text[pos + 1..].parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    let digits = format!("{int_part}{frac_part}");
    let digits: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    let scale = exponent - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let value = if scale >= 0 {
        BigRational::from_integer(digits * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(digits, num_traits::pow(ten, (-scale) as usize))
    };
    Some(value)
}
