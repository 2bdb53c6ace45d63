//! Exact integer and rational helpers.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{invalid, Result};

pub type ExactInt = BigInt;
pub type ExactRational = BigRational;

/// Binomial coefficient; zero when `k < 0` or `k > n`.
pub fn binom(n: i64, k: i64) -> Result<BigUint> {
    if n < 0 {
        return invalid(format!("binom with negative n = {n}"));
    }
    if k < 0 || k > n {
        return Ok(BigUint::zero());
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    Ok(acc)
}

/// `binom` for arguments already known to be in range; panics on negative `n`.
pub(crate) fn binom_u(n: usize, k: i64) -> BigUint {
    binom(n as i64, k).expect("non-negative n")
}

pub fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

pub fn int_rational(v: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(v.into())
}

pub fn uint_rational(v: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v.clone()))
}

pub fn pow(base: &BigRational, exp: u32) -> BigRational {
    num_traits::pow(base.clone(), exp as usize)
}

/// Parses `a`, `-a`, `a/b` or a terminating decimal `a.bcd` into an exact rational.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let t = text.trim();
    if let Some((num, den)) = t.split_once('/') {
        let num: BigInt = num
            .trim()
            .parse()
            .map_err(|_| crate::Error::InvalidArgument(format!("bad rational '{text}'")))?;
        let den: BigInt = den
            .trim()
            .parse()
            .map_err(|_| crate::Error::InvalidArgument(format!("bad rational '{text}'")))?;
        if den.is_zero() {
            return invalid(format!("zero denominator in '{text}'"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int_part, frac)) = t.split_once('.') {
        let negative = int_part.starts_with('-');
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return invalid(format!("bad decimal '{text}'"));
        }
        let int_val: BigInt = if int_part.is_empty() || int_part == "-" {
            BigInt::zero()
        } else {
            int_part
                .parse()
                .map_err(|_| crate::Error::InvalidArgument(format!("bad decimal '{text}'")))?
        };
        let frac_val: BigInt = frac.parse().expect("digits");
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mag = int_val.abs() * &scale + frac_val;
        let num = if negative { -mag } else { mag };
        return Ok(BigRational::new(num, scale));
    }
    let v: BigInt = t
        .parse()
        .map_err(|_| crate::Error::InvalidArgument(format!("bad rational '{text}'")))?;
    Ok(BigRational::from_integer(v))
}

/// Renders an exact rational as `a` or `a/b`.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Decides `x^r >= y` exactly for `x, y >= 0` and rational `r = a/b > 0`,
/// via `x^a >= y^b`.
pub fn pow_ge(x: &BigRational, r: &BigRational, y: &BigRational) -> Result<bool> {
    if !r.is_positive() || x.is_negative() || y.is_negative() {
        return invalid("pow_ge needs r > 0 and non-negative bases");
    }
    let a: u32 =
        u32::try_from(r.numer()).map_err(|_| crate::Error::InvalidArgument("exponent numerator too large".into()))?;
    let b: u32 =
        u32::try_from(r.denom()).map_err(|_| crate::Error::InvalidArgument("exponent denominator too large".into()))?;
    Ok(pow(x, a) >= pow(y, b))
}

/// Least common multiple of the denominators.
pub fn common_denominator<'a>(values: impl IntoIterator<Item = &'a BigRational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()))
}
