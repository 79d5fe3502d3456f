//! Exact rational parsing and formatting helpers shared by configs and literals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::ParseError;

/// Parses `num/den`, an integer, or a finite decimal such as `0.3` into an
/// exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    let t = s.trim();
    if t.is_empty() {
        return Err(ParseError::new(1, "empty rational"));
    }
    if let Some((n, d)) = t.split_once('/') {
        let num: BigInt = n
            .trim()
            .parse()
            .map_err(|_| ParseError::new(1, format!("invalid numerator `{n}`")))?;
        let den: BigInt = d
            .trim()
            .parse()
            .map_err(|_| ParseError::new(n.len() + 2, format!("invalid denominator `{d}`")))?;
        if den.is_zero() {
            return Err(ParseError::new(n.len() + 2, "zero denominator"));
        }
        return Ok(BigRational::new(num, den));
    }
    if let Some((int, frac)) = t.split_once('.') {
        let (negative, int) = match int.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, int),
        };
        let digits = |x: &str| x.bytes().all(|b| b.is_ascii_digit());
        if !digits(int) || frac.is_empty() || !digits(frac) {
            return Err(ParseError::new(1, format!("invalid decimal `{t}`")));
        }
        let int_part: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().expect("digits only") };
        let frac_num: BigInt = frac.parse().expect("digits only");
        let scale = num_traits::pow(BigInt::from(10u32), frac.len());
        let magnitude = BigRational::from_integer(int_part) + BigRational::new(frac_num, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    t.parse::<BigInt>()
        .map(BigRational::from_integer)
        .map_err(|_| ParseError::new(1, format!("invalid rational `{t}`")))
}

/// Formats as `num/den`, or a bare integer when the denominator is one.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `x mod 1` for a non-negative-or-negative rational, in `[0, 1)`.
pub fn frac(x: &BigRational) -> BigRational {
    x - x.floor()
}
