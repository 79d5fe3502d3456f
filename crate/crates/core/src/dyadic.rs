//! Non-negative dyadic rationals `m / 2^e`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::ParseError;

/// An exact non-negative dyadic rational, always stored in lowest terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    mantissa: BigUint,
    exp: u64,
}

impl Dyadic {
    pub fn new(mantissa: BigUint, exp: u64) -> Self {
        let mut d = Dyadic { mantissa, exp };
        d.normalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic { mantissa: BigUint::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mantissa: BigUint::one(), exp: 0 }
    }

    /// `2^-k`.
    pub fn pow2_neg(k: u64) -> Self {
        Dyadic { mantissa: BigUint::one(), exp: k }
    }

    /// The value `0.b1 b2 ... bn` in base 2, most significant bit first.
    pub fn from_bits(bits: &[bool]) -> Self {
        let mut m = BigUint::zero();
        for &b in bits {
            m <<= 1u32;
            if b {
                m += 1u32;
            }
        }
        Dyadic::new(m, bits.len() as u64)
    }

    pub fn mantissa(&self) -> &BigUint {
        &self.mantissa
    }

    /// Exponent of the reduced denominator `2^exp`.
    pub fn exp(&self) -> u64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    fn normalize(&mut self) {
        if self.mantissa.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mantissa.trailing_zeros().unwrap_or(0).min(self.exp);
        if tz > 0 {
            self.mantissa >>= tz;
            self.exp -= tz;
        }
    }

    fn aligned(&self, other: &Dyadic) -> (BigUint, BigUint, u64) {
        let e = self.exp.max(other.exp);
        (
            &self.mantissa << (e - self.exp),
            &other.mantissa << (e - other.exp),
            e,
        )
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let (a, b, e) = self.aligned(other);
        Dyadic::new(a + b, e)
    }

    /// `self - other`, or `None` when the result would be negative.
    pub fn checked_sub(&self, other: &Dyadic) -> Option<Dyadic> {
        let (a, b, e) = self.aligned(other);
        if a < b {
            None
        } else {
            Some(Dyadic::new(a - b, e))
        }
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(
            BigInt::from(self.mantissa.clone()),
            BigInt::from(BigUint::one() << self.exp),
        )
    }

    /// Converts a rational whose reduced denominator is a power of two.
    pub fn from_rational(r: &BigRational) -> Option<Dyadic> {
        if r < &BigRational::zero() {
            return None;
        }
        let den = r.denom().magnitude();
        if den.count_ones() != 1 {
            return None;
        }
        let exp = den.trailing_zeros().unwrap_or(0);
        Some(Dyadic::new(r.numer().magnitude().clone(), exp))
    }

    pub fn to_f64(&self) -> f64 {
        self.to_rational().to_f64().unwrap_or(f64::NAN)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let (a, b, _) = self.aligned(other);
        a.cmp(&b)
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Serialized as `num/den` (or a bare integer when the denominator is 1).
impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.mantissa)
        } else {
            write!(f, "{}/{}", self.mantissa, BigUint::one() << self.exp)
        }
    }
}

impl FromStr for Dyadic {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let r = crate::rational::parse_rational(s)?;
        Dyadic::from_rational(&r).ok_or_else(|| ParseError::new(0, format!("`{s}` is not a non-negative dyadic rational")))
    }
}

/// A closed interval `[low, high]` of dyadic rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DyadicInterval {
    low: Dyadic,
    high: Dyadic,
}

impl DyadicInterval {
    /// Returns `None` when `low > high`.
    pub fn new(low: Dyadic, high: Dyadic) -> Option<Self> {
        if low <= high {
            Some(DyadicInterval { low, high })
        } else {
            None
        }
    }

    pub fn low(&self) -> &Dyadic {
        &self.low
    }

    pub fn high(&self) -> &Dyadic {
        &self.high
    }

    pub fn width(&self) -> Dyadic {
        self.high
            .checked_sub(&self.low)
            .expect("interval bounds are ordered")
    }

    pub fn contains(&self, x: &Dyadic) -> bool {
        &self.low <= x && x <= &self.high
    }

    pub fn is_subset_of(&self, other: &DyadicInterval) -> bool {
        other.low <= self.low && self.high <= other.high
    }
}

impl fmt::Display for DyadicInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.low, self.high)
    }
}
