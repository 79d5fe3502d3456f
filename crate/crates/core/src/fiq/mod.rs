//! Finite Information Quantities.
//!
//! A [`Fiq`] is a number in the unit interval whose binary digits are not all
//! given at once. Each position `n >= 1` is either determined (0 or 1) or
//! undetermined with a rational [`Propensity`] of eventually settling at 1.
//! Only finitely many positions are stored; every other position is part of
//! the tail, which is undetermined with propensity 1/2 (or, for a terminating
//! expansion, fixed at 0).

mod literal;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::{Dyadic, DyadicInterval};
use crate::error::ParseError;
use crate::rational::{format_rational, parse_rational};
use crate::rng::{bernoulli, RandomSource};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiqError {
    #[error("bit positions are 1-based; got 0")]
    ZeroPosition,
    #[error("position {0} given more than once")]
    DuplicatePosition(u64),
    #[error("propensity {0} is outside [0, 1]")]
    PropensityOutOfRange(String),
    #[error("position {0} is already determined")]
    AlreadyDetermined(u64),
    #[error("actualization source exhausted at position {0}")]
    SourceExhausted(u64),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

/// Probability that an undetermined bit settles at 1. Exact, in `[0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Propensity(BigRational);

impl Propensity {
    pub fn new(value: BigRational) -> Result<Self, FiqError> {
        if value < BigRational::zero() || value > BigRational::one() {
            return Err(FiqError::PropensityOutOfRange(format_rational(&value)));
        }
        Ok(Propensity(value))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self, FiqError> {
        if den == 0 {
            return Err(FiqError::PropensityOutOfRange(format!("{num}/0")));
        }
        Self::new(BigRational::new(num.into(), den.into()))
    }

    pub fn half() -> Self {
        Propensity(BigRational::new(1.into(), 2.into()))
    }

    pub fn value(&self) -> &BigRational {
        &self.0
    }

    pub fn is_half(&self) -> bool {
        self.0.numer() == &1.into() && self.0.denom() == &2.into()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for Propensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.0))
    }
}

impl std::str::FromStr for Propensity {
    type Err = FiqError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Propensity::new(parse_rational(s)?)
    }
}

/// Information carried by a single bit of propensity `q`: `1 - h(q)` with
/// `h` the binary entropy and `0 log 0 = 0`.
pub fn bit_information(q: &Propensity) -> f64 {
    let p = q.to_f64();
    let plogp = |x: f64| if x <= 0.0 { 0.0 } else { x * x.log2() };
    let complement = (BigRational::one() - q.value()).to_f64().unwrap_or(f64::NAN);
    1.0 + plogp(p) + plogp(complement)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BitState {
    Determined(bool),
    Undetermined(Propensity),
}

impl BitState {
    pub fn information(&self) -> f64 {
        match self {
            BitState::Determined(_) => 1.0,
            BitState::Undetermined(q) => bit_information(q),
        }
    }
}

/// What lies beyond the explicitly stored positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Tail {
    /// Every further bit is undetermined with propensity 1/2.
    Half,
    /// The expansion terminates: every further bit is determined 0. Used for
    /// fully determined dyadic inputs.
    Terminated,
}

/// Supplies the value of a bit at the moment it is actualized.
///
/// `position` is the absolute input position being fixed; an indeterministic
/// policy may ignore it, a hidden-variable policy reads its value from it.
pub trait Actualizer {
    fn actualize(&mut self, position: u64, propensity: &Propensity) -> Result<bool, FiqError>;
}

/// Independent draws: each actualization is a fresh Bernoulli(propensity)
/// sample from the source's next fair bits.
impl Actualizer for RandomSource {
    fn actualize(&mut self, _position: u64, propensity: &Propensity) -> Result<bool, FiqError> {
        if propensity.is_half() {
            return Ok(self.next_bit());
        }
        Ok(bernoulli(propensity.value(), || self.next_bit()))
    }
}

/// Independent draws fed from a fixed, externally supplied bit sequence.
#[derive(Clone, Debug)]
pub struct ReplaySource<I> {
    bits: I,
}

impl<I: Iterator<Item = bool>> ReplaySource<I> {
    pub fn new(bits: impl IntoIterator<IntoIter = I>) -> Self {
        ReplaySource {
            bits: bits.into_iter(),
        }
    }
}

impl<I: Iterator<Item = bool>> Actualizer for ReplaySource<I> {
    fn actualize(&mut self, position: u64, propensity: &Propensity) -> Result<bool, FiqError> {
        let mut exhausted = false;
        let bit = bernoulli(propensity.value(), || match self.bits.next() {
            Some(b) => b,
            None => {
                exhausted = true;
                false
            }
        });
        if exhausted {
            Err(FiqError::SourceExhausted(position))
        } else {
            Ok(bit)
        }
    }
}

/// A Finite Information Quantity `x = 0.b1 b2 b3 ...` in base 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fiq {
    // No entry ever holds Undetermined(1/2); absent positions up to `len`
    // are undetermined with propensity 1/2.
    bits: BTreeMap<u64, BitState>,
    len: u64,
    tail: Tail,
}

impl Default for Fiq {
    fn default() -> Self {
        Fiq::indeterminate()
    }
}

impl Fiq {
    /// Builds a Fiq from determined bits and explicit propensities; every
    /// other position is tail.
    pub fn new(
        determined: &[(u64, bool)],
        propensities: &[(u64, Propensity)],
    ) -> Result<Self, FiqError> {
        let mut bits = BTreeMap::new();
        let entries = determined
            .iter()
            .map(|&(n, b)| (n, BitState::Determined(b)))
            .chain(
                propensities
                    .iter()
                    .map(|(n, q)| (*n, BitState::Undetermined(q.clone()))),
            );
        let mut seen = std::collections::BTreeSet::new();
        for (n, state) in entries {
            if n == 0 {
                return Err(FiqError::ZeroPosition);
            }
            if !seen.insert(n) {
                return Err(FiqError::DuplicatePosition(n));
            }
            bits.insert(n, state);
        }
        let mut fiq = Fiq {
            bits,
            len: 0,
            tail: Tail::Half,
        };
        fiq.normalize();
        Ok(fiq)
    }

    /// Every bit undetermined with propensity 1/2.
    pub fn indeterminate() -> Self {
        Fiq {
            bits: BTreeMap::new(),
            len: 0,
            tail: Tail::Half,
        }
    }

    /// Determined prefix followed by the propensity-1/2 tail.
    pub fn from_prefix(prefix: &[bool]) -> Self {
        let mut fiq = Fiq {
            bits: prefix
                .iter()
                .enumerate()
                .map(|(i, &b)| (i as u64 + 1, BitState::Determined(b)))
                .collect(),
            len: 0,
            tail: Tail::Half,
        };
        fiq.normalize();
        fiq
    }

    /// The fully determined dyadic `0.b1...bn` (terminating expansion).
    pub fn terminating(bits: &[bool]) -> Self {
        Fiq::from_prefix(bits).with_tail(Tail::Terminated, bits.len() as u64)
    }

    /// Replaces the tail. For a terminated tail, `len` fixes how many
    /// positions precede the zero tail (at least the last stored position).
    pub fn with_tail(mut self, tail: Tail, len: u64) -> Self {
        self.tail = tail;
        self.len = len;
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        self.bits
            .retain(|_, s| !matches!(s, BitState::Undetermined(q) if q.is_half()));
        let last = self.bits.keys().next_back().copied().unwrap_or(0);
        self.len = match self.tail {
            Tail::Half => last,
            Tail::Terminated => self.len.max(last),
        };
    }

    pub fn tail(&self) -> Tail {
        self.tail
    }

    /// Highest explicitly represented position; positions beyond are tail.
    pub fn explicit_len(&self) -> u64 {
        self.len
    }

    pub fn bit(&self, n: u64) -> BitState {
        assert!(n >= 1, "bit positions are 1-based");
        match self.bits.get(&n) {
            Some(s) => s.clone(),
            None if n > self.len && self.tail == Tail::Terminated => BitState::Determined(false),
            None => BitState::Undetermined(Propensity::half()),
        }
    }

    pub fn is_determined(&self, n: u64) -> bool {
        matches!(self.bit(n), BitState::Determined(_))
    }

    /// Stored (non-tail) positions with their states, in increasing order.
    /// Undetermined 1/2 positions inside a terminated expansion are included.
    pub fn explicit_bits(&self) -> impl Iterator<Item = (u64, BitState)> + '_ {
        (1..=self.len).map(move |n| (n, self.bit(n)))
    }

    /// `I(x) = sum over n of (1 - h(b_n))`; tail positions contribute 0.
    pub fn information_content(&self) -> f64 {
        self.bits.values().map(BitState::information).sum()
    }

    /// Lowest undetermined position, if any (always `Some` for a 1/2 tail).
    pub fn lowest_undetermined(&self) -> Option<u64> {
        let limit = match self.tail {
            Tail::Half => self.len + 1,
            Tail::Terminated => self.len,
        };
        (1..=limit).find(|&n| !self.is_determined(n))
    }

    /// Fixes an undetermined position to `bit`. Determined positions never
    /// change.
    pub(crate) fn fix(&mut self, n: u64, bit: bool) -> Result<(), FiqError> {
        if n == 0 {
            return Err(FiqError::ZeroPosition);
        }
        if self.is_determined(n) {
            return Err(FiqError::AlreadyDetermined(n));
        }
        self.bits.insert(n, BitState::Determined(bit));
        self.len = self.len.max(n);
        Ok(())
    }

    /// Actualizes position `n`: it becomes determined, equal to 1 with
    /// probability equal to its propensity. Returns the drawn bit.
    pub fn actualize_bit(
        &mut self,
        n: u64,
        source: &mut impl Actualizer,
    ) -> Result<bool, FiqError> {
        self.actualize_bit_at(n, n, source)
    }

    /// Like [`Fiq::actualize_bit`] but reports `absolute` to the source, for
    /// Fiqs that are views onto a longer input.
    pub fn actualize_bit_at(
        &mut self,
        n: u64,
        absolute: u64,
        source: &mut (impl Actualizer + ?Sized),
    ) -> Result<bool, FiqError> {
        if n == 0 {
            return Err(FiqError::ZeroPosition);
        }
        let q = match self.bit(n) {
            BitState::Determined(_) => return Err(FiqError::AlreadyDetermined(n)),
            BitState::Undetermined(q) => q,
        };
        let bit = source.actualize(absolute, &q)?;
        self.fix(n, bit)?;
        Ok(bit)
    }

    /// Tightest dyadic interval containing every value obtained by assigning
    /// 0/1 to undetermined positions up to `depth` and extending arbitrarily
    /// beyond `depth`. A terminating expansion is not extended once `depth`
    /// covers it.
    pub fn possible_interval(&self, depth: u64) -> DyadicInterval {
        let depth = depth.max(1);
        let mut low = BigUint::zero();
        let mut high = BigUint::zero();
        for n in 1..=depth {
            low <<= 1u32;
            high <<= 1u32;
            match self.bit(n) {
                BitState::Determined(true) => {
                    low += 1u32;
                    high += 1u32;
                }
                BitState::Determined(false) => {}
                BitState::Undetermined(_) => high += 1u32,
            }
        }
        let open_ended = !(self.tail == Tail::Terminated && depth >= self.len);
        if open_ended {
            high += 1u32;
        }
        DyadicInterval::new(Dyadic::new(low, depth), Dyadic::new(high, depth))
            .expect("low <= high by construction")
    }

    /// Hull of every completion: [`Fiq::possible_interval`] at the explicit
    /// length. The second value is `true` when the endpoints are attainable
    /// values (terminating expansions); for a 1/2 tail the endpoints are
    /// reached only by probability-zero completions.
    pub fn hull(&self) -> (DyadicInterval, bool) {
        (
            self.possible_interval(self.len.max(1)),
            self.tail == Tail::Terminated,
        )
    }

    /// Actualizes every undetermined position up to `n_bits`, in order, and
    /// returns `sum b_k 2^-k` over `k <= n_bits`.
    pub fn sample_value(
        &mut self,
        n_bits: u64,
        source: &mut impl Actualizer,
    ) -> Result<Dyadic, FiqError> {
        let mut bits = Vec::with_capacity(n_bits as usize);
        for n in 1..=n_bits {
            let b = match self.bit(n) {
                BitState::Determined(b) => b,
                BitState::Undetermined(_) => self.actualize_bit(n, source)?,
            };
            bits.push(b);
        }
        Ok(Dyadic::from_bits(&bits))
    }

    /// The Fiq with its first `k` positions removed (`2^k x mod 1`).
    pub fn suffix(&self, k: u64) -> Fiq {
        Fiq {
            bits: self
                .bits
                .range(k + 1..)
                .map(|(&n, s)| (n - k, s.clone()))
                .collect(),
            len: self.len.saturating_sub(k),
            tail: self.tail,
        }
    }

    /// The Fiq `(b + x) / 2`: `state` becomes position 1, everything else
    /// moves one position down.
    pub fn prepend(&self, state: BitState) -> Fiq {
        let mut bits: BTreeMap<u64, BitState> =
            self.bits.iter().map(|(&n, s)| (n + 1, s.clone())).collect();
        bits.insert(1, state);
        let mut fiq = Fiq {
            bits,
            len: self.len + 1,
            tail: self.tail,
        };
        fiq.normalize();
        fiq
    }

    /// Exact value when every explicit position is determined and the
    /// expansion terminates.
    pub fn exact_value(&self) -> Option<Dyadic> {
        if self.tail != Tail::Terminated {
            return None;
        }
        let mut bits = Vec::with_capacity(self.len as usize);
        for n in 1..=self.len {
            match self.bit(n) {
                BitState::Determined(b) => bits.push(b),
                BitState::Undetermined(_) => return None,
            }
        }
        Some(Dyadic::from_bits(&bits))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Propensity {
        Propensity::ratio(n, d).unwrap()
    }

    fn d(n: u64, e: u64) -> Dyadic {
        Dyadic::new(n.into(), e)
    }

    fn fiq_101() -> Fiq {
        Fiq::new(&[(1, true), (2, false), (3, true)], &[]).unwrap()
    }

    #[test]
    fn make_fiq_direct() {
        let x = fiq_101();
        assert_eq!(x.explicit_len(), 3);
        assert_eq!(x.bit(2), BitState::Determined(false));
        assert_eq!(x.bit(4), BitState::Undetermined(Propensity::half()));
        assert_eq!(x.to_string(), "101*");
    }

    #[test]
    fn make_fiq_empty_is_maximally_indeterminate() {
        let x = Fiq::new(&[], &[]).unwrap();
        assert_eq!(x, Fiq::indeterminate());
        assert_eq!(x.information_content(), 0.0);
        assert_eq!(x.lowest_undetermined(), Some(1));
    }

    #[test]
    fn make_fiq_rejects_duplicates() {
        assert_eq!(
            Fiq::new(&[(1, true), (1, false)], &[]),
            Err(FiqError::DuplicatePosition(1))
        );
        assert_eq!(
            Fiq::new(&[(2, true)], &[(2, q(1, 4))]),
            Err(FiqError::DuplicatePosition(2))
        );
        assert_eq!(Fiq::new(&[(0, true)], &[]), Err(FiqError::ZeroPosition));
    }

    #[test]
    fn propensity_range() {
        assert!(matches!(
            Propensity::ratio(3, 2),
            Err(FiqError::PropensityOutOfRange(_))
        ));
        assert!(Propensity::ratio(-1, 4).is_err());
        assert!(Propensity::ratio(1, 1).is_ok());
    }

    #[test]
    fn bit_information_endpoints() {
        assert_eq!(bit_information(&q(1, 2)), 0.0);
        assert_eq!(bit_information(&q(0, 1)), 1.0);
        assert_eq!(bit_information(&q(1, 1)), 1.0);
    }

    #[test]
    fn information_content_examples() {
        assert_eq!(fiq_101().information_content(), 3.0);
        let x = Fiq::new(&[(1, true)], &[(2, q(1, 4))]).unwrap();
        let expected = 1.0 + bit_information(&q(1, 4));
        assert!((x.information_content() - expected).abs() < 1e-15);
    }

    #[test]
    fn actualize_degenerate_propensities() {
        let mut x = Fiq::new(&[], &[(1, q(1, 1)), (2, q(0, 1))]).unwrap();
        let mut rng = RandomSource::new(1);
        assert!(x.actualize_bit(1, &mut rng).unwrap());
        assert!(!x.actualize_bit(2, &mut rng).unwrap());
        assert_eq!(
            x.actualize_bit(1, &mut rng),
            Err(FiqError::AlreadyDetermined(1))
        );
    }

    #[test]
    fn actualize_tail_position() {
        let mut x = fiq_101();
        let mut rng = RandomSource::new(5);
        let b = x.actualize_bit(7, &mut rng).unwrap();
        assert_eq!(x.bit(7), BitState::Determined(b));
        assert_eq!(x.explicit_len(), 7);
        assert_eq!(x.bit(5), BitState::Undetermined(Propensity::half()));
    }

    #[test]
    fn terminated_tail_is_determined() {
        let mut x = Fiq::terminating(&[true, false, true, true]);
        assert!(x.is_determined(9));
        assert_eq!(
            x.actualize_bit(9, &mut RandomSource::new(0)),
            Err(FiqError::AlreadyDetermined(9))
        );
        assert_eq!(x.exact_value(), Some(d(11, 4)));
        assert_eq!(x.lowest_undetermined(), None);
    }

    #[test]
    fn possible_interval_examples() {
        let i = fiq_101().possible_interval(3);
        assert_eq!((i.low(), i.high()), (&d(5, 3), &d(3, 2)));
        for depth in [1, 5, 40] {
            let i = Fiq::indeterminate().possible_interval(depth);
            assert_eq!((i.low(), i.high()), (&Dyadic::zero(), &Dyadic::one()));
        }
        let i = Fiq::from_prefix(&[true]).possible_interval(4);
        assert_eq!((i.low(), i.high()), (&d(1, 1), &Dyadic::one()));
        let i = Fiq::terminating(&[true, true]).possible_interval(5);
        assert_eq!((i.low(), i.high()), (&d(3, 2), &d(3, 2)));
    }

    #[test]
    fn sample_value_keeps_determined() {
        let mut x = Fiq::from_prefix(&[true, true]);
        assert_eq!(
            x.sample_value(2, &mut RandomSource::new(0)).unwrap(),
            d(3, 2)
        );
        let mut a = Fiq::indeterminate();
        let mut b = Fiq::indeterminate();
        let va = a.sample_value(20, &mut RandomSource::new(42)).unwrap();
        let vb = b.sample_value(20, &mut RandomSource::new(42)).unwrap();
        assert_eq!(va, vb);
        assert_eq!(a, b);
        assert!((1..=20).all(|n| a.is_determined(n)));
        assert!(!a.is_determined(21));
    }

    #[test]
    fn replay_source_exhausts() {
        let mut x = Fiq::indeterminate();
        let mut src = ReplaySource::new(vec![true]);
        assert!(x.actualize_bit(1, &mut src).unwrap());
        assert_eq!(
            x.actualize_bit(2, &mut src),
            Err(FiqError::SourceExhausted(2))
        );
    }

    #[test]
    fn suffix_and_prepend() {
        let x: Fiq = "1?(1/4)0*".parse().unwrap();
        assert_eq!(x.suffix(1).to_string(), "?(1/4)0*");
        assert_eq!(x.suffix(5).to_string(), "*");
        let y = x.suffix(1).prepend(BitState::Determined(true));
        assert_eq!(y, x);
        let t = Fiq::terminating(&[true]).suffix(1);
        assert_eq!(t.exact_value(), Some(Dyadic::zero()));
    }
}
