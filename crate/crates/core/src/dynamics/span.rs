//! Real intervals with per-endpoint closedness, used for image enclosures.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use super::map::cell_bits;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Span {
    pub(crate) lo: BigRational,
    pub(crate) hi: BigRational,
    pub(crate) lo_closed: bool,
    pub(crate) hi_closed: bool,
}

impl Span {
    pub fn new(lo: BigRational, hi: BigRational, lo_closed: bool, hi_closed: bool) -> Self {
        Span {
            lo,
            hi,
            lo_closed,
            hi_closed,
        }
    }

    pub fn point(x: BigRational) -> Self {
        Span::new(x.clone(), x, true, true)
    }

    pub fn closed(lo: BigRational, hi: BigRational) -> Self {
        Span::new(lo, hi, true, true)
    }

    pub fn open(lo: BigRational, hi: BigRational) -> Self {
        Span::new(lo, hi, false, false)
    }

    pub fn half_open(lo: BigRational, hi: BigRational) -> Self {
        Span::new(lo, hi, true, false)
    }

    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi || (self.lo == self.hi && !(self.lo_closed && self.hi_closed))
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }

    /// Whether `x` lies in the closure `[lo, hi]`.
    pub fn closure_contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn intersect(&self, other: &Span) -> Option<Span> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            std::cmp::Ordering::Greater => (self.lo.clone(), self.lo_closed),
            std::cmp::Ordering::Less => (other.lo.clone(), other.lo_closed),
            std::cmp::Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            std::cmp::Ordering::Less => (self.hi.clone(), self.hi_closed),
            std::cmp::Ordering::Greater => (other.hi.clone(), other.hi_closed),
            std::cmp::Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        let s = Span::new(lo, hi, lo_closed, hi_closed);
        (!s.is_empty()).then_some(s)
    }

    /// Index of the `m`-bit output cell holding every point of the span, if
    /// there is a single one. Cells are `[k/2^m, (k+1)/2^m)`, the last one
    /// closed at 1.
    fn cell(&self, m: u32) -> Option<BigInt> {
        let scale = BigRational::from_integer(BigInt::one() << m);
        let max: BigInt = (BigInt::one() << m) - 1;
        let lo = (&self.lo * &scale).floor().to_integer().min(max.clone());
        let hi_scaled = &self.hi * &scale;
        let hi = if self.hi_closed {
            hi_scaled.floor().to_integer().min(max)
        } else {
            hi_scaled.ceil().to_integer() - 1
        };
        (lo == hi).then_some(lo)
    }
}

/// The `m` output bits shared by every point of every span, or `None` when
/// the spans reach more than one output cell.
pub(crate) fn fixed_output(spans: &[Span], m: u32) -> Option<Vec<bool>> {
    let mut common: Option<BigInt> = None;
    for s in spans.iter().filter(|s| !s.is_empty()) {
        let c = s.cell(m)?;
        match &common {
            Some(prev) if prev != &c => return None,
            _ => common = Some(c),
        }
    }
    common.map(|c| cell_bits(&c, m))
}
