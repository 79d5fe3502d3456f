use num_rational::BigRational;

use crate::dynamics::{evolve_with, DynamicsError, MapSpec, Model, Trajectory};
use crate::fiq::{Actualizer, Fiq, FiqError, Propensity};
use crate::rng::{bernoulli, BitStream, Domain};

/// Seed-determined binary digits of a "real number". The bit at position `n`
/// is a pure function of `(seed, n)`; blocks of the tape are materialized on
/// demand and re-reading never changes a bit.
#[derive(Clone, Debug)]
pub struct BitTape {
    seed: u64,
    key: u64,
    stream: BitStream,
}

impl BitTape {
    pub fn new(seed: u64) -> Self {
        Self::keyed(seed, 0)
    }

    /// One of many independent tapes under the same seed, e.g. one per
    /// trial of an experiment. Key 0 is the tape of [`BitTape::new`].
    pub fn keyed(seed: u64, key: u64) -> Self {
        BitTape {
            seed,
            key,
            stream: BitStream::new(seed, Domain::Tape, key as u128),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Digit at 1-based position `n`.
    pub fn bit(&mut self, n: u128) -> bool {
        self.stream.bit(n)
    }

    /// Digits of the uniform number that decides a position whose propensity
    /// is not 1/2: its first digit is the tape digit itself.
    fn sub_digits(&mut self, n: u64) -> impl FnMut() -> bool + '_ {
        let mut j = 0u128;
        let aux_key = ((self.key as u128) << 64) | n as u128;
        let mut aux = BitStream::new(self.seed, Domain::TapeAux, aux_key);
        let n = n as u128;
        move || {
            j += 1;
            if j == 1 {
                self.stream.bit(n)
            } else {
                aux.bit(j - 1)
            }
        }
    }
}

pub fn tape_bit(tape: &mut BitTape, n: u128) -> bool {
    tape.bit(n)
}

/// Reading instead of drawing: position `n` takes the tape's digit `n`. A
/// propensity `q` other than 1/2 compares the tape's uniform sub-digits
/// against `q`, so degenerate propensities are still honoured.
impl Actualizer for BitTape {
    fn actualize(&mut self, position: u64, propensity: &Propensity) -> Result<bool, FiqError> {
        if propensity.is_half() {
            return Ok(self.bit(position as u128));
        }
        let q: &BigRational = propensity.value();
        Ok(bernoulli(q, self.sub_digits(position)))
    }
}

/// The evolution algorithm of [`crate::dynamics::evolve`] with every
/// actualization of input bit `n` replaced by a read of the tape's digit `n`.
pub fn evolve_supplemented(
    map: &MapSpec,
    x0: &Fiq,
    tape: &mut BitTape,
    steps: u64,
    m: u32,
    budget: u32,
) -> Result<Trajectory, DynamicsError> {
    let seed = tape.seed();
    evolve_with(map, x0, steps, m, tape, budget, Model::Tape, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RandomSource;

    #[test]
    fn rereads_are_stable() {
        let mut t = BitTape::new(99);
        let first: Vec<bool> = (1..=1000).map(|n| t.bit(n)).collect();
        let again: Vec<bool> = (1..=1000).rev().map(|n| t.bit(n)).collect();
        assert!(first.iter().eq(again.iter().rev()));
    }

    #[test]
    fn half_propensity_reads_the_digit() {
        let mut t = BitTape::new(4);
        for n in 1..200u64 {
            let d = t.bit(n as u128);
            assert_eq!(t.actualize(n, &Propensity::half()).unwrap(), d);
        }
    }

    #[test]
    fn degenerate_propensities_are_certain() {
        let mut t = BitTape::new(4);
        for n in 1..50 {
            assert!(t.actualize(n, &Propensity::ratio(1, 1).unwrap()).unwrap());
            assert!(!t.actualize(n, &Propensity::ratio(0, 1).unwrap()).unwrap());
        }
    }

    #[test]
    fn keyed_tapes_differ() {
        let mut a = BitTape::keyed(3, 1);
        let mut b = BitTape::keyed(3, 2);
        assert!((1..=64).any(|n| a.bit(n) != b.bit(n)));
        let mut c = BitTape::keyed(3, 0);
        let mut d = BitTape::new(3);
        assert!((1..=64).all(|n| c.bit(n) == d.bit(n)));
    }

    #[test]
    fn coupled_source_reads_the_tape() {
        let mut t = BitTape::new(12);
        let mut r = RandomSource::with_domain(12, Domain::Tape);
        for n in 1..=600 {
            assert_eq!(r.next_bit(), t.bit(n));
        }
    }
}
