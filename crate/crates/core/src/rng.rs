//! Seeded, counter-addressable bit generation.
//!
//! Every bit is a pure function of `(seed, domain, key, position)`: the
//! underlying ChaCha8 keystream is addressed block by block, so a position can
//! be read without generating everything before it. Output is bit-identical
//! across platforms.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

const BLOCK_BITS: u128 = 512;
const BLOCK_WORDS: usize = 16;
const STREAM_SPLIT: u32 = 60;

/// Keystream domains. Distinct domains give unrelated bit sequences for the
/// same seed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Domain {
    /// Actualization draws of the indeterministic model.
    Actualization = 0x6669_715f_6472_6177,
    /// Digits of the supplementing "real number" tape.
    Tape = 0x7461_7065_5f62_6974,
    /// Sub-digits used when a tape position has a propensity other than 1/2.
    TapeAux = 0x7461_7065_5f61_7578,
    /// Auxiliary randomness for experiment construction (inputs, ensembles).
    Experiment = 0x6578_7065_7269_6d74,
}

/// Random-access bit sequence with a one-block cache.
#[derive(Clone)]
pub struct BitStream {
    rng: ChaCha8Rng,
    cached_block: Option<u128>,
    block: [u32; BLOCK_WORDS],
}

impl std::fmt::Debug for BitStream {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BitStream")
            .field("cached_block", &self.cached_block)
            .finish_non_exhaustive()
    }
}

impl BitStream {
    pub fn new(seed: u64, domain: Domain, key: u128) -> Self {
        let mut bytes = [0u8; 32];
        bytes[..8].copy_from_slice(&seed.to_le_bytes());
        bytes[8..16].copy_from_slice(&(domain as u64).to_le_bytes());
        bytes[16..].copy_from_slice(&key.to_le_bytes());
        BitStream {
            rng: ChaCha8Rng::from_seed(bytes),
            cached_block: None,
            block: [0; BLOCK_WORDS],
        }
    }

    /// Bit at 1-based `position`.
    pub fn bit(&mut self, position: u128) -> bool {
        assert!(position >= 1, "bit positions are 1-based");
        let idx = position - 1;
        let block = idx / BLOCK_BITS;
        if self.cached_block != Some(block) {
            self.rng.set_stream((block >> STREAM_SPLIT) as u64);
            self.rng
                .set_word_pos((block & ((1u128 << STREAM_SPLIT) - 1)) * BLOCK_WORDS as u128);
            for w in self.block.iter_mut() {
                *w = self.rng.next_u32();
            }
            self.cached_block = Some(block);
        }
        let within = (idx % BLOCK_BITS) as usize;
        (self.block[within / 32] >> (31 - within % 32)) & 1 == 1
    }
}

/// Seeded source of actualization randomness: a counter into a keyed
/// bitstream. Same seed and same draw sequence give identical bits.
#[derive(Clone, Debug)]
pub struct RandomSource {
    seed: u64,
    drawn: u64,
    stream: BitStream,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self::with_domain(seed, Domain::Actualization)
    }

    /// A source reading the keystream of another domain; used to couple the
    /// indeterministic model to a tape's digit sequence.
    pub fn with_domain(seed: u64, domain: Domain) -> Self {
        RandomSource {
            seed,
            drawn: 0,
            stream: BitStream::new(seed, domain, 0),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of bits drawn so far (the stream counter).
    pub fn position(&self) -> u64 {
        self.drawn
    }

    /// Moves the counter so the next draw returns stream bit `position + 1`.
    pub fn seek(&mut self, position: u64) {
        self.drawn = position;
    }

    pub fn next_bit(&mut self) -> bool {
        self.drawn += 1;
        self.stream.bit(self.drawn as u128)
    }

    pub fn next_u64(&mut self) -> u64 {
        (0..64).fold(0u64, |acc, _| (acc << 1) | self.next_bit() as u64)
    }

    /// Uniform integer in `0..n` by rejection over the minimal bit width.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        if n == 1 {
            return 0;
        }
        let width = 64 - (n - 1).leading_zeros();
        loop {
            let v = (0..width).fold(0u64, |acc, _| (acc << 1) | self.next_bit() as u64);
            if v < n {
                return v;
            }
        }
    }
}

/// Exact Bernoulli(p) draw from fair bits: returns `U >= 1 - p` where `U` is
/// the uniform number whose binary digits are supplied by `next_bit`.
///
/// Digits are consumed only until the comparison is decided. For `p = 1/2`
/// exactly one digit is read and the result equals that digit.
pub fn bernoulli(p: &BigRational, mut next_bit: impl FnMut() -> bool) -> bool {
    let one = BigRational::one();
    let mut threshold = &one - p;
    if threshold <= BigRational::zero() {
        return true;
    }
    if threshold >= one {
        return false;
    }
    let two = BigRational::from_integer(2.into());
    loop {
        threshold *= &two;
        let t_digit = threshold >= one;
        if t_digit {
            threshold -= &one;
        }
        let u_digit = next_bit();
        if u_digit != t_digit {
            return u_digit;
        }
        if threshold.is_zero() {
            return true;
        }
    }
}
