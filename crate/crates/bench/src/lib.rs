//! Input fixtures shared by the benchmarks.

use fiq_core::stats::DigitStream;
use fiq_core::{Fiq, RandomSource};

/// `n` seeded fair bits.
pub fn random_bits(seed: u64, n: usize) -> Vec<bool> {
    let mut rng = RandomSource::new(seed);
    (0..n).map(|_| rng.next_bit()).collect()
}

/// A fully determined input with `n` seeded bits.
pub fn exact_input(seed: u64, n: usize) -> Fiq {
    Fiq::terminating(&random_bits(seed, n))
}

/// `count` seeded streams of `len` bits each.
pub fn ensemble(first_seed: u64, count: u64, len: usize) -> Vec<DigitStream> {
    (first_seed..first_seed + count)
        .map(|s| DigitStream::new(random_bits(s, len)).expect("len > 0"))
        .collect()
}
