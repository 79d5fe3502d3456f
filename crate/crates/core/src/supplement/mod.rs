//! Deterministic hidden-variable completions: the seeded bit tape standing in
//! for a real-number initial condition, and the odd/even split variable that
//! decides binary quantum measurements.

mod hidden;
mod quantum;
mod tape;

use thiserror::Error;

pub use hidden::{split_bits, HiddenVar, MAX_SPLITS};
pub use quantum::{
    born_probability, measure_binary, measure_binary_with_limit, run_measurement_sequence,
    BinaryMeasurement, Outcome, QState, COMPARISON_LIMIT, NORM_TOLERANCE, PROJECTOR_TOLERANCE,
};
pub use tape::{evolve_supplemented, tape_bit, BitTape};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SupplementError {
    #[error("split depth must be an even number >= 2, got {0}")]
    InvalidDepth(u64),
    #[error("hidden variable split more than {MAX_SPLITS} times; tape positions exhausted")]
    Exhausted,
    #[error("state has dimension {0}; at least 2 required")]
    Dimension(usize),
    #[error("state is not normalized: sum |a|^2 = {0}")]
    NotNormalized(f64),
    #[error("projector is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("projector is not Hermitian: max |P - P^dagger| = {0:e}")]
    NotHermitian(f64),
    #[error("projector is not idempotent: max |P^2 - P| = {0:e}")]
    NotIdempotent(f64),
    #[error("dimension mismatch: state {state}, projector {projector}")]
    DimensionMismatch { state: usize, projector: usize },
    #[error("<psi|P|psi> has imaginary part {0:e}")]
    ComplexExpectation(f64),
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),
    #[error("comparison r1 <= p undecided after {limit} bits")]
    Undecided { limit: u64 },
    #[error("measurement {step}: {source}")]
    AtStep {
        step: usize,
        #[source]
        source: Box<SupplementError>,
    },
}
