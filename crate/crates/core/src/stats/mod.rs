//! Randomness and equivalence tests for binary digit streams.
//!
//! The battery (monobit, block frequency, serial correlation, Borel-style
//! normality, two-sample homogeneity) and the default significance level are
//! conventions of this library; every report carries its raw p-value so the
//! verdict can be re-thresholded.

mod battery;
mod report;

use thiserror::Error;

pub use battery::{
    battery, block_frequency_test, borel_bound, borel_normality, ks_uniform, monobit_test,
    serial_correlation, two_sample_equivalence,
};
pub use report::{reports_to_csv, DigitStream, TestKind, TestReport, Verdict, DEFAULT_ALPHA};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StatsError {
    #[error("digit stream is empty")]
    Empty,
    #[error("{test} needs at least {needed} bits, got {got}")]
    TooShort {
        test: TestKind,
        needed: usize,
        got: usize,
    },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("stream has zero variance; correlation is undefined")]
    DegenerateVariance,
    #[error("contingency table is degenerate: all counts fall in one block value")]
    DegenerateTable,
    #[error("ensemble {0} is empty")]
    EmptyEnsemble(char),
    #[error("streams must have equal length: found {0} and {1}")]
    UnequalLengths(usize, usize),
}
