//! Discrete-time evolution of Fiq states with lazy, interval-driven bit
//! actualization.

mod diverge;
mod engine;
mod map;
mod span;
mod trajectory;

use thiserror::Error;

use crate::fiq::FiqError;

pub use diverge::{divergence_experiment, mean_divergence, DivergenceOutcome};
pub use engine::{evolve, evolve_with, step_fiq, FiqState, StepOutcome, Successor, DEFAULT_BUDGET};
pub use map::{leading_bits, step_exact, MapSpec, Point};
pub use span::Span;
pub use trajectory::{format_bits, Manifest, Model, StepRecord, Trajectory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DynamicsError {
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("input outside the map's domain: {0}")]
    Domain(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("step {step}: {budget} actualizations did not determine {precision} output bits")]
    BudgetExhausted { step: u64, budget: u32, precision: u32 },
    #[error("step {step}: {source}")]
    Actualization {
        step: u64,
        #[source]
        source: FiqError,
    },
}

impl DynamicsError {
    /// Step index attached to a runtime failure, if any.
    pub fn step(&self) -> Option<u64> {
        match self {
            DynamicsError::BudgetExhausted { step, .. } | DynamicsError::Actualization { step, .. } => {
                Some(*step)
            }
            _ => None,
        }
    }
}
