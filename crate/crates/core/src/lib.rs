//! Finite-information quantities and their hidden-variable completions.
//!
//! Numbers in the unit interval are modelled as processes ([`Fiq`]) whose
//! binary digits carry propensities and become determined only when a
//! dynamical map needs them. The same maps can be driven by a seeded "real
//! number" tape instead, which turns the evolution deterministic; the
//! [`stats`] battery checks that the two are empirically indistinguishable.

pub mod dyadic;
pub mod dynamics;
pub mod error;
pub mod fiq;
pub mod rational;
pub mod rng;
pub mod stats;
pub mod supplement;

pub use dyadic::{Dyadic, DyadicInterval};
pub use dynamics::{DynamicsError, MapSpec, Model, Trajectory};
pub use error::ParseError;
pub use fiq::{bit_information, Actualizer, BitState, Fiq, FiqError, Propensity, ReplaySource, Tail};
pub use rng::{bernoulli, Domain, RandomSource};
pub use stats::{DigitStream, StatsError, TestReport, Verdict};
pub use supplement::{BitTape, HiddenVar, Outcome, SupplementError};

/// Library version embedded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
