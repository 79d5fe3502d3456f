//! Run configs. Each subcommand reads one JSON object; missing fields take
//! the defaults below and unknown fields are rejected. Exact rationals are
//! written as `"num/den"` strings.

use std::path::Path;

use fiq_core::dynamics::{MapSpec, Model, DEFAULT_BUDGET};
use fiq_core::stats::DEFAULT_ALPHA;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Reads a config file, or the defaults when no path is given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T, CliError> {
    let Some(path) = path else {
        return Ok(T::default());
    };
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text)
        .map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InfoConfig {
    pub literal: String,
    /// Recorded for provenance only; `info` draws nothing.
    pub seed: u64,
}

impl Default for InfoConfig {
    fn default() -> Self {
        InfoConfig {
            literal: "*".into(),
            seed: 0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvolveConfig {
    pub map: MapSpec,
    pub model: Model,
    /// Initial Fiq literal.
    pub initial: String,
    pub steps: u64,
    /// Output bits fixed per step.
    pub precision: u32,
    /// Actualizations allowed per step.
    pub budget: u32,
    pub seed: u64,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        EvolveConfig {
            map: MapSpec::Doubling,
            model: Model::Fiq,
            initial: "*".into(),
            steps: 50,
            precision: 1,
            budget: DEFAULT_BUDGET,
            seed: 0,
        }
    }
}

impl EvolveConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.steps == 0 {
            return Err(invalid("steps must be at least 1"));
        }
        if self.precision == 0 || self.budget == 0 {
            return Err(invalid("precision and budget must be at least 1"));
        }
        Ok(())
    }
}

/// Smallest ensemble `compare` accepts per model.
pub const MIN_ENSEMBLE: u64 = 50;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareConfig {
    pub map: MapSpec,
    pub initial: String,
    /// Steps per trajectory; each stream holds `steps * precision` bits.
    pub steps: u64,
    pub precision: u32,
    pub budget: u32,
    /// Seeds per model: `seed .. seed + ensemble` for both.
    pub ensemble: u64,
    pub block_lengths: Vec<usize>,
    pub alpha: f64,
    pub seed: u64,
    /// Test hook: actualize every fiq-model bit with this propensity
    /// instead of its own, e.g. `"3/4"`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub test_bias: Option<String>,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            map: MapSpec::Doubling,
            initial: "*".into(),
            steps: 1000,
            precision: 1,
            budget: DEFAULT_BUDGET,
            ensemble: 200,
            block_lengths: vec![1, 2, 3, 4],
            alpha: DEFAULT_ALPHA,
            seed: 0,
            test_bias: None,
        }
    }
}

impl CompareConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.ensemble < MIN_ENSEMBLE {
            return Err(invalid(format!(
                "ensemble too small: {} seeds per model, at least {MIN_ENSEMBLE} required",
                self.ensemble
            )));
        }
        if self.steps == 0 || self.precision == 0 || self.budget == 0 {
            return Err(invalid("steps, precision and budget must be at least 1"));
        }
        if self.block_lengths.is_empty() {
            return Err(invalid("block_lengths must not be empty"));
        }
        check_alpha(self.alpha)
    }
}

fn check_alpha(alpha: f64) -> Result<(), CliError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    Ok(())
}

/// A complex number as `[re, im]`.
pub type ComplexEntry = [f64; 2];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementSpec {
    pub state: Vec<ComplexEntry>,
    /// Rows of the projector.
    pub projector: Vec<Vec<ComplexEntry>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QmeasureConfig {
    /// Outcome probabilities as exact rationals; exclusive with
    /// `measurements`.
    pub probabilities: Vec<String>,
    /// State and projector pairs whose Born probabilities are measured in
    /// order.
    pub measurements: Vec<MeasurementSpec>,
    pub trials: u64,
    pub alpha: f64,
    pub seed: u64,
}

impl Default for QmeasureConfig {
    fn default() -> Self {
        QmeasureConfig {
            probabilities: vec!["3/10".into()],
            measurements: Vec::new(),
            trials: 1000,
            alpha: DEFAULT_ALPHA,
            seed: 0,
        }
    }
}

impl QmeasureConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.probabilities.is_empty() == self.measurements.is_empty() {
            return Err(invalid("give exactly one of probabilities or measurements"));
        }
        if self.trials == 0 {
            return Err(invalid("trials must be at least 1"));
        }
        check_alpha(self.alpha)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DivergeConfig {
    pub map: MapSpec,
    pub ks: Vec<u64>,
    pub trials: u64,
    pub horizon: u64,
    pub seed: u64,
}

impl Default for DivergeConfig {
    fn default() -> Self {
        DivergeConfig {
            map: MapSpec::Doubling,
            ks: vec![5, 10, 20],
            trials: 1000,
            horizon: 200,
            seed: 0,
        }
    }
}

impl DivergeConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.ks.is_empty() {
            return Err(invalid("ks must not be empty"));
        }
        if self.ks.contains(&0) || self.trials == 0 || self.horizon == 0 {
            return Err(invalid("k values, trials and horizon must be at least 1"));
        }
        Ok(())
    }
}
