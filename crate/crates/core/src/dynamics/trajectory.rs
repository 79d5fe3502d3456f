use std::fmt::Write as _;

use serde::{Deserialize, Serialize, Serializer};

use super::engine::Successor;
use super::map::MapSpec;
use crate::dyadic::Dyadic;

/// Which process supplies the input digits a trajectory consumed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    /// Digits actualized by independent random draws.
    Fiq,
    /// Digits read from a seeded tape (the supplementing real number).
    Tape,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Model::Fiq => "fiq",
            Model::Tape => "tape",
        })
    }
}

impl std::str::FromStr for Model {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fiq" => Ok(Model::Fiq),
            "tape" => Ok(Model::Tape),
            other => Err(format!("unknown model `{other}` (expected fiq or tape)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Manifest {
    pub map: MapSpec,
    pub seed: u64,
    pub model: Model,
    pub precision: u32,
    pub budget: u32,
    pub steps: u64,
    /// Initial Fiq literal.
    pub initial: String,
    /// State re-representation rule applied after each step.
    pub successor: Successor,
    pub library_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StepRecord {
    pub step: u64,
    #[serde(rename = "emitted_digits", serialize_with = "bit_string")]
    pub emitted: Vec<bool>,
    #[serde(rename = "actualized_positions")]
    pub actualized: Vec<u64>,
    #[serde(serialize_with = "display_string")]
    pub interval_width: Dyadic,
    /// Information content of the input after this step.
    pub information: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub manifest: Manifest,
    pub steps: Vec<StepRecord>,
}

fn bit_string<S: Serializer>(bits: &[bool], s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&format_bits(bits))
}

fn display_string<S: Serializer>(d: &Dyadic, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&d.to_string())
}

/// Bits as a `0`/`1` string, most significant first.
pub fn format_bits(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

impl Trajectory {
    /// Every emitted digit in step order.
    pub fn emitted_stream(&self) -> Vec<bool> {
        self.steps.iter().flat_map(|s| s.emitted.iter().copied()).collect()
    }

    /// Leading emitted digit of each step.
    pub fn leading_stream(&self) -> Vec<bool> {
        self.steps.iter().map(|s| s.emitted[0]).collect()
    }

    pub fn actualized_positions(&self) -> Vec<u64> {
        self.steps.iter().flat_map(|s| s.actualized.iter().copied()).collect()
    }

    pub fn bits_consumed(&self) -> usize {
        self.steps.iter().map(|s| s.actualized.len()).sum()
    }

    pub fn final_information(&self) -> f64 {
        self.steps.last().map_or(0.0, |s| s.information)
    }

    /// One row per step: `step,emitted_digits,actualized_positions,interval_width`.
    /// Positions within a row are separated by `;`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,emitted_digits,actualized_positions,interval_width\n");
        for s in &self.steps {
            let positions: Vec<String> = s.actualized.iter().map(u64::to_string).collect();
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.step,
                format_bits(&s.emitted),
                positions.join(";"),
                s.interval_width
            );
        }
        out
    }
}
