use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::StatsError;

/// Significance level used for verdicts unless the caller picks another.
pub const DEFAULT_ALPHA: f64 = 0.001;

const CONVENTION_NOTE: &str =
    "battery and alpha are library conventions, not a criterion of indistinguishability";

/// A non-empty bit sequence with an optional provenance label such as
/// `fiq/doubling/seed=7`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DigitStream {
    bits: Vec<bool>,
    label: Option<String>,
}

impl DigitStream {
    pub fn new(bits: Vec<bool>) -> Result<Self, StatsError> {
        if bits.is_empty() {
            return Err(StatsError::Empty);
        }
        Ok(DigitStream { bits, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestKind {
    Monobit,
    BlockFrequency,
    SerialCorrelation,
    BorelNormality,
    TwoSampleEquivalence,
    KsUniform,
}

impl std::fmt::Display for TestKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            TestKind::Monobit => "monobit",
            TestKind::BlockFrequency => "block_frequency",
            TestKind::SerialCorrelation => "serial_correlation",
            TestKind::BorelNormality => "borel_normality",
            TestKind::TwoSampleEquivalence => "two_sample_equivalence",
            TestKind::KsUniform => "ks_uniform",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Reject,
}

impl Verdict {
    pub fn is_pass(self) -> bool {
        self == Verdict::Pass
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub test: TestKind,
    /// Block length or lag, where the test has one.
    pub k: Option<usize>,
    pub statistic: f64,
    /// Reference distribution, e.g. `normal(0,1)` or `chi2(df=15)`.
    pub reference: String,
    pub p_value: f64,
    pub alpha: f64,
    pub verdict: Verdict,
    pub sample_sizes: Vec<usize>,
    pub note: String,
}

impl TestReport {
    /// Report whose verdict is `p_value < alpha => reject`.
    pub(crate) fn from_p(
        test: TestKind,
        k: Option<usize>,
        statistic: f64,
        reference: String,
        p_value: f64,
        alpha: f64,
        sample_sizes: Vec<usize>,
    ) -> Self {
        let p_value = p_value.clamp(0.0, 1.0);
        TestReport {
            test,
            k,
            statistic,
            reference,
            p_value,
            alpha,
            verdict: if p_value < alpha { Verdict::Reject } else { Verdict::Pass },
            sample_sizes,
            note: CONVENTION_NOTE.to_string(),
        }
    }

    /// The same report judged at another significance level. The normality
    /// verdict is decided by its deviation bound and is left unchanged.
    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        if self.test != TestKind::BorelNormality {
            self.verdict = if self.p_value < alpha { Verdict::Reject } else { Verdict::Pass };
        }
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict.is_pass()
    }
}

/// CSV summary with header `test,k,statistic,p_value,verdict`.
pub fn reports_to_csv(reports: &[TestReport]) -> String {
    let mut out = String::from("test,k,statistic,p_value,verdict\n");
    for r in reports {
        let k = r.k.map(|k| k.to_string()).unwrap_or_default();
        let _ = writeln!(out, "{},{},{},{},{}", r.test, k, r.statistic, r.p_value, r.verdict);
    }
    out
}
