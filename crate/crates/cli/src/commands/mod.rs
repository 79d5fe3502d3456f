//! One module per subcommand.

pub mod compare;
pub mod diverge;
pub mod evolve;
pub mod info;
pub mod qmeasure;

use fiq_core::dynamics::DynamicsError;
use fiq_core::Fiq;

use crate::CliError;

pub(crate) fn parse_fiq(literal: &str) -> Result<Fiq, CliError> {
    literal
        .parse()
        .map_err(|e| CliError::Validation(format!("literal `{literal}`: {e}")))
}

/// Failures inside a run are runtime errors; bad inputs are validation
/// errors.
pub(crate) fn dynamics_error(e: DynamicsError, label: &str) -> CliError {
    let msg = if label.is_empty() { e.to_string() } else { format!("{label}: {e}") };
    match e {
        DynamicsError::BudgetExhausted { .. } | DynamicsError::Actualization { .. } => {
            CliError::Runtime(msg)
        }
        _ => CliError::Validation(msg),
    }
}
