use num_traits::ToPrimitive;
use serde::Serialize;

use super::map::{leading_bits, step_exact, MapSpec, Point};
use super::DynamicsError;
use crate::dyadic::Dyadic;
use crate::rng::RandomSource;

/// Random digits appended after the differing bit.
const TAIL_BITS: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivergenceOutcome {
    pub trial: u64,
    /// First step at which the leading output bits differ; `None` if they
    /// never did within the horizon (censored).
    pub divergence_step: Option<u64>,
}

/// Evolves pairs of exact inputs that share their first `k` bits and differ
/// at bit `k + 1` (later bits random but shared) and records when their
/// leading output bits first differ.
///
/// Rotations are periodic with period equal to the angle's denominator, so
/// their horizon is capped at one period: a pair that has not separated by
/// then never will. Logistic iterates double their bit length every step;
/// keep its horizon small.
pub fn divergence_experiment(
    map: &MapSpec,
    k: u64,
    trials: u64,
    horizon: u64,
    rng: &mut RandomSource,
) -> Result<Vec<DivergenceOutcome>, DynamicsError> {
    if k == 0 || trials == 0 || horizon == 0 {
        return Err(DynamicsError::InvalidParameter(
            "k, trials and horizon must be at least 1".into(),
        ));
    }
    let horizon = match map {
        MapSpec::RationalRotation(a) => horizon.min(a.denom().to_u64().unwrap_or(u64::MAX)),
        _ => horizon,
    };
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut bits: Vec<bool> = (0..k).map(|_| rng.next_bit()).collect();
        let split = bits.len();
        bits.push(false);
        bits.extend((0..TAIL_BITS).map(|_| rng.next_bit()));
        let a = Dyadic::from_bits(&bits).to_rational();
        bits[split] = true;
        let b = Dyadic::from_bits(&bits).to_rational();
        let (mut pa, mut pb) = if map.is_two_dimensional() {
            let y: Vec<bool> = (0..TAIL_BITS).map(|_| rng.next_bit()).collect();
            let y = Dyadic::from_bits(&y).to_rational();
            (Point::square(a, y.clone()), Point::square(b, y))
        } else {
            (Point::line(a), Point::line(b))
        };
        let mut divergence_step = None;
        for t in 1..=horizon {
            pa = step_exact(map, &pa)?;
            pb = step_exact(map, &pb)?;
            if leading_bits(&pa.x, 1) != leading_bits(&pb.x, 1) {
                divergence_step = Some(t);
                break;
            }
        }
        out.push(DivergenceOutcome {
            trial,
            divergence_step,
        });
    }
    Ok(out)
}

/// Mean of the uncensored divergence steps.
pub fn mean_divergence(outcomes: &[DivergenceOutcome]) -> Option<f64> {
    let times: Vec<u64> = outcomes.iter().filter_map(|o| o.divergence_step).collect();
    (!times.is_empty()).then(|| times.iter().sum::<u64>() as f64 / times.len() as f64)
}
