use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::map::MapSpec;
use super::span::{fixed_output, Span};
use super::trajectory::{Manifest, Model, StepRecord, Trajectory};
use super::DynamicsError;
use crate::dyadic::Dyadic;
use crate::fiq::{bit_information, Actualizer, BitState, Fiq};
use crate::rational::frac;
use crate::rng::RandomSource;

/// Actualizations allowed per step unless configured otherwise.
pub const DEFAULT_BUDGET: u32 = 64;

/// How the state is re-represented after a step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Successor {
    /// Exact suffix view of the input (doubling and baker maps).
    Shift,
    /// The input itself, with the accumulated rotation angle (rotations).
    Translate,
    /// Fresh Fiq holding the emitted bits followed by the 1/2 tail.
    Reset,
}

impl Successor {
    pub fn for_map(map: &MapSpec) -> Self {
        match map {
            MapSpec::Doubling | MapSpec::Baker2D => Successor::Shift,
            MapSpec::RationalRotation(_) => Successor::Translate,
            MapSpec::Tent | MapSpec::Logistic4 => Successor::Reset,
        }
    }
}

#[derive(Clone, Debug)]
enum Frame {
    /// Local position `k` is input position `k + offset`.
    Shift { offset: u64 },
    /// Local positions are input positions; the state is `x + angle mod 1`.
    Translate { angle: BigRational },
    /// Local position `k` is input position `k + base`.
    Reset { base: i64 },
}

/// Result of one refinement step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepOutcome {
    /// The `m` output bits fixed by this step, most significant first.
    pub emitted: Vec<bool>,
    /// Absolute input positions actualized during the step, increasing.
    pub actualized: Vec<u64>,
    /// Width of the refined state's hull when the output was fixed.
    pub interval_width: Dyadic,
}

/// Evolving state of a Fiq under a map, with provenance bookkeeping.
///
/// Positions handed to the [`Actualizer`] are absolute input positions: they
/// increase strictly over the life of the state, so every input bit is fixed
/// at most once.
#[derive(Clone, Debug)]
pub struct FiqState {
    map: MapSpec,
    current: Fiq,
    y: Option<Fiq>,
    frame: Frame,
    frontier: u64,
    information: f64,
    steps_taken: u64,
}

impl FiqState {
    /// Baker states start with a fully indeterminate `y`.
    pub fn new(map: &MapSpec, x0: Fiq) -> Self {
        let y = map.is_two_dimensional().then(Fiq::indeterminate);
        Self::with_y(map, x0, y)
    }

    pub fn with_y(map: &MapSpec, x0: Fiq, y0: Option<Fiq>) -> Self {
        let frame = match Successor::for_map(map) {
            Successor::Shift => Frame::Shift { offset: 0 },
            Successor::Translate => Frame::Translate {
                angle: BigRational::zero(),
            },
            Successor::Reset => Frame::Reset { base: 0 },
        };
        FiqState {
            map: map.clone(),
            frontier: x0.explicit_len(),
            information: x0.information_content(),
            current: x0,
            y: y0,
            frame,
            steps_taken: 0,
        }
    }

    /// The Fiq being refined, in local coordinates. For rotations this is the
    /// untranslated input; the state is `current + angle mod 1`.
    pub fn current(&self) -> &Fiq {
        &self.current
    }

    pub fn y(&self) -> Option<&Fiq> {
        self.y.as_ref()
    }

    pub fn map(&self) -> &MapSpec {
        &self.map
    }

    /// Rotation already applied to `current` (zero for other maps).
    pub fn accumulated_angle(&self) -> BigRational {
        match &self.frame {
            Frame::Translate { angle } => angle.clone(),
            _ => BigRational::zero(),
        }
    }

    /// Information content of the input: initial `I(x0)` plus what every
    /// actualization so far has added.
    pub fn information(&self) -> f64 {
        self.information
    }

    pub fn steps_taken(&self) -> u64 {
        self.steps_taken
    }

    /// The map applied to `current` at the next step. For rotations this
    /// folds in the accumulated angle.
    pub fn effective_map(&self) -> MapSpec {
        match (&self.map, &self.frame) {
            (MapSpec::RationalRotation(a), Frame::Translate { angle }) => {
                MapSpec::RationalRotation(frac(&(angle + a)))
            }
            (map, _) => map.clone(),
        }
    }

    /// Enclosure of `current`'s completions. Open for a 1/2 tail: its
    /// endpoints are only reached by probability-zero completions.
    pub fn region(&self) -> Span {
        let (hull, closed) = self.current.hull();
        Span::new(
            hull.low().to_rational(),
            hull.high().to_rational(),
            closed,
            closed,
        )
    }

    /// Image enclosure of the current region under the next step's map.
    pub fn image(&self) -> Vec<Span> {
        self.effective_map().image(&self.region())
    }

    fn absolute(&self, local: u64) -> u64 {
        match &self.frame {
            Frame::Shift { offset } => local + offset,
            Frame::Translate { .. } => local,
            Frame::Reset { base } => (local as i64 + base) as u64,
        }
    }

    /// Refines the state until the next image fixes `m` output bits, then
    /// advances it by one step.
    pub fn step(
        &mut self,
        m: u32,
        source: &mut dyn Actualizer,
        budget: u32,
    ) -> Result<StepOutcome, DynamicsError> {
        let out = self.refine(m, source, budget)?;
        self.advance(&out.emitted);
        Ok(out)
    }

    fn refine(
        &mut self,
        m: u32,
        source: &mut dyn Actualizer,
        budget: u32,
    ) -> Result<StepOutcome, DynamicsError> {
        if m == 0 || budget == 0 {
            return Err(DynamicsError::InvalidParameter(
                "precision and budget must be at least 1".into(),
            ));
        }
        let step = self.steps_taken + 1;
        let map = self.effective_map();
        let mut actualized = Vec::new();
        let emitted = loop {
            let region = self.region();
            if let Some(bits) = fixed_output(&map.image(&region), m) {
                break bits;
            }
            if actualized.len() as u32 >= budget {
                return Err(DynamicsError::BudgetExhausted {
                    step,
                    budget,
                    precision: m,
                });
            }
            let k = self
                .current
                .lowest_undetermined()
                .expect("an unresolved region has an undetermined bit");
            let q = match self.current.bit(k) {
                BitState::Undetermined(q) => q,
                BitState::Determined(_) => unreachable!(),
            };
            let abs = self.absolute(k);
            self.current
                .actualize_bit_at(k, abs, source)
                .map_err(|source| DynamicsError::Actualization { step, source })?;
            self.information += 1.0 - bit_information(&q);
            self.frontier = self.frontier.max(abs);
            actualized.push(abs);
        };
        let interval_width = self.current.hull().0.width();
        Ok(StepOutcome {
            emitted,
            actualized,
            interval_width,
        })
    }

    fn advance(&mut self, emitted: &[bool]) {
        self.steps_taken += 1;
        let explicit_end = self.absolute(self.current.explicit_len());
        match &mut self.frame {
            Frame::Shift { offset } => {
                if let Some(y) = self.y.take() {
                    self.y = Some(y.prepend(self.current.bit(1)));
                }
                self.current = self.current.suffix(1);
                *offset += 1;
            }
            Frame::Translate { angle } => {
                if let MapSpec::RationalRotation(a) = &self.map {
                    *angle = frac(&(&*angle + a));
                }
            }
            Frame::Reset { base } => {
                self.frontier = self.frontier.max(explicit_end);
                self.current = Fiq::from_prefix(emitted);
                *base = self.frontier as i64 - emitted.len() as i64;
            }
        }
    }
}

/// One step from a bare Fiq. Returns the refined Fiq (with the newly
/// determined bits), the `m` emitted bits and the actualized positions.
pub fn step_fiq(
    map: &MapSpec,
    x: &Fiq,
    m: u32,
    source: &mut dyn Actualizer,
    budget: u32,
) -> Result<(Fiq, Vec<bool>, Vec<u64>), DynamicsError> {
    let mut state = FiqState::new(map, x.clone());
    let out = state.refine(m, source, budget)?;
    Ok((state.current, out.emitted, out.actualized))
}

/// Evolves `x0` for `steps` steps under the indeterministic model, drawing
/// every actualization from `rng`.
pub fn evolve(
    map: &MapSpec,
    x0: &Fiq,
    steps: u64,
    m: u32,
    rng: &mut RandomSource,
    budget: u32,
) -> Result<Trajectory, DynamicsError> {
    let seed = rng.seed();
    evolve_with(map, x0, steps, m, rng, budget, Model::Fiq, seed)
}

/// Shared evolution loop; `model` and `seed` only label the manifest.
#[allow(clippy::too_many_arguments)]
pub fn evolve_with(
    map: &MapSpec,
    x0: &Fiq,
    steps: u64,
    m: u32,
    source: &mut dyn Actualizer,
    budget: u32,
    model: Model,
    seed: u64,
) -> Result<Trajectory, DynamicsError> {
    if steps == 0 {
        return Err(DynamicsError::InvalidParameter("steps must be at least 1".into()));
    }
    let mut state = FiqState::new(map, x0.clone());
    let mut records = Vec::with_capacity(steps as usize);
    for _ in 0..steps {
        let out = state.step(m, source, budget)?;
        records.push(StepRecord {
            step: state.steps_taken(),
            emitted: out.emitted,
            actualized: out.actualized,
            interval_width: out.interval_width,
            information: state.information(),
        });
    }
    Ok(Trajectory {
        manifest: Manifest {
            map: map.clone(),
            seed,
            model,
            precision: m,
            budget,
            steps,
            initial: x0.to_string(),
            successor: Successor::for_map(map),
            library_version: crate::VERSION.to_string(),
        },
        steps: records,
    })
}
