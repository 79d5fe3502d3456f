use fiq_core::dynamics::{evolve, evolve_with, Model, Trajectory};
use fiq_core::rational::parse_rational;
use fiq_core::stats::{battery, reports_to_csv, two_sample_equivalence, DigitStream, TestKind, TestReport};
use fiq_core::supplement::{evolve_supplemented, BitTape};
use fiq_core::{bernoulli, Actualizer, Fiq, FiqError, Propensity, RandomSource};
use rayon::prelude::*;
use serde::Serialize;

use super::{dynamics_error, parse_fiq};
use crate::config::{load, CompareConfig};
use crate::{Cli, CliError, Context, Format};

/// Random draws that ignore the bit's own propensity.
struct Biased {
    rng: RandomSource,
    p: Propensity,
}

impl Actualizer for Biased {
    fn actualize(&mut self, _position: u64, _propensity: &Propensity) -> Result<bool, FiqError> {
        let rng = &mut self.rng;
        Ok(bernoulli(self.p.value(), || rng.next_bit()))
    }
}

#[derive(Serialize)]
struct BatteryCount {
    test: TestKind,
    k: Option<usize>,
    rejected: usize,
    streams: usize,
    expected_rejections: f64,
}

#[derive(Serialize)]
struct BatterySummary {
    fiq: Vec<BatteryCount>,
    tape: Vec<BatteryCount>,
}

#[derive(Serialize)]
struct CompareReport {
    verdict: String,
    alpha: f64,
    ensemble: u64,
    stream_bits: u64,
    equivalence: Vec<TestReport>,
    battery: BatterySummary,
}

fn run_model(
    c: &CompareConfig,
    x0: &Fiq,
    model: Model,
    seed: u64,
    bias: Option<&Propensity>,
) -> Result<Trajectory, CliError> {
    let result = match (model, bias) {
        (Model::Fiq, None) => evolve(&c.map, x0, c.steps, c.precision, &mut RandomSource::new(seed), c.budget),
        (Model::Fiq, Some(p)) => {
            let mut source = Biased {
                rng: RandomSource::new(seed),
                p: p.clone(),
            };
            evolve_with(&c.map, x0, c.steps, c.precision, &mut source, c.budget, Model::Fiq, seed)
        }
        (Model::Tape, _) => {
            evolve_supplemented(&c.map, x0, &mut BitTape::new(seed), c.steps, c.precision, c.budget)
        }
    };
    result.map_err(|e| dynamics_error(e, &format!("model {model}, seed {seed}")))
}

fn ensemble(
    c: &CompareConfig,
    x0: &Fiq,
    model: Model,
    bias: Option<&Propensity>,
) -> Result<Vec<DigitStream>, CliError> {
    let seeds: Vec<u64> = (c.seed..c.seed + c.ensemble).collect();
    seeds
        .par_iter()
        .map(|&seed| {
            let t = run_model(c, x0, model, seed, bias)?;
            let s = DigitStream::new(t.emitted_stream()).expect("at least one step");
            Ok(s.with_label(format!("{model}/{}/seed={seed}", c.map)))
        })
        .collect()
}

fn battery_counts(streams: &[DigitStream], alpha: f64) -> Result<Vec<BatteryCount>, CliError> {
    let per_stream: Vec<Vec<TestReport>> = streams
        .par_iter()
        .map(|s| battery(s, alpha))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let first = &per_stream[0];
    Ok(first
        .iter()
        .enumerate()
        .map(|(i, r)| BatteryCount {
            test: r.test,
            k: r.k,
            rejected: per_stream.iter().filter(|rs| !rs[i].passed()).count(),
            streams: per_stream.len(),
            expected_rejections: alpha * per_stream.len() as f64,
        })
        .collect())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config: CompareConfig = load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    let x0 = parse_fiq(&config.initial)?;
    let bias = config
        .test_bias
        .as_deref()
        .map(|s| {
            parse_rational(s)
                .map_err(FiqError::from)
                .and_then(Propensity::new)
                .map_err(|e| CliError::Validation(format!("test_bias: {e}")))
        })
        .transpose()?;
    let ctx = Context::new("compare", cli.out.as_deref(), &config, config.seed)?;

    let a = ensemble(&config, &x0, Model::Fiq, bias.as_ref())?;
    let b = ensemble(&config, &x0, Model::Tape, None)?;
    let equivalence = config
        .block_lengths
        .iter()
        .map(|&k| two_sample_equivalence(&a, &b, k, config.alpha))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| CliError::Validation(e.to_string()))?;
    let verdict = if equivalence.iter().all(TestReport::passed) {
        format!("indistinguishable at alpha={}", config.alpha)
    } else {
        "distinguished".to_string()
    };
    let report = CompareReport {
        verdict: verdict.clone(),
        alpha: config.alpha,
        ensemble: config.ensemble,
        stream_bits: config.steps * config.precision as u64,
        equivalence,
        battery: BatterySummary {
            fiq: battery_counts(&a, config.alpha)?,
            tape: battery_counts(&b, config.alpha)?,
        },
    };
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => ctx.emit("report.json", &ctx.json(&report))?,
        Format::Csv => ctx.emit(
            "equivalence.csv",
            &(ctx.csv_stamp() + &reports_to_csv(&report.equivalence)),
        )?,
    }
    ctx.summary(&format!("verdict: {verdict}"));
    Ok(())
}
