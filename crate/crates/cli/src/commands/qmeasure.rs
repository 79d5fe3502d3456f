use std::fmt::Write as _;

use fiq_core::rational::{format_rational, parse_rational};
use fiq_core::supplement::{
    born_probability, run_measurement_sequence, BinaryMeasurement, BitTape, HiddenVar, Outcome, QState,
    SupplementError,
};
use num_complex::Complex64;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::config::{load, MeasurementSpec, QmeasureConfig};
use crate::{Cli, CliError, Context, Format};

#[derive(Serialize)]
struct StepSummary {
    step: usize,
    /// Exact probability of outcome +1.
    probability: String,
    plus: u64,
    frequency: f64,
    /// Four binomial standard deviations of the frequency.
    tolerance: f64,
    within_tolerance: bool,
    p_value: f64,
    verdict: &'static str,
}

#[derive(Serialize)]
struct Summary {
    trials: u64,
    alpha: f64,
    steps: Vec<StepSummary>,
}

#[derive(Serialize)]
struct Row {
    trial: u64,
    step: usize,
    outcome: Outcome,
}

fn complex(e: &[f64; 2]) -> Complex64 {
    Complex64::new(e[0], e[1])
}

fn born(spec: &MeasurementSpec, index: usize) -> Result<BigRational, CliError> {
    let label = |e: SupplementError| CliError::Validation(format!("measurement {}: {e}", index + 1));
    let psi = QState::new(spec.state.iter().map(complex).collect()).map_err(label)?;
    let rows = spec
        .projector
        .iter()
        .map(|r| r.iter().map(complex).collect())
        .collect();
    let p = BinaryMeasurement::new(rows).map_err(label)?;
    let prob = born_probability(&psi, &p).map_err(label)?;
    Ok(BigRational::from_float(prob).expect("finite probability"))
}

fn probabilities(c: &QmeasureConfig) -> Result<Vec<BigRational>, CliError> {
    if c.measurements.is_empty() {
        c.probabilities
            .iter()
            .map(|s| {
                let p = parse_rational(s).map_err(|e| CliError::Validation(format!("probability `{s}`: {e}")))?;
                if p < BigRational::from_integer(0.into()) || p > BigRational::from_integer(1.into()) {
                    return Err(CliError::Validation(format!("probability `{s}` is outside [0, 1]")));
                }
                Ok(p)
            })
            .collect()
    } else {
        c.measurements.iter().enumerate().map(|(i, m)| born(m, i)).collect()
    }
}

/// Binomial normal-approximation p-value; degenerate probabilities give 1
/// when every outcome agrees with certainty and 0 otherwise.
fn frequency_p_value(plus: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    let var = n * p * (1.0 - p);
    if var == 0.0 {
        return if (plus as f64 - n * p).abs() < 0.5 { 1.0 } else { 0.0 };
    }
    let z = (plus as f64 - n * p) / var.sqrt();
    erfc(z.abs() / std::f64::consts::SQRT_2)
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config: QmeasureConfig = load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    let ps = probabilities(&config)?;
    let ctx = Context::new("qmeasure", cli.out.as_deref(), &config, config.seed)?;

    // Trial t reads the hidden variable from tape key t.
    let seed = config.seed;
    let trials: Vec<u64> = (1..=config.trials).collect();
    let outcomes: Vec<Vec<Outcome>> = trials
        .par_iter()
        .map(|&t| {
            let r0 = HiddenVar::from_tape(BitTape::keyed(seed, t));
            run_measurement_sequence(&ps, r0).map_err(|e| CliError::Runtime(format!("trial {t}, {e}")))
        })
        .collect::<Result<_, _>>()?;

    let steps = ps
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let pf = fiq_core::Propensity::new(p.clone()).expect("validated").to_f64();
            let plus = outcomes.iter().filter(|o| o[j] == Outcome::Plus).count() as u64;
            let n = config.trials as f64;
            let frequency = plus as f64 / n;
            let tolerance = 4.0 * (pf * (1.0 - pf) / n).sqrt();
            let p_value = frequency_p_value(plus, config.trials, pf);
            StepSummary {
                step: j + 1,
                probability: format_rational(p),
                plus,
                frequency,
                tolerance,
                within_tolerance: (frequency - pf).abs() <= tolerance,
                p_value,
                verdict: if p_value < config.alpha { "reject" } else { "pass" },
            }
        })
        .collect();
    let summary = Summary {
        trials: config.trials,
        alpha: config.alpha,
        steps,
    };

    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = ctx.csv_stamp();
            out.push_str("trial,step,outcome\n");
            for (t, row) in trials.iter().zip(&outcomes) {
                for (j, o) in row.iter().enumerate() {
                    let _ = writeln!(out, "{t},{},{o}", j + 1);
                }
            }
            ctx.emit("outcomes.csv", &out)?;
        }
        Format::Json => {
            let rows: Vec<Row> = trials
                .iter()
                .zip(&outcomes)
                .flat_map(|(&trial, row)| {
                    row.iter().enumerate().map(move |(j, &outcome)| Row {
                        trial,
                        step: j + 1,
                        outcome,
                    })
                })
                .collect();
            ctx.emit("outcomes.json", &ctx.json(&rows))?;
        }
    }
    if ctx.has_out() {
        ctx.emit("summary.json", &ctx.json(&summary))?;
    }
    let lines: Vec<String> = summary
        .steps
        .iter()
        .map(|s| format!("step {}: p = {}, frequency {} ({})", s.step, s.probability, s.frequency, s.verdict))
        .collect();
    ctx.summary(&lines.join("\n"));
    Ok(())
}
