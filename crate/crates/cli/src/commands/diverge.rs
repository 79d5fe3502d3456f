use std::fmt::Write as _;

use fiq_core::dynamics::{divergence_experiment, DivergenceOutcome};
use fiq_core::{Domain, RandomSource};
use rayon::prelude::*;
use serde::Serialize;

use super::dynamics_error;
use crate::config::{load, DivergeConfig};
use crate::{Cli, CliError, Context, Format};

/// Bits of the experiment stream reserved for each k.
const STREAM_SLICE: u64 = 1 << 40;

#[derive(Serialize)]
struct KSummary {
    k: u64,
    trials: u64,
    censored: u64,
    mean: Option<f64>,
    min: Option<u64>,
    max: Option<u64>,
}

#[derive(Serialize)]
struct Row {
    k: u64,
    trial: u64,
    divergence_step: Option<u64>,
    censored: bool,
}

#[derive(Serialize)]
struct Summary {
    map: String,
    horizon: u64,
    per_k: Vec<KSummary>,
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config: DivergeConfig = load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    let ctx = Context::new("diverge", cli.out.as_deref(), &config, config.seed)?;

    let c = &config;
    let results: Vec<Vec<DivergenceOutcome>> = c
        .ks
        .par_iter()
        .enumerate()
        .map(|(i, &k)| {
            let mut rng = RandomSource::with_domain(c.seed, Domain::Experiment);
            rng.seek(i as u64 * STREAM_SLICE);
            divergence_experiment(&c.map, k, c.trials, c.horizon, &mut rng)
                .map_err(|e| dynamics_error(e, &format!("k = {k}")))
        })
        .collect::<Result<_, _>>()?;

    let per_k: Vec<KSummary> = c
        .ks
        .iter()
        .zip(&results)
        .map(|(&k, outs)| {
            let times: Vec<u64> = outs.iter().filter_map(|o| o.divergence_step).collect();
            KSummary {
                k,
                trials: c.trials,
                censored: (outs.len() - times.len()) as u64,
                mean: fiq_core::dynamics::mean_divergence(outs),
                min: times.iter().min().copied(),
                max: times.iter().max().copied(),
            }
        })
        .collect();
    let summary = Summary {
        map: c.map.to_string(),
        horizon: c.horizon,
        per_k,
    };

    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut out = ctx.csv_stamp();
            out.push_str("k,trial,divergence_step\n");
            for (&k, outs) in c.ks.iter().zip(&results) {
                for o in outs {
                    let step = o.divergence_step.map_or("censored".to_string(), |s| s.to_string());
                    let _ = writeln!(out, "{k},{},{step}", o.trial);
                }
            }
            ctx.emit("divergence.csv", &out)?;
        }
        Format::Json => {
            let rows: Vec<Row> = c
                .ks
                .iter()
                .zip(&results)
                .flat_map(|(&k, outs)| {
                    outs.iter().map(move |o| Row {
                        k,
                        trial: o.trial,
                        divergence_step: o.divergence_step,
                        censored: o.divergence_step.is_none(),
                    })
                })
                .collect();
            ctx.emit("divergence.json", &ctx.json(&rows))?;
        }
    }
    if ctx.has_out() {
        ctx.emit("summary.json", &ctx.json(&summary))?;
    }
    let lines: Vec<String> = summary
        .per_k
        .iter()
        .map(|s| {
            let mean = s.mean.map_or("-".to_string(), |m| m.to_string());
            format!("k {}: mean {mean}, censored {}/{}", s.k, s.censored, s.trials)
        })
        .collect();
    ctx.summary(&lines.join("\n"));
    Ok(())
}
