use fiq_core::dynamics::{evolve, Model};
use fiq_core::supplement::{evolve_supplemented, BitTape};
use fiq_core::RandomSource;

use super::{dynamics_error, parse_fiq};
use crate::config::{load, EvolveConfig};
use crate::{Cli, CliError, Context, Format};

pub fn run(cli: &Cli) -> Result<(), CliError> {
    let mut config: EvolveConfig = load(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    config.validate()?;
    let x0 = parse_fiq(&config.initial)?;
    let ctx = Context::new("evolve", cli.out.as_deref(), &config, config.seed)?;
    let c = &config;
    let trajectory = match c.model {
        Model::Fiq => evolve(&c.map, &x0, c.steps, c.precision, &mut RandomSource::new(c.seed), c.budget),
        Model::Tape => {
            evolve_supplemented(&c.map, &x0, &mut BitTape::new(c.seed), c.steps, c.precision, c.budget)
        }
    }
    .map_err(|e| dynamics_error(e, ""))?;

    match cli.format.unwrap_or(Format::Csv) {
        Format::Csv => ctx.emit(
            "trajectory.csv",
            &(ctx.csv_stamp() + &trajectory.to_csv()),
        )?,
        Format::Json => ctx.emit("trajectory.json", &ctx.json(&trajectory))?,
    }
    if ctx.has_out() {
        ctx.emit("manifest.json", &ctx.json(&trajectory.manifest))?;
    }
    let mut summary = format!(
        "steps {}, bits emitted {}, bits consumed {}",
        c.steps,
        trajectory.emitted_stream().len(),
        trajectory.bits_consumed()
    );
    if c.model == Model::Fiq {
        summary.push_str(&format!(", final I(x) {}", trajectory.final_information()));
    }
    ctx.summary(&summary);
    Ok(())
}
