use std::fmt::Write as _;

use fiq_core::{BitState, Tail};
use serde::Serialize;

use super::parse_fiq;
use crate::config::{load, InfoConfig};
use crate::{Cli, CliError, Context, Format};

#[derive(Serialize)]
struct BitRow {
    position: u64,
    state: &'static str,
    /// Determined value, if any.
    value: Option<u8>,
    /// Exact propensity of an undetermined bit.
    propensity: Option<String>,
    information: f64,
}

#[derive(Serialize)]
struct InfoReport {
    literal: String,
    explicit_len: u64,
    tail: Tail,
    bits: Vec<BitRow>,
    information: f64,
}

pub fn run(cli: &Cli, literal: Option<&str>) -> Result<(), CliError> {
    let mut config: InfoConfig = load(cli.config.as_deref())?;
    if let Some(l) = literal {
        config.literal = l.to_string();
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    let x = parse_fiq(&config.literal)?;
    let rows: Vec<BitRow> = x
        .explicit_bits()
        .map(|(n, state)| {
            let information = state.information();
            match state {
                BitState::Determined(b) => BitRow {
                    position: n,
                    state: "determined",
                    value: Some(b as u8),
                    propensity: None,
                    information,
                },
                BitState::Undetermined(q) => BitRow {
                    position: n,
                    state: "undetermined",
                    value: None,
                    propensity: Some(q.to_string()),
                    information,
                },
            }
        })
        .collect();
    let report = InfoReport {
        literal: x.to_string(),
        explicit_len: x.explicit_len(),
        tail: x.tail(),
        bits: rows,
        information: x.information_content(),
    };
    let ctx = Context::new("info", cli.out.as_deref(), &config, config.seed)?;
    let (name, payload) = match cli.format {
        Some(Format::Json) => ("info.json", ctx.json(&report)),
        Some(Format::Csv) => ("info.csv", csv(&ctx, &report)),
        None => ("info.txt", text(&report)),
    };
    if ctx.has_out() {
        ctx.emit(name, &payload)?;
    }
    print!("{payload}");
    Ok(())
}

fn csv(ctx: &Context, r: &InfoReport) -> String {
    let mut out = ctx.csv_stamp();
    out.push_str("position,state,value,propensity,information\n");
    for b in &r.bits {
        let value = b.value.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            b.position,
            b.state,
            value,
            b.propensity.as_deref().unwrap_or(""),
            b.information
        );
    }
    let _ = writeln!(out, "total,,,,{}", r.information);
    out
}

fn text(r: &InfoReport) -> String {
    let mut out = format!("literal  {}\n", r.literal);
    let tail = match r.tail {
        Tail::Half => "propensity 1/2",
        Tail::Terminated => "terminated (all further bits 0)",
    };
    let _ = writeln!(out, "tail     {tail} beyond position {}", r.explicit_len);
    if !r.bits.is_empty() {
        let _ = writeln!(out, "{:>8}  {:<14}  {:>12}  information", "position", "state", "propensity");
    }
    for b in &r.bits {
        let state = match b.value {
            Some(v) => format!("determined {v}"),
            None => "undetermined".to_string(),
        };
        let _ = writeln!(
            out,
            "{:>8}  {:<14}  {:>12}  {}",
            b.position,
            state,
            b.propensity.as_deref().unwrap_or("-"),
            b.information
        );
    }
    let _ = writeln!(out, "I = {}", r.information);
    out
}
