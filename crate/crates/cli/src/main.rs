//! `cvqkd` — secret key rates, security thresholds, sweeps and wavelength
//! security maps for thermal-state continuous-variable QKD under
//! entangling-cloner attacks.
//!
//! All variances are in shot-noise units (vacuum = 1); rates are bits per
//! channel use. Sweep and map internals parallelize across cells; set
//! `CVQKD_THREADS` to cap the worker count.

mod figures;
mod output;
mod selftest;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cvqkd_core::analysis::{
    run_sweep, threshold_find, FixedParams, ProtocolSetup, SweepAxis, SweepSpec, ThresholdOutcome,
};
use cvqkd_core::channel::{ChannelParams, SourceParams};
use cvqkd_core::rates::{key_rate, Protocol};
use cvqkd_core::spectrum::{security_map, GridRange, SecurityClass};

use figures::FigureName;
use output::{Curve, OutputRecord, Row};

#[derive(Debug, Parser)]
#[command(
    name = "cvqkd",
    version,
    about = "Thermal-state CV-QKD security analysis",
    after_help = "Environment:\n  CVQKD_THREADS  cap for sweep/map parallelism (default: all cores)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliProtocol {
    DrHom,
    DrHet,
    RrHom,
    RrHet,
}

impl From<CliProtocol> for Protocol {
    fn from(p: CliProtocol) -> Self {
        match p {
            CliProtocol::DrHom => Protocol::DR_HOM,
            CliProtocol::DrHet => Protocol::DR_HET,
            CliProtocol::RrHom => Protocol::RR_HOM,
            CliProtocol::RrHet => Protocol::RR_HET,
        }
    }
}

fn parse_transmission(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if (0.0..=1.0).contains(&t) {
        Ok(t)
    } else {
        Err(format!("transmission {t} must lie in [0, 1]"))
    }
}

fn parse_epr_noise(s: &str) -> Result<f64, String> {
    let w: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if w >= 1.0 {
        Ok(w)
    } else {
        Err(format!("EPR noise {w} must be >= 1"))
    }
}

fn parse_shot_noise(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v >= 1.0 {
        Ok(v)
    } else {
        Err(format!("shot-noise variance {v} must be >= 1"))
    }
}

fn parse_non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be >= 0"))
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("{v} must be > 0"))
    }
}

/// Source and channel flags shared by the point commands.
#[derive(Debug, Args)]
struct ModelArgs {
    /// Protocol variant.
    #[arg(long, value_enum)]
    protocol: CliProtocol,
    /// Channel EPR noise W (shot-noise units).
    #[arg(long, value_parser = parse_epr_noise, default_value = "1.0")]
    w: f64,
    /// Preparation shot-noise V0 = 1 + beta.
    #[arg(long, value_parser = parse_shot_noise, default_value = "1.0")]
    v0: f64,
    /// Signal modulation variance V_S.
    #[arg(long, value_parser = parse_non_negative, default_value = "1000.0")]
    vs: f64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Secret key rate at one parameter point.
    Rate {
        #[command(flatten)]
        model: ModelArgs,
        /// Channel transmission T.
        #[arg(long, value_parser = parse_transmission)]
        t: f64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the output here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Security threshold T* (rate zero crossing) over T in (0, 1).
    Threshold {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Key-rate table along one swept axis.
    Sweep {
        #[command(flatten)]
        model: ModelArgs,
        /// Swept axis.
        #[arg(long, value_enum)]
        axis: CliAxis,
        #[arg(long)]
        lo: f64,
        #[arg(long)]
        hi: f64,
        /// Number of points including both endpoints.
        #[arg(long, default_value = "101")]
        steps: usize,
        /// Fixed transmission (for non-T axes).
        #[arg(long, value_parser = parse_transmission, default_value = "0.9")]
        t: f64,
        /// Environment temperature in kelvin (frequency axis only).
        #[arg(long, value_parser = parse_positive, default_value = "300.0")]
        temperature: f64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit the dataset behind one of the canned figures.
    Figure {
        /// Figure name.
        #[arg(value_enum)]
        name: FigureName,
        /// Points per curve.
        #[arg(long, default_value = "201")]
        steps: usize,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Security classification over a (frequency, transmission) grid.
    Map {
        /// Environment temperature in kelvin.
        #[arg(long, value_parser = parse_positive, default_value = "300.0")]
        temperature: f64,
        /// Signal modulation variance V_S.
        #[arg(long, value_parser = parse_non_negative, default_value = "1e8")]
        vs: f64,
        #[arg(long, value_parser = parse_positive, default_value = "1e9")]
        f_lo: f64,
        #[arg(long, value_parser = parse_positive, default_value = "430e12")]
        f_hi: f64,
        #[arg(long, default_value = "30")]
        f_steps: usize,
        #[arg(long, value_parser = parse_transmission, default_value = "0.5")]
        t_lo: f64,
        #[arg(long, value_parser = parse_transmission, default_value = "0.9999")]
        t_hi: f64,
        #[arg(long, default_value = "40")]
        t_steps: usize,
        /// Override Eve's EPR noise instead of matching the environment.
        #[arg(long, value_parser = parse_epr_noise)]
        epr: Option<f64>,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the built-in diagnostic checks (exit 0 iff all pass).
    Selftest {
        /// Seed for the Monte-Carlo check.
        #[arg(long, default_value = "7")]
        seed: u64,
        /// Sample count for the Monte-Carlo check.
        #[arg(long, default_value = "200000")]
        samples: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliAxis {
    T,
    W,
    V0,
    Vs,
    F,
}

impl From<CliAxis> for SweepAxis {
    fn from(axis: CliAxis) -> Self {
        match axis {
            CliAxis::T => SweepAxis::Transmission,
            CliAxis::W => SweepAxis::EprNoise,
            CliAxis::V0 => SweepAxis::ShotNoise,
            CliAxis::Vs => SweepAxis::SignalVariance,
            CliAxis::F => SweepAxis::Frequency,
        }
    }
}

fn emit(record: &OutputRecord, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let text = match format {
        Format::Text => record.to_text(),
        Format::Csv => record.to_csv(),
        Format::Json => record.to_json(),
    };
    match out {
        Some(path) => std::fs::write(path, text)
            .with_context(|| format!("writing output to {}", path.display()))?,
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
        }
    }
    Ok(())
}

fn model_meta(record: &mut OutputRecord, protocol: Protocol, model: &ModelArgs) {
    record
        .meta("protocol", protocol)
        .meta("w", model.w)
        .meta("v0", model.v0)
        .meta("vs", model.vs);
}

fn cmd_rate(model: &ModelArgs, t: f64, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let protocol: Protocol = model.protocol.into();
    let src = SourceParams::new(model.vs, model.v0)?;
    let ch = ChannelParams::new(t, model.w)?;
    let result = key_rate(protocol, &src, &ch)?;
    let mut record = OutputRecord::new("rate", vec!["axis", "value", "mi_ab", "holevo", "rate"]);
    model_meta(&mut record, protocol, model);
    record.curves.push(Curve {
        label: None,
        rows: vec![Row {
            axis: "t",
            value: t,
            numbers: vec![result.mi_ab, result.holevo, result.rate],
        }],
    });
    emit(&record, format, out)
}

fn cmd_threshold(model: &ModelArgs, format: Format, out: Option<&PathBuf>) -> Result<()> {
    let protocol: Protocol = model.protocol.into();
    let setup = ProtocolSetup::new(protocol, SourceParams::new(model.vs, model.v0)?, model.w)?;
    let outcome = threshold_find(&setup)?;
    let mut record = OutputRecord::new("threshold", vec!["axis", "value"]);
    model_meta(&mut record, protocol, model);
    match outcome {
        ThresholdOutcome::Threshold(t_star) => {
            record.meta_number("threshold", t_star);
            record.curves.push(Curve {
                label: None,
                rows: vec![Row {
                    axis: "t",
                    value: t_star,
                    numbers: vec![],
                }],
            });
        }
        ThresholdOutcome::SecureEverywhere => {
            record.meta("threshold", "none");
            record.meta("detail", "positive rate on all of (0, 1)");
        }
        ThresholdOutcome::InsecureEverywhere => {
            record.meta("threshold", "none");
            record.meta("detail", "no positive rate on (0, 1)");
        }
    }
    emit(&record, format, out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    model: &ModelArgs,
    axis: CliAxis,
    lo: f64,
    hi: f64,
    steps: usize,
    t: f64,
    temperature: f64,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<()> {
    let protocol: Protocol = model.protocol.into();
    let spec = SweepSpec {
        protocol,
        axis: axis.into(),
        lo,
        hi,
        steps,
        fixed: FixedParams {
            t,
            w: model.w,
            v_0: model.v0,
            v_s: model.vs,
            temperature,
        },
    };
    let rows = run_sweep(&spec)?;
    let mut record = OutputRecord::new("sweep", vec!["axis", "value", "mi_ab", "holevo", "rate"]);
    model_meta(&mut record, protocol, model);
    record
        .meta("axis", spec.axis.name())
        .meta("lo", lo)
        .meta("hi", hi)
        .meta("steps", steps)
        .meta("t", t)
        .meta("temperature", temperature);
    record.curves.push(Curve {
        label: None,
        rows: rows
            .into_iter()
            .map(|row| Row {
                axis: spec.axis.name(),
                value: row.value,
                numbers: vec![row.result.mi_ab, row.result.holevo, row.result.rate],
            })
            .collect(),
    });
    emit(&record, format, out)
}

#[allow(clippy::too_many_arguments)]
fn cmd_map(
    temperature: f64,
    vs: f64,
    f_range: GridRange,
    t_range: GridRange,
    epr: Option<f64>,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<()> {
    let cells = security_map(Protocol::DR_HOM, temperature, vs, &f_range, &t_range, epr)?;
    let mut record = OutputRecord::new(
        "map",
        vec!["axis", "value", "transmission", "rate", "eb_bound", "classification"],
    );
    record
        .meta("protocol", Protocol::DR_HOM)
        .meta("temperature", temperature)
        .meta("vs", vs)
        .meta("classification", "0=insecure-eb 1=insecure-rate 2=secure");
    if let Some(w) = epr {
        record.meta("epr_override", w);
    }
    record.curves.push(Curve {
        label: None,
        rows: cells
            .into_iter()
            .map(|cell| Row {
                axis: "f",
                value: cell.frequency,
                numbers: vec![
                    cell.transmission,
                    cell.rate,
                    cell.eb_bound,
                    match cell.classification {
                        SecurityClass::InsecureEntanglementBreaking => 0.0,
                        SecurityClass::InsecureRate => 1.0,
                        SecurityClass::Secure => 2.0,
                    },
                ],
            })
            .collect(),
    });
    emit(&record, format, out)
}

fn cmd_selftest(seed: u64, samples: usize) -> ExitCode {
    let checks = selftest::run(seed, samples);
    let mut all_passed = true;
    for check in &checks {
        let status = if check.passed { "PASS" } else { "FAIL" };
        println!("{status} {} — {}", check.name, check.detail);
        all_passed &= check.passed;
    }
    if all_passed {
        println!("selftest: {} checks passed", checks.len());
        ExitCode::SUCCESS
    } else {
        println!("selftest: FAILURES present");
        ExitCode::FAILURE
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rate {
            model,
            t,
            format,
            out,
        } => cmd_rate(model, *t, *format, out.as_ref()),
        Command::Threshold { model, format, out } => cmd_threshold(model, *format, out.as_ref()),
        Command::Sweep {
            model,
            axis,
            lo,
            hi,
            steps,
            t,
            temperature,
            format,
            out,
        } => cmd_sweep(
            model,
            *axis,
            *lo,
            *hi,
            *steps,
            *t,
            *temperature,
            *format,
            out.as_ref(),
        ),
        Command::Figure {
            name,
            steps,
            format,
            out,
        } => figures::figure(*name, *steps).and_then(|record| emit(&record, *format, out.as_ref())),
        Command::Map {
            temperature,
            vs,
            f_lo,
            f_hi,
            f_steps,
            t_lo,
            t_hi,
            t_steps,
            epr,
            format,
            out,
        } => GridRange::new(*f_lo, *f_hi, *f_steps)
            .and_then(|f_range| Ok((f_range, GridRange::new(*t_lo, *t_hi, *t_steps)?)))
            .map_err(anyhow::Error::from)
            .and_then(|(f_range, t_range)| {
                cmd_map(
                    *temperature,
                    *vs,
                    f_range,
                    t_range,
                    *epr,
                    *format,
                    out.as_ref(),
                )
            }),
        Command::Selftest { seed, samples } => return cmd_selftest(*seed, *samples),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::FAILURE
        }
    }
}
