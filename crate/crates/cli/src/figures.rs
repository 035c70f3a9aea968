//! Canned sweep datasets behind `cvqkd figure`.
//!
//! Each dataset bakes in the parameters of one published rate plot:
//! transmission sweeps of the four protocols at various preparation
//! purities and channel noises, plus the wavelength security boundaries.

use anyhow::Result;
use clap::ValueEnum;
use cvqkd_core::analysis::{
    run_sweep, threshold_find, FixedParams, ProtocolSetup, SweepAxis, SweepSpec,
};
use cvqkd_core::channel::SourceParams;
use cvqkd_core::rates::Protocol;
use cvqkd_core::spectrum::{
    eb_transmission_bound, variance_from_frequency, GridRange, ThermalEnvironment,
};

use crate::output::{Curve, OutputRecord, Row};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    /// Reverse reconciliation, homodyne: rate vs T for V0 in {1,2,3,5}.
    Fig2a,
    /// Reverse reconciliation, heterodyne: same family.
    Fig2b,
    /// RR homodyne/heterodyne comparison at V0 in {1, 1.5}.
    Fig3,
    /// Direct reconciliation, homodyne and heterodyne, V0 in {1,2,3,5}.
    Fig4,
    /// Direct vs reverse comparisons at matched impurities.
    Fig5,
    /// DR homodyne under channel noise W = 1.01, V0 up to 1e4.
    Fig6a,
    /// Same with W = 3.
    Fig6b,
    /// Security and entanglement-breaking boundaries across the spectrum.
    Fig7,
    /// Microwave rate curve at 300 GHz (V0 = W = 41.66).
    Fig8,
    /// Effect of channel noise W in {5,10,20,50,100} at V0 = 41.66.
    Fig9,
}

const RATE_COLUMNS: [&str; 5] = ["axis", "value", "mi_ab", "holevo", "rate"];

fn rate_curve(
    protocol: Protocol,
    v_s: f64,
    v_0: f64,
    w: f64,
    t_span: (f64, f64),
    steps: usize,
    label: String,
) -> Result<Curve> {
    let spec = SweepSpec {
        protocol,
        axis: SweepAxis::Transmission,
        lo: t_span.0,
        hi: t_span.1,
        steps,
        fixed: FixedParams {
            t: 0.0,
            w,
            v_0,
            v_s,
            temperature: 300.0,
        },
    };
    let rows = run_sweep(&spec)?
        .into_iter()
        .map(|row| Row {
            axis: "t",
            value: row.value,
            numbers: vec![row.result.mi_ab, row.result.holevo, row.result.rate],
        })
        .collect();
    Ok(Curve {
        label: Some(label),
        rows,
    })
}

fn family(
    record: &mut OutputRecord,
    protocol: Protocol,
    v_s: f64,
    w: f64,
    v_0s: &[f64],
    steps: usize,
    label_protocol: bool,
) -> Result<()> {
    for &v_0 in v_0s {
        let label = if label_protocol {
            format!("{protocol} v0={v_0}")
        } else {
            format!("v0={v_0}")
        };
        record
            .curves
            .push(rate_curve(protocol, v_s, v_0, w, (0.0, 1.0), steps, label)?);
    }
    Ok(())
}

pub fn figure(name: FigureName, steps: usize) -> Result<OutputRecord> {
    let mut record = OutputRecord::new("figure", RATE_COLUMNS.to_vec());
    record.meta("name", format!("{name:?}").to_lowercase());
    match name {
        FigureName::Fig2a => {
            record.meta("protocol", Protocol::RR_HOM).meta("vs", 1e3).meta("w", 1.0);
            family(&mut record, Protocol::RR_HOM, 1e3, 1.0, &[1.0, 2.0, 3.0, 5.0], steps, false)?;
        }
        FigureName::Fig2b => {
            record.meta("protocol", Protocol::RR_HET).meta("vs", 1e3).meta("w", 1.0);
            family(&mut record, Protocol::RR_HET, 1e3, 1.0, &[1.0, 2.0, 3.0, 5.0], steps, false)?;
        }
        FigureName::Fig3 => {
            record.meta("vs", 1e3).meta("w", 1.0);
            family(&mut record, Protocol::RR_HOM, 1e3, 1.0, &[1.0, 1.5], steps, true)?;
            family(&mut record, Protocol::RR_HET, 1e3, 1.0, &[1.0, 1.5], steps, true)?;
        }
        FigureName::Fig4 => {
            record.meta("vs", 1e3).meta("w", 1.0);
            family(&mut record, Protocol::DR_HOM, 1e3, 1.0, &[1.0, 2.0, 3.0, 5.0], steps, true)?;
            family(&mut record, Protocol::DR_HET, 1e3, 1.0, &[1.0, 2.0, 3.0, 5.0], steps, true)?;
        }
        FigureName::Fig5 => {
            record.meta("vs", 1e3).meta("w", 1.0);
            // (a) homodyne vs heterodyne under direct reconciliation.
            family(&mut record, Protocol::DR_HOM, 1e3, 1.0, &[1.0, 3.0], steps, true)?;
            family(&mut record, Protocol::DR_HET, 1e3, 1.0, &[1.0, 3.0], steps, true)?;
            // (b), (c) direct vs reverse at matched impurity.
            family(&mut record, Protocol::RR_HOM, 1e3, 1.0, &[3.0, 5.0], steps, true)?;
            family(&mut record, Protocol::RR_HET, 1e3, 1.0, &[3.0, 5.0], steps, true)?;
            family(&mut record, Protocol::DR_HOM, 1e3, 1.0, &[5.0], steps, true)?;
            family(&mut record, Protocol::DR_HET, 1e3, 1.0, &[5.0], steps, true)?;
        }
        FigureName::Fig6a => {
            record.meta("protocol", Protocol::DR_HOM).meta("vs", 1e5).meta("w", 1.01);
            family(&mut record, Protocol::DR_HOM, 1e5, 1.01, &[1.0, 10.0, 100.0, 1e3, 1e4], steps, false)?;
        }
        FigureName::Fig6b => {
            record.meta("protocol", Protocol::DR_HOM).meta("vs", 1e5).meta("w", 3.0);
            family(&mut record, Protocol::DR_HOM, 1e5, 3.0, &[1.0, 10.0, 100.0, 1e3, 1e4], steps, false)?;
        }
        FigureName::Fig7 => {
            return spectrum_boundaries(steps);
        }
        FigureName::Fig8 => {
            record
                .meta("protocol", Protocol::DR_HOM)
                .meta("vs", 1e8)
                .meta("v0", 41.66)
                .meta("w", 41.66)
                .meta_number("eb_bound", eb_transmission_bound(41.66)?);
            record.curves.push(rate_curve(
                Protocol::DR_HOM,
                1e8,
                41.66,
                41.66,
                (0.95, 0.9999),
                steps,
                "rate".into(),
            )?);
        }
        FigureName::Fig9 => {
            record.meta("protocol", Protocol::DR_HOM).meta("vs", 1e3).meta("v0", 41.66);
            for &w in &[5.0, 10.0, 20.0, 50.0, 100.0] {
                record.curves.push(rate_curve(
                    Protocol::DR_HOM,
                    1e3,
                    41.66,
                    w,
                    (0.0, 1.0),
                    steps,
                    format!("w={w}"),
                )?);
            }
        }
    }
    Ok(record)
}

/// Security threshold T*(f) and the entanglement-breaking bound T_EB(f)
/// over the electromagnetic spectrum at room temperature, V_S = 1e8,
/// with the environment loading both Alice and Eve (V_0 = W = V(f)).
fn spectrum_boundaries(steps: usize) -> Result<OutputRecord> {
    let mut record = OutputRecord::new("figure", vec!["axis", "value", "t_star", "t_eb"]);
    record
        .meta("name", "fig7")
        .meta("protocol", Protocol::DR_HOM)
        .meta("vs", 1e8)
        .meta("temperature", 300.0)
        .meta("note", "v0 and w follow the thermal variance at each frequency");
    let grid = GridRange::new(1e9, 430e12, steps.max(2))?;
    let mut rows = Vec::new();
    for f in grid.log_values()? {
        let env = ThermalEnvironment::new(300.0, f)?;
        let v_env = variance_from_frequency(&env);
        let setup = ProtocolSetup::new(
            Protocol::DR_HOM,
            SourceParams::new(1e8, v_env)?,
            v_env,
        )?;
        let t_star = threshold_find(&setup)?
            .threshold()
            .unwrap_or(f64::NAN);
        rows.push(Row {
            axis: "f",
            value: f,
            numbers: vec![t_star, eb_transmission_bound(v_env)?],
        });
    }
    record.curves.push(Curve {
        label: None,
        rows,
    });
    Ok(record)
}
